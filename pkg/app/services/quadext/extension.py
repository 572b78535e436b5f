"""
Quadratic extension d_{alpha,gamma}(l, Phi_l, a) on l* + a + l.
"""

from fractions import Fraction
from typing import Dict, List, Tuple

from app.core.exceptions import PreconditionError
from app.core.logging import get_logger
from app.services.liecore.algebra import EquivariantLieData, MetricEquivariantAlgebra, Structure
from app.services.quadext.cochains import QuadraticCocycle, is_cocycle
from app.services.quadext.module import OrthogonalModuleData, verify_module
from app.utils.exactlin import ZERO, Mat, SparseRow, block_diag

logger = get_logger(__name__)


def dual_label(label: str) -> str:
    return f"sigma_{label}"


def extension_labels(l: EquivariantLieData, a: OrthogonalModuleData) -> Tuple[str, ...]:
    return tuple([dual_label(x) for x in l.labels] + list(a.labels) + list(l.labels))


def _put(structure: Structure, i: int, j: int, row: SparseRow) -> None:
    row = {k: v for k, v in row.items() if v}
    if not row:
        return
    for key, sign in (((i, j), 1), ((j, i), -1)):
        merged = dict(structure.get(key, {}))
        for k, v in row.items():
            nv = merged.get(k, ZERO) + sign * v
            if nv:
                merged[k] = nv
            else:
                merged.pop(k, None)
        if merged:
            structure[key] = merged
        else:
            structure.pop(key, None)


def build_extension(
    l: EquivariantLieData,
    a: OrthogonalModuleData,
    z: QuadraticCocycle,
    check: bool = True,
) -> MetricEquivariantAlgebra:
    """Assemble the quadratic extension.

    Basis order is (sigma_L for L in l, a, l). Brackets:
      [L1, L2] = gamma(L1, L2, .) + alpha(L1, L2) + [L1, L2]_l
      [L, A]   = -<A, alpha(L, .)> + rho(L) A
      [A1, A2] = <rho(.) A1, A2>
      [L, Z]   = -Z o ad L
    with the split inner product and D = (-D_l^T, D_a, D_l), theta = (theta_l^T, theta_a, theta_l).

    ``check=False`` skips the module and cocycle preconditions; used to
    assemble deliberately broken data.
    """
    if check:
        failed = [c.name for c in verify_module(l, a).failed()]
        failed += [c.name for c in is_cocycle(z, l, a).failed()]
        if failed:
            raise PreconditionError(
                "Quadratic extension needs a valid module and cocycle", {"failed": failed}
            )

    n, m = l.dim, a.dim
    top = n + m  # first index of l
    G = a.gram
    structure: Structure = {}

    for i in range(n):
        for j in range(i + 1, n):
            row: SparseRow = {}
            for k in range(n):
                v = z.gamma.scalar(i, j, k)
                if v:
                    row[k] = v
            for s, v in enumerate(z.alpha(i, j)):
                if v:
                    row[n + s] = v
            for k, v in l.bracket_basis(i, j).items():
                row[top + k] = v
            _put(structure, top + i, top + j, row)

    # <A_s, alpha(L_i, L_k)> for every (i, k)
    alpha_pairing: Dict[Tuple[int, int], List[Fraction]] = {}
    for i in range(n):
        for k in range(n):
            value = z.alpha(i, k)
            alpha_pairing[(i, k)] = [
                sum((G[s, t] * value[t] for t in range(m) if value[t]), ZERO) for s in range(m)
            ]

    for i in range(n):
        R = a.rho[i]
        for s in range(m):
            row = {k: -alpha_pairing[(i, k)][s] for k in range(n)}
            for t in range(m):
                if R[t, s]:
                    row[n + t] = row.get(n + t, ZERO) + R[t, s]
            _put(structure, top + i, n + s, row)

    if not a.is_trivial():
        # <rho(L_k) A_s, A_t> = (G R_k)[t, s]
        GR = [G @ R for R in a.rho]
        for s in range(m):
            for t in range(s + 1, m):
                _put(structure, n + s, n + t, {k: GR[k][t, s] for k in range(n)})

    for i in range(n):
        for j in range(n):
            # [L_i, sigma_j] = -sum_k c_{ik}^j sigma_k
            row = {}
            for k in range(n):
                c = l.bracket_basis(i, k).get(j)
                if c:
                    row[k] = -c
            _put(structure, top + i, j, row)

    gram = Mat.from_function(
        2 * n + m,
        2 * n + m,
        lambda r, c: G[r - n, c - n]
        if n <= r < n + m and n <= c < n + m
        else (1 if (r < n and c == r + n + m) or (c < n and r == c + n + m) else 0),
    )
    D = block_diag([-l.derivation.T, a.D, l.derivation])
    theta = block_diag([l.involution.T, a.theta, l.involution])

    g = MetricEquivariantAlgebra(extension_labels(l, a), structure, D=D, theta=theta, gram=gram)
    logger.debug("Quadratic extension assembled", dim=g.dim, dim_l=n, dim_a=m)
    return g
