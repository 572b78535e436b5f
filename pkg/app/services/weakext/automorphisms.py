"""
Automorphisms F(S, U, tau, sigma) of a quadratic extension, verified both as
a matrix and through the equivalent conditions on morphisms of pairs.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from app.core.exceptions import UnsupportedError, UsageError
from app.core.logging import get_logger
from app.services.checks import CheckList
from app.services.liecore.algebra import EquivariantLieData, MetricEquivariantAlgebra
from app.services.liecore.axioms import bracket_hom_defect
from app.services.quadext.catalog import CatalogDescriptor, catalog
from app.services.quadext.cochains import (
    QuadraticCochain,
    QuadraticCocycle,
    cocycle_act,
    is_cochain,
    is_morphism_of_pairs,
    pullback,
)
from app.services.quadext.extension import build_extension
from app.services.quadext.module import OrthogonalModuleData
from app.utils.exactlin import Mat, block_diag, inverse, rank, to_scalar

logger = get_logger(__name__)

HALF = Fraction(1, 2)


def sigma_matrix(c: QuadraticCochain) -> Mat:
    n = c.sigma.dim_l
    return Mat.from_function(n, n, lambda i, j: c.sigma.scalar(i, j))


def assemble_automorphism(S: Mat, U: Mat, c: QuadraticCochain, gram_a: Mat) -> Mat:
    """F(S, U, tau, sigma) on l* + a + l.

    F = diag(S^-T, U^-1, S) E where E sends L to L + tau(L) + (sigma(L, .) - 1/2 <tau(L), tau(.)>)
    and A to A - <A, tau(.)>.
    """
    n, m = S.rows, U.rows
    tau = c.tau.as_matrix()
    sig = sigma_matrix(c)
    gt = gram_a @ tau
    quad = tau.T @ gt

    def entry(r: int, col: int) -> Fraction:
        # row/column blocks: 0 = l*, 1 = a, 2 = l
        br, ir = (0, r) if r < n else ((1, r - n) if r < n + m else (2, r - n - m))
        bc, ic = (0, col) if col < n else ((1, col - n) if col < n + m else (2, col - n - m))
        if br == bc:
            return Fraction(1) if ir == ic else Fraction(0)
        if (br, bc) == (0, 1):
            return -gt[ic, ir]
        if (br, bc) == (0, 2):
            # sigma(L_ic, L_ir)
            return sig[ic, ir] - HALF * quad[ir, ic]
        if (br, bc) == (1, 2):
            return tau[ir, ic]
        return Fraction(0)

    dim = 2 * n + m
    E = Mat.from_function(dim, dim, entry)
    return block_diag([inverse(S).T, inverse(U), S]) @ E


@dataclass
class AutomorphismResult:
    """Matrix route and pair route with their agreement."""

    result: bool
    matrix_checks: CheckList
    pair_checks: CheckList
    F: Optional[Mat] = None

    @property
    def routes_agree(self) -> bool:
        return self.matrix_checks.passed == self.pair_checks.passed


def automorphism_check(
    l: EquivariantLieData,
    a: OrthogonalModuleData,
    z: QuadraticCocycle,
    S: Mat,
    U: Mat,
    c: QuadraticCochain,
    g: Optional[MetricEquivariantAlgebra] = None,
) -> AutomorphismResult:
    """Decide whether F(S, U, tau, sigma) is an automorphism of the extension of (l, a) by z.

    Route one checks F directly on g = build_extension(l, a, z). Route two
    checks that (S, U) is a morphism of pairs, c is a cochain and
    (S, U)^* z * c = z.
    """
    if S.shape != (l.dim, l.dim) or U.shape != (a.dim, a.dim):
        raise UsageError(f"S must be {l.dim}x{l.dim} and U {a.dim}x{a.dim}")
    if c.tau.dim_l != l.dim or c.tau.dim_target != a.dim:
        raise UsageError("Cochain does not match the pair")

    g = g or build_extension(l, a, z)
    matrix_checks = CheckList()
    F = None
    invertible = rank(S) == l.dim and rank(U) == a.dim
    matrix_checks.record("F.invertible", invertible)
    if invertible:
        F = assemble_automorphism(S, U, c, a.gram)
        defect = bracket_hom_defect(g, F, derivation=False)
        matrix_checks.record(
            "F.bracket",
            defect is None,
            f"at ({g.labels[defect[0]]}, {g.labels[defect[1]]})" if defect else "",
        )
        matrix_checks.record("F.isometry", F.T @ g.form @ F == g.form)
        matrix_checks.record("F.commutes_D", F @ g.derivation == g.derivation @ F)
        matrix_checks.record("F.commutes_theta", F @ g.involution == g.involution @ F)

    pair_checks = CheckList()
    pair_checks.extend(is_morphism_of_pairs(S, U, l, a, l, a), prefix="pair.")
    pair_checks.extend(is_cochain(c, l, a), prefix="pair.")
    if pair_checks.passed:
        moved = cocycle_act(pullback(z, S, U), c, l, a)
        pair_checks.record("pair.cocycle_equation", moved.alpha == z.alpha and moved.gamma == z.gamma)

    result = AutomorphismResult(matrix_checks.passed, matrix_checks, pair_checks, F)
    if not result.routes_agree:
        logger.warning(
            "Automorphism routes disagree",
            matrix=[ch.name for ch in matrix_checks.failed()],
            pairs=[ch.name for ch in pair_checks.failed()],
        )
    return result


@dataclass(frozen=True)
class AutomorphismData:
    S: Mat
    U: Mat
    cochain: QuadraticCochain


def automorphism_family(
    desc: CatalogDescriptor, lam: int, U_bar: Mat, a_bar: Sequence[Fraction]
) -> AutomorphismData:
    """Data (S_lam, U^-1, lam U^-1 tau, 0) of the automorphisms inducing (U_bar, a_bar) on (a0)_-.

    Only the cases with a rotation plane or Heisenberg base carry this family.
    lam is +1 or -1, U_bar is orthogonal on (a0)_- and a_bar lies in (a0)_-.
    """
    if desc.case_id not in ("2a", "2b", "3"):
        raise UnsupportedError(f"No automorphism family for case {desc.case_id}")
    if lam not in (1, -1):
        raise UsageError("lam must be 1 or -1")
    n0 = desc.a0_dim
    a_bar = [to_scalar(x) for x in a_bar]
    if U_bar.shape != (n0, n0) or len(a_bar) != n0:
        raise UsageError(f"U_bar must be {n0}x{n0} and a_bar of length {n0}")

    l, a, _ = catalog(desc)
    base = a.dim - 2 * n0
    if desc.case_id == "3":
        S = Mat.diag([lam, lam, 1])
        base_block = Mat.identity(base).scale(lam)
    else:
        S = Mat.identity(2).scale(lam)
        base_block = Mat.identity(base)

    # U acts by U_bar on the p's and on the q's alike
    pair_block = Mat.from_function(
        2 * n0, 2 * n0, lambda r, c: U_bar[r // 2, c // 2] if r % 2 == c % 2 else 0
    )
    U = block_diag([base_block, pair_block])

    cols = [[Fraction(0)] * a.dim for _ in range(l.dim)]
    for i, x in enumerate(a_bar):
        # tau(Y) = a_bar in the q's, tau(X) = -D a_bar in the p's
        cols[1][base + 2 * i + 1] = x
        cols[0][base + 2 * i] = x
    tau = Mat.from_columns(cols, a.dim)

    U_inv = inverse(U)
    c = QuadraticCochain.from_matrix((U_inv @ tau).scale(lam), Mat.zero(l.dim, l.dim))
    return AutomorphismData(S, U_inv, c)
