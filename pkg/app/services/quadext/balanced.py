"""
Balanced cocycles, fullness conditions (T1)/(T2) and the canonical isotropic ideal.

Every "there exist ... such that ... then K = 0" condition is decided as
a linear system: the candidate coordinates are the first unknowns and the
condition holds iff the solution space projects to zero on them.
"""

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from app.core.exceptions import PreconditionError, UnsupportedError
from app.core.logging import get_logger
from app.services.checks import CheckList
from app.services.liecore.algebra import EquivariantLieData, MetricEquivariantAlgebra
from app.services.liecore.axioms import SpanCertificate
from app.services.liecore.filtration import radical_filtration, socle
from app.services.liecore.grading import tau_matrix
from app.services.liecore.structure import center
from app.services.quadext.cochains import QuadraticCocycle
from app.services.quadext.forms import Form
from app.services.quadext.module import OrthogonalModuleData, module_semisimple
from app.utils.exactlin import (
    ZERO,
    Mat,
    RowReducer,
    SparseRow,
    coordinates,
    hstack,
    intersection,
    inverse,
    is_nondegenerate,
    nullspace,
    orthogonal_complement,
    restrict_form,
    same_span,
    span_of,
)

logger = get_logger(__name__)


def _bilinear(form: Form, x: Mat, y: Mat) -> List[Fraction]:
    out = [ZERO] * form.dim_target
    xs = [(i, v) for i, v in enumerate(x.vector()) if v]
    ys = [(j, v) for j, v in enumerate(y.vector()) if v]
    for i, xi in xs:
        for j, yj in ys:
            if i == j:
                continue
            value = form(i, j)
            for t in range(form.dim_target):
                if value[t]:
                    out[t] += xi * yj * value[t]
    return out


def _trilinear(form: Form, x: Mat, y: Mat, w: Mat) -> Fraction:
    total = ZERO
    xs = [(i, v) for i, v in enumerate(x.vector()) if v]
    ys = [(j, v) for j, v in enumerate(y.vector()) if v]
    ws = [(k, v) for k, v in enumerate(w.vector()) if v]
    for i, xi in xs:
        for j, yj in ys:
            for k, wk in ws:
                total += xi * yj * wk * form.scalar(i, j, k)
    return total


def _basis(mats: Sequence[Mat], rows: int) -> Mat:
    return hstack(list(mats), rows=rows) if mats else Mat.zero(rows, 0)


def _projected_dim(reducer: RowReducer, ncols: int, head: int) -> Tuple[int, List[SparseRow]]:
    """Dimension of the projection of the solution space onto the first ``head`` unknowns."""
    projected = RowReducer(head)
    witnesses: List[SparseRow] = []
    for vec in reducer.nullspace(ncols):
        part = {k: v for k, v in vec.items() if k < head}
        if projected.add(part):
            witnesses.append(vec)
    return projected.rank, witnesses


def invariant_projection(a: OrthogonalModuleData) -> Mat:
    """Projection of a onto a^l along rho(l)a."""
    if a.is_trivial():
        return Mat.identity(a.dim)
    inv = a.invariants()
    img = a.image()
    if inv.cols + img.cols != a.dim:
        raise PreconditionError("a is not the direct sum of a^l and rho(l)a")
    basis = hstack([inv, img], rows=a.dim)
    keep = Mat.diag([1] * inv.cols + [0] * img.cols)
    return basis @ keep @ inverse(basis)


def alpha0_kernel_image(l: EquivariantLieData, a: OrthogonalModuleData, z: QuadraticCocycle, U: Mat) -> Mat:
    """alpha_0 of the kernel of the bracket map on Lambda^2 span(U)."""
    pairs = [(p, q) for p in range(U.cols) for q in range(p + 1, U.cols)]
    if not pairs:
        return Mat.zero(a.dim, 0)
    cols = [Mat.column(U.col(p)) for p in range(U.cols)]
    bracket_map = _basis([l.bracket(cols[p], cols[q]) for p, q in pairs], l.dim)
    P = invariant_projection(a)
    images = []
    for kernel_vec in nullspace(bracket_map):
        acc = [ZERO] * a.dim
        for idx, coef in enumerate(kernel_vec.vector()):
            if coef:
                p, q = pairs[idx]
                value = _bilinear(z.alpha, cols[p], cols[q])
                acc = [s + coef * v for s, v in zip(acc, value)]
        images.append(P @ Mat.column(acc))
    return span_of(images, a.dim)


def _kernel_of_rho(l: EquivariantLieData, a: OrthogonalModuleData) -> Mat:
    if a.is_trivial():
        return Mat.identity(l.dim)
    stacked = Mat.from_columns([R.entries for R in a.rho], a.dim * a.dim)
    return _basis(nullspace(stacked), l.dim)


def _condition_a(
    l: EquivariantLieData,
    a: OrthogonalModuleData,
    z: QuadraticCocycle,
    candidates: Mat,
    R: Mat,
) -> Tuple[int, List[SparseRow]]:
    """Solve (i), (ii) for K in span(candidates), A in a and a functional psi on span(R).

    Unknown layout: (c, A, psi). Returns the dimension of the admissible K.
    """
    p, m, r, n = candidates.cols, a.dim, R.cols, l.dim
    ncols = p + m + r
    reducer = RowReducer(ncols)
    K = [Mat.column(candidates.col(i)) for i in range(p)]
    Rv = [Mat.column(R.col(q)) for q in range(r)]
    G = a.gram

    for j in range(n):
        Lj = l.basis_vector(j)
        # (i) alpha(L_j, K) - rho(L_j) A = 0
        values = [_bilinear(z.alpha, Lj, Ki) for Ki in K]
        for t in range(m):
            row: SparseRow = {i: values[i][t] for i in range(p) if values[i][t]}
            for s in range(m):
                if a.rho[j][t, s]:
                    row[p + s] = -a.rho[j][t, s]
            reducer.add(row)
        # (ii) gamma(L_j, K, r_q) + <A, alpha(L_j, r_q)> - psi([L_j, r_q]) = 0
        for q in range(r):
            row = {}
            for i in range(p):
                v = _trilinear(z.gamma, Lj, K[i], Rv[q])
                if v:
                    row[i] = v
            pairing = G @ Mat.column(_bilinear(z.alpha, Lj, Rv[q]))
            for s in range(m):
                if pairing[s, 0]:
                    row[p + s] = pairing[s, 0]
            coords = coordinates(R, l.bracket(Lj, Rv[q]))
            if coords is None:
                raise PreconditionError("R_k is not an ideal")
            for u in range(r):
                if coords[u, 0]:
                    row[p + m + u] = -coords[u, 0]
            reducer.add(row)
    return _projected_dim(reducer, ncols, p)


def _condition_b(
    l: EquivariantLieData, a: OrthogonalModuleData, z: QuadraticCocycle, R: Mat
) -> Mat:
    """b_k for a trivial module: B with <alpha(L, K), B> = psi([L, K]) solvable in psi."""
    m, r, n = a.dim, R.cols, l.dim
    ncols = m + r
    reducer = RowReducer(ncols)
    G = a.gram
    Rv = [Mat.column(R.col(q)) for q in range(r)]
    for j in range(n):
        Lj = l.basis_vector(j)
        for q in range(r):
            pairing = G @ Mat.column(_bilinear(z.alpha, Lj, Rv[q]))
            row: SparseRow = {s: pairing[s, 0] for s in range(m) if pairing[s, 0]}
            coords = coordinates(R, l.bracket(Lj, Rv[q]))
            if coords is None:
                raise PreconditionError("R_k is not an ideal")
            for u in range(r):
                if coords[u, 0]:
                    row[m + u] = -coords[u, 0]
            reducer.add(row)
    vectors = []
    for vec in reducer.nullspace(ncols):
        vectors.append(Mat.column([vec.get(s, ZERO) for s in range(m)]))
    return span_of(vectors, m)


def _nondegenerate_on(gram: Mat, U: Mat) -> bool:
    return U.cols == 0 or is_nondegenerate(restrict_form(gram, U))


def balanced_check(l: EquivariantLieData, a: OrthogonalModuleData, z: QuadraticCocycle) -> CheckList:
    """Conditions (A_k), (B_k) for 0 <= k <= m along the radical filtration of l.

    The result passes iff the cocycle is balanced; the first failing check
    names the violated condition. Conditions with k >= 1 use the socle of
    l for S(l) and are supported when S(l) meets R_k centrally; (B_k) with
    k >= 1 is supported for trivial modules.
    """
    semisimple, reason = module_semisimple(l, a)
    if semisimple is None:
        raise UnsupportedError(f"Module semisimplicity undecided: {reason}")
    if not semisimple:
        raise PreconditionError(f"Module is not semisimple: {reason}")

    filtration = radical_filtration(l)
    checks = CheckList()

    candidates = intersection(center(l), _kernel_of_rho(l, a))
    dim, witnesses = _condition_a(l, a, z, candidates, Mat.identity(l.dim))
    checks.record(
        "balanced.A0",
        dim == 0,
        f"{dim}-dimensional space of central L0 in ker rho admits (A0, Z0)" if dim else "",
        admissible_dim=dim,
    )

    image = alpha0_kernel_image(l, a, z, Mat.identity(l.dim))
    checks.record(
        "balanced.B0",
        _nondegenerate_on(a.gram, image),
        f"alpha_0(ker [,]) has dimension {image.cols}",
        image_dim=image.cols,
    )

    for k in range(1, filtration.length + 1):
        R = filtration.term(k)
        if R.cols == 0:
            continue
        S = intersection(socle(l), R)
        if S.cols and l.bracket_span(Mat.identity(l.dim), S).cols:
            raise UnsupportedError(
                f"Condition (A_{k}) needs S(l) ∩ R_{k} central", {"k": k, "dim": S.cols}
            )
        dim, _ = _condition_a(l, a, z, S, R) if S.cols else (0, [])
        checks.record(
            f"balanced.A{k}",
            dim == 0,
            f"S(l) taken as the socle of l; {dim}-dimensional admissible ideal" if dim else "S(l) taken as the socle of l",
            socle_choice=True,
            admissible_dim=dim,
        )
        if not a.is_trivial():
            raise UnsupportedError(f"Condition (B_{k}) is implemented for trivial modules only", {"k": k})
        b = _condition_b(l, a, z, R)
        checks.record(
            f"balanced.B{k}",
            _nondegenerate_on(a.gram, b),
            f"b_{k} has dimension {b.cols}",
            b_dim=b.cols,
        )

    logger.debug("Balanced conditions evaluated", passed=checks.passed, length=filtration.length)
    return checks


def _plus_minus(tau: Mat) -> Tuple[Mat, Mat]:
    n = tau.rows
    I = Mat.identity(n)
    plus = _basis(nullspace(tau - I), n)
    minus = _basis(nullspace(tau + I), n)
    return plus, minus


def fullness_t1_t2(
    l: EquivariantLieData, a: OrthogonalModuleData, z: QuadraticCocycle
) -> Tuple[SpanCertificate, SpanCertificate]:
    """(T1) [l^-, l^-] = l^+ and (T2) (a^l)^+ = alpha_0(Ker [,] on Lambda^2 l^-)."""
    l_plus, l_minus = _plus_minus(tau_matrix(l))
    span = l.bracket_span(l_minus, l_minus)
    t1 = SpanCertificate(same_span(span, l_plus), span, l_plus)

    tau_a = Mat.identity(a.dim) + (a.D @ a.D).scale(2)
    a_plus, _ = _plus_minus(tau_a)
    invariant_plus = intersection(a.invariants(), a_plus)
    image = alpha0_kernel_image(l, a, z, l_minus)
    t2 = SpanCertificate(same_span(invariant_plus, image), image, invariant_plus)
    return t1, t2


def canonical_isotropic_ideal(g: MetricEquivariantAlgebra) -> Mat:
    """Sum of R_k(g) ∩ R_k(g)^perp over the radical filtration of g."""
    filtration = radical_filtration(g)
    parts: List[Mat] = []
    for ideal in filtration.ideals:
        if ideal.cols:
            piece = intersection(ideal, orthogonal_complement(ideal, g.form))
            parts.extend(Mat.column(piece.col(j)) for j in range(piece.cols))
    return span_of(parts, g.dim)


def balanced_summary(checks: CheckList) -> Dict[str, Optional[str]]:
    """Condition name to failure detail (None when it holds)."""
    return {c.name: (None if c.passed else c.detail) for c in checks}
