"""
Antisymmetric derivations commuting with D and anticommuting with theta,
outer derivations and the matching second cohomology H^2(g, R)^D_-.

Derivations are found as the exact kernel of stacked linear conditions.
The conditions are applied in two stages on sparse generator matrices: the
cheap commutation and antisymmetry rules first, then the derivation rule
on the surviving combinations.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from app.core.exceptions import UsageError
from app.core.logging import get_logger
from app.services.liecore.algebra import MetricEquivariantAlgebra, add_sparse
from app.services.liecore.grading import grade
from app.services.quadext.forms import Form
from app.utils.exactlin import ONE, ZERO, Mat, RowReducer, SparseRow, inverse

logger = get_logger(__name__)

# column index -> sparse column
SparseCols = Dict[int, SparseRow]


def sparse_cols(M: Mat) -> SparseCols:
    return {j: col for j in range(M.cols) if (col := M.sparse_col(j))}


def _mul(A: SparseCols, B: SparseCols) -> SparseCols:
    out: SparseCols = {}
    for j, col in B.items():
        acc: SparseRow = {}
        for k, v in col.items():
            if k in A:
                acc = add_sparse(acc, A[k], v)
        if acc:
            out[j] = acc
    return out


def _combine(gens: Sequence[SparseCols], coeffs: SparseRow) -> SparseCols:
    out: SparseCols = {}
    for q, c in coeffs.items():
        for j, col in gens[q].items():
            merged = add_sparse(out.get(j, {}), col, c)
            if merged:
                out[j] = merged
            else:
                out.pop(j, None)
    return out


def _to_mat(n: int, A: SparseCols) -> Mat:
    return Mat.from_sparse(n, n, {(r, c): v for c, col in A.items() for r, v in col.items()})


def flatten(M: Mat) -> SparseRow:
    """Row-major coordinates of a square matrix as a sparse vector."""
    return {i: v for i, v in enumerate(M.entries) if v}


def _cheap_defects(A: SparseCols, theta: SparseCols, D: SparseCols, G: SparseCols) -> Dict[Hashable, Fraction]:
    out: Dict[Hashable, Fraction] = {}

    def put(tag: str, M: SparseCols, sign: int) -> None:
        for c, col in M.items():
            for r, v in col.items():
                key = (tag, r, c)
                nv = out.get(key, ZERO) + sign * v
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)

    put("t", _mul(A, theta), 1)
    put("t", _mul(theta, A), 1)
    put("d", _mul(A, D), 1)
    put("d", _mul(D, A), -1)
    GA = _mul(G, A)
    for c, col in GA.items():
        for r, v in col.items():
            # (GA + (GA)^T)[min, max]
            key = ("a", min(r, c), max(r, c))
            nv = out.get(key, ZERO) + (2 * v if r == c else v)
            if nv:
                out[key] = nv
            else:
                out.pop(key, None)
    return out


def _derivation_defects(g: MetricEquivariantAlgebra, A: SparseCols) -> Dict[Hashable, Fraction]:
    """A[e_i, e_j] - [A e_i, e_j] - [e_i, A e_j] for all i < j."""
    out: Dict[Hashable, Fraction] = {}
    n = g.dim
    for i in range(n):
        ai = A.get(i, {})
        for j in range(i + 1, n):
            aj = A.get(j, {})
            lhs: SparseRow = {}
            for m, c in g.bracket_basis(i, j).items():
                if m in A:
                    lhs = add_sparse(lhs, A[m], c)
            rhs = add_sparse(
                g.bracket_sparse(ai, {j: ONE}) if ai else {},
                g.bracket_sparse({i: ONE}, aj) if aj else {},
            )
            for k, v in add_sparse(lhs, rhs, Fraction(-1)).items():
                out[(i, j, k)] = v
    return out


def _kernel(columns: Sequence[Dict[Hashable, Fraction]]) -> List[SparseRow]:
    """Null vectors of the matrix whose q-th column is ``columns[q]``."""
    rows: Dict[Hashable, SparseRow] = {}
    for q, col in enumerate(columns):
        for pos, v in col.items():
            rows.setdefault(pos, {})[q] = v
    reducer = RowReducer(len(columns))
    for row in rows.values():
        reducer.add(row)
    return reducer.nullspace()


def solve_within(g: MetricEquivariantAlgebra, generators: Sequence[SparseCols]) -> List[Mat]:
    """Basis of the combinations of ``generators`` lying in Der(g)^D_-."""
    theta = sparse_cols(g.involution)
    D = sparse_cols(g.derivation)
    G = sparse_cols(g.form)

    stage1 = _kernel([_cheap_defects(A, theta, D, G) for A in generators])
    reduced = [_combine(generators, vec) for vec in stage1]
    stage2 = _kernel([_derivation_defects(g, A) for A in reduced])
    return [_to_mat(g.dim, _combine(reduced, vec)) for vec in stage2]


def elementary_generators(n: int) -> List[SparseCols]:
    return [{c: {r: ONE}} for r in range(n) for c in range(n)]


def block_generators(dim_l: int, gram_a: Mat) -> List[SparseCols]:
    """Generators of the upper triangular ansatz on l* + a + l.

    phi = [[-S^T, -tau^T G_a, sigma], [0, U, tau], [0, 0, S]] with sigma
    antisymmetric; the remaining conditions are imposed by ``solve_within``.
    """
    n, m = dim_l, gram_a.rows
    top = n + m
    gens: List[SparseCols] = []
    for p in range(n):
        for q in range(n):
            # S e_q = e_p and -S^T on the dual block
            gens.append({top + q: {top + p: ONE}, p: {q: -ONE}})
    for s in range(m):
        for t in range(m):
            gens.append({n + t: {n + s: ONE}})
    for s in range(m):
        for i in range(n):
            gen: SparseCols = {top + i: {n + s: ONE}}
            for t in range(m):
                if gram_a[s, t]:
                    gen.setdefault(n + t, {})[i] = -gram_a[s, t]
            gens.append(gen)
    for i in range(n):
        for k in range(i + 1, n):
            # sigma(L_i, L_k) = 1 sits at (k, top + i)
            gens.append({top + i: {k: ONE}, top + k: {i: -ONE}})
    return gens


def span_rank(vectors: Sequence[SparseRow], ncols: int) -> int:
    reducer = RowReducer(ncols)
    for v in vectors:
        reducer.add(v)
    return reducer.rank


@dataclass
class DerivationSpace:
    """Basis of Der(g)^D_- and the inner part ad(g-^+)."""

    ambient: MetricEquivariantAlgebra
    basis: List[Mat]
    inner_basis: List[Mat]
    routes_agree: Optional[bool] = None
    route_dims: Dict[str, int] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def out_dim(self) -> int:
        return len(self.basis) - len(self.inner_basis)

    def contains(self, phi: Mat) -> bool:
        n2 = self.ambient.dim ** 2
        vectors = [flatten(b) for b in self.basis]
        return span_rank(vectors + [flatten(phi)], n2) == span_rank(vectors, n2)

    def outer_representatives(self) -> List[Mat]:
        """Basis elements completing the inner derivations to a basis."""
        n2 = self.ambient.dim ** 2
        reducer = RowReducer(n2)
        for phi in self.inner_basis:
            reducer.add(flatten(phi))
        return [phi for phi in self.basis if reducer.add(flatten(phi))]


def is_restricted_derivation(g: MetricEquivariantAlgebra, phi: Mat) -> bool:
    """phi in Der(g)^D_-: derivation, antisymmetric, commutes with D, anticommutes with theta."""
    A = sparse_cols(phi)
    if _cheap_defects(A, sparse_cols(g.involution), sparse_cols(g.derivation), sparse_cols(g.form)):
        return False
    return not _derivation_defects(g, A)


def inner_derivations(g: MetricEquivariantAlgebra) -> List[Mat]:
    """Independent ad(v) for v in g-^+."""
    minus_plus = grade(g).minus_plus
    reducer = RowReducer(g.dim ** 2)
    out = []
    for j in range(minus_plus.cols):
        ad = g.ad_vector(Mat.column(minus_plus.col(j)))
        if reducer.add(flatten(ad)):
            out.append(ad)
    return out


def derivation_space(
    g: MetricEquivariantAlgebra, split: Optional[Tuple[int, int]] = None
) -> DerivationSpace:
    """Compute Der(g)^D_-.

    Args:
        g: Metric equivariant algebra passing ``verify_algebra``
        split: ``(dim l, dim a)`` when g is a quadratic extension in the
            basis order (l*, a, l); enables the block ansatz as a second route

    Returns:
        The derivation space; ``routes_agree`` is set when ``split`` is given
    """
    n = g.dim
    basis = solve_within(g, elementary_generators(n))
    inner = inner_derivations(g)

    space = DerivationSpace(g, basis, inner, route_dims={"generic": len(basis)})
    if split is not None:
        dim_l, dim_a = split
        if 2 * dim_l + dim_a != n:
            raise UsageError(f"Split ({dim_l}, {dim_a}) does not match dim {n}")
        idx = list(range(dim_l, dim_l + dim_a))
        block = solve_within(g, block_generators(dim_l, g.form.submatrix(idx, idx)))
        generic_vecs = [flatten(b) for b in basis]
        block_vecs = [flatten(b) for b in block]
        both = span_rank(generic_vecs + block_vecs, n * n)
        space.routes_agree = both == len(basis) == len(block)
        space.route_dims["block"] = len(block)

    logger.debug(
        "Derivation space computed",
        dim=n,
        derivations=space.dim,
        inner=len(inner),
        routes_agree=space.routes_agree,
    )
    return space


def omega_of(g: MetricEquivariantAlgebra, phi: Mat) -> Mat:
    """Matrix of omega_phi = <phi(.), .>, i.e. phi^T G."""
    return phi.T @ g.form


def phi_of(g: MetricEquivariantAlgebra, omega: Mat) -> Mat:
    """Inverse of ``omega_of`` on a nondegenerate algebra."""
    return (omega @ inverse(g.form)).T


@dataclass
class CohomologyData:
    """Representatives of H^2(g, R)^D_- as R-valued 2-forms."""

    r_dim: int
    out_dim: int
    outer: List[Mat]
    representatives: List[Form]

    @property
    def dim(self) -> int:
        return len(self.representatives)


def two_form(W: Mat, r_dim: int, component: int) -> Form:
    """R-valued 2-form with the antisymmetric matrix W in one component."""
    n = W.rows
    values = {}
    for i in range(n):
        for k in range(i + 1, n):
            if W[i, k]:
                values[(i, k)] = tuple(W[i, k] if t == component else ZERO for t in range(r_dim))
    return Form(2, n, r_dim, values)


def out_and_h2(g: MetricEquivariantAlgebra, r_dim: int, space: Optional[DerivationSpace] = None) -> CohomologyData:
    """dim H^2(g, R)^D_- = r_dim * dim Out(g)^D_- with representatives omega_phi tensor R."""
    if r_dim < 0:
        raise UsageError("R dimension must be nonnegative")
    space = space or derivation_space(g)
    outer = space.outer_representatives()
    reps = [two_form(omega_of(g, phi), r_dim, t) for phi in outer for t in range(r_dim)]
    logger.info("Second cohomology computed", out_dim=len(outer), r_dim=r_dim, dim=len(reps))
    return CohomologyData(r_dim, len(outer), outer, reps)
