"""
Classifier data of weak extensions: the orbit data (B), (r0, B, eta) and
(B1, B2, B), their group actions, decomposability and the dim R = 1
normal form, plus the dictionary between data and cohomology classes.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import sympy

from app.core.config import settings
from app.core.exceptions import PreconditionError, UnsupportedError, UsageError
from app.core.logging import get_logger
from app.services.liecore.algebra import MetricEquivariantAlgebra
from app.services.quadext.catalog import CatalogDescriptor, catalog
from app.services.quadext.extension import build_extension
from app.services.quadext.forms import Form
from app.services.weakext.central import CentralExtensionDatum
from app.services.weakext.derivations import (
    derivation_space,
    is_restricted_derivation,
    omega_of,
    phi_of,
)
from app.utils.exactlin import (
    Mat,
    contains,
    hstack,
    inertia,
    intersection,
    inverse,
    nullspace,
    orthogonal_complement,
    rank,
    solve,
)

logger = get_logger(__name__)

RIEMANN = "riemann-B"
R_BETA = "lorentz-rBeta"
B1B2B = "lorentz-B1B2B"
SHAPES = (RIEMANN, R_BETA, B1B2B)


def shape_for_case(case_id: str) -> str:
    if case_id == "1":
        return RIEMANN
    if case_id in ("2a", "2b", "3"):
        return R_BETA
    if case_id in ("4", "5"):
        return B1B2B
    raise UsageError(f"Unknown case: {case_id}")


@dataclass(frozen=True)
class ClassifierDatum:
    """One element of the classifier orbit space.

    ``B``, ``B1`` and ``B2`` hold one matrix per R-basis vector; ``r0`` is an
    r x 1 column and ``eta`` an n0 x r matrix with eta[i, j] the coefficient
    of a_i (x) e_j. ``gram`` is the inner product on (a0)_- used by the sharp map.
    """

    shape: str
    r_dim: int
    B: Tuple[Mat, ...]
    gram: Mat
    r0: Optional[Mat] = None
    eta: Optional[Mat] = None
    B1: Tuple[Mat, ...] = ()
    B2: Tuple[Mat, ...] = ()

    def __post_init__(self) -> None:
        if self.shape not in SHAPES:
            raise UsageError(f"Unknown classifier shape: {self.shape}. Available shapes: {', '.join(SHAPES)}")
        object.__setattr__(self, "B", tuple(self.B))
        object.__setattr__(self, "B1", tuple(self.B1))
        object.__setattr__(self, "B2", tuple(self.B2))
        n0, r = self.gram.rows, self.r_dim
        if not self.gram.is_square() or not self.gram.is_symmetric() or rank(self.gram) < n0:
            raise UsageError("gram must be a nondegenerate symmetric matrix")
        if len(self.B) != r or any(b.shape != (n0, n0) or not b.is_symmetric() for b in self.B):
            raise UsageError(f"B needs {r} symmetric {n0}x{n0} matrices")
        if self.shape == R_BETA:
            if self.r0 is None or self.eta is None:
                raise UsageError("lorentz-rBeta data needs r0 and eta")
            if self.r0.shape != (r, 1) or self.eta.shape != (n0, r):
                raise UsageError(f"r0 must be {r}x1 and eta {n0}x{r}")
        elif self.r0 is not None or self.eta is not None:
            raise UsageError(f"{self.shape} data carries no r0 or eta")
        if self.shape == B1B2B:
            if len(self.B1) != r or len(self.B2) != r:
                raise UsageError(f"B1 and B2 need {r} matrices each")
            if len({b.shape for b in self.B1}) > 1 or len({b.shape for b in self.B2}) > 1:
                raise UsageError("B1 and B2 components must share their shapes")
            if any(not b.is_symmetric() for b in self.B2):
                raise UsageError("B2 components must be symmetric")
        elif self.B1 or self.B2:
            raise UsageError(f"{self.shape} data carries no B1 or B2")

    @property
    def n0(self) -> int:
        return self.gram.rows

    @classmethod
    def riemann(cls, B: Sequence[Mat], gram: Optional[Mat] = None) -> "ClassifierDatum":
        n0 = B[0].rows if B else (gram.rows if gram is not None else 0)
        return cls(RIEMANN, len(B), tuple(B), gram if gram is not None else Mat.identity(n0))

    @classmethod
    def lorentz_r_beta(
        cls, r0: Sequence[Fraction], B: Sequence[Mat], eta: Mat, gram: Optional[Mat] = None
    ) -> "ClassifierDatum":
        n0 = eta.rows
        return cls(
            R_BETA, len(r0), tuple(B), gram if gram is not None else Mat.identity(n0),
            r0=Mat.column(list(r0)), eta=eta,
        )

    @classmethod
    def lorentz_b1b2b(
        cls, B1: Sequence[Mat], B2: Sequence[Mat], B: Sequence[Mat], gram: Optional[Mat] = None
    ) -> "ClassifierDatum":
        n0 = B[0].rows if B else (gram.rows if gram is not None else 0)
        return cls(
            B1B2B, len(B), tuple(B), gram if gram is not None else Mat.identity(n0),
            B1=tuple(B1), B2=tuple(B2),
        )

    def sharp(self, x: Mat) -> Mat:
        """B(x, .)^sharp as an n0 x r matrix."""
        G_inv = inverse(self.gram)
        if not self.B:
            return Mat.zero(self.n0, 0)
        return hstack([G_inv @ b @ x for b in self.B])

    def b_values(self, u: Mat, v: Mat) -> Mat:
        """(u^T B_j v)_j as an r x 1 column."""
        return Mat.column([(u.T @ b @ v)[0, 0] for b in self.B])


@dataclass(frozen=True)
class ClassifierAction:
    """Group element (U, a, g) with U orthogonal on (a0)_-, a in (a0)_- and g in GL(R).

    The optional blocks act on V, V-hat and W for the (B1, B2, B) shape.
    """

    U: Mat
    a: Optional[Mat] = None
    g: Optional[Mat] = None
    U_V: Optional[Mat] = None
    U_hat: Optional[Mat] = None
    U_W: Optional[Mat] = None

    @classmethod
    def identity(cls, datum: ClassifierDatum) -> "ClassifierAction":
        blocks = {}
        if datum.shape == B1B2B and datum.B1:
            blocks["U_V"] = Mat.identity(datum.B1[0].rows)
            blocks["U_hat"] = Mat.identity(datum.B1[0].cols)
        if datum.shape == B1B2B and datum.B2:
            blocks["U_W"] = Mat.identity(datum.B2[0].rows)
        return cls(
            Mat.identity(datum.n0),
            Mat.zero(datum.n0, 1),
            Mat.identity(datum.r_dim),
            **blocks,
        )

    def translation(self) -> Mat:
        return self.a if self.a is not None else Mat.zero(self.U.rows, 1)

    def compose(self, other: "ClassifierAction") -> "ClassifierAction":
        """(U1, a1, g1)(U2, a2, g2) = (U1 U2, a1 + U1 a2, g1 g2)."""

        def mul(x: Optional[Mat], y: Optional[Mat]) -> Optional[Mat]:
            if x is None:
                return y
            if y is None:
                return x
            return x @ y

        return ClassifierAction(
            self.U @ other.U,
            self.translation() + self.U @ other.translation(),
            mul(self.g, other.g),
            mul(self.U_V, other.U_V),
            mul(self.U_hat, other.U_hat),
            mul(self.U_W, other.U_W),
        )


def _mix(mats: Sequence[Mat], g_inv: Mat) -> Tuple[Mat, ...]:
    """Apply g^-1 to the R-index of a tuple of component matrices."""
    if not mats:
        return ()
    rows, cols = mats[0].shape
    out = []
    for j in range(len(mats)):
        acc = Mat.zero(rows, cols)
        for k, m in enumerate(mats):
            if g_inv[j, k]:
                acc = acc + m.scale(g_inv[j, k])
        out.append(acc)
    return tuple(out)


def act_on_classifier(datum: ClassifierDatum, h: ClassifierAction) -> ClassifierDatum:
    """Right action of Iso((a0)_-) x GL(R) on classifier data."""
    n0, r = datum.n0, datum.r_dim
    U = h.U
    if U.shape != (n0, n0):
        raise UsageError(f"U must be {n0}x{n0}")
    g_inv = inverse(h.g) if h.g is not None else Mat.identity(r)
    if g_inv.shape != (r, r):
        raise UsageError(f"g must be {r}x{r}")

    B = _mix([U.T @ b @ U for b in datum.B], g_inv)
    if datum.shape == RIEMANN:
        return ClassifierDatum(RIEMANN, r, B, datum.gram)

    if datum.shape == R_BETA:
        assert datum.r0 is not None and datum.eta is not None
        a = h.translation()
        eta = inverse(U) @ (datum.eta - datum.sharp(a) - a @ datum.r0.T)
        return ClassifierDatum(
            R_BETA, r, B, datum.gram, r0=g_inv @ datum.r0, eta=eta @ g_inv.T
        )

    B1 = datum.B1
    if B1:
        U_V = h.U_V if h.U_V is not None else Mat.identity(B1[0].rows)
        U_hat = h.U_hat if h.U_hat is not None else Mat.identity(B1[0].cols)
        B1 = tuple(U_V.T @ b @ U_hat for b in B1)
    B2 = datum.B2
    if B2:
        U_W = h.U_W if h.U_W is not None else Mat.identity(B2[0].rows)
        B2 = tuple(U_W.T @ b @ U_W for b in B2)
    return ClassifierDatum(B1B2B, r, B, datum.gram, B1=_mix(B1, g_inv), B2=_mix(B2, g_inv))


# Decomposability


@dataclass(frozen=True)
class DecompositionWitness:
    """Splittings R = R' + R'' and (a0)_- = a' + a'' given by basis matrices.

    ``x`` is the element a'' of the eta condition for the (r0, B, eta) shape.
    """

    R_prime: Mat
    R_dprime: Mat
    a_prime: Mat
    a_dprime: Mat
    x: Optional[Mat] = None

    def describe(self) -> Dict[str, int]:
        return {
            "dim R'": self.R_prime.cols,
            "dim R''": self.R_dprime.cols,
            "dim a'": self.a_prime.cols,
            "dim a''": self.a_dprime.cols,
        }


@dataclass
class DecompositionResult:
    """``indecomposable`` is None when the bounded search could not decide."""

    indecomposable: Optional[bool]
    witness: Optional[DecompositionWitness] = None
    method: str = ""
    candidates_tried: int = 0

    @property
    def decided(self) -> bool:
        return self.indecomposable is not None


def _complement_ok(first: Mat, second: Mat, dim: int) -> bool:
    return first.cols + second.cols == dim and rank(hstack([first, second], rows=dim)) == dim


def eta_prime(datum: ClassifierDatum, x: Mat) -> Mat:
    """eta - x (x) r0 - B(x, .)^sharp."""
    assert datum.r0 is not None and datum.eta is not None
    return datum.eta - x @ datum.r0.T - datum.sharp(x)


def _in_tensor(E: Mat, a_dprime: Mat, gram: Mat, R_prime: Mat) -> bool:
    """E in a' (x) R' where a' is the orthogonal complement of a''."""
    if a_dprime.cols and not (a_dprime.T @ gram @ E).is_zero():
        return False
    annihilator = nullspace(R_prime.T) if R_prime.cols else [Mat.unit(E.cols, j) for j in range(E.cols)]
    return all((E @ n).is_zero() for n in annihilator)


def check_witness(datum: ClassifierDatum, w: DecompositionWitness) -> bool:
    """Exact check of every decomposition condition for the datum's shape."""
    n0, r, G = datum.n0, datum.r_dim, datum.gram
    if w.R_prime.rows != r or w.R_dprime.rows != r or w.a_prime.rows != n0 or w.a_dprime.rows != n0:
        return False
    if not _complement_ok(w.R_prime, w.R_dprime, r) or not _complement_ok(w.a_prime, w.a_dprime, n0):
        return False
    if w.a_prime.cols and w.a_dprime.cols and not (w.a_prime.T @ G @ w.a_dprime).is_zero():
        return False
    if w.a_dprime.cols + w.R_dprime.cols == 0:
        return False
    if datum.shape == RIEMANN and w.a_prime.cols + w.R_prime.cols == 0:
        return False

    primes = w.a_prime.column_mats()
    dprimes = w.a_dprime.column_mats()
    for u, v in combinations(primes, 2):
        if not contains(w.R_prime, datum.b_values(u, v)):
            return False
    for u in primes:
        if not contains(w.R_prime, datum.b_values(u, u)):
            return False
        if any(not datum.b_values(u, v).is_zero() for v in dprimes):
            return False
    for i, u in enumerate(dprimes):
        for v in dprimes[i:]:
            if not contains(w.R_dprime, datum.b_values(u, v)):
                return False

    if datum.shape == R_BETA:
        assert datum.r0 is not None
        if not contains(w.R_prime, datum.r0):
            return False
        x = w.x if w.x is not None else Mat.zero(n0, 1)
        if w.a_dprime.cols == 0 and not x.is_zero():
            return False
        if w.a_dprime.cols and not contains(w.a_dprime, x):
            return False
        return _in_tensor(eta_prime(datum, x), w.a_dprime, G, w.R_prime)

    if datum.shape == B1B2B:
        for comps in (datum.B1, datum.B2):
            if not comps:
                continue
            rows, cols = comps[0].shape
            for i in range(rows):
                for j in range(cols):
                    if not contains(w.R_prime, Mat.column([c[i, j] for c in comps])):
                        return False
    return True


def _solve_x(datum: ClassifierDatum, a_dprime: Mat, R_prime: Mat) -> Optional[Mat]:
    """Some x in a'' with eta'(x) in a' (x) R', or None."""
    n0, r = datum.n0, datum.r_dim
    q = a_dprime.cols
    annihilator = nullspace(R_prime.T) if R_prime.cols else [Mat.unit(r, j) for j in range(r)]

    def conditions(E: Mat) -> List[Fraction]:
        out: List[Fraction] = []
        if q:
            out.extend((a_dprime.T @ datum.gram @ E).entries)
        for nvec in annihilator:
            out.extend((E @ nvec).entries)
        return out

    base = conditions(eta_prime(datum, Mat.zero(n0, 1)))
    if not base:
        return Mat.zero(n0, 1)
    if q == 0:
        return Mat.zero(n0, 1) if not any(base) else None
    columns = []
    for k in range(q):
        moved = conditions(eta_prime(datum, a_dprime @ Mat.unit(q, k)))
        columns.append([m - b for m, b in zip(moved, base)])
    A = Mat.from_columns(columns, len(base))
    coeffs = solve(A, Mat.column([-b for b in base]))
    return None if coeffs is None else a_dprime @ coeffs


def _non_null_in(K: Mat, gram: Mat) -> Optional[Mat]:
    vectors = K.column_mats()
    for v in vectors:
        if (v.T @ gram @ v)[0, 0]:
            return v
    for u, v in combinations(vectors, 2):
        s = u + v
        if (s.T @ gram @ s)[0, 0]:
            return s
    return None


def _common_kernel(datum: ClassifierDatum) -> Mat:
    n0 = datum.n0
    if not datum.B:
        return Mat.identity(n0)
    stacked = Mat(n0 * len(datum.B), n0, [v for b in datum.B for v in b.entries])
    kernel = nullspace(stacked)
    return hstack(kernel, rows=n0) if kernel else Mat.zero(n0, 0)


def _line_split(v: Mat, gram: Mat) -> Tuple[Mat, Mat]:
    """(v^perp, span v) for a non-null v."""
    return orthogonal_complement(v, gram), v


def _decide_rank_one(datum: ClassifierDatum) -> DecompositionResult:
    n0, G = datum.n0, datum.gram
    R = Mat.identity(1)
    R0 = Mat.zero(1, 0)
    A0 = Mat.zero(n0, 0)
    K = _common_kernel(datum)
    v = _non_null_in(K, G) if K.cols else None

    if datum.shape == RIEMANN:
        if v is None:
            return DecompositionResult(True, method="normal-form")
        a_prime, a_dprime = _line_split(v, G)
        return DecompositionResult(False, DecompositionWitness(R, R0, a_prime, a_dprime), "normal-form")

    if datum.shape == B1B2B:
        if v is not None:
            a_prime, a_dprime = _line_split(v, G)
            return DecompositionResult(False, DecompositionWitness(R, R0, a_prime, a_dprime), "normal-form")
        if all(b.is_zero() for b in datum.B1 + datum.B2):
            return DecompositionResult(
                False, DecompositionWitness(R0, R, A0, Mat.identity(n0)), "normal-form"
            )
        return DecompositionResult(True, method="normal-form")

    assert datum.r0 is not None and datum.eta is not None
    r0 = datum.r0[0, 0]
    if r0:
        if v is None:
            return DecompositionResult(True, method="normal-form")
        a_prime, a_dprime = _line_split(v, G)
        # x = projection of eta onto span v, divided by r0
        coeff = (v.T @ G @ datum.eta)[0, 0] / (v.T @ G @ v)[0, 0]
        x = v.scale(coeff / r0)
        return DecompositionResult(False, DecompositionWitness(R, R0, a_prime, a_dprime, x), "normal-form")

    # r0 = 0: split off a kernel line orthogonal to eta, or move all of eta into B^sharp
    perp = orthogonal_complement(datum.eta, G) if n0 else A0
    w = _non_null_in(intersection(K, perp), G) if K.cols and perp.cols else None
    if w is not None:
        a_prime, a_dprime = _line_split(w, G)
        return DecompositionResult(
            False, DecompositionWitness(R, R0, a_prime, a_dprime, Mat.zero(n0, 1)), "normal-form"
        )
    shifted = _solve_x(datum, Mat.identity(n0), R0)
    if shifted is not None:
        return DecompositionResult(
            False, DecompositionWitness(R0, R, A0, Mat.identity(n0), shifted), "normal-form"
        )
    return DecompositionResult(True, method="normal-form")


def _orthogonal_basis(gram: Mat) -> Optional[Mat]:
    """Exact Gram-Schmidt on the unit vectors; None if a null vector shows up."""
    n = gram.rows
    basis: List[Mat] = []
    for i in range(n):
        v = Mat.unit(n, i)
        for b in basis:
            v = v - b.scale((b.T @ gram @ v)[0, 0] / (b.T @ gram @ b)[0, 0])
        if not (v.T @ gram @ v)[0, 0]:
            return None
        basis.append(v)
    return hstack(basis, rows=n)


def _adapted_bases(datum: ClassifierDatum) -> List[Mat]:
    n0, G = datum.n0, datum.gram
    bases = []
    plain = _orthogonal_basis(G)
    if plain is not None:
        bases.append(plain)
    K = _common_kernel(datum)
    if 0 < K.cols < n0:
        comp = orthogonal_complement(K, G)
        parts = [_orthogonal_basis(K.T @ G @ K), _orthogonal_basis(comp.T @ G @ comp)]
        if all(p is not None for p in parts):
            bases.append(hstack([K @ parts[0], comp @ parts[1]], rows=n0))  # type: ignore[operator]
    return bases


def _r_bases(datum: ClassifierDatum) -> List[Tuple[Mat, Tuple[int, ...]]]:
    """R bases with the indices that must lie in R'."""
    r = datum.r_dim
    if datum.shape == R_BETA and datum.r0 is not None and not datum.r0.is_zero():
        vectors = [datum.r0]
        for j in range(r):
            e = Mat.unit(r, j)
            if rank(hstack(vectors + [e])) > len(vectors):
                vectors.append(e)
        return [(hstack(vectors), (0,))]
    return [(Mat.identity(r), ())]


def _subsets(n: int) -> Iterator[Tuple[int, ...]]:
    for k in range(n + 1):
        yield from combinations(range(n), k)


def _columns(M: Mat, idx: Sequence[int]) -> Mat:
    return M.submatrix(list(range(M.rows)), list(idx))


def _search(datum: ClassifierDatum, bound: int) -> DecompositionResult:
    n0, r = datum.n0, datum.r_dim
    tried = 0
    for R_basis, forced in _r_bases(datum):
        for a_basis in _adapted_bases(datum):
            for S in _subsets(r):
                if any(f not in S for f in forced):
                    continue
                R_prime = _columns(R_basis, S)
                R_dprime = _columns(R_basis, [j for j in range(r) if j not in S])
                for T in _subsets(n0):
                    tried += 1
                    if tried > bound:
                        return DecompositionResult(None, method="search", candidates_tried=bound)
                    a_prime = _columns(a_basis, [i for i in range(n0) if i not in T])
                    a_dprime = _columns(a_basis, T)
                    x = None
                    if datum.shape == R_BETA:
                        x = _solve_x(datum, a_dprime, R_prime)
                        if x is None:
                            continue
                    witness = DecompositionWitness(R_prime, R_dprime, a_prime, a_dprime, x)
                    if check_witness(datum, witness):
                        return DecompositionResult(False, witness, "search", tried)
    return DecompositionResult(None, method="search", candidates_tried=tried)


def is_indecomposable_datum(datum: ClassifierDatum, bound: Optional[int] = None) -> DecompositionResult:
    """Decide decomposability.

    dim R = 1 is decided completely; otherwise a bounded search over
    adapted coordinate splittings either finds a witness or reports
    undecided.
    """
    bound = bound or settings.decomposition_search_bound
    if datum.r_dim == 1:
        result = _decide_rank_one(datum)
    elif datum.r_dim == 0:
        result = _search(datum, bound)
        exhaustive = bool(_adapted_bases(datum)) and result.candidates_tried < bound
        if result.indecomposable is None and exhaustive:
            # with R = 0 only the splitting of (a0)_- matters and the search is exhaustive
            result = DecompositionResult(True, None, "search", result.candidates_tried)
    else:
        result = _search(datum, bound)
    logger.debug(
        "Decomposability decided",
        shape=datum.shape,
        r_dim=datum.r_dim,
        n0=datum.n0,
        indecomposable=result.indecomposable,
        method=result.method,
    )
    return result


# Normal form for dim R = 1


def _to_sympy(M: Mat) -> sympy.Matrix:
    return sympy.Matrix(M.rows, M.cols, [sympy.Rational(v.numerator, v.denominator) for v in M.entries])


def _is_zero(value: sympy.Expr) -> bool:
    return bool(sympy.simplify(value) == 0)


@dataclass(frozen=True)
class NormalForm:
    """Canonical eigenvalue list of a pencil class, zeros last."""

    eigenvalues: Tuple[sympy.Expr, ...] = field(default_factory=tuple)

    def matrix(self) -> sympy.Matrix:
        return sympy.diag(*self.eigenvalues) if self.eigenvalues else sympy.zeros(0, 0)

    def equals(self, other: "NormalForm") -> bool:
        return len(self.eigenvalues) == len(other.eigenvalues) and all(
            _is_zero(a - b) for a, b in zip(self.eigenvalues, other.eigenvalues)
        )

    def describe(self) -> List[str]:
        return [str(v) for v in self.eigenvalues]


def _numeric(value: sympy.Expr) -> sympy.Float:
    # real part drops round-off imaginaries from cubic radicals
    return sympy.re(sympy.N(value, 40))


def _ordering_key(value: sympy.Expr) -> Tuple[sympy.Float, int]:
    x = _numeric(value)
    return (abs(x), 0 if x > 0 else 1)


def pencil_normal_form(B: Mat, gram: Optional[Mat] = None) -> NormalForm:
    """Normal form of B in S^2((a0)_-, R) with dim R = 1 under O((a0)_-) x GL(R).

    Eigenvalues of G^-1 B are sorted by increasing absolute value with zeros
    last, and scaled so the first one is 1. Of the two scalings available
    when both signs occur at the smallest absolute value, the one with more
    positive entries wins, then the larger list.
    """
    n = B.rows
    G = gram if gram is not None else Mat.identity(n)
    if not B.is_symmetric() or G.shape != B.shape:
        raise UsageError("Normal form needs a symmetric matrix and a matching gram")
    neg, zero, pos = inertia(G)
    if zero or (neg and pos):
        raise UnsupportedError("Normal form is only available for definite inner products")

    eig = _to_sympy(inverse(G) @ B).eigenvals()
    values: List[sympy.Expr] = []
    for value, mult in eig.items():
        values.extend([sympy.nsimplify(value)] * int(mult))
    nonzero = [v for v in values if not _is_zero(v)]
    zeros = [sympy.Integer(0)] * (n - len(nonzero))
    if not nonzero:
        return NormalForm(tuple(zeros))

    smallest = min(abs(_numeric(v)) for v in nonzero)
    pivots = [v for v in nonzero if abs(abs(_numeric(v)) - smallest) < sympy.Float(10) ** -30]
    candidates = []
    for pivot in pivots:
        scaled = sorted((sympy.simplify(v / pivot) for v in nonzero), key=_ordering_key)
        positives = sum(1 for v in scaled if _numeric(v) > 0)
        candidates.append((positives, tuple(float(_numeric(v)) for v in scaled), tuple(scaled)))
    best = max(candidates, key=lambda c: (c[0], c[1]))
    return NormalForm(best[2] + tuple(zeros))


def pencils_equivalent(B1: Mat, B2: Mat, gram: Optional[Mat] = None) -> bool:
    return pencil_normal_form(B1, gram).equals(pencil_normal_form(B2, gram))


# Dictionary between classifier data and cohomology classes


@dataclass
class ClassifierLayout:
    """Positions of (a0)_- and of the base l inside a catalog extension."""

    desc: CatalogDescriptor
    g: MetricEquivariantAlgebra
    shape: str
    minus: List[int]
    x_index: Optional[int] = None
    y_index: Optional[int] = None

    @property
    def gram(self) -> Mat:
        return self.g.form.submatrix(self.minus, self.minus)

    def readout(self, phi: Mat) -> List[Fraction]:
        """Linear coordinates (mu, b, a-hat) of a derivation; zero on inner derivations."""
        P = self.g.form @ phi @ self.g.derivation
        sign = 1 if self.shape == RIEMANN else -1
        n0 = len(self.minus)
        out: List[Fraction] = []
        if self.shape == R_BETA:
            assert self.x_index is not None and self.y_index is not None
            out.append(phi[self.y_index, self.x_index])
        for i in range(n0):
            for j in range(i, n0):
                out.append(sign * P[self.minus[j], self.minus[i]])
        if self.shape == R_BETA:
            out.extend(phi[q, self.x_index] for q in self.minus)
        return out

    def target(self, datum: ClassifierDatum, j: int) -> List[Fraction]:
        n0 = len(self.minus)
        out: List[Fraction] = []
        if self.shape == R_BETA:
            assert datum.r0 is not None
            out.append(datum.r0[j, 0])
        B = datum.B[j]
        for i in range(n0):
            for k in range(i, n0):
                out.append(B[i, k])
        if self.shape == R_BETA:
            assert datum.eta is not None
            out.extend(datum.eta.col(j))
        return out

    def datum_from(self, readouts: Sequence[Sequence[Fraction]]) -> ClassifierDatum:
        n0 = len(self.minus)
        offset = 1 if self.shape == R_BETA else 0
        Bs = []
        for values in readouts:
            data: Dict[Tuple[int, int], Fraction] = {}
            pos = offset
            for i in range(n0):
                for k in range(i, n0):
                    data[(i, k)] = data[(k, i)] = values[pos]
                    pos += 1
            Bs.append(Mat.from_sparse(n0, n0, data))
        if self.shape == RIEMANN:
            return ClassifierDatum(RIEMANN, len(readouts), tuple(Bs), self.gram)
        r0 = [values[0] for values in readouts]
        eta = Mat.from_columns([list(values[-n0:]) if n0 else [] for values in readouts], n0)
        return ClassifierDatum.lorentz_r_beta(r0, Bs, eta, self.gram)


def classifier_layout(desc: CatalogDescriptor) -> ClassifierLayout:
    shape = shape_for_case(desc.case_id)
    if shape == B1B2B:
        raise UnsupportedError(
            f"The data dictionary is available for cases 1, 2a, 2b and 3, not {desc.case_id}"
        )
    l, a, z = catalog(desc)
    g = build_extension(l, a, z)
    n = l.dim
    base = a.dim - 2 * desc.a0_dim
    qs = [n + base + 2 * i + 1 for i in range(desc.a0_dim)]
    if shape == RIEMANN:
        # tilde a_- = span{A2, q_1, ...}
        return ClassifierLayout(desc, g, shape, [n + g.labels[n:].index("A2")] + qs)
    top = n + a.dim
    return ClassifierLayout(desc, g, shape, qs, x_index=top, y_index=top + 1)


def _omega_from(g: MetricEquivariantAlgebra, phis: Sequence[Mat]) -> Form:
    mats = [omega_of(g, phi) for phi in phis]
    r = len(mats)
    values = {}
    for i in range(g.dim):
        for k in range(i + 1, g.dim):
            value = tuple(W[i, k] for W in mats)
            if any(value):
                values[(i, k)] = value
    return Form(2, g.dim, r, values)


@dataclass
class RealizedClassifier:
    datum: ClassifierDatum
    extension: CentralExtensionDatum
    derivations: List[Mat]


def realize_classifier(desc: CatalogDescriptor, datum: ClassifierDatum) -> RealizedClassifier:
    """Build omega = <phi(.), .> (x) R for a classifier datum on a catalog base.

    Raises:
        UsageError: datum shape or size does not fit the descriptor
        PreconditionError: no derivation carries the requested coordinates
    """
    layout = classifier_layout(desc)
    if datum.shape != layout.shape or datum.n0 != len(layout.minus):
        raise UsageError(
            f"Descriptor {desc.id} needs {layout.shape} data on a {len(layout.minus)}-dimensional space"
        )
    if datum.gram != layout.gram:
        raise UsageError("Datum gram differs from the inner product on (a0)_-")

    space = derivation_space(layout.g)
    readouts = [layout.readout(phi) for phi in space.basis]
    n0 = len(layout.minus)
    coords = n0 * (n0 + 1) // 2 + (1 + n0 if layout.shape == R_BETA else 0)
    M = Mat.from_columns(readouts, coords)

    phis: List[Mat] = []
    for j in range(datum.r_dim):
        coeffs = solve(M, Mat.column(layout.target(datum, j)))
        if coeffs is None:
            raise PreconditionError(
                "Classifier datum is not realized by a derivation", {"component": j}
            )
        phi = Mat.zero(layout.g.dim, layout.g.dim)
        for q, c in enumerate(coeffs.vector()):
            if c:
                phi = phi + space.basis[q].scale(c)
        phis.append(phi)

    omega = _omega_from(layout.g, phis) if phis else Form.zero(2, layout.g.dim, 0)
    logger.info("Classifier datum realized", descriptor=desc.id, r_dim=datum.r_dim, shape=datum.shape)
    return RealizedClassifier(datum, CentralExtensionDatum(layout.g, datum.r_dim, omega), phis)


def classify_omega(desc: CatalogDescriptor, omega: Form) -> ClassifierDatum:
    """Read the classifier datum off an invariant closed R-valued 2-form on the catalog base."""
    layout = classifier_layout(desc)
    g = layout.g
    if omega.degree != 2 or omega.dim_l != g.dim:
        raise UsageError(f"omega must be a 2-form on dim {g.dim}")
    readouts = []
    for j in range(omega.dim_target):
        W = Mat.from_function(g.dim, g.dim, lambda i, k: omega(i, k)[j])
        phi = phi_of(g, W)
        if not is_restricted_derivation(g, phi):
            raise PreconditionError("omega does not come from a derivation in Der(g)^D_-", {"component": j})
        readouts.append(layout.readout(phi))
    if not readouts:
        n0 = len(layout.minus)
        if layout.shape == RIEMANN:
            return ClassifierDatum(RIEMANN, 0, (), layout.gram)
        return ClassifierDatum(R_BETA, 0, (), layout.gram, r0=Mat.zero(0, 1), eta=Mat.zero(n0, 0))
    return layout.datum_from(readouts)
