"""
Lie algebras with structure constants, equivariant structure and inner products.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from app.core.exceptions import UsageError
from app.utils.exactlin import (
    ZERO,
    Mat,
    Number,
    SparseRow,
    block_diag,
    format_scalar,
    span_of,
    to_scalar,
)

Structure = Dict[Tuple[int, int], SparseRow]


def structure_from_brackets(
    labels: Sequence[str], brackets: Mapping[Tuple[str, str], Mapping[str, Number]]
) -> Structure:
    """Antisymmetric structure constants from a table of [a, b] = sum c_k e_k."""
    index = {label: i for i, label in enumerate(labels)}
    structure: Structure = {}
    for (a, b), value in brackets.items():
        if a not in index or b not in index:
            raise UsageError(f"Unknown basis label in bracket [{a}, {b}]")
        i, j = index[a], index[b]
        if i == j:
            raise UsageError(f"Bracket [{a}, {a}] must vanish")
        row = {index[k]: to_scalar(v) for k, v in value.items() if to_scalar(v)}
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
    return structure


def add_sparse(u: SparseRow, v: SparseRow, scale: Fraction = Fraction(1)) -> SparseRow:
    out = dict(u)
    for k, val in v.items():
        nv = out.get(k, ZERO) + scale * val
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Finite-dimensional Lie algebra over Q given by structure constants.

    ``structure[(i, j)]`` holds the nonzero coordinates of [e_i, e_j]; both
    orders are stored so antisymmetry is a checkable property of the data.
    """

    labels: Tuple[str, ...]
    structure: Structure = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise UsageError("Basis labels must be unique")
        n = len(self.labels)
        for (i, j), row in self.structure.items():
            if not (0 <= i < n and 0 <= j < n) or any(not 0 <= k < n for k in row):
                raise UsageError(f"Structure constant index out of range at ({i}, {j})")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError as exc:
            raise UsageError(f"Unknown basis label: {label}") from exc

    def basis_vector(self, i: int) -> Mat:
        return Mat.unit(self.dim, i)

    def vector(self, coeffs: Mapping[str, Number]) -> Mat:
        """Column vector from label coefficients."""
        values = [ZERO] * self.dim
        for label, c in coeffs.items():
            values[self.index(label)] += to_scalar(c)
        return Mat.column(values)

    def bracket_basis(self, i: int, j: int) -> SparseRow:
        return self.structure.get((i, j), {})

    def bracket_sparse(self, u: SparseRow, v: SparseRow) -> SparseRow:
        out: SparseRow = {}
        for i, a in u.items():
            for j, b in v.items():
                row = self.structure.get((i, j))
                if row:
                    out = add_sparse(out, row, a * b)
        return out

    def bracket(self, x: Mat, y: Mat) -> Mat:
        u = {i: v for i, v in enumerate(x.vector()) if v}
        w = {i: v for i, v in enumerate(y.vector()) if v}
        return Mat.from_sparse(self.dim, 1, {(k, 0): v for k, v in self.bracket_sparse(u, w).items()})

    def ad(self, i: int) -> Mat:
        """Matrix of ad(e_i)."""
        data = {(k, j): v for j in range(self.dim) for k, v in self.bracket_basis(i, j).items()}
        return Mat.from_sparse(self.dim, self.dim, data)

    def ad_vector(self, x: Mat) -> Mat:
        out = Mat.zero(self.dim, self.dim)
        for i, c in enumerate(x.vector()):
            if c:
                out = out + self.ad(i).scale(c)
        return out

    def bracket_span(self, U: Mat, V: Mat) -> Mat:
        """Basis of span{[u, v] : u in span(U), v in span(V)}."""
        vectors = [
            self.bracket(Mat.column(U.col(a)), Mat.column(V.col(b)))
            for a in range(U.cols)
            for b in range(V.cols)
        ]
        return span_of(vectors, self.dim)

    def is_abelian(self) -> bool:
        return not any(self.structure.values())

    def jacobiator(self, i: int, j: int, k: int) -> SparseRow:
        """[[e_i, e_j], e_k] + [[e_j, e_k], e_i] + [[e_k, e_i], e_j]."""
        out: SparseRow = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            out = add_sparse(out, self.bracket_sparse(self.bracket_basis(a, b), {c: Fraction(1)}))
        return out

    def jacobi_defects(self, limit: int = 1) -> List[Tuple[int, int, int, SparseRow]]:
        found = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    defect = self.jacobiator(i, j, k)
                    if defect:
                        found.append((i, j, k, defect))
                        if len(found) >= limit:
                            return found
        return found

    def format_vector(self, row: SparseRow) -> str:
        if not row:
            return "0"
        return " + ".join(f"{format_scalar(v)}*{self.labels[k]}" for k, v in sorted(row.items()))


@dataclass(frozen=True, eq=False)
class EquivariantLieData(LieAlgebra):
    """Lie algebra with derivation D and involution theta, no inner product."""

    D: Optional[Mat] = None
    theta: Optional[Mat] = None

    def __post_init__(self) -> None:
        super().__post_init__()
        n = self.dim
        if self.D is None:
            object.__setattr__(self, "D", Mat.zero(n, n))
        if self.theta is None:
            object.__setattr__(self, "theta", Mat.identity(n))
        for name in ("D", "theta"):
            if getattr(self, name).shape != (n, n):
                raise UsageError(f"{name} must be {n}x{n}")

    @property
    def derivation(self) -> Mat:
        assert self.D is not None
        return self.D

    @property
    def involution(self) -> Mat:
        assert self.theta is not None
        return self.theta


@dataclass(frozen=True, eq=False)
class MetricEquivariantAlgebra(EquivariantLieData):
    """Lie algebra with inner product, antisymmetric derivation D and isometric involution theta.

    ``weak`` allows the inner product to be degenerate on the
    theta = -1, D = 0 part.
    """

    gram: Optional[Mat] = None
    weak: bool = False

    def __post_init__(self) -> None:
        super().__post_init__()
        n = self.dim
        if self.gram is None:
            raise UsageError("A metric algebra needs a gram matrix")
        if self.gram.shape != (n, n):
            raise UsageError(f"gram must be {n}x{n}")

    @property
    def form(self) -> Mat:
        assert self.gram is not None
        return self.gram

    def inner(self, x: Mat, y: Mat) -> Fraction:
        return (x.T @ self.form @ y)[0, 0]

    def lie_data(self) -> EquivariantLieData:
        return EquivariantLieData(self.labels, self.structure, self.D, self.theta)


def direct_sum(
    g1: MetricEquivariantAlgebra, g2: MetricEquivariantAlgebra, suffixes: Tuple[str, str] = ("", "")
) -> MetricEquivariantAlgebra:
    """Block-diagonal assembly of two metric equivariant algebras."""
    labels1 = [label + suffixes[0] for label in g1.labels]
    labels2 = [label + suffixes[1] for label in g2.labels]
    if set(labels1) & set(labels2):
        if suffixes == ("", ""):
            return direct_sum(g1, g2, ("_1", "_2"))
        raise UsageError("Direct sum labels collide")
    n1 = g1.dim
    structure: Structure = dict(g1.structure)
    for (i, j), row in g2.structure.items():
        structure[(i + n1, j + n1)] = {k + n1: v for k, v in row.items()}
    return MetricEquivariantAlgebra(
        tuple(labels1 + labels2),
        structure,
        D=block_diag([g1.derivation, g2.derivation]),
        theta=block_diag([g1.involution, g2.involution]),
        gram=block_diag([g1.form, g2.form]),
        weak=g1.weak or g2.weak,
    )
