"""
Alternating forms on a Lie algebra with values in a module, the Chevalley-Eilenberg
differential and the inner-product wedge.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from app.core.exceptions import UsageError
from app.services.liecore.algebra import LieAlgebra
from app.utils.exactlin import ZERO, Mat, Number, RowReducer, format_scalar, to_scalar

Key = Tuple[int, ...]
Value = Tuple[Fraction, ...]


def _sort_with_sign(idx: Sequence[int]) -> Tuple[int, Key]:
    """Sign of the sorting permutation (0 on repeated indices) and the sorted key."""
    items = list(idx)
    if len(set(items)) != len(items):
        return 0, tuple(sorted(items))
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return sign, tuple(items)


def _add(u: Sequence[Fraction], v: Sequence[Fraction], s: Fraction = Fraction(1)) -> Value:
    return tuple(a + s * b for a, b in zip(u, v))


@dataclass(frozen=True, eq=False)
class Form:
    """Alternating p-form on an n-dimensional algebra with values in Q^m.

    Scalar forms use ``dim_target = 1``. Only strictly increasing index
    tuples with nonzero values are stored.
    """

    degree: int
    dim_l: int
    dim_target: int
    values: Dict[Key, Value] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: Dict[Key, Value] = {}
        for key, value in self.values.items():
            if len(key) != self.degree or len(value) != self.dim_target:
                raise UsageError(f"Form entry {key} has wrong shape")
            if any(value):
                clean[key] = tuple(value)
        object.__setattr__(self, "values", clean)

    # Constructors

    @classmethod
    def zero(cls, degree: int, dim_l: int, dim_target: int = 1) -> "Form":
        return cls(degree, dim_l, dim_target, {})

    @classmethod
    def from_entries(
        cls,
        degree: int,
        dim_l: int,
        dim_target: int,
        entries: Mapping[Sequence[int], Sequence[Number]],
    ) -> "Form":
        """Build from arbitrary-order index tuples; values are antisymmetrized by sign."""
        acc: Dict[Key, Value] = {}
        for idx, value in entries.items():
            sign, key = _sort_with_sign(idx)
            if sign == 0:
                if any(to_scalar(v) for v in value):
                    raise UsageError(f"Alternating form cannot be nonzero on repeated indices {tuple(idx)}")
                continue
            vec = tuple(sign * to_scalar(v) for v in value)
            acc[key] = _add(acc.get(key, (ZERO,) * dim_target), vec)
        return cls(degree, dim_l, dim_target, acc)

    @classmethod
    def from_function(
        cls, degree: int, dim_l: int, dim_target: int, fn: Callable[[Key], Sequence[Fraction]]
    ) -> "Form":
        return cls(
            degree,
            dim_l,
            dim_target,
            {key: tuple(fn(key)) for key in combinations(range(dim_l), degree)},
        )

    @classmethod
    def from_matrix(cls, M: Mat) -> "Form":
        """1-form from a dim_target x dim_l matrix."""
        return cls(1, M.cols, M.rows, {(j,): M.col(j) for j in range(M.cols)})

    # Access

    def __call__(self, *idx: int) -> Value:
        return self.evaluate(idx)

    def evaluate(self, idx: Sequence[int]) -> Value:
        sign, key = _sort_with_sign(idx)
        value = self.values.get(key)
        if sign == 0 or value is None:
            return (ZERO,) * self.dim_target
        return value if sign > 0 else tuple(-v for v in value)

    def scalar(self, *idx: int) -> Fraction:
        return self.evaluate(idx)[0]

    def as_matrix(self) -> Mat:
        if self.degree != 1:
            raise UsageError("Only 1-forms are linear maps")
        return Mat.from_columns([self.evaluate((j,)) for j in range(self.dim_l)], self.dim_target)

    def keys(self) -> Iterator[Key]:
        return iter(combinations(range(self.dim_l), self.degree))

    # Arithmetic

    def _check(self, other: "Form") -> None:
        if (self.degree, self.dim_l, self.dim_target) != (other.degree, other.dim_l, other.dim_target):
            raise UsageError("Forms of different shape")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = _add(out.get(k, (ZERO,) * self.dim_target), v)
        return Form(self.degree, self.dim_l, self.dim_target, out)

    def __neg__(self) -> "Form":
        return self.scale(-1)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, s: Number) -> "Form":
        q = to_scalar(s)
        return Form(
            self.degree, self.dim_l, self.dim_target,
            {k: tuple(q * x for x in v) for k, v in self.values.items()},
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (
            (self.degree, self.dim_l, self.dim_target) == (other.degree, other.dim_l, other.dim_target)
            and self.values == other.values
        )

    def __hash__(self) -> int:
        return hash((self.degree, self.dim_l, self.dim_target, tuple(sorted(self.values.items()))))

    def is_zero(self) -> bool:
        return not self.values

    def apply_target(self, M: Mat) -> "Form":
        """Compose with a linear map of the target space."""
        if M.cols != self.dim_target:
            raise UsageError("Target map has wrong shape")
        out = {}
        for k, v in self.values.items():
            out[k] = tuple(sum((M[i, j] * v[j] for j in range(M.cols) if v[j]), ZERO) for i in range(M.rows))
        return Form(self.degree, self.dim_l, M.rows, out)

    def pullback(self, S: Mat) -> "Form":
        """(S^* w)(x_1, ..., x_p) = w(S x_1, ..., S x_p) for S from an m-space into the domain."""
        if S.rows != self.dim_l:
            raise UsageError("Pullback map has wrong shape")
        cols = [S.sparse_col(j) for j in range(S.cols)]

        def value(key: Key) -> Value:
            acc: Value = (ZERO,) * self.dim_target
            for choice in product(*(cols[j].items() for j in key)):
                coef = Fraction(1)
                for _, c in choice:
                    coef *= c
                acc = _add(acc, self.evaluate([r for r, _ in choice]), coef)
            return acc

        return Form.from_function(self.degree, S.cols, self.dim_target, value)

    def describe(self, labels: Sequence[str], target_labels: Optional[Sequence[str]] = None) -> Dict[str, str]:
        """Readable nonzero entries keyed by joined labels."""
        out = {}
        for key, value in sorted(self.values.items()):
            name = ",".join(labels[i] for i in key)
            if self.dim_target == 1 and target_labels is None:
                out[name] = format_scalar(value[0])
            else:
                tl = target_labels or [f"e{i}" for i in range(self.dim_target)]
                out[name] = " + ".join(f"{format_scalar(c)}*{tl[i]}" for i, c in enumerate(value) if c)
        return out


def ce_differential(form: Form, l: LieAlgebra, rho: Optional[Sequence[Mat]] = None) -> Form:
    """Chevalley-Eilenberg differential; ``rho=None`` means the trivial module.

    dw(x_0..x_p) = sum_i (-1)^i x_i.w(..^i..) + sum_{i<j} (-1)^{i+j} w([x_i,x_j], ..^i..^j..)
    """
    if form.dim_l != l.dim:
        raise UsageError("Form and algebra dimensions differ")
    p = form.degree
    m = form.dim_target

    def value(key: Key) -> Value:
        acc: Value = (ZERO,) * m
        if rho is not None:
            for i in range(p + 1):
                rest = key[:i] + key[i + 1:]
                w = form.evaluate(rest)
                if any(w):
                    R = rho[key[i]]
                    image = tuple(sum((R[r, c] * w[c] for c in range(m) if w[c]), ZERO) for r in range(m))
                    acc = _add(acc, image, Fraction((-1) ** i))
        for i in range(p + 1):
            for j in range(i + 1, p + 1):
                bracket = l.bracket_basis(key[i], key[j])
                if not bracket:
                    continue
                rest = key[:i] + key[i + 1:j] + key[j + 1:]
                for k, c in bracket.items():
                    acc = _add(acc, form.evaluate((k,) + rest), c * (-1) ** (i + j))
        return acc

    return Form.from_function(p + 1, form.dim_l, m, value)


def wedge_inner(omega: Form, eta: Form, gram: Mat) -> Form:
    """<w ^ h>(x_1..x_{p+q}) = sum over (p,q)-shuffles s of sgn(s) <w(x_s..), h(x_s..)>."""
    if omega.dim_l != eta.dim_l or omega.dim_target != eta.dim_target or gram.rows != omega.dim_target:
        raise UsageError("wedge_inner needs forms with a shared module")
    p, q = omega.degree, eta.degree
    m = omega.dim_target

    def pair(u: Value, v: Value) -> Fraction:
        return sum(
            (u[a] * gram[a, b] * v[b] for a in range(m) if u[a] for b in range(m) if v[b]),
            ZERO,
        )

    shuffles = []
    for positions in combinations(range(p + q), p):
        rest = tuple(i for i in range(p + q) if i not in positions)
        sign = (-1) ** (sum(positions) - p * (p - 1) // 2)
        shuffles.append((positions, rest, sign))

    def value(key: Key) -> Value:
        total = ZERO
        for positions, rest, sign in shuffles:
            u = omega.evaluate([key[i] for i in positions])
            if not any(u):
                continue
            v = eta.evaluate([key[i] for i in rest])
            total += sign * pair(u, v)
        return (total,)

    return Form.from_function(p + q, omega.dim_l, 1, value)


def theta_act(form: Form, theta_l: Mat, theta_a: Optional[Mat] = None) -> Form:
    """(theta w)(x..) = theta_a w(theta_l^{-1} x..) for involutive theta_l."""
    out = form.pullback(theta_l)
    return out.apply_target(theta_a) if theta_a is not None else out


def derivation_act(form: Form, D_l: Mat, D_a: Optional[Mat] = None) -> Form:
    """(D w)(x_1..x_p) = D_a w(x..) - sum_i w(.., D_l x_i, ..)."""
    p = form.degree
    cols = [D_l.sparse_col(j) for j in range(D_l.cols)]

    def value(key: Key) -> Value:
        acc: Value = (ZERO,) * form.dim_target
        if D_a is not None:
            w = form.evaluate(key)
            acc = tuple(
                sum((D_a[r, c] * w[c] for c in range(form.dim_target) if w[c]), ZERO)
                for r in range(form.dim_target)
            )
        for i in range(p):
            for r, c in cols[key[i]].items():
                idx = key[:i] + (r,) + key[i + 1:]
                acc = _add(acc, form.evaluate(idx), -c)
        return acc

    return Form.from_function(p, form.dim_l, form.dim_target, value)


def is_invariant(form: Form, theta_l: Mat, D_l: Mat, theta_a: Optional[Mat] = None, D_a: Optional[Mat] = None) -> bool:
    """theta w = w and D w = 0."""
    return theta_act(form, theta_l, theta_a) == form and derivation_act(form, D_l, D_a).is_zero()


def invariant_form_basis(
    degree: int, dim_l: int, theta_l: Mat, D_l: Mat,
    dim_target: int = 1, theta_a: Optional[Mat] = None, D_a: Optional[Mat] = None,
) -> List[Form]:
    """Basis of the (D, theta)-invariant alternating forms of the given degree."""
    keys = list(combinations(range(dim_l), degree))
    coords = [(k, t) for k in keys for t in range(dim_target)]
    unit_forms = [
        Form(degree, dim_l, dim_target, {k: tuple(Fraction(int(s == t)) for s in range(dim_target))})
        for k, t in coords
    ]
    columns = []
    for unit in unit_forms:
        th = theta_act(unit, theta_l, theta_a) - unit
        dv = derivation_act(unit, D_l, D_a)
        col: Dict[Tuple[str, Key, int], Fraction] = {}
        for tag, f in (("t", th), ("d", dv)):
            for key, value in f.values.items():
                for t, v in enumerate(value):
                    if v:
                        col[(tag, key, t)] = v
        columns.append(col)

    rows: Dict[Tuple[str, Key, int], Dict[int, Fraction]] = {}
    for j, col in enumerate(columns):
        for pos, v in col.items():
            rows.setdefault(pos, {})[j] = v
    reducer = RowReducer(len(coords))
    for row in rows.values():
        reducer.add(row)

    basis = []
    for vec in reducer.nullspace():
        acc: Dict[Key, Value] = {}
        for j, v in vec.items():
            k, t = coords[j]
            cur = list(acc.get(k, (ZERO,) * dim_target))
            cur[t] += v
            acc[k] = tuple(cur)
        basis.append(Form(degree, dim_l, dim_target, acc))
    return basis
