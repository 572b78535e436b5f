"""
Transvection group of the embedded space in (l*, a, l) coordinates.

Group elements (Z, A, L) of g_+ = l_+* + a_+ + l_+ multiply by

    (Z, A, L)(Z', A', L') = (Z + Z' + 1/2 [e^{-ad L'} A, A'], e^{-ad L'} A + A', L + L')

which holds when l_+ is abelian. The element (Z, A, L) acts on g_- as
exp(phi(L)) exp(phi(Z + A)).
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.linalg import expm

from app.core.exceptions import UnsupportedError, UsageError
from app.services.geom.affine import AffineIsometry, OrbitModel
from app.services.liecore.algebra import MetricEquivariantAlgebra
from app.services.liecore.grading import grade
from app.utils.exactlin import Mat, to_float


@dataclass(frozen=True)
class GroupElement:
    """(Z, A, L) as three vectors in the ambient coordinates of g."""

    Z: np.ndarray
    A: np.ndarray
    L: np.ndarray


class TransvectionGroup:
    """Group law and section for a quadratic extension in basis order (l*, a, l)."""

    def __init__(self, g: MetricEquivariantAlgebra, dim_l: int, dim_a: int):
        if 2 * dim_l + dim_a != g.dim:
            raise UsageError(f"Split ({dim_l}, {dim_a}) does not match dim {g.dim}")
        self.g = g
        self.dim_l = dim_l
        self.dim_a = dim_a
        self.model = OrbitModel(g)
        top = dim_l + dim_a
        grading = grade(g)
        plus = grading.theta_plus
        l_plus = [j for j in range(plus.cols) if all(v == 0 for v in plus.col(j)[:top])]
        for i in l_plus:
            for j in l_plus:
                x, y = Mat.column(plus.col(i)), Mat.column(plus.col(j))
                if not g.bracket(x, y).submatrix(list(range(top, g.dim)), [0]).is_zero():
                    raise UnsupportedError("Transvection group law needs an abelian l_+")
        self._ad = [to_float(g.ad(i), "ad") for i in range(g.dim)]
        self._theta = to_float(g.involution, "theta")
        self._tau = to_float(grading.tau, "tau")

    def _blocks(self) -> Tuple[slice, slice, slice]:
        n, m = self.dim_l, self.dim_a
        return slice(0, n), slice(n, n + m), slice(n + m, 2 * n + m)

    def ad(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros((self.g.dim, self.g.dim))
        for i in np.flatnonzero(x):
            out += x[i] * self._ad[i]
        return out

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.ad(x) @ y

    def element(self, vector: np.ndarray) -> GroupElement:
        """Split a vector of g_+ into its (Z, A, L) blocks."""
        v = np.asarray(vector, dtype=float).reshape(-1)
        if np.max(np.abs(self._theta @ v - v), initial=0.0) > 1e-12:
            raise UsageError("Group elements live in g_+")
        z, a, l = self._blocks()
        out = [np.zeros_like(v) for _ in range(3)]
        for target, block in zip(out, (z, a, l)):
            target[block] = v[block]
        return GroupElement(*out)

    def product(self, x: GroupElement, y: GroupElement) -> GroupElement:
        moved = expm(-self.ad(y.L)) @ x.A
        return GroupElement(
            x.Z + y.Z + 0.5 * self.bracket(moved, y.A),
            moved + y.A,
            x.L + y.L,
        )

    def inverse(self, x: GroupElement) -> GroupElement:
        moved = expm(self.ad(x.L)) @ x.A
        return GroupElement(-x.Z, -moved, -x.L)

    def section(self, Z: np.ndarray, A: np.ndarray, L: np.ndarray) -> GroupElement:
        """s(Z, A^+ + A^-, L) = (Z + 1/2 [A^+, A^-], A^-, L) with A^- the tau-odd part of A."""
        A_minus = 0.5 * (A - self._tau @ A)
        A_plus = A - A_minus
        return GroupElement(Z + 0.5 * self.bracket(A_plus, A_minus), A_minus, L)

    def act(self, x: GroupElement) -> AffineIsometry:
        """exp(phi(L)) exp(phi(Z + A)) as an affine isometry of g_-."""
        return self.model.isometry([(x.L, 1.0), (x.Z + x.A, 1.0)])

    def orbit_point(self, x: GroupElement) -> np.ndarray:
        return self.act(x).apply(np.zeros(self.model.dim))


def transvection_product(
    g: MetricEquivariantAlgebra, dims: Tuple[int, int], x: np.ndarray, y: np.ndarray
) -> np.ndarray:
    """Product of two elements of g_+ given as flat vectors; returns the flat product."""
    group = TransvectionGroup(g, *dims)
    p = group.product(group.element(x), group.element(y))
    return p.Z + p.A + p.L


def section(g: MetricEquivariantAlgebra, dims: Tuple[int, int], Z: np.ndarray, A: np.ndarray, L: np.ndarray) -> GroupElement:
    return TransvectionGroup(g, *dims).section(Z, A, L)
