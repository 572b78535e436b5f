"""
Standard small Lie algebras with the equivariant structures used by the catalog.
"""

from typing import Optional, Sequence

from app.core.exceptions import UsageError
from app.services.liecore.algebra import EquivariantLieData, structure_from_brackets
from app.utils.exactlin import Mat


def abelian(n: int, labels: Optional[Sequence[str]] = None, D: Optional[Mat] = None, theta: Optional[Mat] = None) -> EquivariantLieData:
    if n < 0:
        raise UsageError("Dimension must be nonnegative")
    names = tuple(labels) if labels is not None else tuple(f"e{i + 1}" for i in range(n))
    if len(names) != n:
        raise UsageError(f"Expected {n} labels")
    return EquivariantLieData(names, {}, D, theta)


def rotation_plane() -> EquivariantLieData:
    """R^2 = span{X, Y} with D(X) = Y, D(Y) = -X, theta = (+1, -1)."""
    return abelian(
        2,
        ("X", "Y"),
        D=Mat.from_rows([[0, -1], [1, 0]]),
        theta=Mat.diag([1, -1]),
    )


def heisenberg() -> EquivariantLieData:
    """h(1) = {[X, Y] = Z} with D(X) = Y, D(Y) = -X, D(Z) = 0, l_+ = RX."""
    labels = ("X", "Y", "Z")
    return EquivariantLieData(
        labels,
        structure_from_brackets(labels, {("X", "Y"): {"Z": 1}}),
        D=Mat.from_rows([[0, -1, 0], [1, 0, 0], [0, 0, 0]]),
        theta=Mat.diag([1, -1, -1]),
    )


def _three_dim_simple(kappa: int) -> EquivariantLieData:
    # basis (X, Y, H); D = 1/2 ad X, l_+ = RH
    labels = ("X", "Y", "H")
    brackets = {
        ("H", "X"): {"Y": 2},
        ("H", "Y"): {"X": 2 * kappa},
        ("X", "Y"): {"H": 2},
    }
    return EquivariantLieData(
        labels,
        structure_from_brackets(labels, brackets),
        D=Mat.from_rows([[0, 0, 0], [0, 0, -1], [0, 1, 0]]),
        theta=Mat.diag([-1, -1, 1]),
    )


def su2() -> EquivariantLieData:
    """su(2): [H, X] = 2Y, [H, Y] = -2X, [X, Y] = 2H."""
    return _three_dim_simple(-1)


def sl2() -> EquivariantLieData:
    """sl(2, R): [H, X] = 2Y, [H, Y] = 2X, [X, Y] = 2H."""
    return _three_dim_simple(1)
