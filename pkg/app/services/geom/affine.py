"""
Affine isometries of g_- and the orbit of the origin under exp(phi(g_+)).

phi(X) = (ad X restricted to g_-, -D(X)) is computed from exact data and
floated once. Exponentials use the homogeneous (d+1) x (d+1) block matrix.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm

from app.core.config import settings
from app.core.exceptions import UsageError
from app.core.logging import get_logger
from app.services.liecore.algebra import MetricEquivariantAlgebra
from app.services.liecore.grading import grade
from app.utils.exactlin import Mat, coordinates, to_float

logger = get_logger(__name__)

# A word factor names an element of g_+ by label, basis index or float
# coordinate vector, with a real coefficient.
Element = Union[str, int, np.ndarray]
WordFactor = Tuple[Element, float]


@dataclass(frozen=True)
class AffineGenerator:
    """Infinitesimal affine isometry x -> linear @ x + translation."""

    linear: np.ndarray
    translation: np.ndarray
    gram: np.ndarray

    @property
    def dim(self) -> int:
        return self.linear.shape[0]

    def scaled(self, t: float) -> "AffineGenerator":
        return AffineGenerator(t * self.linear, t * self.translation, self.gram)

    def __add__(self, other: "AffineGenerator") -> "AffineGenerator":
        return AffineGenerator(
            self.linear + other.linear, self.translation + other.translation, self.gram
        )

    def antisymmetry_defect(self) -> float:
        GL = self.gram @ self.linear
        return float(np.max(np.abs(GL + GL.T))) if GL.size else 0.0

    def homogeneous(self) -> np.ndarray:
        d = self.dim
        block = np.zeros((d + 1, d + 1))
        block[:d, :d] = self.linear
        block[:d, d] = self.translation
        return block


@dataclass(frozen=True)
class AffineIsometry:
    """x -> linear @ x + translation, preserving ``gram``."""

    linear: np.ndarray
    translation: np.ndarray
    gram: np.ndarray

    @classmethod
    def identity(cls, gram: np.ndarray) -> "AffineIsometry":
        d = gram.shape[0]
        return cls(np.eye(d), np.zeros(d), gram)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.linear @ x + self.translation

    def compose(self, other: "AffineIsometry") -> "AffineIsometry":
        """self o other."""
        return AffineIsometry(
            self.linear @ other.linear,
            self.linear @ other.translation + self.translation,
            self.gram,
        )

    def isometry_defect(self) -> float:
        L = self.linear
        return float(np.max(np.abs(L.T @ self.gram @ L - self.gram))) if L.size else 0.0

    def distance(self, other: "AffineIsometry") -> float:
        return float(
            max(
                np.max(np.abs(self.linear - other.linear), initial=0.0),
                np.max(np.abs(self.translation - other.translation), initial=0.0),
            )
        )


def exp_affine(generator: AffineGenerator, t: float = 1.0) -> AffineIsometry:
    """exp(t * generator) via scipy's scaling-and-squaring Pade expm."""
    d = generator.dim
    E = expm(t * generator.homogeneous())
    return AffineIsometry(E[:d, :d], E[:d, d], generator.gram)


class OrbitModel:
    """phi-representation of g_+ on g_- for one built triple.

    Coordinates on g_- are taken in the basis ``minus_basis`` (columns in
    the ambient coordinates of g). For the catalog these columns are unit
    vectors, so coordinates are the g_- entries in basis order.
    """

    def __init__(self, g: MetricEquivariantAlgebra):
        grading = grade(g)
        self.g = g
        self.minus_basis = grading.theta_minus
        self.plus_basis = grading.theta_plus
        self.exact_gram = self.minus_basis.T @ g.form @ self.minus_basis
        self.gram = to_float(self.exact_gram, "gram of g_-")
        self.labels = self._basis_labels(self.minus_basis)
        self.plus_labels = self._basis_labels(self.plus_basis)
        self._cache: Dict[int, AffineGenerator] = {}

    @property
    def dim(self) -> int:
        return self.minus_basis.cols

    def _basis_labels(self, basis: Mat) -> List[str]:
        out = []
        for j in range(basis.cols):
            support = [i for i, v in enumerate(basis.col(j)) if v]
            out.append(self.g.labels[support[0]] if len(support) == 1 else f"v{j + 1}")
        return out

    def minus_coordinates(self, v: Mat) -> Mat:
        coords = coordinates(self.minus_basis, v)
        if coords is None:
            raise UsageError("Vector does not lie in g_-")
        return coords

    def exact_generator(self, x: Mat) -> Tuple[Mat, Mat]:
        """Exact (ad x on g_-, -D x) in g_- coordinates for x in g_+."""
        g = self.g
        if not (g.involution @ x == x):
            raise UsageError("phi is only defined on g_+")
        ad = g.ad_vector(x)
        linear = Mat.from_columns(
            [self.minus_coordinates(ad @ Mat.column(self.minus_basis.col(j))).vector() for j in range(self.dim)],
            self.dim,
        )
        translation = self.minus_coordinates(-(g.derivation @ x))
        return linear, translation

    def basis_generator(self, index: int) -> AffineGenerator:
        """phi of the ambient basis element e_index, which must lie in g_+."""
        if index not in self._cache:
            if not 0 <= index < self.g.dim:
                raise UsageError(f"Basis index {index} out of range")
            linear, translation = self.exact_generator(self.g.basis_vector(index))
            gen = AffineGenerator(
                to_float(linear, "phi linear part"),
                to_float(translation, "phi translation").reshape(-1),
                self.gram,
            )
            self._cache[index] = gen
        return self._cache[index]

    def generator(self, element: Element) -> AffineGenerator:
        """phi of a label, a basis index or a float vector in g_+."""
        if isinstance(element, str):
            return self.basis_generator(self.g.index(element))
        if isinstance(element, (int, np.integer)):
            return self.basis_generator(int(element))
        vector = np.asarray(element, dtype=float).reshape(-1)
        if vector.shape[0] != self.g.dim:
            raise UsageError(f"Element must have {self.g.dim} coordinates")
        theta = to_float(self.g.involution, "theta")
        if np.max(np.abs(theta @ vector - vector), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(vector))):
            raise UsageError("phi is only defined on g_+")
        total = AffineGenerator(np.zeros((self.dim, self.dim)), np.zeros(self.dim), self.gram)
        for i in np.flatnonzero(vector):
            total = total + self.basis_generator(int(i)).scaled(float(vector[i]))
        return total

    def point(self, word: Sequence[WordFactor], origin: Optional[np.ndarray] = None) -> np.ndarray:
        """Apply exp(c_1 phi(x_1)) ... exp(c_n phi(x_n)) to the origin of g_-."""
        if len(word) > settings.max_word_length:
            raise UsageError(f"Orbit words have at most {settings.max_word_length} factors")
        x = np.zeros(self.dim) if origin is None else np.asarray(origin, dtype=float)
        for element, coeff in reversed(word):
            x = exp_affine(self.generator(element), coeff).apply(x)
        return x

    def isometry(self, word: Sequence[WordFactor]) -> AffineIsometry:
        """The composed affine isometry of a word."""
        out = AffineIsometry.identity(self.gram)
        for element, coeff in word:
            out = out.compose(exp_affine(self.generator(element), coeff))
        return out


def phi_rep(g: MetricEquivariantAlgebra, x: Union[str, Mat]) -> AffineGenerator:
    """phi(x) = (ad x restricted to g_-, -D(x)) for x in g_+.

    Raises:
        UsageError: x is not in g_+
    """
    model = OrbitModel(g)
    if isinstance(x, str):
        return model.basis_generator(g.index(x))
    linear, translation = model.exact_generator(x)
    return AffineGenerator(
        to_float(linear, "phi linear part"),
        to_float(translation, "phi translation").reshape(-1),
        model.gram,
    )


def orbit_point(g: MetricEquivariantAlgebra, word: Sequence[WordFactor]) -> np.ndarray:
    """Point of G_+(0) reached by a word; coordinates in the g_- basis of ``OrbitModel``."""
    return OrbitModel(g).point(word)
