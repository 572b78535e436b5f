"""
Embedded extrinsic symmetric spaces as parametrized point samplers.

Two sources feed the same ``EmbeddingSampler``: the closed-form
parametrizations of the five Lorentzian families and the orbit of the
origin under exp(phi(L)) exp(phi(Z + A)) for a built triple.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.exceptions import DegeneracyError, UsageError
from app.core.logging import get_logger
from app.services.geom.affine import OrbitModel, WordFactor
from app.services.liecore.algebra import MetricEquivariantAlgebra
from app.services.liecore.grading import grade
from app.services.quadext.catalog import CatalogDescriptor, build_catalog_entry
from app.utils.exactlin import to_float, to_float_scalar

logger = get_logger(__name__)

ITEMS = (1, 2, 3, 4, 5)

# 2^(-1/3): scale matching the item 3 parametrization to the orbit route
ITEM3_SCALE = 2.0 ** (-1.0 / 3.0)


@dataclass(frozen=True)
class ItemParams:
    """One closed-form family: item id, multiplicities (k, l, m), constant c and the item-2 sign."""

    item: int
    k: int = 0
    l: int = 0
    m: int = 0
    c: float = 0.0
    sign: int = 1

    def __post_init__(self) -> None:
        if self.item not in ITEMS:
            raise UsageError(f"Unknown item {self.item}; items are 1 to 5")
        if min(self.k, self.l, self.m) < 0:
            raise UsageError("Multiplicities must be nonnegative")
        if self.item < 4 and (self.k or self.l or self.m or self.c):
            raise UsageError(f"k, l, m and c only apply to items 4 and 5, not {self.item}")
        if self.sign not in (1, -1):
            raise UsageError("sign must be 1 or -1")

    @property
    def param_dim(self) -> int:
        return {1: 1, 2: 2, 3: 3}.get(self.item, 2 + self.k + self.l + self.m)

    @property
    def ambient_dim(self) -> int:
        return {1: 1, 2: 3, 3: 5}.get(self.item, 4 + self.k + 2 * self.l + 2 * self.m)

    @property
    def signature(self) -> Tuple[int, int]:
        """Printed (negative, positive) signature of M."""
        return {1: (1, 0), 2: (1, 1), 3: (1, 2)}.get(self.item, (1, 1 + self.k + self.l + self.m))

    @property
    def mean_curvature_constant(self) -> float:
        """C in h = C sigma_X; zero for the minimal items."""
        if self.item < 4:
            return 0.0
        k, l, m = self.k, self.l, self.m
        return -(4 + 2 * (k + l) + m) / (2 + k + l + m)

    @property
    def expected_flat(self) -> bool:
        return self.item < 4 or (self.k == 0 and self.m == 0)

    def cahen_wallach_parameters(self) -> Tuple[List[float], List[float]]:
        """(lambdas, mus) of the Cahen-Wallach space covering the non-flat factor of items 4 and 5."""
        if self.item < 4:
            raise UsageError(f"Item {self.item} is flat")
        weights = [1.0] * self.m + [2.0] * self.k
        return ([], weights) if self.item == 4 else (weights, [])

    def coordinate_labels(self) -> List[str]:
        if self.item == 1:
            return ["x1"]
        if self.item in (2, 3):
            return [f"x{i + 1}" for i in range(self.ambient_dim)]
        names = ["w1", "w2"]
        names += [f"x{i + 1}" for i in range(self.k)]
        names += [f"y{i + 1}" for i in range(self.l)]
        names += [f"yhat{i + 1}" for i in range(self.l)]
        names += [f"z{i + 1}" for i in range(self.m)]
        names += [f"zhat{i + 1}" for i in range(self.m)]
        return names + ["w3", "w4"]

    def param_labels(self) -> List[str]:
        if self.item == 1:
            return ["r"]
        if self.item == 2:
            return ["r", "s"]
        if self.item == 3:
            return ["r", "s", "t"]
        return (
            ["r", "t"]
            + [f"s{i + 1}" for i in range(self.k)]
            + [f"v{i + 1}" for i in range(self.l)]
            + [f"u{i + 1}" for i in range(self.m)]
        )


def ambient_gram(params: ItemParams) -> np.ndarray:
    """Gram matrix of V in the item's coordinates."""
    d = params.ambient_dim
    G = np.zeros((d, d))
    if params.item == 1:
        G[0, 0] = -1.0
    elif params.item == 2:
        # 2 dx1 dx3 + sign dx2^2
        G[0, 2] = G[2, 0] = 1.0
        G[1, 1] = float(params.sign)
    elif params.item == 3:
        # 2 dx1 dx4 + 2 dx2 dx5 + dx3^2
        G[0, 3] = G[3, 0] = 1.0
        G[1, 4] = G[4, 1] = 1.0
        G[2, 2] = 1.0
    else:
        k, l, m = params.k, params.l, params.m
        w3, w4 = d - 2, d - 1
        G[0, w3] = G[w3, 0] = 1.0
        G[1, w4] = G[w4, 1] = 1.0
        hat = -1.0 if params.item == 5 else 1.0
        diag = [1.0] * k + [1.0] * l + [hat] * l + [1.0] * m + [hat] * m
        for i, v in enumerate(diag):
            G[2 + i, 2 + i] = v
    return G


def _split_params(params: ItemParams, x: np.ndarray) -> Tuple[float, float, np.ndarray, np.ndarray, np.ndarray]:
    k, l = params.k, params.l
    return x[0], x[1], x[2:2 + k], x[2 + k:2 + k + l], x[2 + k + l:]


def closed_form_embed(params: ItemParams, point: Sequence[float]) -> np.ndarray:
    """Evaluate the printed parametrization of an item at ``point``."""
    x = np.asarray(point, dtype=float).reshape(-1)
    if x.shape[0] != params.param_dim:
        raise UsageError(f"Item {params.item} takes {params.param_dim} parameters, got {x.shape[0]}")

    if params.item == 1:
        return x.copy()
    if params.item == 2:
        r, s = x
        return np.array([r, s * s, s])
    if params.item == 3:
        r, s, t = x
        return np.array([s, -r * t + r ** 4 / 4.0, t, r, r * r])

    r, t, s, v, u = _split_params(params, x)
    c = params.c
    norm = float(s @ s + v @ v + 0.5 * (u @ u))
    if params.item == 4:
        q = norm + c
        cos, sin = math.cos(r), math.sin(r)
        head = [-q * cos - (r * c + t) * sin + c, -q * sin + (r * c + t) * cos]
        parts = [-s, v * cos, -v * sin, u * math.cos(r / 2), u * math.sin(r / 2)]
        tail = [0.5 * (cos - 1.0), 0.5 * sin]
    else:
        q = norm - c
        cosh, sinh = math.cosh(r), math.sinh(r)
        head = [-q * cosh - (r * c + t) * sinh - c, q * sinh + (r * c + t) * cosh]
        parts = [-s, v * cosh, v * sinh, u * math.cosh(r / 2), -u * math.sinh(r / 2)]
        tail = [0.5 * (cosh - 1.0), 0.5 * sinh]
    return np.concatenate([np.array(head), *parts, np.array(tail)])


@dataclass
class EmbeddingSampler:
    """Smooth map from a parameter domain into a pseudo-Euclidean space."""

    param_dim: int
    gram: np.ndarray
    evaluator: Callable[[np.ndarray], np.ndarray]
    source: Dict[str, object] = field(default_factory=dict)
    item: Optional[ItemParams] = None
    coordinate_labels: List[str] = field(default_factory=list)

    @property
    def ambient_dim(self) -> int:
        return self.gram.shape[0]

    def evaluate(self, point: Sequence[float]) -> np.ndarray:
        x = np.asarray(point, dtype=float).reshape(-1)
        if x.shape[0] != self.param_dim:
            raise UsageError(f"Sampler takes {self.param_dim} parameters, got {x.shape[0]}")
        return self.evaluator(x)

    @classmethod
    def closed_form(cls, params: ItemParams) -> "EmbeddingSampler":
        return cls(
            param_dim=params.param_dim,
            gram=ambient_gram(params),
            evaluator=lambda x: closed_form_embed(params, x),
            source={"kind": "closed-form", "item": params.item, "k": params.k, "l": params.l,
                    "m": params.m, "c": params.c, "sign": params.sign},
            item=params,
            coordinate_labels=params.coordinate_labels(),
        )

    @classmethod
    def orbit(cls, g: MetricEquivariantAlgebra, dim_l: int, dim_a: int) -> "EmbeddingSampler":
        """Section sampler Z + A + L -> exp(phi(L)) exp(phi(Z + A))(0) on g_+^-.

        ``(dim_l, dim_a)`` locate the l block in the basis order (l*, a, l).
        """
        if 2 * dim_l + dim_a != g.dim:
            raise UsageError(f"Split ({dim_l}, {dim_a}) does not match dim {g.dim}")
        model = OrbitModel(g)
        basis = to_float(grade(g).plus_minus, "basis of g_+^-")
        top = dim_l + dim_a
        in_l = [bool(np.any(basis[top:, j])) and not np.any(basis[:top, j]) for j in range(basis.shape[1])]

        def evaluate(x: np.ndarray) -> np.ndarray:
            L = basis[:, in_l] @ x[in_l]
            rest = [not flag for flag in in_l]
            ZA = basis[:, rest] @ x[rest]
            return model.point([(L, 1.0), (ZA, 1.0)])

        return cls(
            param_dim=basis.shape[1],
            gram=model.gram,
            evaluator=evaluate,
            source={"kind": "orbit", "dim": g.dim},
            coordinate_labels=list(model.labels),
        )


def item_for_descriptor(desc: CatalogDescriptor) -> ItemParams:
    """Closed-form family integrating a catalog entry."""
    if desc.a0_dim:
        raise UsageError("Embeddings are defined for entries without a0 pairs")
    if desc.case_id == "1":
        return ItemParams(1)
    if desc.case_id in ("2a", "2b"):
        return ItemParams(2, sign=-1 if desc.case_id == "2a" else 1)
    if desc.case_id == "3":
        return ItemParams(3)
    return ItemParams(int(desc.case_id), desc.k, desc.l, desc.m, float(desc.c))


def descriptor_for_item(params: ItemParams) -> CatalogDescriptor:
    """Catalog entry whose orbit is the item; c is read as a rational."""
    if params.item == 2:
        return CatalogDescriptor("2a" if params.sign < 0 else "2b")
    if params.item < 4:
        return CatalogDescriptor(str(params.item))
    c = Fraction(params.c).limit_denominator(10 ** 6)
    return CatalogDescriptor(str(params.item), params.k, params.l, params.m, c)


def sampler_for_descriptor(desc: CatalogDescriptor) -> EmbeddingSampler:
    return EmbeddingSampler.closed_form(item_for_descriptor(desc))


def _unit(g: MetricEquivariantAlgebra, label: str) -> np.ndarray:
    """Basis vector of ``label`` scaled to unit length."""
    i = g.index(label)
    norm = abs(to_float_scalar(g.form[i, i], f"norm of {label}"))
    if norm == 0.0:
        raise DegeneracyError(f"{label} is isotropic", {"label": label})
    e = np.zeros(g.dim)
    e[i] = 1.0 / math.sqrt(norm)
    return e


def _paired(g: MetricEquivariantAlgebra, label: str, partner: str) -> np.ndarray:
    """Basis vector of the isotropic ``label`` scaled to pair to one with ``partner``."""
    i = g.index(label)
    pairing = to_float_scalar(g.form[i, g.index(partner)], f"pairing of {label} with {partner}")
    if pairing == 0.0:
        raise DegeneracyError(f"{label} does not pair with {partner}", {"label": label, "partner": partner})
    e = np.zeros(g.dim)
    e[i] = 1.0 / pairing
    return e


def matched_word(desc: CatalogDescriptor, g: MetricEquivariantAlgebra, point: Sequence[float]) -> List[WordFactor]:
    """Orbit word whose end point corresponds to ``closed_form_embed`` at ``point``.

    The items are matched to the orbit up to a fixed linear isometry of the
    ambient spaces; the word only fixes the parameter correspondence.
    """
    params = item_for_descriptor(desc)
    x = np.asarray(point, dtype=float).reshape(-1)
    if x.shape[0] != params.param_dim:
        raise UsageError(f"Item {params.item} takes {params.param_dim} parameters")

    if params.item == 1:
        return [("A1", float(x[0]))]
    if params.item == 2:
        r, s = x
        a = -math.sqrt(2.0) * s
        b = params.sign * a ** 3 / 6.0 - r / math.sqrt(2.0)
        return [("X", a), ("sigma_X", b)]
    if params.item == 3:
        r, s, t = x
        a = -r / ITEM3_SCALE
        c = t + a ** 3 / 6.0
        b = c * a * a / 2.0 - a ** 5 / 120.0 - ITEM3_SCALE * s
        return [("X", a), ("sigma_X", b), ("A2", c)]

    r, t, s, v, u = _split_params(params, x)
    element = t * _paired(g, "sigma_H", "H")
    for i, value in enumerate(s):
        element = element + value * _unit(g, f"a3_{i + 1}Y")
    for i, value in enumerate(v):
        element = element + value * _unit(g, f"b3_{i + 1}H")
    for i, value in enumerate(u):
        element = element + value * _unit(g, f"a4_{i + 1}_2")
    return [("H", r / 2.0), (element, 1.0)]


@dataclass
class RouteAgreement:
    """Fit of closed-form points against orbit points by one linear map."""

    max_residual: float
    isometry_defect: float
    identification: np.ndarray
    points: int

    def passed(self, tol_points: float = 1e-8, tol_isometry: float = 1e-8) -> bool:
        return self.max_residual <= tol_points and self.isometry_defect <= tol_isometry


def route_agreement(desc: CatalogDescriptor, points: Sequence[Sequence[float]]) -> RouteAgreement:
    """Compare both routes on matched parameters.

    Fits P with closed = P @ orbit by least squares, then reports the
    largest point residual and how far P is from an isometry g_- -> V.
    """
    params = item_for_descriptor(desc)
    g = build_catalog_entry(desc)
    model = OrbitModel(g)
    closed = np.array([closed_form_embed(params, p) for p in points])
    orbit = np.array([model.point(matched_word(desc, g, p)) for p in points])
    if orbit.shape[0] < orbit.shape[1]:
        raise UsageError(f"Need at least {orbit.shape[1]} points to identify the ambient spaces")

    X, *_ = np.linalg.lstsq(orbit, closed, rcond=None)
    P = X.T
    residual = float(np.max(np.abs(orbit @ X - closed)))
    defect = float(np.max(np.abs(P.T @ ambient_gram(params) @ P - model.gram)))
    logger.debug(
        "Route agreement computed",
        descriptor=desc.id,
        points=len(points),
        residual=residual,
        isometry_defect=defect,
    )
    return RouteAgreement(residual, defect, P, len(points))
