"""
First and second fundamental forms of a sampler by finite differences.

Derivatives use fourth-order central differences with one Richardson
extrapolation step (h and h/2).
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space

from app.core.config import settings
from app.core.exceptions import DegeneracyError, UsageError
from app.core.logging import get_logger
from app.services.geom.embeddings import EmbeddingSampler

logger = get_logger(__name__)

VectorMap = Callable[[np.ndarray], np.ndarray]


def _central(f: VectorMap, x: np.ndarray, i: int, h: float) -> np.ndarray:
    e = np.zeros_like(x)
    e[i] = h
    return (f(x - 2 * e) - 8 * f(x - e) + 8 * f(x + e) - f(x + 2 * e)) / (12 * h)


def partial(f: VectorMap, x: np.ndarray, i: int, step: Optional[float] = None) -> np.ndarray:
    """d f / d x_i with Richardson extrapolation of the five-point stencil."""
    h = step or settings.fd_step
    coarse = _central(f, x, i, h)
    fine = _central(f, x, i, h / 2)
    return (16 * fine - coarse) / 15


def jacobian(f: VectorMap, x: np.ndarray, step: Optional[float] = None) -> np.ndarray:
    """Columns are the partial derivatives; shape (ambient, params)."""
    x = np.asarray(x, dtype=float)
    return np.column_stack([partial(f, x, i, step) for i in range(x.shape[0])])


def hessian(f: VectorMap, x: np.ndarray, step: Optional[float] = None) -> np.ndarray:
    """Second derivatives as differences of the Jacobian; shape (params, params, ambient)."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    out = np.empty((n, n, f(x).shape[0]))
    for j in range(n):
        column_j = lambda y, j=j: partial(f, y, j, step)
        for i in range(j, n):
            out[i, j] = out[j, i] = partial(column_j, x, i, step)
    return out


def signature_of(gram: np.ndarray, threshold: Optional[float] = None) -> Tuple[int, int]:
    """(negative, positive) eigenvalue counts of a symmetric matrix.

    Raises:
        DegeneracyError: an eigenvalue is below the threshold in absolute value
    """
    tol = threshold or settings.tolerance_signature
    eigenvalues = np.linalg.eigvalsh(0.5 * (gram + gram.T))
    smallest = float(np.min(np.abs(eigenvalues))) if eigenvalues.size else np.inf
    if smallest < tol:
        raise DegeneracyError(
            "Induced metric is degenerate",
            {"smallest_eigenvalue": smallest, "threshold": tol},
        )
    return int(np.sum(eigenvalues < 0)), int(np.sum(eigenvalues > 0))


@dataclass
class MetricSample:
    """Fundamental forms of a sampler at one parameter point."""

    params: np.ndarray
    point: np.ndarray
    jacobian: np.ndarray
    induced_gram: np.ndarray
    signature: Tuple[int, int]
    normal_frame: Optional[np.ndarray] = None
    second_fundamental: Optional[np.ndarray] = None
    second_fundamental_normal: Optional[np.ndarray] = None
    mean_curvature: Optional[np.ndarray] = None

    @property
    def dim(self) -> int:
        return self.jacobian.shape[1]

    def tangent_projector(self, gram: np.ndarray) -> np.ndarray:
        """Gram-orthogonal projector onto the tangent space."""
        J = self.jacobian
        return J @ np.linalg.solve(self.induced_gram, J.T @ gram)


def induced_metric(sampler: EmbeddingSampler, point: Sequence[float]) -> MetricSample:
    """First fundamental form J^T G J and its signature."""
    x = np.asarray(point, dtype=float).reshape(-1)
    J = jacobian(sampler.evaluate, x)
    induced = J.T @ sampler.gram @ J
    return MetricSample(
        params=x,
        point=sampler.evaluate(x),
        jacobian=J,
        induced_gram=induced,
        signature=signature_of(induced),
    )


def second_fundamental_and_mean_curvature(sampler: EmbeddingSampler, point: Sequence[float]) -> MetricSample:
    """II(d_i, d_j) = normal part of d_i d_j f; h = trace_g II / dim M."""
    sample = induced_metric(sampler, point)
    G = sampler.gram
    P = sample.tangent_projector(G)
    H = hessian(sampler.evaluate, sample.params)
    II = H - np.einsum("ab,ijb->ija", P, H)
    g_inv = np.linalg.inv(sample.induced_gram)
    h = np.einsum("ij,ija->a", g_inv, II) / sample.dim

    N = null_space(sample.jacobian.T @ G)
    sample.normal_frame = N
    sample.second_fundamental = II
    if N.size:
        sample.second_fundamental_normal = np.einsum("ab,ijb->ija", np.linalg.pinv(N), II)
    sample.mean_curvature = h
    return sample


@dataclass
class MeanCurvatureReport:
    """Measured against predicted mean curvature at a point."""

    predicted: float
    measured: float
    norm: float
    angle: float
    minimal: bool

    def passed(self, tol: Optional[float] = None, tol_angle: Optional[float] = None) -> bool:
        tol_c = tol or settings.tolerance_curvature
        if self.minimal:
            return self.norm <= settings.tolerance_manifold
        return abs(self.measured - self.predicted) <= tol_c and self.angle <= (tol_angle or settings.tolerance_mean_direction)


def mean_curvature_check(sampler: EmbeddingSampler, point: Optional[Sequence[float]] = None) -> MeanCurvatureReport:
    """Compare h at a point (default: the origin) with C times the sigma_X direction.

    sigma_X is the first ambient coordinate (w1) of items 4 and 5.
    """
    if sampler.item is None:
        raise UsageError("Mean curvature prediction needs a closed-form item")
    x = np.zeros(sampler.param_dim) if point is None else np.asarray(point, dtype=float)
    sample = second_fundamental_and_mean_curvature(sampler, x)
    h = sample.mean_curvature
    norm = float(np.linalg.norm(h))
    predicted = sampler.item.mean_curvature_constant
    minimal = sampler.item.item < 4
    if minimal:
        return MeanCurvatureReport(predicted, 0.0, norm, 0.0, True)
    measured = float(h[0])
    angle = float(np.arccos(min(1.0, abs(h[0]) / norm))) if norm else float(np.pi / 2)
    logger.debug("Mean curvature measured", item=sampler.item.item, measured=measured, predicted=predicted)
    return MeanCurvatureReport(predicted, measured, norm, angle, False)
