"""
Normal reflection test: reflect probe points of M at the affine normal space
through a base point and measure how far the images are from M.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from app.core.config import settings
from app.core.exceptions import ConvergenceError
from app.core.logging import get_logger
from app.services.geom.affine import AffineIsometry
from app.services.geom.embeddings import EmbeddingSampler
from app.services.geom.metric import induced_metric, jacobian

logger = get_logger(__name__)


@dataclass
class Projection:
    """Gauss-Newton projection of an ambient point onto the sampler image."""

    params: np.ndarray
    residual: float
    iterations: int
    converged: bool


def project_to_manifold(
    sampler: EmbeddingSampler,
    target: np.ndarray,
    start: Sequence[float],
    max_iter: Optional[int] = None,
    tol: Optional[float] = None,
) -> Projection:
    """Minimize |f(x) - target| in Euclidean ambient coordinates from ``start``.

    Stops when the normal equations J^T r fall below ``tol``.
    """
    max_iter = max_iter or settings.gauss_newton_max_iter
    tol = tol or settings.gauss_newton_tol
    x = np.asarray(start, dtype=float).copy()
    r = sampler.evaluate(x) - target
    for iteration in range(1, max_iter + 1):
        J = jacobian(sampler.evaluate, x)
        if np.linalg.norm(J.T @ r) <= tol:
            return Projection(x, float(np.linalg.norm(r)), iteration - 1, True)
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        x = x + step
        r = sampler.evaluate(x) - target
        if np.linalg.norm(step) <= tol * max(1.0, np.linalg.norm(x)):
            return Projection(x, float(np.linalg.norm(r)), iteration, True)
    return Projection(x, float(np.linalg.norm(r)), max_iter, False)


def normal_reflection(sampler: EmbeddingSampler, base: Sequence[float]) -> AffineIsometry:
    """Reflection fixing p + N_p pointwise and negating T_p."""
    sample = induced_metric(sampler, base)
    P = sample.tangent_projector(sampler.gram)
    linear = np.eye(sampler.ambient_dim) - 2 * P
    return AffineIsometry(linear, sample.point - linear @ sample.point, sampler.gram)


@dataclass
class ReflectionReport:
    """Residuals of reflected probes against M."""

    base: np.ndarray
    residuals: List[float]
    failures: List[dict] = field(default_factory=list)
    isometry_defect: float = 0.0

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    def passed(self, tol: Optional[float] = None) -> bool:
        return not self.failures and self.max_residual <= (tol or settings.tolerance_manifold)


def normal_reflection_test(
    sampler: EmbeddingSampler, base: Sequence[float], probes: Sequence[Sequence[float]]
) -> ReflectionReport:
    """Map every probe f(q) by the normal reflection at f(base) and project back onto M.

    Each probe starts Gauss-Newton from the mirrored parameters 2 base - q and
    from q itself; the smaller residual is kept. Probes whose projection does
    not converge are listed in ``failures`` with their residual.
    """
    base = np.asarray(base, dtype=float).reshape(-1)
    reflection = normal_reflection(sampler, base)
    report = ReflectionReport(base, [], isometry_defect=reflection.isometry_defect())

    for index, probe in enumerate(probes):
        q = np.asarray(probe, dtype=float).reshape(-1)
        target = reflection.apply(sampler.evaluate(q))
        best = min(
            (project_to_manifold(sampler, target, start) for start in (2 * base - q, q)),
            key=lambda p: p.residual,
        )
        report.residuals.append(best.residual)
        if not best.converged and best.residual > settings.tolerance_manifold:
            error = ConvergenceError(
                "Projection onto M did not converge",
                {"probe": index, "residual": best.residual, "iterations": best.iterations},
            )
            report.failures.append(error.to_dict())

    logger.debug(
        "Reflection test finished",
        probes=len(report.residuals),
        max_residual=report.max_residual,
        failures=len(report.failures),
    )
    return report
