"""
Curvature probes for embedded samplers and explicit metric fields.

For a sampler the Riemann tensor comes from the Gauss equation in the flat
ambient space, which needs second derivatives only. For a metric field it
comes from Christoffel symbols differentiated numerically. Both report
R_ijkl = <R(d_i, d_j) d_k, d_l> and the covariant derivative nabla R.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.config import settings
from app.core.exceptions import UsageError
from app.core.logging import get_logger
from app.services.geom.embeddings import EmbeddingSampler
from app.services.geom.metric import hessian, jacobian, partial

logger = get_logger(__name__)


@dataclass
class MetricField:
    """A pseudo-Riemannian metric given in coordinates."""

    dim: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    label: str = ""

    def evaluate(self, point: Sequence[float]) -> np.ndarray:
        x = np.asarray(point, dtype=float).reshape(-1)
        if x.shape[0] != self.dim:
            raise UsageError(f"Metric field takes {self.dim} coordinates, got {x.shape[0]}")
        return self.evaluator(x)


def cahen_wallach_metric(lambdas: Sequence[float], mus: Sequence[float]) -> MetricField:
    """g = 2 dz dl + sum da_i^2 + sum da'_j^2 + (sum lambda_i^2 a_i^2 - sum mu_j^2 a'_j^2) dl^2.

    Coordinates are ordered (z, a_1..a_p, a'_1..a'_q, l).
    """
    lam = np.asarray(lambdas, dtype=float)
    mu = np.asarray(mus, dtype=float)
    p, q = lam.shape[0], mu.shape[0]
    n = p + q + 2

    def evaluate(x: np.ndarray) -> np.ndarray:
        a, b = x[1:1 + p], x[1 + p:1 + p + q]
        g = np.eye(n)
        g[0, 0] = 0.0
        g[0, n - 1] = g[n - 1, 0] = 1.0
        g[n - 1, n - 1] = float(np.sum(lam ** 2 * a ** 2) - np.sum(mu ** 2 * b ** 2))
        return g

    return MetricField(n, evaluate, label=f"cahen-wallach(p={p}, q={q})")


def induced_metric_field(sampler: EmbeddingSampler) -> MetricField:
    """Pullback metric J^T G J of a sampler as a metric field."""

    def evaluate(x: np.ndarray) -> np.ndarray:
        J = jacobian(sampler.evaluate, x)
        return J.T @ sampler.gram @ J

    return MetricField(sampler.param_dim, evaluate, label="pullback")


def christoffel(metric: MetricField, x: np.ndarray, step: Optional[float] = None) -> np.ndarray:
    """Gamma[k, i, j] = Gamma^k_ij from numerical first derivatives of the metric."""
    n = metric.dim
    g_inv = np.linalg.inv(metric.evaluate(x))
    dg = np.stack([partial(lambda y: metric.evaluate(y).reshape(-1), x, m, step).reshape(n, n) for m in range(n)])
    # lowered[l, i, j] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    lowered = 0.5 * (np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg)
    return np.einsum("kl,lij->kij", g_inv, lowered)


def riemann_intrinsic(metric: MetricField, x: np.ndarray, step: Optional[float] = None) -> np.ndarray:
    """R_ijkl from Christoffel symbols and their numerical derivatives."""
    n = metric.dim
    gamma = christoffel(metric, x, step)
    dgamma = np.stack(
        [partial(lambda y: christoffel(metric, y, step).reshape(-1), x, m, step).reshape(n, n, n) for m in range(n)]
    )
    # R^l_{ijk} = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^m_jk Gamma^l_im - Gamma^m_ik Gamma^l_jm
    up = (
        np.einsum("iljk->ijkl", dgamma)
        - np.einsum("jlik->ijkl", dgamma)
        + np.einsum("mjk,lim->ijkl", gamma, gamma)
        - np.einsum("mik,ljm->ijkl", gamma, gamma)
    )
    return np.einsum("ijkm,ml->ijkl", up, metric.evaluate(x))


def _embedded_data(sampler: EmbeddingSampler, x: np.ndarray, step: Optional[float]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    J = jacobian(sampler.evaluate, x, step)
    G = sampler.gram
    induced = J.T @ G @ J
    H = hessian(sampler.evaluate, x, step)
    P = J @ np.linalg.solve(induced, J.T @ G)
    II = H - np.einsum("ab,ijb->ija", P, H)
    # Gamma^k_ij = g^kl <d_i d_j f, d_l f>
    gamma = np.einsum("kl,ijl->kij", np.linalg.inv(induced), np.einsum("ija,ab,bl->ijl", H, G, J))
    return II, gamma, induced


def riemann_gauss(sampler: EmbeddingSampler, x: np.ndarray, step: Optional[float] = None) -> np.ndarray:
    """R_ijkl = <II(d_j, d_k), II(d_i, d_l)> - <II(d_i, d_k), II(d_j, d_l)>."""
    II, _, _ = _embedded_data(sampler, x, step)
    # inner[i, j, k, l] = <II_ij, II_kl>
    inner = np.einsum("ija,ab,klb->ijkl", II, sampler.gram, II)
    return np.einsum("jkil->ijkl", inner) - np.einsum("ikjl->ijkl", inner)


Source = Union[EmbeddingSampler, MetricField]


def _riemann(source: Source, x: np.ndarray, step: Optional[float]) -> np.ndarray:
    if isinstance(source, EmbeddingSampler):
        return riemann_gauss(source, x, step)
    return riemann_intrinsic(source, x, step)


def _christoffel(source: Source, x: np.ndarray, step: Optional[float]) -> np.ndarray:
    if isinstance(source, EmbeddingSampler):
        return _embedded_data(source, x, step)[1]
    return christoffel(source, x, step)


def covariant_derivative(source: Source, x: np.ndarray, step: Optional[float] = None) -> np.ndarray:
    """(nabla_m R)_ijkl with the derivative index first."""
    n = x.shape[0]
    R = _riemann(source, x, step)
    gamma = _christoffel(source, x, step)
    dR = np.stack(
        [partial(lambda y: _riemann(source, y, step).reshape(-1), x, m, step).reshape((n,) * 4) for m in range(n)]
    )
    return (
        dR
        - np.einsum("pmi,pjkl->mijkl", gamma, R)
        - np.einsum("pmj,ipkl->mijkl", gamma, R)
        - np.einsum("pmk,ijpl->mijkl", gamma, R)
        - np.einsum("pml,ijkp->mijkl", gamma, R)
    )


@dataclass
class CurvatureProbe:
    """Riemann tensor, covariant derivative and flags at one point."""

    point: np.ndarray
    riemann: np.ndarray
    max_riemann: float
    max_covariant_derivative: float
    flat: bool
    parallel: bool
    ladder: List[Tuple[float, float]] = field(default_factory=list)
    stable: bool = True


def curvature_probe(source: Source, point: Sequence[float], step: Optional[float] = None) -> CurvatureProbe:
    """Riemann tensor with flat/parallel flags.

    The step ladder (h, h/2) is recorded; when the two values of max |R|
    differ by more than the curvature tolerance the probe is marked unstable.
    """
    x = np.asarray(point, dtype=float).reshape(-1)
    h = step or settings.fd_step
    R = _riemann(source, x, h)
    max_r = float(np.max(np.abs(R), initial=0.0))
    finer = float(np.max(np.abs(_riemann(source, x, h / 2)), initial=0.0))
    ladder = [(h, max_r), (h / 2, finer)]
    stable = abs(max_r - finer) <= settings.tolerance_curvature
    max_nabla = float(np.max(np.abs(covariant_derivative(source, x, h)), initial=0.0))

    probe = CurvatureProbe(
        point=x,
        riemann=R,
        max_riemann=max_r,
        max_covariant_derivative=max_nabla,
        flat=max_r <= settings.tolerance_curvature,
        parallel=max_nabla <= settings.tolerance_parallel,
        ladder=ladder,
        stable=stable,
    )
    if not stable:
        logger.warning("Curvature probe unstable under step refinement", ladder=ladder)
    return probe
