"""
Central (weak) extensions g~ = R + g of an extrinsic triple by a closed
invariant R-valued 2-form.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from app.core.exceptions import PreconditionError, UsageError
from app.core.logging import get_logger
from app.services.checks import CheckList
from app.services.liecore.algebra import MetricEquivariantAlgebra, Structure, add_sparse
from app.services.liecore.grading import grade
from app.services.quadext.forms import Form, ce_differential, derivation_act, theta_act
from app.utils.exactlin import ZERO, Mat, block_diag, nullspace, rank

logger = get_logger(__name__)


@dataclass(frozen=True)
class CentralExtensionDatum:
    """Base algebra g, dim R and an R-valued 2-form omega on g."""

    base: MetricEquivariantAlgebra
    r_dim: int
    omega: Form

    def __post_init__(self) -> None:
        if self.r_dim < 0:
            raise UsageError("R dimension must be nonnegative")
        if (self.omega.degree, self.omega.dim_l, self.omega.dim_target) != (2, self.base.dim, self.r_dim):
            raise UsageError(
                f"omega must be a 2-form on dim {self.base.dim} with values in dim {self.r_dim}"
            )

    @classmethod
    def zero(cls, base: MetricEquivariantAlgebra, r_dim: int) -> "CentralExtensionDatum":
        return cls(base, r_dim, Form.zero(2, base.dim, r_dim))

    def r_labels(self) -> List[str]:
        taken = set(self.base.labels)
        stem = "R"
        while any(f"{stem}{j + 1}" in taken for j in range(self.r_dim)):
            stem += "_"
        return [f"{stem}{j + 1}" for j in range(self.r_dim)]


def datum_checks(datum: CentralExtensionDatum) -> CheckList:
    """Closedness, theta^* omega = -omega and D omega = 0."""
    g, omega = datum.base, datum.omega
    r = datum.r_dim
    checks = CheckList()
    checks.record("omega.closed", ce_differential(omega, g).is_zero())
    checks.record(
        "omega.theta_odd",
        theta_act(omega, g.involution, -Mat.identity(r)) == omega,
    )
    checks.record("omega.D_invariant", derivation_act(omega, g.derivation, Mat.zero(r, r)).is_zero())
    return checks


def kernel_image(datum: CentralExtensionDatum) -> Mat:
    """Basis of omega(ker [,] on g-^- x g+^-) inside R."""
    g, omega = datum.base, datum.omega
    grading = grade(g)
    U, W = grading.minus_minus, grading.plus_minus
    pairs: List[Tuple[Mat, Mat]] = [
        (Mat.column(U.col(a)), Mat.column(W.col(b))) for a in range(U.cols) for b in range(W.cols)
    ]
    if not pairs or datum.r_dim == 0:
        return Mat.zero(datum.r_dim, 0)

    bracket_map = Mat.from_columns([g.bracket(u, w).vector() for u, w in pairs], g.dim)
    omega_map = Mat.from_columns([_evaluate(omega, u, w) for u, w in pairs], datum.r_dim)
    vectors = [omega_map @ k for k in nullspace(bracket_map)]
    if not vectors:
        return Mat.zero(datum.r_dim, 0)
    return Mat.from_columns([v.vector() for v in vectors], datum.r_dim)


def _evaluate(omega: Form, x: Mat, y: Mat) -> Tuple[Fraction, ...]:
    r = omega.dim_target
    acc = [ZERO] * r
    xs = [(i, c) for i, c in enumerate(x.vector()) if c]
    ys = [(j, c) for j, c in enumerate(y.vector()) if c]
    for i, a in xs:
        for j, b in ys:
            value = omega(i, j)
            for t in range(r):
                acc[t] += a * b * value[t]
    return tuple(acc)


def is_full_extension(datum: CentralExtensionDatum) -> bool:
    """omega maps the kernel of the bracket on g-^- x g+^- onto R."""
    image = kernel_image(datum)
    return rank(image) == datum.r_dim


@dataclass
class CentralExtensionResult:
    algebra: MetricEquivariantAlgebra
    full: bool
    checks: CheckList


def central_extension(datum: CentralExtensionDatum) -> CentralExtensionResult:
    """Assemble g~ = R + g with [x, y]~ = [x, y] + omega(x, y) and R central.

    The inner product is extended by zero on R, theta = -Id and D = 0 there.

    Raises:
        PreconditionError: omega is not closed or not invariant
    """
    checks = datum_checks(datum)
    if not checks.passed:
        raise PreconditionError(
            "Central extension needs a closed invariant 2-form",
            {"failed": [c.name for c in checks.failed()]},
        )

    g, omega, r = datum.base, datum.omega, datum.r_dim
    structure: Structure = {}
    for i in range(g.dim):
        for j in range(g.dim):
            if i == j:
                continue
            row = {k + r: v for k, v in g.bracket_basis(i, j).items()}
            value = omega(i, j)
            row = add_sparse(row, {t: value[t] for t in range(r) if value[t]})
            if row:
                structure[(i + r, j + r)] = row

    extended = MetricEquivariantAlgebra(
        tuple(datum.r_labels()) + g.labels,
        structure,
        D=block_diag([Mat.zero(r, r), g.derivation]),
        theta=block_diag([-Mat.identity(r), g.involution]),
        gram=block_diag([Mat.zero(r, r), g.form]),
        weak=True,
    )
    full = is_full_extension(datum)
    logger.info("Central extension assembled", dim=extended.dim, r_dim=r, full=full)
    return CentralExtensionResult(extended, full, checks)
