"""
Quadratic cochains and cocycles: the group C^1_Q, its right action on Z^2_Q,
pullbacks along morphisms of pairs and class witnesses.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence

from app.core.exceptions import UsageError
from app.core.logging import get_logger
from app.services.checks import CheckList
from app.services.liecore.algebra import EquivariantLieData
from app.services.quadext.forms import (
    Form,
    ce_differential,
    invariant_form_basis,
    is_invariant,
    wedge_inner,
)
from app.services.quadext.module import OrthogonalModuleData
from app.utils.exactlin import Mat, is_nondegenerate

logger = get_logger(__name__)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class QuadraticCocycle:
    """Pair (alpha, gamma): alpha a 2-form with values in a, gamma a scalar 3-form."""

    alpha: Form
    gamma: Form

    def __post_init__(self) -> None:
        if self.alpha.degree != 2 or self.gamma.degree != 3 or self.gamma.dim_target != 1:
            raise UsageError("Cocycle needs a 2-form alpha and a scalar 3-form gamma")
        if self.alpha.dim_l != self.gamma.dim_l:
            raise UsageError("alpha and gamma live on different algebras")

    @classmethod
    def zero(cls, dim_l: int, dim_a: int) -> "QuadraticCocycle":
        return cls(Form.zero(2, dim_l, dim_a), Form.zero(3, dim_l))

    @property
    def dim_l(self) -> int:
        return self.alpha.dim_l

    @property
    def dim_a(self) -> int:
        return self.alpha.dim_target

    def describe(self, l_labels: Sequence[str], a_labels: Sequence[str]) -> Dict[str, Dict[str, str]]:
        return {
            "alpha": self.alpha.describe(l_labels, a_labels),
            "gamma": self.gamma.describe(l_labels),
        }


@dataclass(frozen=True)
class QuadraticCochain:
    """Pair (tau, sigma): tau a 1-form with values in a, sigma a scalar 2-form."""

    tau: Form
    sigma: Form

    def __post_init__(self) -> None:
        if self.tau.degree != 1 or self.sigma.degree != 2 or self.sigma.dim_target != 1:
            raise UsageError("Cochain needs a 1-form tau and a scalar 2-form sigma")
        if self.tau.dim_l != self.sigma.dim_l:
            raise UsageError("tau and sigma live on different algebras")

    @classmethod
    def identity(cls, dim_l: int, dim_a: int) -> "QuadraticCochain":
        return cls(Form.zero(1, dim_l, dim_a), Form.zero(2, dim_l))

    @classmethod
    def from_matrix(cls, tau: Mat, sigma: Mat) -> "QuadraticCochain":
        """tau as a dim_a x dim_l matrix, sigma as an antisymmetric dim_l x dim_l matrix."""
        if not (sigma + sigma.T).is_zero():
            raise UsageError("sigma must be antisymmetric")
        n = sigma.rows
        return cls(
            Form.from_matrix(tau),
            Form(2, n, 1, {(i, j): (sigma[i, j],) for i in range(n) for j in range(i + 1, n)}),
        )

    def is_identity(self) -> bool:
        return self.tau.is_zero() and self.sigma.is_zero()


def _rho(a: OrthogonalModuleData) -> Optional[Sequence[Mat]]:
    return None if a.is_trivial() else a.rho


def d_alpha(alpha: Form, l: EquivariantLieData, a: OrthogonalModuleData) -> Form:
    return ce_differential(alpha, l, _rho(a))


def is_cocycle(z: QuadraticCocycle, l: EquivariantLieData, a: OrthogonalModuleData) -> CheckList:
    """Exact cocycle conditions; each failing identity carries its first nonzero entries."""
    checks = CheckList()
    shape_ok = z.dim_l == l.dim and z.dim_a == a.dim
    checks.record("cocycle.shape", shape_ok, f"dim l = {z.dim_l}, dim a = {z.dim_a}")
    if not shape_ok:
        return checks

    checks.record(
        "cocycle.alpha_invariant",
        is_invariant(z.alpha, l.involution, l.derivation, a.theta, a.D),
    )
    checks.record("cocycle.gamma_invariant", is_invariant(z.gamma, l.involution, l.derivation))

    dalpha = d_alpha(z.alpha, l, a)
    checks.record(
        "cocycle.alpha_closed",
        dalpha.is_zero(),
        str(dalpha.describe(l.labels, a.labels)) if not dalpha.is_zero() else "",
    )

    defect = ce_differential(z.gamma, l) - wedge_inner(z.alpha, z.alpha, a.gram).scale(HALF)
    checks.record(
        "cocycle.gamma_identity",
        defect.is_zero(),
        f"d gamma - 1/2 <alpha ^ alpha> = {defect.describe(l.labels)}" if not defect.is_zero() else "",
    )
    return checks


def is_cochain(c: QuadraticCochain, l: EquivariantLieData, a: OrthogonalModuleData) -> CheckList:
    checks = CheckList()
    checks.record("cochain.tau_invariant", is_invariant(c.tau, l.involution, l.derivation, a.theta, a.D))
    checks.record("cochain.sigma_invariant", is_invariant(c.sigma, l.involution, l.derivation))
    return checks


def cochain_mul(c1: QuadraticCochain, c2: QuadraticCochain, a: OrthogonalModuleData) -> QuadraticCochain:
    """(tau1, sigma1) * (tau2, sigma2) = (tau1 + tau2, sigma1 + sigma2 + 1/2 <tau1 ^ tau2>)."""
    return QuadraticCochain(
        c1.tau + c2.tau,
        c1.sigma + c2.sigma + wedge_inner(c1.tau, c2.tau, a.gram).scale(HALF),
    )


def cochain_inv(c: QuadraticCochain, a: OrthogonalModuleData) -> QuadraticCochain:
    """Two-sided inverse (-tau, -sigma + 1/2 <tau ^ tau>)."""
    return QuadraticCochain(
        -c.tau,
        -c.sigma + wedge_inner(c.tau, c.tau, a.gram).scale(HALF),
    )


def cocycle_act(
    z: QuadraticCocycle, c: QuadraticCochain, l: EquivariantLieData, a: OrthogonalModuleData
) -> QuadraticCocycle:
    """Right action (alpha + d tau, gamma + d sigma + <(alpha + 1/2 d tau) ^ tau>)."""
    dtau = d_alpha(c.tau, l, a)
    mixed = z.alpha + dtau.scale(HALF)
    return QuadraticCocycle(
        z.alpha + dtau,
        z.gamma + ce_differential(c.sigma, l) + wedge_inner(mixed, c.tau, a.gram),
    )


def is_morphism_of_pairs(
    S: Mat,
    U: Mat,
    l1: EquivariantLieData,
    a1: OrthogonalModuleData,
    l2: EquivariantLieData,
    a2: OrthogonalModuleData,
) -> CheckList:
    """S: l1 -> l2 an equivariant Lie morphism, U: a2 -> a1 an equivariant isometric embedding
    with U rho2(S L) = rho1(L) U."""
    checks = CheckList()
    if S.shape != (l2.dim, l1.dim) or U.shape != (a1.dim, a2.dim):
        checks.record("morphism.shape", False, f"S is {S.rows}x{S.cols}, U is {U.rows}x{U.cols}")
        return checks
    checks.record("morphism.shape", True)

    bracket_ok = all(
        S @ l1.bracket(l1.basis_vector(i), l1.basis_vector(j))
        == l2.bracket(S @ l1.basis_vector(i), S @ l1.basis_vector(j))
        for i in range(l1.dim)
        for j in range(i + 1, l1.dim)
    )
    checks.record("morphism.S_bracket", bracket_ok)
    checks.record(
        "morphism.S_equivariant",
        S @ l1.derivation == l2.derivation @ S and S @ l1.involution == l2.involution @ S,
    )
    checks.record("morphism.U_isometric", U.T @ a1.gram @ U == a2.gram and is_nondegenerate(a2.gram))
    checks.record("morphism.U_equivariant", U @ a2.D == a1.D @ U and U @ a2.theta == a1.theta @ U)
    checks.record(
        "morphism.intertwining",
        all(U @ a2.rho_of(S @ l1.basis_vector(i)) == a1.rho[i] @ U for i in range(l1.dim)),
    )
    return checks


def pullback(z: QuadraticCocycle, S: Mat, U: Mat) -> QuadraticCocycle:
    """(S, U)^*(alpha, gamma) = (U o S^* alpha, S^* gamma)."""
    return QuadraticCocycle(z.alpha.pullback(S).apply_target(U), z.gamma.pullback(S))


def class_witness_check(
    z1: QuadraticCocycle,
    z2: QuadraticCocycle,
    c: QuadraticCochain,
    l: EquivariantLieData,
    a: OrthogonalModuleData,
    S: Optional[Mat] = None,
    U: Optional[Mat] = None,
) -> bool:
    """True iff z2 = (S, U)^* z1 * c, or z2 = z1 * c without a morphism.

    When a morphism is given, z1 lives on the target pair and z2, c on (l, a).
    """
    if (S is None) != (U is None):
        raise UsageError("Give both S and U or neither")
    base = z1 if S is None else pullback(z1, S, U)  # type: ignore[arg-type]
    if base.dim_l != z2.dim_l or base.dim_a != z2.dim_a:
        return False
    moved = cocycle_act(base, c, l, a)
    result = moved.alpha == z2.alpha and moved.gamma == z2.gamma
    logger.debug("Class witness checked", result=result, with_morphism=S is not None)
    return result


def _random_combination(basis: Sequence[Form], rng: random.Random, bound: int) -> Optional[Form]:
    if not basis:
        return None
    out = basis[0].scale(0)
    for form in basis:
        out = out + form.scale(Fraction(rng.randint(-bound, bound), rng.randint(1, 3)))
    return out


def random_invariant_cochain(
    l: EquivariantLieData, a: OrthogonalModuleData, rng: random.Random, bound: int = 3
) -> QuadraticCochain:
    """Random element of C^1_Q with small rational coefficients."""
    taus = invariant_form_basis(1, l.dim, l.involution, l.derivation, a.dim, a.theta, a.D)
    sigmas = invariant_form_basis(2, l.dim, l.involution, l.derivation)
    tau = _random_combination(taus, rng, bound) or Form.zero(1, l.dim, a.dim)
    sigma = _random_combination(sigmas, rng, bound) or Form.zero(2, l.dim)
    return QuadraticCochain(tau, sigma)
