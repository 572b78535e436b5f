"""
Four-fold grading of an h-graded equivariant Lie algebra.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict

from app.core.exceptions import PreconditionError
from app.services.liecore.algebra import EquivariantLieData
from app.utils.exactlin import Mat, column_space, same_span


def is_h_graded(g: EquivariantLieData) -> bool:
    """D^3 = -D."""
    D = g.derivation
    return (D @ D @ D + D).is_zero()


def tau_matrix(g: EquivariantLieData) -> Mat:
    """exp(pi D) in closed form Id + 2 D^2, valid when D^3 = -D."""
    D = g.derivation
    return Mat.identity(g.dim) + (D @ D).scale(2)


@dataclass(frozen=True)
class Grading:
    """Eigenspace bases of theta (subscript) and tau (superscript).

    Every field is a basis matrix whose columns live in the ambient
    coordinates of the algebra.
    """

    tau: Mat
    theta_plus: Mat
    theta_minus: Mat
    tau_plus: Mat
    tau_minus: Mat
    plus_plus: Mat
    plus_minus: Mat
    minus_plus: Mat
    minus_minus: Mat

    def dims(self) -> Dict[str, int]:
        return {
            "g+^+": self.plus_plus.cols,
            "g+^-": self.plus_minus.cols,
            "g-^+": self.minus_plus.cols,
            "g-^-": self.minus_minus.cols,
        }


def grade(g: EquivariantLieData) -> Grading:
    """Split g into the intersections of the theta- and tau-eigenspaces."""
    if not is_h_graded(g):
        raise PreconditionError("Algebra is not h-graded: D^3 != -D")

    n = g.dim
    I = Mat.identity(n)
    D = g.derivation
    theta = g.involution
    tau = tau_matrix(g)
    half = Fraction(1, 2)

    p_theta = {s: (I + theta.scale(s)).scale(half) for s in (1, -1)}
    p_tau = {s: (I + tau.scale(s)).scale(half) for s in (1, -1)}

    grading = Grading(
        tau=tau,
        theta_plus=column_space(p_theta[1]),
        theta_minus=column_space(p_theta[-1]),
        tau_plus=column_space(p_tau[1]),
        tau_minus=column_space(p_tau[-1]),
        plus_plus=column_space(p_theta[1] @ p_tau[1]),
        plus_minus=column_space(p_theta[1] @ p_tau[-1]),
        minus_plus=column_space(p_theta[-1] @ p_tau[1]),
        minus_minus=column_space(p_theta[-1] @ p_tau[-1]),
    )

    if sum(grading.dims().values()) != n:
        raise PreconditionError("theta and tau do not split the algebra")
    if not (D @ grading.tau_plus).is_zero():
        raise PreconditionError("D does not vanish on g^+")
    if not (D @ D @ grading.tau_minus + grading.tau_minus).is_zero():
        raise PreconditionError("D^2 is not -Id on g^-")
    if not same_span(D @ grading.plus_minus, grading.minus_minus):
        raise PreconditionError("D does not map g+^- onto g-^-")
    return grading
