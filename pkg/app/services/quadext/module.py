"""
Orthogonal (l, Phi_l)-modules.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import sympy

from app.core.exceptions import UsageError
from app.services.checks import CheckList
from app.services.liecore.algebra import EquivariantLieData
from app.services.liecore.filtration import classify
from app.services.liecore.structure import center, derived_algebra
from app.utils.exactlin import (
    Mat,
    block_diag,
    hstack,
    inertia,
    is_nondegenerate,
    nullspace,
    span_of,
)


@dataclass(frozen=True, eq=False)
class OrthogonalModuleData:
    """Representation rho of l on a pseudo-Euclidean space a with (D_a, theta_a)."""

    labels: Tuple[str, ...]
    rho: Tuple[Mat, ...]
    gram: Mat
    D: Mat
    theta: Mat

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "rho", tuple(self.rho))
        n = len(self.labels)
        for name in ("gram", "D", "theta"):
            if getattr(self, name).shape != (n, n):
                raise UsageError(f"Module {name} must be {n}x{n}")
        if any(R.shape != (n, n) for R in self.rho):
            raise UsageError(f"Every rho(e_i) must be {n}x{n}")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def rho_of(self, x: Mat) -> Mat:
        """rho of a vector of l."""
        out = Mat.zero(self.dim, self.dim)
        for i, c in enumerate(x.vector()):
            if c:
                out = out + self.rho[i].scale(c)
        return out

    def is_trivial(self) -> bool:
        return all(R.is_zero() for R in self.rho)

    def invariants(self) -> Mat:
        """a^l: joint kernel of every rho(e_i)."""
        if not self.rho or self.is_trivial():
            return Mat.identity(self.dim)
        stacked = Mat(
            self.dim * len(self.rho), self.dim, [v for R in self.rho for v in R.entries]
        )
        kernel = nullspace(stacked)
        return hstack(kernel, rows=self.dim) if kernel else Mat.zero(self.dim, 0)

    def image(self) -> Mat:
        """rho(l)a."""
        vectors = [Mat.column(R.col(j)) for R in self.rho for j in range(self.dim)]
        return span_of(vectors, self.dim)


def trivial_module(
    dim_l: int, labels: Sequence[str], gram: Mat, D: Optional[Mat] = None, theta: Optional[Mat] = None
) -> OrthogonalModuleData:
    n = len(labels)
    return OrthogonalModuleData(
        tuple(labels),
        tuple(Mat.zero(n, n) for _ in range(dim_l)),
        gram,
        D if D is not None else Mat.zero(n, n),
        theta if theta is not None else Mat.identity(n),
    )


def module_direct_sum(modules: Sequence[OrthogonalModuleData], dim_l: int) -> OrthogonalModuleData:
    """Orthogonal direct sum of modules over the same l."""
    if not modules:
        return trivial_module(dim_l, [], Mat.zero(0, 0))
    labels: List[str] = [label for m in modules for label in m.labels]
    if len(set(labels)) != len(labels):
        raise UsageError("Module labels collide in direct sum")
    return OrthogonalModuleData(
        tuple(labels),
        tuple(block_diag([m.rho[i] for m in modules]) for i in range(dim_l)),
        block_diag([m.gram for m in modules]),
        block_diag([m.D for m in modules]),
        block_diag([m.theta for m in modules]),
    )


def verify_module(l: EquivariantLieData, a: OrthogonalModuleData) -> CheckList:
    """Exact checks of the orthogonal module axioms."""
    checks = CheckList()
    n = a.dim
    I = Mat.identity(n)
    G, D, theta = a.gram, a.D, a.theta

    checks.record("module.rho_count", len(a.rho) == l.dim, f"{len(a.rho)} matrices for dim l = {l.dim}")
    if len(a.rho) != l.dim:
        return checks

    checks.record("module.gram_nondegenerate", G.is_symmetric() and is_nondegenerate(G))
    checks.record("module.rho_antisymmetric", all((R.T @ G + G @ R).is_zero() for R in a.rho))

    hom_ok = True
    for i in range(l.dim):
        for j in range(i + 1, l.dim):
            lhs = a.rho_of(l.bracket(l.basis_vector(i), l.basis_vector(j)))
            rhs = a.rho[i] @ a.rho[j] - a.rho[j] @ a.rho[i]
            if lhs != rhs:
                hom_ok = False
                break
        if not hom_ok:
            break
    checks.record("module.rho_homomorphism", hom_ok)

    theta_l, D_l = l.involution, l.derivation
    checks.record(
        "module.theta_rule",
        all(
            a.rho_of(theta_l @ l.basis_vector(i)) == theta @ a.rho[i] @ theta
            for i in range(l.dim)
        ),
    )
    checks.record(
        "module.D_rule",
        all(
            a.rho_of(D_l @ l.basis_vector(i)) == D @ a.rho[i] - a.rho[i] @ D
            for i in range(l.dim)
        ),
    )
    checks.record("module.theta_involution", (theta @ theta - I).is_zero())
    checks.record("module.theta_isometry", (theta.T @ G @ theta - G).is_zero())
    checks.record("module.D_antisymmetric", (D.T @ G + G @ D).is_zero())
    checks.record("module.D_theta_anticommute", (D @ theta + theta @ D).is_zero())
    checks.record("module.h_graded", (D @ D @ D + D).is_zero())
    return checks


def _diagonalizable(M: Mat) -> bool:
    if M.is_zero():
        return True
    sm = sympy.Matrix(M.rows, M.cols, [sympy.Rational(v.numerator, v.denominator) for v in M.entries])
    return bool(sm.is_diagonalizable(reals_only=False))


def module_semisimple(l: EquivariantLieData, a: OrthogonalModuleData) -> Tuple[Optional[bool], str]:
    """Certify semisimplicity of a as an l-module.

    Returns (True, certificate), (False, reason) or (None, reason) when the
    algebra class is not covered.
    """
    if a.is_trivial():
        return True, "trivial module"
    kind = classify(l)
    if kind == "semisimple":
        return True, "l semisimple: every finite-dimensional module is semisimple"
    if kind in ("abelian", "nilpotent"):
        derived = derived_algebra(l)
        if any(not a.rho_of(Mat.column(derived.col(j))).is_zero() for j in range(derived.cols)):
            return False, "[l, l] acts nontrivially"
        if not all(_diagonalizable(R) for R in a.rho):
            return False, "some rho(e_i) is not semisimple"
        return True, "[l, l] acts trivially and every rho(e_i) is semisimple"
    if kind == "reductive":
        z = center(l)
        if all(_diagonalizable(a.rho_of(Mat.column(z.col(j)))) for j in range(z.cols)):
            return True, "center acts semisimply, [l, l] semisimple"
        return False, "center acts non-semisimply"
    return None, f"semisimplicity test not implemented for {kind} algebras"


def module_signature(a: OrthogonalModuleData) -> Tuple[int, int, int]:
    return inertia(a.gram)


__all__ = [
    "OrthogonalModuleData",
    "trivial_module",
    "module_direct_sum",
    "verify_module",
    "module_semisimple",
    "module_signature",
]
