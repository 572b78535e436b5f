"""
Catalog of full indecomposable Lorentzian quadratic extensions.

Each descriptor materializes (l, a, z): an equivariant Lie algebra, an
orthogonal module and a quadratic cocycle. Descriptor ids look like
``tfull-3`` or ``tfull-4:k=1,l=0,m=2:c=1/2:a0=0``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from app.core.exceptions import ParseError, UsageError
from app.core.logging import get_logger
from app.services.liecore.algebra import EquivariantLieData, MetricEquivariantAlgebra
from app.services.liecore.standard import abelian, heisenberg, rotation_plane, sl2, su2
from app.services.liecore.structure import killing_form
from app.services.quadext.cochains import QuadraticCocycle
from app.services.quadext.extension import build_extension
from app.services.quadext.forms import Form
from app.services.quadext.module import OrthogonalModuleData, module_direct_sum, trivial_module
from app.utils.exactlin import Mat, format_scalar, to_scalar

logger = get_logger(__name__)

CASES = ("1", "2a", "2b", "3", "4", "5")
PREFIX = "tfull-"

# 2x2 block with D(P) = Q, D(Q) = -P
ROTATION = Mat.from_rows([[0, -1], [1, 0]])


@dataclass(frozen=True)
class CatalogDescriptor:
    """Classification label of one catalog entry."""

    case_id: str
    k: int = 0
    l: int = 0
    m: int = 0
    c: Fraction = field(default=Fraction(0))
    a0_dim: int = 0

    def __post_init__(self) -> None:
        if self.case_id not in CASES:
            raise UsageError(f"Unknown case: {self.case_id}. Available cases: {', '.join(CASES)}")
        object.__setattr__(self, "c", to_scalar(self.c))
        if min(self.k, self.l, self.m, self.a0_dim) < 0:
            raise UsageError("Catalog parameters must be nonnegative")
        if not self.is_simple_case and (self.k or self.l or self.m or self.c):
            raise UsageError(f"Parameters k, l, m, c only apply to cases 4 and 5, not {self.case_id}")

    @property
    def is_simple_case(self) -> bool:
        return self.case_id in ("4", "5")

    @property
    def kappa(self) -> int:
        return -1 if self.case_id == "4" else 1

    @property
    def id(self) -> str:
        head = PREFIX + self.case_id
        if self.is_simple_case:
            return f"{head}:k={self.k},l={self.l},m={self.m}:c={format_scalar(self.c)}:a0={self.a0_dim}"
        return f"{head}:a0={self.a0_dim}" if self.a0_dim else head

    @classmethod
    def parse(cls, text: str) -> "CatalogDescriptor":
        parts = text.strip().split(":")
        head = parts[0].lower()
        if not head.startswith(PREFIX):
            raise ParseError(f"Descriptor must start with '{PREFIX}': {text!r}")
        case_id = head[len(PREFIX):]
        if case_id not in CASES:
            raise ParseError(f"Unknown case in descriptor {text!r}. Available cases: {', '.join(CASES)}")
        values: Dict[str, str] = {}
        for part in parts[1:]:
            for item in part.split(","):
                key, sep, value = item.partition("=")
                key = key.strip()
                if not sep or key not in ("k", "l", "m", "c", "a0") or key in values:
                    raise ParseError(f"Bad descriptor field {item!r} in {text!r}")
                values[key] = value.strip()
        try:
            ints = {key: int(values.get(key, "0")) for key in ("k", "l", "m", "a0")}
        except ValueError as exc:
            raise ParseError(f"Descriptor counts must be integers: {text!r}") from exc
        return cls(
            case_id,
            k=ints["k"],
            l=ints["l"],
            m=ints["m"],
            c=to_scalar(values.get("c", "0")),
            a0_dim=ints["a0"],
        )

    def dims(self) -> Dict[str, int]:
        dim_l = {"1": 0, "2a": 2, "2b": 2, "3": 3}.get(self.case_id, 3)
        dim_a = {"1": 2, "2a": 1, "2b": 1, "3": 2}.get(self.case_id, 3 * (self.k + self.l) + 4 * self.m)
        dim_a += 2 * self.a0_dim
        return {"l": dim_l, "a": dim_a, "g": 2 * dim_l + dim_a}


def adjoint_module(l: EquivariantLieData, kappa: int, index: int, hat: bool) -> OrthogonalModuleData:
    """a3 (theta_a = -theta_l) or its hat version (theta_a = theta_l), inner product kappa * Killing."""
    prefix = "b3" if hat else "a3"
    labels = tuple(f"{prefix}_{index}{x}" for x in l.labels)
    return OrthogonalModuleData(
        labels,
        tuple(l.ad(i) for i in range(l.dim)),
        killing_form(l).scale(kappa),
        l.derivation,
        l.involution if hat else -l.involution,
    )


def standard_module(kappa: int, index: int) -> OrthogonalModuleData:
    """a4: realified standard representation of su(2), or v2 + v2* for sl(2, R)."""

    def action(table: Dict[int, Tuple[int, int]]) -> Mat:
        # table[source] = (target, coefficient)
        data = {(target, source): Fraction(coeff) for source, (target, coeff) in table.items()}
        return Mat.from_sparse(4, 4, data)

    rho_x = action({0: (2, -1), 1: (3, -1), 2: (0, 1), 3: (1, 1)})
    rho_y = action({0: (3, 1), 1: (2, kappa), 2: (1, 1), 3: (0, kappa)})
    rho_h = action({0: (1, 1), 1: (0, kappa), 2: (3, -1), 3: (2, -kappa)})
    D = action({1: (3, -1), 3: (1, 1)})
    return OrthogonalModuleData(
        tuple(f"a4_{index}_{j}" for j in range(1, 5)),
        (rho_x, rho_y, rho_h),
        Mat.diag([-kappa, 1, -kappa, 1]),
        D,
        Mat.diag([1, 1, -1, -1]),
    )


def rotation_pair(dim_l: int, index: int) -> OrthogonalModuleData:
    """Trivial positive definite summand span{p, q} with D(p) = q, D(q) = -p."""
    return trivial_module(
        dim_l, (f"p_{index}", f"q_{index}"), Mat.identity(2), D=ROTATION, theta=Mat.diag([1, -1])
    )


def catalog(desc: CatalogDescriptor) -> Tuple[EquivariantLieData, OrthogonalModuleData, QuadraticCocycle]:
    """Materialize (l, a, z) for a descriptor."""
    case = desc.case_id
    if case == "1":
        l = abelian(0)
        base = trivial_module(0, ("A1", "A2"), Mat.diag([-1, -1]), D=ROTATION, theta=Mat.diag([1, -1]))
        alpha = Form.zero(2, 0, 2)
    elif case in ("2a", "2b"):
        l = rotation_plane()
        sign = -1 if case == "2a" else 1
        base = trivial_module(2, ("A0",), Mat.diag([sign]), theta=Mat.diag([-1]))
        alpha = Form.from_entries(2, 2, 1, {(0, 1): [1]})
    elif case == "3":
        l = heisenberg()
        base = trivial_module(3, ("A1", "A2"), Mat.identity(2), D=ROTATION, theta=Mat.diag([-1, 1]))
        alpha = Form.from_entries(2, 3, 2, {(0, 2): [1, 0], (1, 2): [0, 1]})
    else:
        l = su2() if case == "4" else sl2()
        summands: List[OrthogonalModuleData] = []
        summands += [adjoint_module(l, desc.kappa, i + 1, hat=False) for i in range(desc.k)]
        summands += [adjoint_module(l, desc.kappa, i + 1, hat=True) for i in range(desc.l)]
        summands += [standard_module(desc.kappa, i + 1) for i in range(desc.m)]
        base = module_direct_sum(summands, l.dim)
        alpha = None

    pairs = [rotation_pair(l.dim, i + 1) for i in range(desc.a0_dim)]
    a = module_direct_sum([base] + pairs, l.dim) if pairs else base

    if desc.is_simple_case:
        # gamma(H, X, Y) = 4c with basis (X, Y, H)
        z = QuadraticCocycle(
            Form.zero(2, 3, a.dim), Form.from_entries(3, 3, 1, {(2, 0, 1): [4 * desc.c]})
        )
    else:
        assert alpha is not None
        if pairs:
            # alpha takes values in the first summand only
            padded = Mat.from_function(
                a.dim, base.dim, lambda r, c: 1 if r == c else 0
            )
            alpha = alpha.apply_target(padded)
        z = QuadraticCocycle(alpha, Form.zero(3, l.dim))

    logger.debug("Catalog entry materialized", descriptor=desc.id, dim_l=l.dim, dim_a=a.dim)
    return l, a, z


def build_catalog_entry(desc: CatalogDescriptor) -> MetricEquivariantAlgebra:
    l, a, z = catalog(desc)
    return build_extension(l, a, z)


def descriptor_grid(max_count: int = 2, constants: Tuple[Fraction, ...] = (Fraction(0),), a0_dims: Tuple[int, ...] = (0,)) -> List[CatalogDescriptor]:
    """All descriptors with k, l, m <= max_count, the given c values and a0 sizes."""
    grid: List[CatalogDescriptor] = []
    for a0 in a0_dims:
        for case in ("1", "2a", "2b", "3"):
            grid.append(CatalogDescriptor(case, a0_dim=a0))
        for case in ("4", "5"):
            for k in range(max_count + 1):
                for l in range(max_count + 1):
                    for m in range(max_count + 1):
                        for c in constants:
                            grid.append(CatalogDescriptor(case, k=k, l=l, m=m, c=c, a0_dim=a0))
    return grid
