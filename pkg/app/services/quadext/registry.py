"""
Catalog registry for creating catalog entries from descriptor ids
"""

from typing import Any, Dict, List

from app.core.exceptions import UsageError
from app.core.logging import get_logger
from app.services.liecore.algebra import MetricEquivariantAlgebra
from app.services.quadext.catalog import CatalogDescriptor, build_catalog_entry

logger = get_logger(__name__)


class CatalogRegistry:
    """Factory class for catalog families."""

    _families: Dict[str, Dict[str, Any]] = {
        "tfull-1": {
            "cases": ["1"],
            "description": "l = 0, a = R^{2,0} with D_a a rotation",
            "parameters": ["a0"],
        },
        "tfull-2": {
            "cases": ["2a", "2b"],
            "description": "l = R^2, a one-dimensional of either sign, alpha(X, Y) = A0",
            "parameters": ["a0"],
        },
        "tfull-3": {
            "cases": ["3"],
            "description": "l = h(1), a = R^2, alpha(X, Z) = A1, alpha(Y, Z) = A2",
            "parameters": ["a0"],
        },
        "tfull-4": {
            "cases": ["4"],
            "description": "l = su(2), a = a3^k + hat a3^l + a4^m, gamma(H, X, Y) = 4c",
            "parameters": ["k", "l", "m", "c", "a0"],
        },
        "tfull-5": {
            "cases": ["5"],
            "description": "l = sl(2, R), a = a3^k + hat a3^l + a4^m, gamma(H, X, Y) = 4c",
            "parameters": ["k", "l", "m", "c", "a0"],
        },
    }

    @classmethod
    def create(cls, descriptor_id: str) -> MetricEquivariantAlgebra:
        """
        Build the extrinsic symmetric triple for a descriptor id.

        Args:
            descriptor_id: Descriptor such as ``tfull-4:k=1,l=0,m=2:c=1/2:a0=0``

        Returns:
            The quadratic extension as a metric equivariant algebra
        """
        desc = CatalogDescriptor.parse(descriptor_id)
        g = build_catalog_entry(desc)
        logger.info("Created catalog entry", descriptor=desc.id, dim=g.dim)
        return g

    @classmethod
    def available_families(cls) -> List[str]:
        """Get list of available family names."""
        return list(cls._families.keys())

    @classmethod
    def family_info(cls, name: str) -> Dict[str, Any]:
        """Get information about a family."""
        name = name.lower()
        if name not in cls._families:
            available = ", ".join(cls._families.keys())
            raise UsageError(f"Unknown family: {name}. Available families: {available}")
        info = cls._families[name]
        examples = [CatalogDescriptor(case).id for case in info["cases"]]
        return {"name": name, **info, "examples": examples}

    @classmethod
    def family_of(cls, desc: CatalogDescriptor) -> str:
        for name, info in cls._families.items():
            if desc.case_id in info["cases"]:
                return name
        raise UsageError(f"No family for case {desc.case_id}")

    @classmethod
    def filter(cls, prefix: str = "") -> List[Dict[str, Any]]:
        """Families whose name starts with the prefix; an unknown prefix yields an empty list."""
        prefix = prefix.lower()
        return [cls.family_info(name) for name in cls._families if name.startswith(prefix)]
