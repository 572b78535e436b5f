"""
Quadratic extensions of equivariant Lie algebras by orthogonal modules.
"""

from app.services.quadext.balanced import (
    balanced_check,
    canonical_isotropic_ideal,
    fullness_t1_t2,
)
from app.services.quadext.catalog import CatalogDescriptor, build_catalog_entry, catalog
from app.services.quadext.cochains import (
    QuadraticCochain,
    QuadraticCocycle,
    class_witness_check,
    cochain_inv,
    cochain_mul,
    cocycle_act,
    is_cocycle,
    is_morphism_of_pairs,
    pullback,
)
from app.services.quadext.extension import build_extension
from app.services.quadext.forms import Form, ce_differential, wedge_inner
from app.services.quadext.module import OrthogonalModuleData, verify_module
from app.services.quadext.registry import CatalogRegistry

__all__ = [
    "balanced_check",
    "canonical_isotropic_ideal",
    "fullness_t1_t2",
    "CatalogDescriptor",
    "build_catalog_entry",
    "catalog",
    "QuadraticCochain",
    "QuadraticCocycle",
    "class_witness_check",
    "cochain_inv",
    "cochain_mul",
    "cocycle_act",
    "is_cocycle",
    "is_morphism_of_pairs",
    "pullback",
    "build_extension",
    "Form",
    "ce_differential",
    "wedge_inner",
    "OrthogonalModuleData",
    "verify_module",
    "CatalogRegistry",
]
