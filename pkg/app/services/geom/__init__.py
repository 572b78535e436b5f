"""
Floating-point geometry of the embedded extrinsic symmetric spaces.
"""

from app.services.geom.affine import (
    AffineGenerator,
    AffineIsometry,
    OrbitModel,
    exp_affine,
    orbit_point,
    phi_rep,
)
from app.services.geom.curvature import (
    CurvatureProbe,
    MetricField,
    cahen_wallach_metric,
    curvature_probe,
)
from app.services.geom.embeddings import (
    EmbeddingSampler,
    ItemParams,
    closed_form_embed,
    item_for_descriptor,
    route_agreement,
)
from app.services.geom.export import export_point_cloud, write_point_cloud
from app.services.geom.metric import (
    MetricSample,
    induced_metric,
    mean_curvature_check,
    second_fundamental_and_mean_curvature,
)
from app.services.geom.reflection import normal_reflection_test
from app.services.geom.transvection import TransvectionGroup, section, transvection_product

__all__ = [
    "AffineGenerator",
    "AffineIsometry",
    "OrbitModel",
    "exp_affine",
    "orbit_point",
    "phi_rep",
    "CurvatureProbe",
    "MetricField",
    "cahen_wallach_metric",
    "curvature_probe",
    "EmbeddingSampler",
    "ItemParams",
    "closed_form_embed",
    "item_for_descriptor",
    "route_agreement",
    "export_point_cloud",
    "write_point_cloud",
    "MetricSample",
    "induced_metric",
    "mean_curvature_check",
    "second_fundamental_and_mean_curvature",
    "normal_reflection_test",
    "TransvectionGroup",
    "section",
    "transvection_product",
]
