"""
embed and geomcheck subcommands.
"""

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import numpy as np

from app.commands.common import emit, guarded, random_points
from app.core.config import settings
from app.core.exceptions import ParseError, UsageError
from app.core.logging import get_logger
from app.services.checks import CheckStatus
from app.services.geom.curvature import cahen_wallach_metric, curvature_probe
from app.services.geom.embeddings import (
    EmbeddingSampler,
    ItemParams,
    descriptor_for_item,
    item_for_descriptor,
    route_agreement,
)
from app.services.geom.export import dump_point_cloud, export_point_cloud, write_point_cloud
from app.services.geom.metric import induced_metric, mean_curvature_check, signature_of
from app.services.geom.reflection import normal_reflection_test
from app.services.geom.transvection import TransvectionGroup
from app.services.liecore.grading import grade
from app.services.quadext.catalog import CatalogDescriptor, build_catalog_entry
from app.services.report import ReportBuilder
from app.utils.exactlin import to_float

logger = get_logger(__name__)

SIGNATURE_POINTS = 5
TRANSVECTION_PAIRS = 3


@dataclass
class GeometryTarget:
    label: str
    params: ItemParams
    descriptor: CatalogDescriptor


def _rational(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def load_target(args: argparse.Namespace) -> GeometryTarget:
    """``item-N`` with --k/--l/--m/--c/--sign, or a descriptor id without a0 pairs."""
    text = args.target.strip().lower()
    if text.startswith("item-") or text.isdigit():
        try:
            item = int(text.split("-", 1)[-1])
        except ValueError as exc:
            raise ParseError(f"Bad item {args.target!r}") from exc
        params = ItemParams(item, args.k, args.l, args.m, args.c, args.sign)
        return GeometryTarget(f"item-{item}", params, descriptor_for_item(params))
    desc = CatalogDescriptor.parse(args.target)
    return GeometryTarget(desc.id, item_for_descriptor(desc), desc)


def sampler_for(target: GeometryTarget, route: str = "closed") -> EmbeddingSampler:
    if route == "orbit":
        dims = target.descriptor.dims()
        return EmbeddingSampler.orbit(build_catalog_entry(target.descriptor), dims["l"], dims["a"])
    return EmbeddingSampler.closed_form(target.params)


def run_embed(args: argparse.Namespace) -> int:
    target = load_target(args)
    sampler = sampler_for(target, args.route)
    frame = export_point_cloud(sampler, grid=settings.default_grid, radius=args.radius)
    if args.out is None:
        dump_point_cloud(frame, sys.stdout, args.format or "csv")
        return 0

    path = write_point_cloud(frame, args.out, args.format)
    builder = ReportBuilder("embed", target.label)
    builder.artifact("path", str(path))
    builder.artifact("rows", len(frame))
    builder.artifact("columns", [str(c) for c in frame.columns])
    return emit(builder.build(), args)


def _signature_checks(builder: ReportBuilder, sampler: EmbeddingSampler, params: ItemParams, points: np.ndarray) -> None:
    for index, point in enumerate(points):
        name = f"signature.p{index}"

        def check(point: np.ndarray = point, name: str = name) -> None:
            sample = induced_metric(sampler, point)
            builder.record(
                name,
                sample.signature == params.signature,
                f"measured {sample.signature}, expected {params.signature}",
                point=point,
            )

        guarded(builder, name, check)


def _curvature_checks(builder: ReportBuilder, sampler: EmbeddingSampler, params: ItemParams) -> None:
    origin = np.zeros(sampler.param_dim)
    probe = curvature_probe(sampler, origin)
    builder.run_logger.log_probe(
        {
            "kind": "curvature",
            "max_riemann": probe.max_riemann,
            "max_covariant_derivative": probe.max_covariant_derivative,
            "stable": probe.stable,
        }
    )
    expected = params.expected_flat
    tol = settings.tolerance_curvature
    # the non-flat side needs a clear margin over the tolerance
    ok = probe.flat if expected else probe.max_riemann >= 10 * tol
    builder.record(
        "curvature.flat",
        ok,
        f"expected {'flat' if expected else 'non-flat'}, max |R| = {probe.max_riemann:.3e}",
        residual=probe.max_riemann,
        expected_flat=expected,
    )
    builder.record("curvature.parallel", probe.parallel, residual=probe.max_covariant_derivative)
    builder.mark(
        "curvature.step_ladder",
        CheckStatus.PASS if probe.stable else CheckStatus.UNDECIDED,
        "" if probe.stable else "max |R| moves under step halving",
        ladder=probe.ladder,
    )

    if params.item >= 4:
        lambdas, mus = params.cahen_wallach_parameters()
        model = cahen_wallach_metric(lambdas, mus)
        point = np.zeros(model.dim)
        reference = curvature_probe(model, point)
        neg, pos = signature_of(model.evaluate(point))
        builder.record(
            "cahen_wallach.invariants",
            reference.flat == probe.flat and reference.parallel and (neg, pos + params.l) == params.signature,
            f"reference flat={reference.flat}, parallel={reference.parallel}, signature=({neg}, {pos}) plus R^{params.l}",
            residual=reference.max_covariant_derivative,
        )


def _transvection_check(builder: ReportBuilder, target: GeometryTarget, rng: np.random.Generator) -> None:
    g = build_catalog_entry(target.descriptor)
    dims = target.descriptor.dims()
    group = TransvectionGroup(g, dims["l"], dims["a"])
    plus = to_float(grade(g).theta_plus, "basis of g_+")
    worst = 0.0
    for _ in range(TRANSVECTION_PAIRS):
        x = group.element(plus @ rng.uniform(-0.5, 0.5, plus.shape[1]))
        y = group.element(plus @ rng.uniform(-0.5, 0.5, plus.shape[1]))
        lhs = group.act(group.product(x, y))
        rhs = group.act(x).compose(group.act(y))
        worst = max(worst, lhs.distance(rhs))
    builder.record(
        "transvection.homomorphism",
        worst <= settings.tolerance_isometry * 1e3,
        residual=worst,
    )


def geomcheck(target: GeometryTarget, probes: int, radius: float, seed: Optional[int] = None) -> ReportBuilder:
    """Signature, reflection, mean curvature, curvature and route checks for one item."""
    rng = np.random.default_rng(settings.default_seed if seed is None else seed)
    sampler = sampler_for(target)
    params = target.params
    builder = ReportBuilder("geomcheck", target.label)
    origin = np.zeros(sampler.param_dim)
    points = random_points(rng, probes, sampler.param_dim, radius)

    _signature_checks(builder, sampler, params, np.vstack([origin, points[: SIGNATURE_POINTS - 1]]))

    def reflection() -> None:
        report = normal_reflection_test(sampler, origin, points)
        builder.record(
            "reflection",
            report.passed(),
            f"{len(report.failures)} probes without convergence" if report.failures else "",
            residual=report.max_residual,
            probes=len(report.residuals),
            failures=report.failures,
        )

    def mean_curvature() -> None:
        report = mean_curvature_check(sampler)
        residual = report.norm if report.minimal else abs(report.measured - report.predicted)
        builder.run_logger.log_probe(
            {"kind": "mean_curvature", "measured": report.measured, "predicted": report.predicted, "residual": residual}
        )
        builder.record(
            "mean_curvature",
            report.passed(),
            "minimal" if report.minimal else f"C = {report.measured:.8f}, expected {report.predicted:.8f}",
            residual=residual,
            angle=report.angle,
        )

    def routes() -> None:
        count = max(probes, sampler.ambient_dim + 1)
        matched = random_points(rng, count, sampler.param_dim, radius)
        agreement = route_agreement(target.descriptor, matched)
        builder.run_logger.log_probe(
            {"kind": "route_agreement", "residual": agreement.max_residual, "isometry_defect": agreement.isometry_defect}
        )
        builder.record(
            "route_agreement",
            agreement.passed(),
            residual=agreement.max_residual,
            isometry_defect=agreement.isometry_defect,
            points=agreement.points,
        )

    guarded(builder, "reflection", reflection)
    guarded(builder, "mean_curvature", mean_curvature)
    guarded(builder, "curvature", lambda: _curvature_checks(builder, sampler, params))
    guarded(builder, "route_agreement", routes)
    guarded(builder, "transvection", lambda: _transvection_check(builder, target, rng))

    builder.artifact("item", {"item": params.item, "k": params.k, "l": params.l, "m": params.m, "c": params.c, "sign": params.sign})
    builder.artifact("signature", list(params.signature))
    builder.artifact("mean_curvature_constant", params.mean_curvature_constant)
    return builder


def run_geomcheck(args: argparse.Namespace) -> int:
    target = load_target(args)
    if args.probes < 1:
        raise UsageError("Need at least one probe")
    return emit(geomcheck(target, args.probes, args.radius).build(), args)


def _target_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("target", help="Descriptor id (e.g. tfull-2a) or item-N")
    parser.add_argument("--k", type=int, default=0, help="Multiplicity k for items 4 and 5")
    parser.add_argument("--l", type=int, default=0, help="Multiplicity l for items 4 and 5")
    parser.add_argument("--m", type=int, default=0, help="Multiplicity m for items 4 and 5")
    parser.add_argument("--c", type=_rational, default=0.0, help="Constant c for items 4 and 5")
    parser.add_argument("--sign", type=int, default=1, choices=[1, -1], help="Sign of the item-2 ambient form")
    parser.add_argument("--radius", type=float, default=0.5, help="Parameter radius (default: 0.5)")


def register(subparsers: argparse._SubParsersAction, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("embed", parents=parents, help="Sample an embedding on a parameter grid")
    _target_arguments(parser)
    parser.add_argument("--route", default="closed", choices=["closed", "orbit"], help="Parametrization source")
    parser.add_argument("--format", choices=["csv", "json"], help="Point-cloud format (default: from --out suffix)")
    parser.set_defaults(handler=run_embed)

    parser = subparsers.add_parser("geomcheck", parents=parents, help="Run the numerical geometry checks")
    _target_arguments(parser)
    parser.add_argument("--probes", type=int, default=settings.default_probes, help="Probe count")
    parser.set_defaults(handler=run_geomcheck)
