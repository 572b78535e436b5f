"""
Tests for embeddings, point clouds, orbit isometries and curvature probes.
"""

import io
import json

import numpy as np
import pytest

from app.core.exceptions import UsageError
from app.services.geom.affine import AffineGenerator, OrbitModel, exp_affine, phi_rep
from app.services.geom.curvature import cahen_wallach_metric, curvature_probe
from app.services.geom.embeddings import (
    EmbeddingSampler,
    ItemParams,
    closed_form_embed,
    descriptor_for_item,
    item_for_descriptor,
    matched_word,
    route_agreement,
)
from app.services.geom.export import (
    dump_point_cloud,
    export_point_cloud,
    parameter_grid,
    read_point_cloud,
    write_point_cloud,
)
from app.services.geom.metric import induced_metric, mean_curvature_check
from app.services.geom.reflection import normal_reflection_test
from app.services.geom.transvection import TransvectionGroup
from app.services.quadext.catalog import CatalogDescriptor, build_catalog_entry

ITEMS = [
    ItemParams(1),
    ItemParams(2),
    ItemParams(2, sign=-1),
    ItemParams(3),
    ItemParams(4, m=1),
    ItemParams(4, k=1, l=1, c=0.5),
    ItemParams(5, k=1),
    ItemParams(5, l=1, m=1, c=-2.0),
]


def test_item_two_is_the_parabola():
    """Test item 2 points satisfy x2 = x3^2 on the whole grid."""
    frame = export_point_cloud(EmbeddingSampler.closed_form(ItemParams(2)), grid=11)
    assert len(frame) == 121
    assert list(frame.columns) == ["r", "s", "x1", "x2", "x3"]
    assert (frame["x2"] == frame["x3"] ** 2).all()
    assert (frame["x1"] == frame["r"]).all()


def test_point_cloud_csv_round_trip(tmp_path):
    """Test written CSV point clouds read back with their header and exact floats."""
    frame = export_point_cloud(EmbeddingSampler.closed_form(ItemParams(2)), grid=5, radius=0.3)
    path = write_point_cloud(frame, tmp_path / "item2.csv")
    restored = read_point_cloud(path)

    assert restored.attrs["item"] == 2
    assert restored.attrs["param_columns"] == ["r", "s"]
    assert restored.attrs["ambient_gram"] == frame.attrs["ambient_gram"]
    assert np.array_equal(restored.to_numpy(), frame.to_numpy())
    assert (restored["x2"] == restored["x3"] ** 2).all()


def test_point_cloud_json_dump():
    """Test the JSON dump carries columns, rows and the ambient gram."""
    frame = export_point_cloud(EmbeddingSampler.closed_form(ItemParams(1)), grid=3)
    handle = io.StringIO()
    dump_point_cloud(frame, handle, fmt="json")
    document = json.loads(handle.getvalue())
    assert document["columns"] == ["r", "x1"]
    assert document["rows"] == [[-1.0, -1.0], [0.0, 0.0], [1.0, 1.0]]
    assert document["ambient_gram"] == [[-1.0]]


def test_point_cloud_rejects_unknown_format():
    """Test an unknown dump format is a usage error."""
    frame = export_point_cloud(EmbeddingSampler.closed_form(ItemParams(1)), grid=2)
    with pytest.raises(UsageError):
        dump_point_cloud(frame, io.StringIO(), fmt="parquet")


def test_parameter_grid():
    """Test grid sizes and the rejection of an empty grid."""
    assert parameter_grid(3, 4).shape == (64, 3)
    assert parameter_grid(2, 1).tolist() == [[0.0, 0.0]]
    with pytest.raises(UsageError):
        parameter_grid(2, 0)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"item": 6},
        {"item": 4, "k": -1},
        {"item": 2, "k": 1},
        {"item": 3, "c": 1.0},
        {"item": 2, "sign": 0},
    ],
)
def test_item_params_validation(kwargs):
    """Test invalid item parameters are usage errors."""
    with pytest.raises(UsageError):
        ItemParams(**kwargs)


def test_closed_form_rejects_wrong_arity():
    """Test the closed form checks the parameter count."""
    with pytest.raises(UsageError):
        closed_form_embed(ItemParams(3), [0.0, 0.0])


def test_item_dimensions():
    """Test parameter and ambient dimensions of items 4 and 5."""
    params = ItemParams(4, k=1, l=2, m=3)
    assert params.param_dim == 8
    assert params.ambient_dim == 4 + 1 + 4 + 6
    assert len(params.coordinate_labels()) == params.ambient_dim
    assert len(params.param_labels()) == params.param_dim
    assert params.signature == (1, 7)


def test_descriptor_item_correspondence():
    """Test items and catalog descriptors map to each other."""
    assert descriptor_for_item(ItemParams(2, sign=-1)).id == CatalogDescriptor.parse("tfull-2a").id
    assert item_for_descriptor(CatalogDescriptor.parse("tfull-2b")) == ItemParams(2)
    params = item_for_descriptor(CatalogDescriptor.parse("tfull-5:k=1,l=0,m=2:c=1/2"))
    assert (params.item, params.k, params.l, params.m, params.c) == (5, 1, 0, 2, 0.5)
    assert descriptor_for_item(params).id == "tfull-5:k=1,l=0,m=2:c=1/2:a0=0"
    with pytest.raises(UsageError):
        item_for_descriptor(CatalogDescriptor.parse("tfull-3:a0=1"))


@pytest.mark.parametrize("params", ITEMS)
def test_signature_at_origin(params):
    """Test the induced metric at the origin has the item's signature."""
    sampler = EmbeddingSampler.closed_form(params)
    assert induced_metric(sampler, np.zeros(params.param_dim)).signature == params.signature


@pytest.mark.parametrize("params", ITEMS)
def test_signature_is_constant(params, rng):
    """Test the signature does not change at random points near the origin."""
    sampler = EmbeddingSampler.closed_form(params)
    for _ in range(3):
        point = rng.uniform(-0.5, 0.5, params.param_dim)
        assert induced_metric(sampler, point).signature == params.signature


def test_mean_curvature_constants():
    """Test the predicted mean curvature constants."""
    assert ItemParams(4, m=1).mean_curvature_constant == pytest.approx(-5 / 3)
    assert ItemParams(5, k=1).mean_curvature_constant == pytest.approx(-2.0)
    assert ItemParams(3).mean_curvature_constant == 0.0


@pytest.mark.parametrize("params", [ItemParams(4, m=1), ItemParams(5, k=1)])
def test_mean_curvature_measured(params):
    """Test the measured mean curvature is C sigma_X for items 4 and 5."""
    report = mean_curvature_check(EmbeddingSampler.closed_form(params))
    assert not report.minimal
    assert report.measured == pytest.approx(params.mean_curvature_constant, abs=1e-4)
    assert report.passed()


@pytest.mark.parametrize("params", [ItemParams(1), ItemParams(2), ItemParams(3)])
def test_minimal_items(params):
    """Test items 1 to 3 are minimal."""
    report = mean_curvature_check(EmbeddingSampler.closed_form(params))
    assert report.minimal
    assert report.passed()


@pytest.mark.parametrize("params", [ItemParams(2), ItemParams(2, sign=-1), ItemParams(3)])
def test_normal_reflection_preserves_item(params, rng):
    """Test the normal reflection at the origin maps the item into itself."""
    sampler = EmbeddingSampler.closed_form(params)
    probes = rng.uniform(-0.5, 0.5, (8, params.param_dim))
    report = normal_reflection_test(sampler, np.zeros(params.param_dim), probes)
    assert report.isometry_defect <= 1e-10
    assert report.passed()


@pytest.mark.slow
@pytest.mark.parametrize("params", [ItemParams(4, m=1), ItemParams(5, k=1)])
def test_normal_reflection_preserves_curved_items(params, rng):
    """Test the normal reflection on the non-minimal items."""
    sampler = EmbeddingSampler.closed_form(params)
    probes = rng.uniform(-0.3, 0.3, (5, params.param_dim))
    assert normal_reflection_test(sampler, np.zeros(params.param_dim), probes).passed()


@pytest.mark.parametrize("params", [ItemParams(2), ItemParams(2, sign=-1)])
def test_flat_items(params):
    """Test the parabola items are flat with parallel curvature."""
    probe = curvature_probe(EmbeddingSampler.closed_form(params), np.zeros(params.param_dim))
    assert probe.flat == params.expected_flat
    assert probe.parallel
    assert probe.stable


@pytest.mark.parametrize("item", [4, 5])
@pytest.mark.parametrize("k, l, m", [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)])
def test_curved_items_flat_exactly_without_k_and_m(item, k, l, m):
    """Test items 4 and 5 are flat iff k = m = 0 and always have parallel curvature."""
    params = ItemParams(item, k=k, l=l, m=m)
    result = curvature_probe(EmbeddingSampler.closed_form(params), np.zeros(params.param_dim))
    assert params.expected_flat == (k == 0 and m == 0)
    assert result.flat == params.expected_flat
    assert result.parallel


def test_cahen_wallach_flat_without_weights():
    """Test the Cahen-Wallach metric without weights is flat."""
    probe = curvature_probe(cahen_wallach_metric([], []), np.zeros(2))
    assert probe.flat
    assert probe.parallel


@pytest.mark.parametrize("lambdas, mus", [([1.0], []), ([], [1.0]), ([1.0], [2.0])])
def test_cahen_wallach_curved_and_parallel(lambdas, mus):
    """Test Cahen-Wallach metrics with weights are curved with parallel curvature."""
    metric = cahen_wallach_metric(lambdas, mus)
    probe = curvature_probe(metric, np.full(metric.dim, 0.1))
    assert not probe.flat
    assert probe.max_riemann > 0.5
    assert probe.parallel


def test_cahen_wallach_parameters():
    """Test weights are negative for item 4 and positive for item 5."""
    assert ItemParams(4, k=1, m=2).cahen_wallach_parameters() == ([], [1.0, 1.0, 2.0])
    assert ItemParams(5, k=1).cahen_wallach_parameters() == ([2.0], [])
    with pytest.raises(UsageError):
        ItemParams(2).cahen_wallach_parameters()


@pytest.mark.parametrize("text", ["tfull-3", "tfull-4:k=0,l=0,m=1:c=0", "tfull-5:k=1,l=0,m=0:c=0"])
def test_phi_generators_are_infinitesimal_isometries(text):
    """Test phi of every basis element of g_+ is skew for the gram of g_-."""
    g = build_catalog_entry(CatalogDescriptor.parse(text))
    model = OrbitModel(g)
    for label in model.plus_labels:
        if label in g.labels:
            assert phi_rep(g, label).antisymmetry_defect() <= 1e-12


def test_exponential_group_law():
    """Test exp(s X) exp(t X) = exp((s + t) X) for a phi generator."""
    g = build_catalog_entry(CatalogDescriptor.parse("tfull-4:k=0,l=0,m=1:c=0"))
    model = OrbitModel(g)
    generator = AffineGenerator(np.zeros((model.dim, model.dim)), np.zeros(model.dim), model.gram)
    for label in model.plus_labels:
        if label in g.labels:
            generator = generator + phi_rep(g, label)
    combined = exp_affine(generator, 0.3).compose(exp_affine(generator, 0.4))
    assert combined.distance(exp_affine(generator, 0.7)) <= 1e-10
    assert combined.isometry_defect() <= 1e-10


def test_orbit_of_identity_word_is_origin():
    """Test the empty word fixes the origin."""
    g = build_catalog_entry(CatalogDescriptor.parse("tfull-3"))
    model = OrbitModel(g)
    assert np.array_equal(model.point([]), np.zeros(model.dim))
    assert model.isometry([]).distance(model.isometry([])) == 0.0


ROUTE_CASES = [
    "tfull-1",
    "tfull-2a",
    "tfull-2b",
    "tfull-3",
    "tfull-4:k=0,l=0,m=1:c=0",
    "tfull-4:k=1,l=1,m=1:c=0",
    "tfull-5:k=1,l=0,m=0:c=0",
    "tfull-5:k=0,l=1,m=0:c=0",
    "tfull-5:k=0,l=0,m=1:c=0",
    "tfull-5:k=1,l=1,m=1:c=0",
]


@pytest.mark.parametrize("text", ROUTE_CASES)
def test_route_agreement(text):
    """Test closed-form and orbit routes differ by one isometry on 100 random points."""
    desc = CatalogDescriptor.parse(text)
    params = item_for_descriptor(desc)
    rng = np.random.default_rng(1)
    points = rng.uniform(-0.5, 0.5, (100, params.param_dim))
    agreement = route_agreement(desc, points)
    assert agreement.points == 100
    assert agreement.max_residual <= 1e-8
    assert agreement.isometry_defect <= 1e-8
    assert agreement.passed()


def test_route_word_pairs_sigma_h_with_h():
    """Test the item 4 word puts t / <sigma_H, H> on sigma_H and unit weight on a4_1_2."""
    desc = CatalogDescriptor.parse("tfull-4:k=0,l=0,m=1:c=0")
    g = build_catalog_entry(desc)
    word = matched_word(desc, g, [0.2, 0.7, -0.4])
    assert word[0] == ("H", 0.1)
    element = word[1][0]
    assert element[g.index("sigma_H")] == pytest.approx(0.7)
    assert element[g.index("a4_1_2")] == pytest.approx(-0.4)
    assert element[g.index("a4_1_1")] == 0.0


def test_route_agreement_needs_enough_points():
    """Test too few points cannot identify the ambient spaces."""
    desc = CatalogDescriptor.parse("tfull-3")
    with pytest.raises(UsageError):
        route_agreement(desc, [[0.0, 0.0, 0.0]])


def test_orbit_sampler_matches_model_dimension():
    """Test the orbit sampler lives in g_- with the section's parameter count."""
    desc = CatalogDescriptor.parse("tfull-3")
    g = build_catalog_entry(desc)
    sampler = EmbeddingSampler.orbit(g, desc.dims()["l"], desc.dims()["a"])
    assert sampler.ambient_dim == OrbitModel(g).dim
    assert np.allclose(sampler.evaluate(np.zeros(sampler.param_dim)), 0.0)


@pytest.mark.parametrize("text", ["tfull-3", "tfull-4:k=0,l=0,m=1:c=0"])
def test_transvection_group(text):
    """Test the transvection group law is compatible with the action and has inverses."""
    desc = CatalogDescriptor.parse(text)
    g = build_catalog_entry(desc)
    group = TransvectionGroup(g, desc.dims()["l"], desc.dims()["a"])
    plus = group.model.plus_basis
    basis = np.array([[float(v) for v in plus.col(j)] for j in range(plus.cols)]).T
    rng = np.random.default_rng(2)
    x = group.element(basis @ rng.uniform(-0.5, 0.5, plus.cols))
    y = group.element(basis @ rng.uniform(-0.5, 0.5, plus.cols))

    assert group.act(group.product(x, y)).distance(group.act(x).compose(group.act(y))) <= 1e-6
    identity = group.product(x, group.inverse(x))
    for block in (identity.Z, identity.A, identity.L):
        assert np.max(np.abs(block)) <= 1e-12


def test_transvection_rejects_bad_split():
    """Test the (l, a) split must match the dimension of g."""
    g = build_catalog_entry(CatalogDescriptor.parse("tfull-3"))
    with pytest.raises(UsageError):
        TransvectionGroup(g, 2, 2)
