import cmath
import json
import math

import pytest

import stathyp


def test_euclidean_plane_e():
    plane = stathyp.ModelSpace.euclidean(2)
    res = stathyp.estimate_e(plane, r=1.0, n=200_000, seed=42)
    assert abs(res["mean"] - 4 / math.pi) <= 4 * res["std_error"]
    assert res["n_pairs"] == 200_000
    assert res["seed"] == 42
    assert len(res["config_digest"]) == 16


def test_estimate_is_deterministic_across_workers():
    h = stathyp.ModelSpace.hyperbolic_plane()
    a = stathyp.estimate_e(h, r=5.0, n=5000, seed=3, workers=1)
    b = stathyp.estimate_e(h, r=5.0, n=5000, seed=3, workers=4)
    assert a == b


def test_hyperbolic_distance_and_geodesic():
    h = stathyp.ModelSpace.hyperbolic_plane()
    assert h.basepoint() == 1j
    assert h.distance(1j, 2j) == pytest.approx(math.log(2))
    mid = h.geodesic_point(1j, 4j, math.log(2))
    assert mid == pytest.approx(2j)
    z, w = 0.3 + 0.5j, -1.0 + 2.0j
    expected = math.acosh(1 + abs(z - w) ** 2 / (2 * z.imag * w.imag))
    assert h.distance(z, w) == pytest.approx(expected, rel=1e-12)


def test_tree_and_product_points():
    tree = stathyp.ModelSpace.regular_tree(3)
    assert tree.distance("ab", "ac") == 2
    line = stathyp.ModelSpace.euclidean(1)
    sup = stathyp.ModelSpace.sup_product([line, line])
    assert sup.distance([[0.0], [0.0]], [[2.0], [-5.0]]) == 5.0


def test_errors_are_value_errors():
    h = stathyp.ModelSpace.hyperbolic_plane()
    with pytest.raises(stathyp.DomainError):
        h.distance(1j, -1j)
    with pytest.raises(stathyp.ParameterError):
        stathyp.estimate_e(stathyp.ModelSpace.euclidean(2), r=1.0, k=1.5, n=10)
    with pytest.raises(ValueError):
        stathyp.mahler(stathyp.ConvexBody.lp_ball(2, 2.0), method="nope")


def test_mahler_and_densities():
    disk = stathyp.mahler(stathyp.ConvexBody.lp_ball(2, 2.0))
    assert disk["value"] == pytest.approx(math.pi**2, abs=1e-9)
    square = stathyp.mahler(stathyp.ConvexBody.polytope([[1, 1], [1, -1]]))
    assert square["value"] == pytest.approx(8.0, rel=1e-12)
    assert square["ok"]
    sup = stathyp.densities(stathyp.ConvexBody.lp_ball(2, math.inf))
    assert sup["ratio"] == pytest.approx(math.pi**2 / 8, abs=1e-3)


def test_separation_closed_form():
    h = stathyp.ModelSpace.hyperbolic_plane()
    res = stathyp.separation_fraction(h, r=10.0, t=6.0, m0=2.0, n=200)
    assert res["orbit_integrated"]
    assert res["mean"] == pytest.approx(2 / math.pi * math.asin(math.sinh(1.0) / math.sinh(6.0)), rel=1e-9)


def test_thick_area_and_ray():
    m = stathyp.ModelSpace.modular_torus()
    assert stathyp.thick_area_fraction(0.5) == pytest.approx(1 - 3 / (4 * math.pi), abs=1e-9)
    frac = stathyp.ray_thick_stat(m, angle=0.7, length=2000.0, eps=0.5)
    assert 0.0 <= frac <= 1.0


def test_thin_triangle_on_product_family():
    line = stathyp.ModelSpace.euclidean(1)
    sup = stathyp.ModelSpace.sup_product([line, line])
    r = 9.0
    hit, dist = stathyp.thin_triangle_probe(sup, [[0.0], [0.0]], [[2 * r], [r]], [[2 * r], [-r]], c=1.0)
    assert not hit
    assert dist == pytest.approx(4 * r / 9, abs=0.05)


def test_catalog_and_run_experiment():
    cat = stathyp.catalog()
    assert len(cat) == 9
    assert json.loads(stathyp.catalog_json()) == cat
    cfg = stathyp.default_config("estimate-e").replace("n=100000", "n=2000")
    out = stathyp.run_experiment(cfg, seed=5)
    assert out["passed"]
    assert out["csv"].splitlines()[0] == stathyp.CSV_HEADER
    assert ",5," in out["csv"].splitlines()[1]
    assert out["digest"] in out["summary"]
    with pytest.raises(stathyp.ParameterError):
        stathyp.run_experiment("[experiment]\nkind = estimate-e\n[parameters]\nr = 1\nk = 2\n")


def test_digest_vectors():
    assert stathyp.digest("") == "cbf29ce484222325"
    assert stathyp.digest("a") == "af63dc4c8601ec8c"
