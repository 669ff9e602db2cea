import math

import numpy as np
import pytest

from percolab.theory import (
    admissibility_flags,
    predict,
    series_tree_edge_mass,
    series_tree_mass,
    solve_x,
    solve_y,
    tree_component_prediction,
)


def test_fixed_point_residuals():
    for eps in (0.01, 0.1, 0.2, 0.5, 0.9, 1.0, 2.0):
        x = solve_x(eps)
        assert abs(x - (1 + eps) * (1 - math.exp(-x))) <= 1e-11
        y = solve_y(eps)
        assert abs(y * math.exp(-y) - (1 + eps) * math.exp(-(1 + eps))) <= 1e-12
        assert 0.0 < y < 1.0
        assert x > math.log1p(eps)


def test_frozen_root_values():
    assert solve_x(0.2) == pytest.approx(0.3764379972478492, abs=1e-9)
    assert solve_y(0.2) == pytest.approx(0.8235620027408004, abs=1e-9)
    assert solve_x(1.0) > 1.0  # the root escapes (ln 2, 1) at large eps


def test_dual_roots_sum_identity():
    rng = np.random.default_rng(2024)
    for eps in rng.uniform(1e-3, 1.0, size=100):
        assert abs(solve_x(eps) + solve_y(eps) - (1 + eps)) <= 1e-10


def test_root_asymptotics():
    # x ~ 2*eps as eps -> 0, and is increasing in eps
    assert solve_x(1e-4) < 3e-4
    grid = np.linspace(0.01, 1.5, 60)
    xs = [solve_x(e) for e in grid]
    assert all(b > a for a, b in zip(xs, xs[1:]))


def test_domain_errors():
    for bad in (0.0, -0.3):
        with pytest.raises(ValueError):
            solve_x(bad)
        with pytest.raises(ValueError):
            solve_y(bad)
        with pytest.raises(ValueError):
            series_tree_mass(bad)
    with pytest.raises(ValueError):
        series_tree_mass(0.2, tol=0.0)
    with pytest.raises(ValueError):
        predict(0, 20, 0.2, 0.1)
    with pytest.raises(ValueError):
        tree_component_prediction(100, 10, 0.2, 0)


def test_series_identities():
    for eps in (0.1, 0.2, 0.35, 0.5, 1.0):
        y = solve_y(eps)
        assert series_tree_mass(eps) == pytest.approx(y / (1 + eps), abs=1e-10)
        assert series_tree_edge_mass(eps) == pytest.approx(y * y / 2, abs=1e-10)


def test_series_frozen_values():
    assert series_tree_mass(0.2) == pytest.approx(0.6863016689580956, abs=1e-12)
    assert series_tree_edge_mass(0.2) == pytest.approx(0.33912718618654514, abs=1e-12)


def test_series_tolerance_scaling():
    loose = series_tree_mass(0.3, tol=1e-6)
    tight = series_tree_mass(0.3, tol=1e-13)
    assert abs(loose - tight) <= 1e-6


def test_tree_component_predictions():
    t1 = tree_component_prediction(200_000, 20, 0.2, 1)
    assert t1 == pytest.approx(3614.330542946426, rel=1e-10)
    # k = 1 reduces to (n/d)(1+eps)e^{-(1+eps)}
    assert t1 == pytest.approx(10_000 * 1.2 * math.exp(-1.2), rel=1e-12)
    assert tree_component_prediction(200_000, 20, 0.2, 2) == pytest.approx(
        653.1692636837704, rel=1e-10
    )
    assert tree_component_prediction(200_000, 20, 0.2, 3) == pytest.approx(
        236.07696194460777, rel=1e-10
    )
    # cross-check against the binomial-ish expression n p (1-p)^d
    p = 1.2 / 20
    assert t1 == pytest.approx(200_000 * p * (1 - p) ** 20, rel=0.05)


def test_predict_fields():
    pred = predict(200_000, 20, 0.2, 0.1)
    assert pred.L1_pred == pytest.approx(3764.379972478492, rel=1e-9)
    assert pred.L1_tol == pytest.approx(7000.0)
    assert pred.Zp_pred == pytest.approx(7200.0)
    assert pred.e_L1_pred == pytest.approx(3808.7281156, rel=1e-6)
    assert pred.subcritical_bound == pytest.approx(921.0340371976182, rel=1e-12)
    assert pred.straggler_bound == pytest.approx(15_000.0)
    # retained-edge masses split exactly between giant and small trees
    assert pred.e_L1_pred + pred.Zp_smalltrees_pred == pytest.approx(pred.Zp_pred)
    assert pred.Zp_smalltrees_pred == pytest.approx(pred.y**2 * 5000, rel=1e-9)
    assert len(pred.T_k_pred) == 4
    assert pred.T_k_pred[0] == pytest.approx(3614.330542946426, rel=1e-10)
    d = pred.to_dict()
    assert d["x"] == pred.x and d["T_k_pred"][1] == pred.T_k_pred[1]
    assert set(d["admissible"]) == {
        "giant_size_window",
        "second_component_window",
        "giant_edges_window",
        "long_cycle_window",
        "giant_expansion_window",
        "set_expansion_window",
    }


def test_predict_supercritical_of_one():
    # p = 1 on a tiny clique corresponds to eps well above 1; everything
    # must stay evaluable there
    pred = predict(4, 3, 2.0, 0.5)
    assert pred.Zp_pred == pytest.approx(9 * 4 / 6)
    assert pred.x + pred.y == pytest.approx(3.0, abs=1e-10)


def test_admissibility_windows():
    flags = admissibility_flags(200_000, 20, 0.2, 0.03)
    # lo_sqrt = 0.02, eps^2 = 0.04: alpha = 0.03 sits inside the size window
    assert flags["giant_size_window"] is True
    assert flags["giant_expansion_window"] is True
    # but eps^4 = 0.0016 < alpha and the log floor is ~0.217
    assert flags["second_component_window"] is False
    assert flags["giant_edges_window"] is False
    flags2 = admissibility_flags(200_000, 20, 0.2, 0.1)
    assert flags2["giant_size_window"] is False  # 0.1 > eps^2
