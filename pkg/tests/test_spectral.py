import math

import numpy as np
import pytest

from percolab.generators import GenSpec, generate
from percolab.spectral import certify, compute_spectrum, delta_of_alpha

# closed-form (lambda2, lambdaN) pairs
CLOSED = [
    ("k4", -1.0, -1.0),
    ("c6", 1.0, -2.0),
    ("petersen", 1.0, -2.0),
    ("q4", 2.0, -4.0),
]


@pytest.mark.parametrize("name,l2,ln", CLOSED)
def test_closed_form_spectra_dense(name, l2, ln, request):
    g = request.getfixturevalue(name)
    rep = compute_spectrum(g, tol=1e-10, method="dense")
    assert rep.lambda1 == pytest.approx(g.d, abs=1e-8)
    assert rep.lambda2 == pytest.approx(l2, abs=1e-8)
    assert rep.lambdaN == pytest.approx(ln, abs=1e-8)
    assert rep.lam == pytest.approx(max(abs(l2), abs(ln)), abs=1e-8)
    assert rep.connected


@pytest.mark.parametrize("name,l2,ln", CLOSED)
def test_closed_form_spectra_iterative(name, l2, ln, request):
    g = request.getfixturevalue(name)
    rep = compute_spectrum(g, tol=1e-8, method="iterative")
    assert rep.lambda2 == pytest.approx(l2, abs=1e-7)
    assert rep.lambdaN == pytest.approx(ln, abs=1e-7)
    assert rep.residual2 <= 1e-8 and rep.residualN <= 1e-8
    assert rep.method == "iterative"


def test_dense_and_iterative_agree_random():
    g = generate(GenSpec("random_regular", n=600, d=8, seed=5))
    dense = compute_spectrum(g, method="dense")
    it = compute_spectrum(g, tol=1e-9, method="iterative")
    assert it.lambda2 == pytest.approx(dense.lambda2, abs=1e-7)
    assert it.lambdaN == pytest.approx(dense.lambdaN, abs=1e-7)


def test_auto_method_switch(q4):
    assert compute_spectrum(q4).method == "dense"
    g = generate(GenSpec("random_regular", n=2100, d=6, seed=2))
    assert compute_spectrum(g).method == "iterative"


def test_disconnected_graph_flagged(cliques60):
    rep = compute_spectrum(cliques60, method="dense")
    # a disjoint clique union has lambda2 == d
    assert rep.lambda2 == pytest.approx(cliques60.d, abs=1e-8)
    assert not rep.connected


def test_delta_of_alpha():
    assert delta_of_alpha(1.0) == pytest.approx(1.0)
    assert delta_of_alpha(0.5) == pytest.approx(0.0625)
    grid = np.linspace(0.05, 1.0, 40)
    vals = [delta_of_alpha(a) for a in grid]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    for a in grid:
        assert delta_of_alpha(a) == pytest.approx(math.exp(2 / a * math.log(a)))
    with pytest.raises(ValueError):
        delta_of_alpha(0.0)
    with pytest.raises(ValueError):
        delta_of_alpha(1.5)


def test_certify_single_clique():
    g = generate(GenSpec("clique_union", n=20, d=19))
    ok, rep = certify(g, alpha=0.5)
    # complete graph: lam = 1, ratio = 1/19 <= delta(0.5) = 0.0625
    assert rep.lam == pytest.approx(1.0, abs=1e-8)
    assert ok
    ok_tight, _ = certify(g, alpha=0.2)
    assert not ok_tight  # delta(0.2) = 0.2^10 is far below 1/19


def test_spectrum_report_dict(q4):
    d = compute_spectrum(q4).to_dict()
    assert set(d) == {
        "lambda1", "lambda2", "lambdaN", "lam", "ratio",
        "residual2", "residualN", "iterations", "method", "connected",
    }


def test_tol_validation(q4):
    with pytest.raises(ValueError):
        compute_spectrum(q4, tol=0.0)
    with pytest.raises(ValueError):
        compute_spectrum(q4, method="magic")
