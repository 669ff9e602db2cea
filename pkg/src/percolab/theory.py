"""Closed-form predictions for the percolation observables.

Everything here is scalar arithmetic around two transcendental roots:

  x solves  x = (1+eps) * (1 - exp(-x))          (survival mass)
  y solves  y * exp(-y) = (1+eps) * exp(-(1+eps)) (dual root in (0,1))

with the identity x + y = 1 + eps tying them together.  The giant
component holds ~ x*n/d vertices; small tree components follow a
Borel-type weight k^{k-2} (1+eps)^k e^{-(1+eps)k} / k!.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "TheoryPrediction",
    "admissibility_flags",
    "predict",
    "series_tree_edge_mass",
    "series_tree_mass",
    "solve_x",
    "solve_y",
]

_ROOT_TOL = 1e-12


def _check_eps(epsilon: float) -> None:
    # Positivity is mathematically required.  Values above 1 leave the
    # small-eps asymptotic regime but every formula stays well defined
    # (and p = (1+eps)/d = 1 smoke runs need them), so they are allowed.
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")


def solve_x(epsilon: float, tol: float = _ROOT_TOL) -> float:
    """Positive root of x = (1+eps)(1 - exp(-x)), by bisection.

    The root sits in (ln(1+eps), 1) for eps below about 0.58; above
    that it drifts past 1, so the bracket is widened to 1+eps where the
    sign is guaranteed (f(1+eps) = (1+eps)e^{-(1+eps)} > 0).
    """
    _check_eps(epsilon)
    one_eps = 1.0 + epsilon

    def f(x: float) -> float:
        return x - one_eps * (1.0 - math.exp(-x))

    lo = math.log1p(epsilon)
    hi = one_eps
    flo = f(lo)
    assert flo < 0.0 < f(hi)
    del flo
    # Bisect on interval width, not residual: f' ~ eps near the root, so a
    # residual stop would leave O(tol/eps) error in the root itself.
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid <= lo or mid >= hi:
            return mid
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_y(epsilon: float, tol: float = _ROOT_TOL) -> float:
    """Root in (0,1) of y e^{-y} = (1+eps) e^{-(1+eps)}; g is increasing there."""
    _check_eps(epsilon)
    target = (1.0 + epsilon) * math.exp(-(1.0 + epsilon))

    def g(y: float) -> float:
        return y * math.exp(-y) - target

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid <= lo or mid >= hi:
            return mid
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _log_term_tree_mass(k: int, epsilon: float) -> float:
    # k^{k-1}/k! * (1+eps)^{k-1} * e^{-(1+eps)k}
    le = math.log1p(epsilon)
    return (k - 1) * math.log(k) - math.lgamma(k + 1) \
        + (k - 1) * le - (1.0 + epsilon) * k


def _log_term_edge_mass(k: int, epsilon: float) -> float:
    # (k-1) k^{k-2}/k! * ((1+eps) e^{-(1+eps)})^k ; first factor handled by caller
    le = math.log1p(epsilon)
    return (k - 2) * math.log(k) - math.lgamma(k + 1) + k * (le - (1.0 + epsilon))


def _sum_series(epsilon: float, tol: float, log_term, prefactor) -> float:
    """Log-domain summation; successive term ratios are eventually below
    1 - eps^2/3, so stopping once a term drops under tol*eps^2/3 keeps
    the discarded tail below tol."""
    _check_eps(epsilon)
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    cutoff = tol * epsilon * epsilon / 3.0
    total = 0.0
    k = 1
    while True:
        pre = prefactor(k)
        term = pre * math.exp(log_term(k, epsilon)) if pre else 0.0
        total += term
        if k > 2 and term < cutoff:
            return total
        if k > 10_000_000:
            raise RuntimeError("series failed to converge")
        k += 1


def series_tree_mass(epsilon: float, tol: float = 1e-12) -> float:
    """sum_k k^{k-1}/k! (1+eps)^{k-1} e^{-(1+eps)k}; equals y/(1+eps)."""
    return _sum_series(epsilon, tol, _log_term_tree_mass, lambda k: 1.0)


def series_tree_edge_mass(epsilon: float, tol: float = 1e-12) -> float:
    """sum_k (k-1) k^{k-2}/k! ((1+eps)e^{-(1+eps)})^k; equals y^2/2."""
    return _sum_series(epsilon, tol, _log_term_edge_mass, lambda k: float(k - 1))


def tree_component_prediction(n: int, d: int, epsilon: float, k: int) -> float:
    """Expected count of tree components on k vertices: (n/d) * Borel weight."""
    if k < 1:
        raise ValueError("k must be positive")
    logw = (k - 2) * math.log(k) - math.lgamma(k + 1) \
        + k * (math.log1p(epsilon) - (1.0 + epsilon))
    return (n / d) * math.exp(logw)


def admissibility_flags(n: int, d: int, epsilon: float, alpha: float) -> dict:
    """Which claims' stated alpha windows contain this alpha.

    Recorded, never enforced: out-of-window exploration stays possible.
    """
    lo_sqrt = 2.0 * math.sqrt(d / n)
    lo_log = 2.0 / math.log(n / d)
    e2, e3, e4, e8 = epsilon ** 2, epsilon ** 3, epsilon ** 4, epsilon ** 8
    return {
        "giant_size_window": lo_sqrt < alpha < e2,
        "second_component_window": lo_log < alpha < e4,
        "giant_edges_window": lo_log < alpha < e8,
        "long_cycle_window": lo_sqrt < alpha < e3,
        "giant_expansion_window": lo_sqrt < alpha < e2,
        "set_expansion_window": lo_sqrt < alpha < e2,
    }


@dataclass(frozen=True)
class TheoryPrediction:
    n: int
    d: int
    epsilon: float
    alpha: float
    x: float
    y: float
    L1_pred: float
    L1_tol: float
    e_L1_pred: float
    Zp_pred: float
    Zp_smalltrees_pred: float
    subcritical_bound: float
    straggler_bound: float
    T_k_pred: tuple  # index k-1 -> expected k-vertex tree components
    admissible: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "epsilon": self.epsilon,
            "alpha": self.alpha,
            "x": self.x,
            "y": self.y,
            "L1_pred": self.L1_pred,
            "L1_tol": self.L1_tol,
            "e_L1_pred": self.e_L1_pred,
            "Zp_pred": self.Zp_pred,
            "Zp_smalltrees_pred": self.Zp_smalltrees_pred,
            "subcritical_bound": self.subcritical_bound,
            "straggler_bound": self.straggler_bound,
            "T_k_pred": list(self.T_k_pred),
            "admissible": dict(self.admissible),
        }


def predict(n: int, d: int, epsilon: float, alpha: float, k_max: int = 4) -> TheoryPrediction:
    _check_eps(epsilon)
    if n <= 0 or d <= 0 or k_max < 1:
        raise ValueError("n, d, k_max must be positive")
    x = solve_x(epsilon)
    y = solve_y(epsilon)
    assert abs(x + y - (1.0 + epsilon)) <= 1e-10
    one_eps = 1.0 + epsilon
    nd = n / d
    return TheoryPrediction(
        n=n,
        d=d,
        epsilon=epsilon,
        alpha=alpha,
        x=x,
        y=y,
        L1_pred=x * nd,
        L1_tol=7.0 * alpha * nd,
        e_L1_pred=(one_eps ** 2 - (one_eps - x) ** 2) * n / (2.0 * d),
        Zp_pred=one_eps ** 2 * n / (2.0 * d),
        Zp_smalltrees_pred=(one_eps - x) ** 2 * n / (2.0 * d),
        subcritical_bound=(4.0 / epsilon ** 2) * math.log(n / d),
        straggler_bound=15.0 * alpha * nd,
        T_k_pred=tuple(tree_component_prediction(n, d, epsilon, k) for k in range(1, k_max + 1)),
        admissible=admissibility_flags(n, d, epsilon, alpha),
    )
