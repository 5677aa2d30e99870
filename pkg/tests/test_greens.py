"""Quasi-periodic Green's function: values, symmetries, convergence, guards."""

from __future__ import annotations

import math

import numpy as np
import pytest

from pinstacks.errors import LightLineProximity
from pinstacks.greens import (
    DEFAULT_POLICY,
    SpectralPoint,
    TruncationPolicy,
    greens,
    order_quantities,
    propagating_orders,
)

TWO_PI = 2.0 * math.pi


def _random_point(rng: np.random.Generator) -> SpectralPoint:
    """A spectral point with every order safely away from its light line."""
    while True:
        alpha0 = rng.uniform(-2.5, 2.5)
        beta = rng.uniform(0.5, 5.5)
        point = SpectralPoint(alpha0, beta)
        margins = [abs(abs(alpha0 + TWO_PI * n) - beta)
                   for n in range(-3, 4)]
        if min(margins) > 1e-3:
            return point


class TestOrderQuantities:
    def test_zero_order_propagating(self):
        q = order_quantities(SpectralPoint(0.0, 2.0), 0)
        assert q.alpha_n == 0.0
        assert q.chi_n == 2.0 + 0.0j
        assert q.tau_n == 2.0
        assert q.propagating

    def test_first_order_evanescent(self):
        q = order_quantities(SpectralPoint(0.0, 2.0), 1)
        assert q.alpha_n == pytest.approx(TWO_PI, abs=0.0)
        assert q.chi_n.real == 0.0
        assert q.chi_n.imag == pytest.approx(math.sqrt(4 * math.pi**2 - 4.0))
        assert q.tau_n == pytest.approx(math.sqrt(4 * math.pi**2 + 4.0))
        assert not q.propagating

    def test_oblique_zero_order(self):
        q = order_quantities(SpectralPoint(1.79968, 3.599363), 0)
        oracle = math.sqrt(3.599363**2 - 1.79968**2)  # 3.1171406614666908
        assert q.chi_n.real == pytest.approx(oracle, rel=1e-12)
        assert q.chi_n.real == pytest.approx(3.11713, abs=2e-5)
        assert q.chi_n.imag == 0.0

    def test_wavenumber_identities(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            p = _random_point(rng)
            n = int(rng.integers(-4, 5))
            q = order_quantities(p, n)
            assert q.alpha_n == pytest.approx(p.alpha0 + TWO_PI * n, rel=1e-15)
            assert q.chi_n**2 + q.alpha_n**2 == pytest.approx(
                p.beta**2, rel=1e-12)
            assert q.tau_n**2 - q.alpha_n**2 == pytest.approx(
                p.beta**2, rel=1e-12)
            # chi is positive real or positive imaginary, never mixed
            assert q.chi_n.real == 0.0 or q.chi_n.imag == 0.0
            assert q.chi_n.real >= 0.0 and q.chi_n.imag >= 0.0


def test_propagating_orders_enumeration():
    assert propagating_orders(SpectralPoint(0.0, 2.0)) == [0]
    assert propagating_orders(SpectralPoint(0.5, 7.0)) == [-1, 0, 1]
    # just below the first light line only order 0 survives
    assert propagating_orders(SpectralPoint(0.0, TWO_PI * 0.999)) == [0]


def test_spectral_point_validation():
    with pytest.raises(ValueError):
        SpectralPoint(0.0, -1.0)
    with pytest.raises(ValueError):
        SpectralPoint(0.0, 2.0, d=0.0)


def test_truncation_policy_validation():
    with pytest.raises(ValueError):
        TruncationPolicy(n_self=10, n_far=20)
    with pytest.raises(ValueError):
        TruncationPolicy(n_far=0)
    with pytest.raises(ValueError):
        TruncationPolicy(lightline_tol=0.0)


def test_finite_value_off_line():
    value = greens(SpectralPoint(0.0, 2.0), 0.0, 0.5)
    assert np.isfinite(value.real) and np.isfinite(value.imag)
    assert abs(value) > 0.0


def test_mirror_symmetry_in_y_is_exact():
    rng = np.random.default_rng(11)
    for _ in range(50):
        p = _random_point(rng)
        x = float(rng.uniform(-1.0, 1.0))
        y = float(rng.uniform(0.05, 2.0))
        assert greens(p, x, y) == greens(p, x, -y)


def test_quasi_periodicity():
    rng = np.random.default_rng(13)
    for _ in range(100):
        p = _random_point(rng)
        x = float(rng.uniform(-0.5, 0.5))
        y = float(rng.uniform(-1.0, 1.0))
        g0 = greens(p, x, y)
        g1 = greens(p, x + p.d, y)
        bloch = np.exp(1j * p.alpha0 * p.d)
        assert abs(g1 - bloch * g0) < 1e-12 * abs(g0)


def test_on_line_truncation_agreement():
    # The pairwise-combined summand decays cubically; on the source line at
    # x = 0 every combined term has the same sign, so the tail scales as
    # N^-2 and the 1000- vs 4000-term values agree to ~1e-9 in absolute
    # terms (the value itself is ~6e-3).
    p = SpectralPoint(1.808735, 3.61747)
    g1 = greens(p, 0.0, 0.0, n_terms=1000)
    g4 = greens(p, 0.0, 0.0, n_terms=4000)
    assert abs(g1 - g4) <= 1e-9


def test_joint_convergence_is_cubic_on_the_line():
    # At generic x the combined terms oscillate and the truncation error
    # follows the cubic decay of the summand itself.
    p = SpectralPoint(1.808735, 3.61747)
    x = 0.37
    ref = greens(p, x, 0.0, n_terms=25600)
    ns = np.array([50, 100, 200, 400, 800, 1600])
    errs = np.array([abs(greens(p, x, 0.0, n_terms=int(n)) - ref) for n in ns])
    slope = np.polyfit(np.log(ns), np.log(errs), 1)[0]
    assert slope <= -2.7


def test_biharmonic_pde_off_the_line():
    # (Lap^2 - beta^4) G = 0 away from the source row; nested 5-point
    # Laplacians approximate Lap^2 at step h.
    p = SpectralPoint(1.2, 2.7)
    h = 1e-3 * p.d

    def g(x: float, y: float) -> complex:
        return greens(p, x, y, n_terms=60)

    def lap(f, x: float, y: float) -> complex:
        return (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h)
                - 4.0 * f(x, y)) / (h * h)

    for x, y in [(0.13, 0.5), (0.4, 0.8)]:
        residual = lap(lambda a, b: lap(g, a, b), x, y) - p.beta**4 * g(x, y)
        assert abs(residual) < 1e-4


def test_light_line_guard():
    # order n = +-1 sits exactly on its light line at alpha0 = 0, beta = 2 pi
    with pytest.raises(LightLineProximity):
        greens(SpectralPoint(0.0, TWO_PI), 0.0, 0.0)
    # the guard applies off the source line as well
    with pytest.raises(LightLineProximity):
        greens(SpectralPoint(0.0, TWO_PI), 0.1, 0.7)


def test_window_defaults_follow_evaluation_site():
    p = SpectralPoint(0.4, 3.0)
    on_line = greens(p, 0.2, 0.0)
    off_line = greens(p, 0.2, 0.6)
    assert on_line == greens(p, 0.2, 0.0, n_terms=DEFAULT_POLICY.n_self)
    assert off_line == greens(p, 0.2, 0.6, n_terms=DEFAULT_POLICY.n_far)
