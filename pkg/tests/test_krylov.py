import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from krylov_svd import (
    ComplexityCurve,
    LanczosCoefficients,
    complexity,
    complexity_of,
    detect_peak,
    ehrenfest_rate,
    evolve,
    mean_curve,
    plateau,
    time_grid,
)
from krylov_svd.errors import InvalidParameterError


def chain(a, b):
    return LanczosCoefficients(np.asarray(a, float), np.asarray(b, float))


class TestEvolve:
    def test_two_site_closed_form(self):
        # a = (1,1), b = (1): psi_0 = e^{-it} cos t, psi_1 = -i e^{-it} sin t
        t = np.linspace(0.0, 6.0, 61)
        psi = evolve(chain([1.0, 1.0], [1.0]), t)
        np.testing.assert_allclose(psi[:, 0], np.exp(-1j * t) * np.cos(t), atol=1e-12)
        np.testing.assert_allclose(psi[:, 1], -1j * np.exp(-1j * t) * np.sin(t), atol=1e-12)

    def test_single_site_phase(self):
        t = np.linspace(0.0, 10.0, 11)
        psi = evolve(chain([0.7], []), t)
        np.testing.assert_allclose(psi[:, 0], np.exp(-0.7j * t), atol=1e-14)

    def test_norm_conservation_long_chain(self, rng):
        a = rng.standard_normal(100)
        b = np.abs(rng.standard_normal(99)) + 0.1
        psi = evolve(chain(a, b), np.array([0.0, 10.0, 100.0]))
        norms = np.abs(psi) ** 2 @ np.ones(100)
        np.testing.assert_allclose(norms, 1.0, atol=1e-10)

    def test_matches_dense_matrix_exponential(self, rng):
        # brute-force oracle for K <= 8
        a = rng.standard_normal(8)
        b = np.abs(rng.standard_normal(7)) + 0.05
        c = chain(a, b)
        times = np.array([0.3, 1.7, 4.0])
        psi = evolve(c, times)
        e0 = np.zeros(8)
        e0[0] = 1.0
        for i, t in enumerate(times):
            ref = expm(-1j * c.jacobi() * t) @ e0
            np.testing.assert_allclose(psi[i], ref, atol=1e-9)

    def test_empty_chain_rejected(self):
        with pytest.raises(InvalidParameterError):
            evolve(chain([], []), np.array([0.0]))


class TestComplexity:
    def test_two_site_sin_squared(self):
        t = np.linspace(0.0, 6.0, 200)
        curve = complexity_of(chain([1.0, 1.0], [1.0]), t)
        np.testing.assert_allclose(curve.ks, np.sin(t) ** 2, atol=1e-12)

    def test_zero_at_time_zero(self, rng):
        a = rng.standard_normal(12)
        b = np.abs(rng.standard_normal(11)) + 0.1
        curve = complexity_of(chain(a, b), np.array([0.0, 1.0]))
        assert curve.ks[0] == pytest.approx(0.0, abs=1e-14)

    def test_single_site_stays_zero(self):
        curve = complexity_of(chain([2.3], []), np.linspace(0, 5, 20))
        np.testing.assert_allclose(curve.ks, 0.0, atol=1e-14)

    def test_bounds(self, rng):
        a = rng.standard_normal(9)
        b = np.abs(rng.standard_normal(8)) + 0.1
        curve = complexity_of(chain(a, b), np.linspace(0, 20, 100))
        assert np.all(curve.ks >= -1e-12)
        assert np.all(curve.ks <= curve.dim - 1 + 1e-12)


@settings(max_examples=25, deadline=None)
@given(st.floats(-5.0, 5.0), st.integers(2, 10), st.integers(0, 2**32 - 1))
def test_diagonal_shift_invariance(shift, k, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(k)
    b = np.abs(rng.standard_normal(k - 1)) + 0.1
    t = np.linspace(0.0, 8.0, 40)
    base = np.abs(evolve(chain(a, b), t)) ** 2
    shifted = np.abs(evolve(chain(a + shift, b), t)) ** 2
    assert np.abs(base - shifted).max() < 1e-10


class TestPlateau:
    def test_constant_curve(self):
        t = np.linspace(0, 10, 50)
        curve = ComplexityCurve(t, np.full(50, 3.2), dim=8)
        assert plateau(curve, (2.0, 9.0)) == pytest.approx(3.2)

    def test_poisson_limit(self):
        # late-time limit of (1/2)(1 - exp(-pi t^2 / 4))
        t = np.linspace(0, 60, 2000)
        ks = 0.5 * (1 - np.exp(-np.pi * t**2 / 4))
        curve = ComplexityCurve(t, ks, dim=2)
        assert plateau(curve, (20.0, 60.0)) == pytest.approx(0.5, abs=1e-9)

    def test_empty_window_rejected(self):
        curve = ComplexityCurve(np.linspace(0, 1, 10), np.zeros(10), dim=2)
        with pytest.raises(InvalidParameterError):
            plateau(curve, (5.0, 6.0))
        with pytest.raises(InvalidParameterError):
            plateau(curve, (0.9, 0.1))


class TestEhrenfest:
    def test_unit_hopping(self):
        assert ehrenfest_rate(chain([0.0, 0.0], [1.0])) == pytest.approx(2.0)

    def test_single_site_zero(self):
        assert ehrenfest_rate(chain([1.0], [])) == 0.0

    def test_finite_difference_oracle(self, rng):
        a = rng.standard_normal(10)
        b = np.abs(rng.standard_normal(9)) + 0.2
        c = chain(a, b)
        dt = 1e-3
        curve = complexity_of(c, np.array([0.0, dt, 2 * dt]))
        second = (curve.ks[2] - 2 * curve.ks[1] + curve.ks[0]) / dt**2
        assert second == pytest.approx(ehrenfest_rate(c), rel=1e-4)

    def test_early_time_quadratic_law(self, rng):
        a = rng.standard_normal(12)
        b = np.abs(rng.standard_normal(11)) + 0.3
        c = chain(a, b)
        b1 = c.b[0]
        t = np.linspace(1e-3, 0.1 / b1, 20)
        curve = complexity_of(c, t)
        np.testing.assert_allclose(curve.ks, b1**2 * t**2, rtol=2e-2)


class TestDetectPeak:
    def test_flags_clear_peak(self):
        t = np.linspace(0.01, 50, 500)
        ks = 0.5 + 0.3 * np.exp(-((t - 5) ** 2)) + 0.0 * t
        se = np.full_like(t, 0.01)
        det = detect_peak(t, ks, se, plateau_window=(30.0, 50.0))
        assert det.has_peak
        assert det.t_peak == pytest.approx(5.0, abs=0.2)
        assert det.significance > 10

    def test_monotone_curve_has_none(self):
        t = np.linspace(0.01, 50, 500)
        ks = 0.5 * (1 - np.exp(-np.pi * t**2 / 4))
        det = detect_peak(t, ks, np.full_like(t, 1e-4), plateau_window=(30.0, 50.0))
        assert not det.has_peak


class TestEnsembleReduction:
    def test_mean_and_stderr(self, rng):
        stack = rng.standard_normal((40, 7))
        mean, se = mean_curve(stack)
        np.testing.assert_allclose(mean, stack.mean(axis=0))
        np.testing.assert_allclose(se, stack.std(axis=0, ddof=1) / np.sqrt(40))

    def test_averaging_commutes_with_sampling(self, rng):
        # averaging per-realization curves on a shared grid equals the mean
        # curve by construction
        t = np.linspace(0, 5, 30)
        curves = []
        for _ in range(5):
            a = rng.standard_normal(6)
            b = np.abs(rng.standard_normal(5)) + 0.1
            curves.append(complexity_of(chain(a, b), t).ks)
        mean, _ = mean_curve(np.array(curves))
        np.testing.assert_allclose(mean, np.mean(curves, axis=0))


class TestTimeGrid:
    def test_linear_and_log(self):
        lin = time_grid(1.0, 10.0, 10, "linear")
        assert lin[0] == 1.0 and lin[-1] == 10.0
        log = time_grid(0.1, 100.0, 31, "log")
        np.testing.assert_allclose(np.diff(np.log(log)), np.diff(np.log(log))[0])

    def test_hybrid_monotone(self):
        g = time_grid(0.01, 1000.0, 400, "hybrid")
        assert len(g) == 400
        assert np.all(np.diff(g) > 0)
        assert g[0] == 0.01 and g[-1] == pytest.approx(1000.0)

    def test_rejects_bad_args(self):
        with pytest.raises(InvalidParameterError):
            time_grid(0.0, 1.0, 10)
        with pytest.raises(InvalidParameterError):
            time_grid(1.0, 1.0, 10)
