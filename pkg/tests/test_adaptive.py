import numpy as np
import pytest

from kautzid.adaptive import (
    DivergenceError,
    fir_identify,
    fir_ls,
    lms_identify,
    ls_optimal_weights,
    simulate_plant,
    white_noise,
)
from kautzid.kautz import build_kautz_bank, kautz_model_impulse_response, truncation_length
from kautzid.signals import ImpulseResponse, RationalTransferFunction

FS = 500.0


@pytest.fixture
def bank():
    return build_kautz_bank([0.8 + 0.4j, 0.3 + 0.7j])


class TestWhiteNoise:
    def test_reproducible(self):
        assert np.array_equal(white_noise(7, 1000), white_noise(7, 1000))

    def test_variance(self):
        x = white_noise(1, 1_000_000, variance=2.0)
        assert np.var(x) == pytest.approx(2.0, rel=0.01)

    def test_seeds_uncorrelated(self):
        a, b = white_noise(1, 100_000), white_noise(2, 100_000)
        assert abs(np.corrcoef(a, b)[0, 1]) < 0.01

    @pytest.mark.parametrize("n,var", [(0, 1.0), (10, 0.0)])
    def test_rejects(self, n, var):
        with pytest.raises(ValueError):
            white_noise(0, n, var)


class TestSimulatePlant:
    def test_fir_and_rational_agree(self):
        sys = RationalTransferFunction([1.0], [1.0, -0.5])
        h = ImpulseResponse(0.5 ** np.arange(60) * (np.arange(60) > 0) * 2.0, FS)
        u = white_noise(0, 200)
        np.testing.assert_allclose(simulate_plant(sys, u), simulate_plant(h, u), atol=1e-12)


class TestLeastSquares:
    def test_unit_selector(self, bank):
        B = bank.basis_impulse_responses(400)
        np.testing.assert_allclose(ls_optimal_weights(B, B[:, 0]), [1, 0, 0, 0], atol=1e-12)

    def test_orthogonal_target(self, bank):
        B = bank.basis_impulse_responses(400)
        r = np.random.default_rng(0).normal(size=400)
        # Gram-Schmidt residual of r against the basis
        r -= B @ (B.T @ r)
        r -= B @ (B.T @ r)
        np.testing.assert_allclose(ls_optimal_weights(B, r), 0.0, atol=1e-9)

    def test_equals_inner_products(self, bank):
        L = 2 * truncation_length(bank.poles.as_array(), 1e-12)
        B = bank.basis_impulse_responses(L)
        h = np.random.default_rng(1).normal(size=L) * 0.99 ** np.arange(L)
        np.testing.assert_allclose(ls_optimal_weights(B, h), B.T @ h, atol=1e-9)

    def test_length_mismatch(self, bank):
        with pytest.raises(ValueError):
            ls_optimal_weights(bank.basis_impulse_responses(10), np.ones(11))

    def test_nested_residual_non_increasing(self):
        rng = np.random.default_rng(5)
        poles = [0.9 * np.exp(1j * a) for a in rng.uniform(0.2, 2.8, 6)]
        h = rng.normal(size=300) * 0.98 ** np.arange(300)
        res = []
        for n in range(1, 7):
            B = build_kautz_bank(poles[:n]).basis_impulse_responses(300)
            w = ls_optimal_weights(B, h)
            res.append(np.sum((h - B @ w) ** 2))
        assert np.all(np.diff(res) <= 1e-12)


class TestLms:
    def test_zero_plant(self, bank):
        zero = ImpulseResponse(np.zeros(10), FS)
        run = lms_identify(bank, zero, steps=2000)
        assert not np.any(run.weights)
        assert not np.any(run.error_history)

    def test_recovers_weights_in_span(self, bank):
        w_star = np.array([0.7, -0.3, 0.2, 1.1])
        L = 2 * truncation_length(bank.poles.as_array(), 1e-12)
        plant = kautz_model_impulse_response(bank, w_star, L, FS)
        run = lms_identify(bank, plant, seed=3)
        assert run.converged
        np.testing.assert_allclose(run.weights, w_star, rtol=0.01, atol=0.01 * np.abs(w_star).min())
        assert len(run.error_history) == run.steps

    def test_does_not_touch_callers_bank(self, bank):
        bank.step(1.0)
        state = bank.state.copy()
        lms_identify(bank, ImpulseResponse([0.0, 1.0], FS), steps=100)
        assert np.array_equal(bank.state, state)

    def test_divergence_detected(self, bank):
        plant = ImpulseResponse([0.0, 1.0, 0.5], FS)
        with pytest.raises(DivergenceError, match="mu"):
            lms_identify(bank, plant, mu=50.0, steps=5000)

    def test_rejects_bad_step_size(self, bank):
        with pytest.raises(ValueError):
            lms_identify(bank, ImpulseResponse([1.0], FS), mu=-1.0, steps=10)

    def test_decoupled_weights(self):
        # zeroing one channel's target component leaves the others unchanged
        bank = build_kautz_bank([0.8 + 0.4j, 0.3 + 0.7j])
        L = 2 * truncation_length(bank.poles.as_array(), 1e-12)
        w_full = np.array([0.7, -0.3, 0.2, 1.1])
        w_cut = w_full.copy()
        w_cut[2] = 0.0
        a = lms_identify(bank, kautz_model_impulse_response(bank, w_full, L, FS), seed=1)
        b = lms_identify(bank, kautz_model_impulse_response(bank, w_cut, L, FS), seed=1)
        keep = [0, 1, 3]
        np.testing.assert_allclose(a.weights[keep], b.weights[keep], rtol=0.02)
        assert abs(b.weights[2]) < 0.02

    def test_error_power_reaches_ls_residual(self):
        bank = build_kautz_bank([0.8 + 0.45j])
        # plant pole slightly off the bank pole: nonzero LS residual
        sys = RationalTransferFunction([0.1, 0.0], [1.0, -2 * 0.81, 0.81**2 + 0.44**2])
        L = 2000
        h = ImpulseResponse(sys.filter(np.r_[1.0, np.zeros(L - 1)]), FS)
        B = bank.basis_impulse_responses(L)
        w = ls_optimal_weights(B, h)
        floor = np.sum((h.samples - B @ w) ** 2)
        run = lms_identify(bank, sys, seed=2)
        tail = run.error_history[run.steps // 2:]
        assert np.mean(tail**2) <= 1.05 * floor


class TestFir:
    def test_pure_delay(self):
        plant = RationalTransferFunction([1.0], [1.0, 0.0, 0.0, 0.0])
        model = fir_identify(plant, order=5, seed=0)
        np.testing.assert_allclose(model.coefficients, [0, 0, 0, 1, 0, 0], atol=1e-3)

    def test_gain(self):
        model = fir_identify(ImpulseResponse([2.5], FS), order=0, seed=1)
        assert model.coefficients == pytest.approx([2.5], abs=1e-3)

    def test_ls_fir_is_truncation(self):
        h = np.arange(10.0)
        np.testing.assert_array_equal(fir_ls(h, 3).coefficients, [0, 1, 2, 3])
        np.testing.assert_array_equal(fir_ls(h, 12).coefficients[10:], 0.0)

    def test_impulse_response_padding(self):
        model = fir_ls(np.ones(3), 2)
        np.testing.assert_array_equal(model.impulse_response(5).samples, [1, 1, 1, 0, 0])
