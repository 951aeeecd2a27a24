import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kautzid.signals import (
    FrequencyResponse,
    ImpulseResponse,
    RationalTransferFunction,
    frf_to_impulse_response,
    impulse_response_of,
    impulse_response_to_frf,
    inner_product,
    normalized_error,
)
from kautzid.systems import SdofParams, sdof_impulse_response, sdof_transfer_function

FS = 500.0


def ir(x, fs=FS):
    return ImpulseResponse(x, fs)


class TestTypes:
    def test_impulse_response_is_immutable(self):
        h = ir([1.0, 2.0])
        with pytest.raises(ValueError):
            h.samples[0] = 3.0

    @pytest.mark.parametrize("samples,fs", [([], 1.0), ([1.0, np.nan], 1.0), ([1.0], 0.0)])
    def test_impulse_response_rejects(self, samples, fs):
        with pytest.raises(ValueError):
            ImpulseResponse(samples, fs)

    def test_frequency_response_rejects_non_increasing(self):
        with pytest.raises(ValueError):
            FrequencyResponse([0.0, 2.0, 1.0], [1, 1, 1])
        with pytest.raises(ValueError):
            FrequencyResponse([0.0, 1.0], [1.0])

    def test_transfer_function_rejects_improper(self):
        with pytest.raises(ValueError):
            RationalTransferFunction([1.0, 0.0, 0.0], [1.0, 0.5])


class TestInnerProduct:
    def test_unit_impulse(self):
        assert inner_product(ir([1, 0, 0]), ir([1, 0, 0])) == 1.0

    def test_disjoint_support(self):
        assert inner_product(ir([1, 0]), ir([0, 1])) == 0.0

    def test_hand_sum(self):
        assert inner_product(ir([0.5, 0.25]), ir([0.5, 0.25])) == pytest.approx(0.3125)

    def test_shorter_length_wins(self):
        assert inner_product(ir([1.0, 5.0]), ir([2.0])) == 2.0

    def test_rejects_rate_mismatch(self):
        with pytest.raises(ValueError, match="sample rates"):
            inner_product(ir([1.0], 500.0), ir([1.0], 1000.0))

    @given(
        arrays(float, 16, elements=st.floats(-10, 10)),
        arrays(float, 16, elements=st.floats(-10, 10)),
    )
    def test_cauchy_schwarz(self, a, b):
        a, b = ir(a), ir(b)
        lhs = inner_product(a, b) ** 2
        assert lhs <= inner_product(a, a) * inner_product(b, b) * (1 + 1e-12) + 1e-12


class TestNormalizedError:
    def test_perfect_model(self):
        h = ir([0.0, 1.0, -0.5, 0.25])
        assert normalized_error(h, h) == 0.0

    def test_null_model(self):
        h = ir([0.0, 1.0, -0.5, 0.25])
        assert normalized_error(h, ir(np.zeros(4))) == 1.0

    def test_zero_reference_rejected(self):
        with pytest.raises(ValueError):
            normalized_error(ir([0.0, 0.0]), ir([1.0, 0.0]))

    def test_zero_padding_of_shorter(self):
        # missing tail counts as error
        assert normalized_error([1.0, 1.0], [1.0]) == pytest.approx(0.5)

    def test_explicit_window(self):
        assert normalized_error([1.0, 0.0, 7.0], [1.0, 0.0, 0.0], length=2) == 0.0

    @settings(max_examples=50)
    @given(
        arrays(float, 8, elements=st.floats(-5, 5)).filter(lambda x: np.dot(x, x) > 1e-6),
        st.floats(-3, 3),
    )
    def test_scaled_copy_identity(self, h, c):
        assert normalized_error(h, c * h) == pytest.approx((1 - c) ** 2, rel=1e-9, abs=1e-12)


class TestFrfToImpulse:
    def test_flat_spectrum_gives_impulse(self):
        frf = FrequencyResponse(np.linspace(0, 250, 201), np.ones(201))
        h = frf_to_impulse_response(frf, 0.0)
        assert h.sample_rate_hz == 500.0
        assert len(h) == 400
        assert h.samples[0] == pytest.approx(1.0, abs=1e-9)
        assert np.max(np.abs(h.samples[1:])) < 1e-9

    def test_lowcut_removes_single_line(self):
        f = np.linspace(0, 250, 251)
        values = np.zeros(251, dtype=complex)
        values[5] = 1.0 + 0.5j  # 5 Hz line
        frf = FrequencyResponse(f, values)
        before = frf_to_impulse_response(frf, 0.0).energy
        after = frf_to_impulse_response(frf, 10.0).energy
        assert before > 0
        assert after < 1e-12 * before

    def test_round_trip_reproduces_lowcut_spectrum(self):
        rng = np.random.default_rng(3)
        n = 129
        f = np.linspace(0, 250, n)
        values = rng.normal(size=n) + 1j * rng.normal(size=n)
        values[0] = values[0].real
        values[-1] = values[-1].real
        frf = FrequencyResponse(f, values)
        back = impulse_response_to_frf(frf_to_impulse_response(frf, 12.0))
        expected = np.where(f < 12.0, 0.0, values)
        np.testing.assert_allclose(back.values, expected, atol=1e-9)
        np.testing.assert_allclose(back.frequencies_hz, f)

    def test_sdof_frf_matches_recursion(self):
        # 3184-line FRF of the discrete oscillator; oracle: direct recursion
        params = SdofParams(50.0, 0.03)
        sys = sdof_transfer_function(params, FS)
        f = np.linspace(0, FS / 2, 3184)
        h = frf_to_impulse_response(sys.frequency_response(f, FS), 0.0)
        ref = impulse_response_of(sys, len(h), FS)
        rel = np.sum((h.samples - ref.samples) ** 2) / ref.energy
        assert rel < 0.01

    def test_nonuniform_grid(self):
        f = np.array([0.0, 10.0, 30.0, 100.0, 250.0])
        frf = FrequencyResponse(f, np.ones(5))
        with pytest.raises(ValueError, match="resampling"):
            frf_to_impulse_response(frf, 0.0, resample=False)
        h = frf_to_impulse_response(frf, 0.0)
        assert h.samples[0] == pytest.approx(1.0)

    def test_grid_not_starting_at_zero_is_resampled(self):
        f = np.linspace(0.5, 250, 500)
        frf = FrequencyResponse(f, np.ones(500))
        h = frf_to_impulse_response(frf, 0.0)
        assert h.samples[0] == pytest.approx(1.0)

    def test_lowcut_out_of_range(self):
        frf = FrequencyResponse([0.0, 250.0], [1.0, 1.0])
        with pytest.raises(ValueError):
            frf_to_impulse_response(frf, 250.0)


class TestImpulseResponseOf:
    def test_unit_system(self):
        h = impulse_response_of(RationalTransferFunction([1.0], [1.0]), 5, FS)
        np.testing.assert_array_equal(h.samples, [1, 0, 0, 0, 0])

    def test_delayed_geometric(self):
        h = impulse_response_of(RationalTransferFunction([1.0], [1.0, -0.5]), 8, FS)
        expected = np.r_[0.0, 0.5 ** np.arange(7)]
        np.testing.assert_allclose(h.samples, expected, rtol=0, atol=1e-15)

    def test_unstable_rejected(self):
        sys = RationalTransferFunction([1.0], [1.0, -1.5])
        with pytest.raises(ValueError, match="unstable"):
            impulse_response_of(sys, 4, FS)
        assert len(impulse_response_of(sys, 4, FS, require_stable=False)) == 4

    def test_sdof_matches_analytic(self):
        params = SdofParams(50.0, 0.03)
        rec = impulse_response_of(sdof_transfer_function(params, FS), 500, FS)
        ana = sdof_impulse_response(params, FS, 500)
        np.testing.assert_allclose(rec.samples, ana.samples, atol=1e-12 * np.max(np.abs(ana.samples)))
