import numpy as np
import pytest

from kautzid.prony import TrainingEnsemble, modified_prony
from kautzid.systems import (
    REFERENCE_TRAINING,
    MdofProxySpec,
    SdofParams,
    UncertaintySpec,
    mdof_proxy_ensemble,
    sample_systems,
    sdof_discrete_poles,
    sdof_impulse_response,
)

FS = 500.0


class TestDiscretePoles:
    def test_reference_value(self):
        p = sdof_discrete_poles(SdofParams(50.0, 0.03), FS).pole
        # frozen from exp(0.2 pi (-0.03 + 0.99955j))
        assert p.real == pytest.approx(0.7940733027, abs=1e-9)
        assert p.imag == pytest.approx(0.5765849836, abs=1e-9)
        # commonly quoted three-place value
        assert abs(p - (0.7939 + 0.5768j)) < 5e-4

    def test_undamped_limit(self):
        p = sdof_discrete_poles(SdofParams(FS / 4, 1e-9), FS).pole
        assert abs(p) == pytest.approx(1.0, abs=1e-8)
        assert np.angle(p) == pytest.approx(np.pi / 2, abs=1e-8)

    def test_reference_training_angle(self):
        p = sdof_discrete_poles(REFERENCE_TRAINING[0], FS).pole
        assert np.angle(p) == pytest.approx(2 * np.pi * 53.5 / FS * np.sqrt(1 - 0.031**2), rel=1e-12)

    @pytest.mark.parametrize("theta", [1.0, 1.5, 0.0, -0.1])
    def test_rejects_non_oscillatory(self, theta):
        with pytest.raises(ValueError):
            SdofParams(50.0, theta)

    def test_rejects_above_nyquist(self):
        with pytest.raises(ValueError, match="Nyquist"):
            sdof_discrete_poles(SdofParams(260.0, 0.03), FS)

    def test_prony_round_trip(self):
        params = SdofParams(53.5, 0.031)
        h = sdof_impulse_response(params, FS, 500)
        res = modified_prony(TrainingEnsemble((h,)), 2)
        upper = res.raw_roots[np.argmax(res.raw_roots.imag)]
        assert abs(upper - sdof_discrete_poles(params, FS).pole) < 1e-6


class TestSampling:
    def test_degenerate(self):
        systems = sample_systems(UncertaintySpec(cov=0.0, seed=3), 4)
        assert all(s == SdofParams(50.0, 0.03) for s in systems)

    def test_statistics(self):
        systems = sample_systems(UncertaintySpec(seed=11), 100_000)
        f = np.array([s.f0_hz for s in systems])
        assert f.mean() == pytest.approx(50.0, rel=0.005)
        assert f.std() == pytest.approx(2.5, rel=0.05)

    def test_small_set_spread(self):
        systems = sample_systems(UncertaintySpec(seed=0), 5)
        f = [s.f0_hz for s in systems]
        theta = [s.theta for s in systems]
        assert 40 < min(f) and max(f) < 60
        assert 0.024 < min(theta) and max(theta) < 0.036

    def test_deterministic(self):
        assert sample_systems(UncertaintySpec(seed=5), 10) == sample_systems(UncertaintySpec(seed=5), 10)

    def test_invalid_draws_are_redrawn(self):
        systems = sample_systems(UncertaintySpec(mean_theta=0.01, cov=1.0, seed=1), 200)
        assert all(0 < s.theta < 1 for s in systems)


class TestSdofResponse:
    params = SdofParams(50.0, 0.03)

    def test_starts_at_zero(self):
        assert sdof_impulse_response(self.params, FS, 10).samples[0] == 0.0

    def test_envelope(self):
        h = sdof_impulse_response(self.params, FS, 500).samples
        # local maxima of |h|
        a = np.abs(h)
        peaks = np.nonzero((a[1:-1] > a[:-2]) & (a[1:-1] >= a[2:]))[0] + 1
        t = peaks / FS
        slope = np.polyfit(t, np.log(a[peaks]), 1)[0]
        assert -slope == pytest.approx(self.params.theta * self.params.omega0, rel=0.02)

    def test_zero_spacing(self):
        h = sdof_impulse_response(self.params, FS, 500).samples
        crossings = np.nonzero(np.diff(np.signbit(h[1:])))[0]
        spacing = np.mean(np.diff(crossings))
        expected = FS / (2 * self.params.f0_hz * np.sqrt(1 - self.params.theta**2))
        assert spacing == pytest.approx(expected, rel=0.02)


class TestMdofProxy:
    def test_shape_and_determinism(self):
        spec = MdofProxySpec()
        a = mdof_proxy_ensemble(spec, FS, seed=7)
        b = mdof_proxy_ensemble(spec, FS, seed=7)
        assert len(a) == 14
        assert all(np.array_equal(x.samples, y.samples) for x, y in zip(a, b))
        c = mdof_proxy_ensemble(spec, FS, seed=8)
        assert not np.array_equal(a[3].samples, c[3].samples)

    def test_baseline_variant(self):
        spec = MdofProxySpec(length=2048)
        ens = mdof_proxy_ensemble(spec, FS, seed=1)
        spectrum = np.abs(np.fft.rfft(ens[0].samples))
        freqs = np.fft.rfftfreq(2048, 1 / FS)
        for f in spec.frequencies_hz:
            band = (freqs > f * 0.97) & (freqs < f * 1.03)
            assert spectrum[band].max() > 3 * np.median(spectrum)

    def test_first_mode_shift_bounded(self):
        spec = MdofProxySpec(length=4096)
        ens = mdof_proxy_ensemble(spec, FS, seed=2)
        freqs = np.fft.rfftfreq(4096, 1 / FS)
        band = (freqs > 10) & (freqs < 25)
        peaks = []
        for h in ens:
            spectrum = np.abs(np.fft.rfft(h.samples))
            peaks.append(freqs[band][np.argmax(spectrum[band])])
        shifts = 1 - np.array(peaks) / peaks[0]
        assert shifts.max() <= 0.14 + 2 * (freqs[1] / 16.1)
        assert shifts.max() > 0.05

    def test_all_poles_stable(self):
        ens = mdof_proxy_ensemble(MdofProxySpec(), FS, seed=0)
        res = modified_prony(ens.subset([0]), 12)
        assert np.all(np.abs(res.raw_roots) < 1)

    def test_invalid_spec(self):
        with pytest.raises(ValueError):
            MdofProxySpec(frequencies_hz=(20.0, 10.0), damping=(0.01, 0.01), max_shift=(0.1, 0.1))
        with pytest.raises(ValueError):
            mdof_proxy_ensemble(MdofProxySpec(), sample_rate_hz=300.0)
