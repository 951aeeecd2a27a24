"""Test plants: SDOF oscillators with uncertain parameters and a synthetic
multi-mode ensemble.

Continuous-time oscillators are discretized by impulse invariance, i.e. the
discrete impulse response is ``t_s`` times the sampled continuous one and
each s-plane pole ``s`` maps to ``exp(s t_s)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kautz import PolePair
from .prony import TrainingEnsemble
from .signals import ImpulseResponse, RationalTransferFunction

__all__ = [
    "SdofParams",
    "UncertaintySpec",
    "MdofProxySpec",
    "REFERENCE_TRAINING",
    "REFERENCE_BEST_CASE",
    "REFERENCE_BAD_CASE",
    "sdof_discrete_poles",
    "sdof_transfer_function",
    "sdof_impulse_response",
    "sample_systems",
    "mdof_proxy_ensemble",
]

MAX_REDRAWS = 100


@dataclass(frozen=True)
class SdofParams:
    f0_hz: float
    theta: float
    mass_kg: float = 1.0

    def __post_init__(self):
        if not self.f0_hz > 0:
            raise ValueError(f"resonance frequency must be positive, got {self.f0_hz}")
        if not 0 < self.theta < 1:
            raise ValueError(f"damping ratio must lie in (0, 1), got {self.theta}")
        if not self.mass_kg > 0:
            raise ValueError(f"mass must be positive, got {self.mass_kg}")

    @property
    def omega0(self) -> float:
        return 2.0 * np.pi * self.f0_hz

    @property
    def omega_d(self) -> float:
        return self.omega0 * np.sqrt(1.0 - self.theta**2)

    @property
    def stiffness(self) -> float:
        return self.mass_kg * self.omega0**2


@dataclass(frozen=True)
class UncertaintySpec:
    """Independent normal parameters with standard deviation ``cov * mean``."""

    mean_f0_hz: float = 50.0
    mean_theta: float = 0.03
    cov: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.cov < 0:
            raise ValueError("coefficient of variation must be non-negative")
        if not (self.mean_f0_hz > 0 and self.mean_theta > 0):
            raise ValueError("means must be positive")


@dataclass(frozen=True)
class MdofProxySpec:
    """Synthetic stand-in for a set of measured multi-mode structures.

    Variant 0 is the baseline. Variant ``v`` places an added mass at
    position ``v / variant_count`` along a uniform beam-like structure; mode
    ``m`` then drops in frequency by ``max_shift[m]`` times its squared,
    normalised mode shape ``sin(pi m x + phase_m)^2`` at that position.
    Modal amplitudes are redrawn per variant with fixed signs.
    """

    frequencies_hz: tuple[float, ...] = (16.1, 41.0, 72.5, 108.0, 162.3, 205.0)
    damping: tuple[float, ...] = (0.02, 0.015, 0.015, 0.012, 0.01, 0.01)
    mass_perturbation_fraction: float = 0.015
    variant_count: int = 14
    max_shift: tuple[float, ...] = (0.14, 0.023, 0.023, 0.023, 0.023, 0.023)
    amplitude_range: tuple[float, float] = (0.5, 1.5)
    length: int = 1024

    def __post_init__(self):
        f = np.asarray(self.frequencies_hz, dtype=float)
        if f.size == 0 or np.any(np.diff(f) <= 0) or f[0] <= 0:
            raise ValueError("modal frequencies must be positive and strictly increasing")
        if len(self.damping) != f.size or len(self.max_shift) != f.size:
            raise ValueError("frequencies, damping and max_shift must have equal lengths")
        if self.variant_count < 1:
            raise ValueError("variant_count must be at least 1")


# fixed training set with an in-spread and an outlying test oscillator
REFERENCE_TRAINING = (
    SdofParams(53.5, 0.031),
    SdofParams(50.7, 0.031),
    SdofParams(50.5, 0.030),
    SdofParams(54.0, 0.030),
    SdofParams(48.0, 0.028),
)
REFERENCE_BEST_CASE = SdofParams(50.0, 0.030)
REFERENCE_BAD_CASE = SdofParams(57.5, 0.030)


def _check_nyquist(params: SdofParams, sample_rate_hz: float):
    if not params.f0_hz < sample_rate_hz / 2:
        raise ValueError(
            f"resonance {params.f0_hz} Hz is not below Nyquist ({sample_rate_hz / 2} Hz)"
        )


def sdof_discrete_poles(params: SdofParams, sample_rate_hz: float) -> PolePair:
    """Upper discrete pole ``exp(omega0 t_s (-theta + j sqrt(1 - theta^2)))``."""
    _check_nyquist(params, sample_rate_hz)
    ts = 1.0 / sample_rate_hz
    s = params.omega0 * complex(-params.theta, np.sqrt(1.0 - params.theta**2))
    return PolePair(complex(np.exp(s * ts)))


def sdof_transfer_function(params: SdofParams, sample_rate_hz: float) -> RationalTransferFunction:
    """Impulse-invariant discrete model; its impulse response matches :func:`sdof_impulse_response`."""
    p = sdof_discrete_poles(params, sample_rate_hz).pole
    ts = 1.0 / sample_rate_hz
    gain = ts * abs(p) * np.sin(np.angle(p)) / (params.mass_kg * params.omega_d)
    return RationalTransferFunction([gain, 0.0], [1.0, -2.0 * p.real, abs(p) ** 2])


def sdof_impulse_response(params: SdofParams, sample_rate_hz: float, length: int) -> ImpulseResponse:
    """``t_s / (m omega_d) exp(-theta omega0 t) sin(omega_d t)`` at ``t = k t_s``."""
    _check_nyquist(params, sample_rate_hz)
    ts = 1.0 / sample_rate_hz
    t = np.arange(length) * ts
    h = ts / (params.mass_kg * params.omega_d) * np.exp(-params.theta * params.omega0 * t) * np.sin(
        params.omega_d * t
    )
    return ImpulseResponse(h, sample_rate_hz)


def sample_systems(spec: UncertaintySpec, count: int) -> list[SdofParams]:
    """Draw ``count`` oscillators; invalid draws (e.g. negative damping) are redrawn."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(spec.seed)
    sd_f = spec.cov * spec.mean_f0_hz
    sd_t = spec.cov * spec.mean_theta
    out = []
    for _ in range(count):
        for _attempt in range(MAX_REDRAWS):
            f0 = rng.normal(spec.mean_f0_hz, sd_f)
            theta = rng.normal(spec.mean_theta, sd_t)
            if f0 > 0 and 0 < theta < 1:
                out.append(SdofParams(float(f0), float(theta)))
                break
        else:
            raise RuntimeError(f"no valid system after {MAX_REDRAWS} draws; check the uncertainty spec")
    return out


def _modal_response(freqs, damping, amps, sample_rate_hz, length):
    t = np.arange(length) / sample_rate_hz
    h = np.zeros(length)
    for f, z, a in zip(freqs, damping, amps):
        w0 = 2.0 * np.pi * f
        wd = w0 * np.sqrt(1.0 - z**2)
        # amplitude normalised per mode so each contributes comparable energy
        h += a * w0 / (sample_rate_hz * wd) * np.exp(-z * w0 * t) * np.sin(wd * t)
    return h


def mdof_proxy_ensemble(
    spec: MdofProxySpec, sample_rate_hz: float = 500.0, seed: int = 0
) -> TrainingEnsemble:
    """Generate ``spec.variant_count`` multi-mode impulse responses.

    Deterministic in ``seed``; variant ``v`` draws its amplitudes from its
    own stream ``(seed, v)``. If the shifted modes would come within 1% of
    each other, random shift fractions are drawn instead.
    """
    f = np.asarray(spec.frequencies_hz, dtype=float)
    if f[-1] >= sample_rate_hz / 2:
        raise ValueError("all modal frequencies must lie below Nyquist")
    rng = np.random.default_rng([seed, 0xBA5E])
    signs = rng.choice([-1.0, 1.0], f.size)
    phases = rng.uniform(0.0, np.pi, f.size)
    modes = np.arange(1, f.size + 1)
    # mass positions evenly spread along the structure, one per variant
    positions = np.arange(1, spec.variant_count) / spec.variant_count
    shape2 = np.sin(np.pi * np.outer(positions, modes) + phases) ** 2
    if positions.size:
        shape2 /= shape2.max(axis=0)
    lo, hi = spec.amplitude_range
    responses = []
    for v in range(spec.variant_count):
        if v == 0:
            freqs, amps = f, signs.copy()
        else:
            rng = np.random.default_rng([seed, v])
            # frequency drop scales with the squared mode shape at the mass
            freqs = f * (1.0 - shape2[v - 1] * np.asarray(spec.max_shift))
            for _attempt in range(MAX_REDRAWS):
                if np.all(np.diff(freqs) > 0.01 * freqs[:-1]):
                    break
                freqs = f * (1.0 - rng.uniform(0.0, 1.0, f.size) * np.asarray(spec.max_shift))
            else:
                raise RuntimeError("could not draw non-colliding modal frequencies")
            amps = signs * rng.uniform(lo, hi, f.size)
        h = _modal_response(freqs, spec.damping, amps, sample_rate_hz, spec.length)
        responses.append(ImpulseResponse(h, sample_rate_hz))
    return TrainingEnsemble(tuple(responses))
