"""Sampled signal containers and the basic operations shared by all modules.

Impulse responses, frequency response functions and rational transfer
functions are immutable value objects. The functions here are pure.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

__all__ = [
    "ImpulseResponse",
    "FrequencyResponse",
    "RationalTransferFunction",
    "inner_product",
    "normalized_error",
    "frf_to_impulse_response",
    "impulse_response_to_frf",
    "impulse_response_of",
]


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype).ravel()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ImpulseResponse:
    """Real impulse response ``h(k)`` sampled at ``sample_rate_hz``."""

    samples: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        samples = _frozen(self.samples)
        if samples.size == 0:
            raise ValueError("impulse response must contain at least one sample")
        if not np.all(np.isfinite(samples)):
            raise ValueError("impulse response samples must be finite")
        if not self.sample_rate_hz > 0:
            raise ValueError(f"sample rate must be positive, got {self.sample_rate_hz}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))

    def __len__(self) -> int:
        return self.samples.size

    def __eq__(self, other):
        if not isinstance(other, ImpulseResponse):
            return NotImplemented
        return self.sample_rate_hz == other.sample_rate_hz and np.array_equal(
            self.samples, other.samples
        )

    @property
    def energy(self) -> float:
        return float(np.dot(self.samples, self.samples))

    def resized(self, length: int) -> "ImpulseResponse":
        """Truncate or zero-pad to ``length`` samples."""
        out = np.zeros(length)
        n = min(length, len(self))
        out[:n] = self.samples[:n]
        return ImpulseResponse(out, self.sample_rate_hz)


@dataclass(frozen=True, eq=False)
class FrequencyResponse:
    """Complex frequency response sampled on a strictly increasing grid."""

    frequencies_hz: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        f = _frozen(self.frequencies_hz)
        v = _frozen(self.values, dtype=complex)
        if f.size != v.size:
            raise ValueError(f"{f.size} frequencies but {v.size} values")
        if f.size < 2:
            raise ValueError("a frequency response needs at least two lines")
        if f[0] < 0:
            raise ValueError("frequencies must be non-negative")
        if np.any(np.diff(f) <= 0):
            raise ValueError("frequencies must be strictly increasing")
        object.__setattr__(self, "frequencies_hz", f)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.frequencies_hz.size

    def is_uniform_from_zero(self, rtol: float = 1e-9) -> bool:
        f = self.frequencies_hz
        df = f[-1] / (f.size - 1)
        return abs(f[0]) <= rtol * f[-1] and np.allclose(np.diff(f), df, rtol=rtol, atol=0)

    def resampled(self, n_lines: int | None = None) -> "FrequencyResponse":
        """Linear interpolation of real and imaginary parts onto ``0..f_max``.

        Values below the first measured line are held constant.
        """
        n_lines = len(self) if n_lines is None else n_lines
        grid = np.linspace(0.0, self.frequencies_hz[-1], n_lines)
        re = np.interp(grid, self.frequencies_hz, self.values.real)
        im = np.interp(grid, self.frequencies_hz, self.values.imag)
        return FrequencyResponse(grid, re + 1j * im)


@dataclass(frozen=True, eq=False)
class RationalTransferFunction:
    """``H(z) = B(z) / A(z)`` with coefficients in descending powers of z."""

    numerator: np.ndarray
    denominator: np.ndarray

    def __post_init__(self):
        b = np.trim_zeros(_frozen(self.numerator), "f")
        a = np.trim_zeros(_frozen(self.denominator), "f")
        if a.size == 0:
            raise ValueError("denominator must have a nonzero leading coefficient")
        if b.size == 0:
            b = np.zeros(1)
        if b.size > a.size:
            raise ValueError("improper transfer function (numerator degree exceeds denominator)")
        b.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "numerator", b)
        object.__setattr__(self, "denominator", a)

    @property
    def poles(self) -> np.ndarray:
        return np.roots(self.denominator)

    def is_stable(self) -> bool:
        return bool(np.all(np.abs(self.poles) < 1.0))

    def delay_coefficients(self) -> tuple[np.ndarray, np.ndarray]:
        """Coefficients in ascending powers of z^-1, as used by ``lfilter``."""
        b = np.zeros(self.denominator.size)
        b[b.size - self.numerator.size:] = self.numerator
        return b, np.array(self.denominator)

    def filter(self, u: np.ndarray) -> np.ndarray:
        b, a = self.delay_coefficients()
        return lfilter(b, a, u)

    def frequency_response(self, frequencies_hz, sample_rate_hz: float) -> FrequencyResponse:
        z = np.exp(2j * np.pi * np.asarray(frequencies_hz, dtype=float) / sample_rate_hz)
        return FrequencyResponse(
            frequencies_hz, np.polyval(self.numerator, z) / np.polyval(self.denominator, z)
        )


def inner_product(a: ImpulseResponse, b: ImpulseResponse) -> float:
    """Sum of ``a(k) b(k)`` over the shorter of the two responses."""
    if a.sample_rate_hz != b.sample_rate_hz:
        raise ValueError(
            f"sample rates differ: {a.sample_rate_hz} Hz vs {b.sample_rate_hz} Hz"
        )
    n = min(len(a), len(b))
    return float(np.dot(a.samples[:n], b.samples[:n]))


def normalized_error(h, h_hat, length: int | None = None) -> float:
    """Normalized approximation error ``sum((h - h_hat)^2) / sum(h^2)``.

    Both responses are truncated or zero-padded to ``length`` samples, which
    defaults to the longer of the two. Plain arrays are accepted as well as
    :class:`ImpulseResponse` objects.
    """
    h = h.samples if isinstance(h, ImpulseResponse) else np.asarray(h, dtype=float)
    h_hat = h_hat.samples if isinstance(h_hat, ImpulseResponse) else np.asarray(h_hat, dtype=float)
    if length is None:
        length = max(h.size, h_hat.size)
    ref = np.zeros(length)
    ref[: min(length, h.size)] = h[:length]
    est = np.zeros(length)
    est[: min(length, h_hat.size)] = h_hat[:length]
    energy = float(np.dot(ref, ref))
    if energy == 0.0:
        raise ValueError("reference response has zero energy over the error window")
    diff = ref - est
    return float(np.dot(diff, diff)) / energy


def frf_to_impulse_response(
    frf: FrequencyResponse, lowcut_hz: float = 0.0, resample: bool = True
) -> ImpulseResponse:
    """Convert a one-sided FRF on ``0..f_max`` into a real impulse response.

    Lines strictly below ``lowcut_hz`` are zeroed (brick wall), the
    conjugate-symmetric spectrum is assembled and inverted with a real
    inverse FFT. The last line is taken as the Nyquist frequency, so the
    result has ``2 * (n_lines - 1)`` samples at ``2 * f_max`` Hz. Imaginary
    parts at DC and Nyquist are discarded.
    """
    f_max = frf.frequencies_hz[-1]
    if not 0 <= lowcut_hz < f_max:
        raise ValueError(f"lowcut {lowcut_hz} Hz outside [0, {f_max}) Hz")
    if not frf.is_uniform_from_zero():
        if not resample:
            raise ValueError("FRF grid is not uniform from 0 Hz and resampling is disabled")
        frf = frf.resampled()
    spectrum = np.array(frf.values)
    spectrum[frf.frequencies_hz < lowcut_hz] = 0.0
    n = 2 * (len(frf) - 1)
    return ImpulseResponse(np.fft.irfft(spectrum, n=n), 2.0 * f_max)


def impulse_response_to_frf(ir: ImpulseResponse) -> FrequencyResponse:
    """One-sided DFT of an impulse response (inverse of the above for even lengths)."""
    n = len(ir)
    values = np.fft.rfft(ir.samples)
    return FrequencyResponse(np.fft.rfftfreq(n, d=1.0 / ir.sample_rate_hz), values)


def impulse_response_of(
    sys: RationalTransferFunction,
    length: int,
    sample_rate_hz: float,
    require_stable: bool = True,
) -> ImpulseResponse:
    """First ``length`` samples of the response of ``sys`` to a unit impulse."""
    if length < 1:
        raise ValueError("length must be at least 1")
    if require_stable and not sys.is_stable():
        worst = np.max(np.abs(sys.poles))
        raise ValueError(f"unstable denominator: largest pole magnitude {worst:.6g}")
    u = np.zeros(length)
    u[0] = 1.0
    return ImpulseResponse(sys.filter(u), sample_rate_hz)
