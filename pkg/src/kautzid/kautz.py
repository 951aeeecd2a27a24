"""Kautz orthonormal filter bank with fixed complex pole pairs.

The bank is a cascade of second-order sections. Stage ``n`` filters the
output of stage ``n-1`` with

    H_1(z) = z^2 / ((z - p_1)(z - p_1*))
    H_n(z) = (1 - p_{n-1} z)(1 - p_{n-1}* z) / ((z - p_n)(z - p_n*))

and two taps ``V_1(z) = (1 - z)/z`` and ``V_2(z) = (1 + z)/z`` on the stage
output produce the basis signals ``psi_n^(1)`` and ``psi_n^(2)``, scaled to
unit energy. Basis outputs are ordered ``(psi_1^(1), psi_1^(2), psi_2^(1), ...)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
from scipy.signal import lfilter

from .signals import ImpulseResponse

__all__ = [
    "PolePair",
    "PoleSet",
    "KautzBank",
    "build_kautz_bank",
    "bank_step",
    "basis_impulse_responses",
    "kautz_model_impulse_response",
    "scaling_constants",
    "truncation_length",
]

# tolerance above which the analytic scaling is replaced by a numerical one
NORM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class PolePair:
    """Conjugate pole pair ``{pole, pole*}`` strictly inside the unit circle."""

    pole: complex

    def __post_init__(self):
        p = complex(self.pole)
        if not np.isfinite(p.real) or not np.isfinite(p.imag):
            raise ValueError(f"pole {p} is not finite")
        if abs(p) >= 1.0:
            raise ValueError(f"pole {p} lies on or outside the unit circle (|p| = {abs(p):.6g})")
        if p.imag == 0.0:
            raise ValueError(f"pole {p} is real; a conjugate pair needs a nonzero imaginary part")
        object.__setattr__(self, "pole", p)

    @property
    def denominator(self) -> np.ndarray:
        """``1 - 2 Re(p) z^-1 + |p|^2 z^-2``."""
        p = self.pole
        return np.array([1.0, -2.0 * p.real, abs(p) ** 2])


@dataclass(frozen=True)
class PoleSet:
    """Ordered pole pairs; order fixes the cascade order of the bank.

    ``provenance`` carries free-form metadata (e.g. the Prony order that
    produced the set) and does not take part in equality.
    """

    pairs: tuple[PolePair, ...]
    provenance: Mapping = field(default_factory=dict, compare=False)

    def __post_init__(self):
        pairs = tuple(p if isinstance(p, PolePair) else PolePair(p) for p in self.pairs)
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_complex(cls, poles: Iterable[complex], **provenance) -> "PoleSet":
        return cls(tuple(PolePair(complex(p)) for p in poles), provenance)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return PoleSet(self.pairs[item], self.provenance)
        return self.pairs[item]

    def as_array(self) -> np.ndarray:
        return np.array([p.pole for p in self.pairs], dtype=complex)


def scaling_constants(pole: complex) -> tuple[float, float]:
    """Analytic scaling ``c^(1,2) = sqrt((1 - |p|^2)(1 +- p)(1 +- p*) / 2)``.

    ``c^(1)`` belongs to the ``(1 - z)/z`` tap, ``c^(2)`` to ``(1 + z)/z``.
    """
    p = complex(pole)
    r2 = abs(p) ** 2
    return (
        float(np.sqrt((1.0 - r2) * abs(1.0 + p) ** 2 / 2.0)),
        float(np.sqrt((1.0 - r2) * abs(1.0 - p) ** 2 / 2.0)),
    )


def truncation_length(poles, tol: float = 1e-9) -> int:
    """Smallest L with ``max|p|^L < tol``."""
    r = float(np.max(np.abs(np.asarray(poles, dtype=complex))))
    return max(1, int(np.ceil(np.log(tol) / np.log(r))) + 1)


def _section_coefficients(poles: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    sections = []
    for n, p in enumerate(poles):
        a = np.array([1.0, -2.0 * p.real, abs(p) ** 2])
        if n == 0:
            b = np.array([1.0, 0.0, 0.0])
        else:
            q = poles[n - 1]
            # (1 - q z)(1 - q* z) / z^2 in powers of z^-1
            b = np.array([abs(q) ** 2, -2.0 * q.real, 1.0])
        sections.append((b, a))
    return sections


def _run_cascade(sections, gains, u, state):
    """Batch-filter ``u``; ``state`` (N x 3) is updated in place."""
    u = np.asarray(u, dtype=float)
    out = np.empty((u.size, 2 * len(sections)))
    x = u
    for n, (b, a) in enumerate(sections):
        x, zf = lfilter(b, a, x, zi=state[n, :2])
        delayed = np.empty_like(x)
        delayed[0] = state[n, 2]
        delayed[1:] = x[:-1]
        state[n, :2] = zf
        state[n, 2] = x[-1]
        out[:, 2 * n] = gains[n, 0] * (delayed - x)
        out[:, 2 * n + 1] = gains[n, 1] * (delayed + x)
    return out


class KautzBank:
    """Cascade realization of a two-parameter Kautz basis.

    Each section is a second-order recursion with two state registers
    (transposed direct form II) plus one register holding the previous
    section output for the taps. A bank instance carries mutable state and
    must not be shared between threads; use :meth:`copy` for independent
    instances.

    Attributes
    ----------
    poles : PoleSet
        The fixed pole pairs in cascade order.
    scaling : np.ndarray
        ``(N, 2)`` analytic scaling constants.
    correction : np.ndarray
        ``(N, 2)`` numerical correction factors applied on top of
        ``scaling``; all ones unless the analytic norm missed unity by more
        than ``NORM_TOLERANCE``.
    """

    def __init__(self, poles: PoleSet | Iterable[complex]):
        if not isinstance(poles, PoleSet):
            poles = PoleSet.from_complex(poles)
        if len(poles) == 0:
            raise ValueError("cannot build a Kautz bank from an empty pole set")
        self.poles = poles
        p = poles.as_array()
        self.sections = _section_coefficients(p)
        self.scaling = np.array([scaling_constants(q) for q in p])
        self.correction = np.ones_like(self.scaling)
        self.state = np.zeros((len(p), 3))
        self._check_norms()

    def _check_norms(self):
        p = self.poles.as_array()
        # repeated poles stretch the tails; grow L until the tail is negligible
        length = truncation_length(p, 1e-12)
        while True:
            psi = self._impulse(length)
            energy = np.sum(psi**2, axis=0)
            tail = np.sum(psi[-(length // 10):] ** 2, axis=0)
            if np.all(tail <= 1e-15 * energy) or length > 2_000_000:
                break
            length *= 2
        norms = np.sqrt(energy).reshape(-1, 2)
        off = np.abs(norms - 1.0) > NORM_TOLERANCE
        self.correction[off] = 1.0 / norms[off]

    @property
    def gains(self) -> np.ndarray:
        return self.scaling * self.correction

    @property
    def n_pairs(self) -> int:
        return len(self.poles)

    @property
    def n_outputs(self) -> int:
        return 2 * len(self.poles)

    def reset(self):
        self.state[:] = 0.0

    def copy(self) -> "KautzBank":
        new = object.__new__(KautzBank)
        new.poles = self.poles
        new.sections = self.sections
        new.scaling = self.scaling
        new.correction = self.correction
        new.state = self.state.copy()
        return new

    def step(self, u_k: float) -> np.ndarray:
        """Advance one sample and return the ``2N`` basis outputs."""
        u_k = float(u_k)
        if not np.isfinite(u_k):
            raise ValueError(f"non-finite input sample {u_k}")
        out = np.empty(self.n_outputs)
        gains = self.gains
        x = u_k
        for n, (b, a) in enumerate(self.sections):
            s = self.state[n]
            y = b[0] * x + s[0]
            s[0] = b[1] * x - a[1] * y + s[1]
            s[1] = b[2] * x - a[2] * y
            prev = s[2]
            s[2] = y
            out[2 * n] = gains[n, 0] * (prev - y)
            out[2 * n + 1] = gains[n, 1] * (prev + y)
            x = y
        return out

    def filter(self, u) -> np.ndarray:
        """Process a whole input block, continuing from the current state.

        Returns an ``(len(u), 2N)`` array of basis output samples.
        """
        u = np.asarray(u, dtype=float)
        if not np.all(np.isfinite(u)):
            raise ValueError("input stream contains non-finite samples")
        if u.size == 0:
            return np.empty((0, self.n_outputs))
        return _run_cascade(self.sections, self.gains, u, self.state)

    def _impulse(self, length: int) -> np.ndarray:
        u = np.zeros(length)
        u[0] = 1.0
        return _run_cascade(self.sections, self.gains, u, np.zeros_like(self.state))

    def basis_impulse_responses(self, length: int) -> np.ndarray:
        """Truncated basis impulse responses as columns of a ``(length, 2N)`` array."""
        if length < 1:
            raise ValueError("length must be at least 1")
        return self._impulse(length)

    def describe(self) -> str:
        """JSON dump of section coefficients and scaling constants."""
        doc = {
            "n_pairs": self.n_pairs,
            "sections": [
                {
                    "pole": [q.pole.real, q.pole.imag],
                    "b": b.tolist(),
                    "a": a.tolist(),
                    "scaling": self.scaling[n].tolist(),
                    "correction": self.correction[n].tolist(),
                }
                for n, (q, (b, a)) in enumerate(zip(self.poles, self.sections))
            ],
        }
        return json.dumps(doc, indent=2)

    def __repr__(self):
        return f"KautzBank(n_pairs={self.n_pairs})"


def build_kautz_bank(poles: PoleSet | Iterable[complex]) -> KautzBank:
    return KautzBank(poles)


def bank_step(bank: KautzBank, u_k: float) -> np.ndarray:
    return bank.step(u_k)


def basis_impulse_responses(bank: KautzBank, length: int) -> np.ndarray:
    return bank.basis_impulse_responses(length)


def kautz_model_impulse_response(
    bank: KautzBank, weights, length: int, sample_rate_hz: float = 1.0
) -> ImpulseResponse:
    """Impulse response of the weighted bank, ``sum_n w_n psi_n(k)``."""
    w = np.asarray(weights, dtype=float).ravel()
    if w.size != bank.n_outputs:
        raise ValueError(f"{w.size} weights for a bank with {bank.n_outputs} outputs")
    return ImpulseResponse(bank.basis_impulse_responses(length) @ w, sample_rate_hz)
