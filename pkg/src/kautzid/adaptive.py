"""Adaptive identification: LMS over Kautz bank outputs, LMS FIR baseline and
least-squares reference solutions."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .kautz import KautzBank
from .signals import ImpulseResponse, RationalTransferFunction

__all__ = [
    "DivergenceError",
    "IdentificationRun",
    "FirModel",
    "white_noise",
    "simulate_plant",
    "default_step_size",
    "default_steps",
    "lms_identify",
    "ls_optimal_weights",
    "fir_identify",
    "fir_ls",
]

log = logging.getLogger(__name__)

DIVERGENCE_RATIO = 1e6
MAX_STEPS = 1_000_000


class DivergenceError(RuntimeError):
    """Raised when the LMS error power runs away."""


@dataclass
class IdentificationRun:
    mu: float
    steps: int
    seed: int
    variance: float
    weights: np.ndarray
    error_history: np.ndarray
    converged: bool

    @property
    def final_error_power(self) -> float:
        tail = self.error_history[self.steps // 2:]
        return float(np.mean(tail**2))


@dataclass
class FirModel:
    coefficients: np.ndarray

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=float).ravel()
        if not np.all(np.isfinite(self.coefficients)):
            raise ValueError("FIR coefficients must be finite")

    @property
    def order(self) -> int:
        return self.coefficients.size - 1

    def impulse_response(self, length: int, sample_rate_hz: float = 1.0) -> ImpulseResponse:
        out = np.zeros(length)
        n = min(length, self.coefficients.size)
        out[:n] = self.coefficients[:n]
        return ImpulseResponse(out, sample_rate_hz)


def white_noise(seed: int, n: int, variance: float = 1.0) -> np.ndarray:
    """Reproducible zero-mean Gaussian white noise."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not variance > 0:
        raise ValueError("variance must be positive")
    return np.random.default_rng(seed).normal(0.0, np.sqrt(variance), n)


def simulate_plant(plant, u: np.ndarray) -> np.ndarray:
    """Plant output for input ``u`` (zero initial conditions)."""
    if isinstance(plant, RationalTransferFunction):
        return plant.filter(u)
    h = plant.samples if isinstance(plant, ImpulseResponse) else np.asarray(plant, dtype=float)
    return np.convolve(u, h)[: len(u)]


def default_step_size(n_weights: int, input_power: float = 1.0) -> float:
    return 0.01 / (input_power * n_weights)


def default_steps(mu: float, input_power: float = 1.0) -> int:
    """Twenty time constants of the slowest mode, ``1/(mu * power)`` each."""
    return int(min(MAX_STEPS, np.ceil(20.0 / (mu * input_power))))


def _lms(X, d, mu, power):
    n, m = X.shape
    w = np.zeros(m)
    e = np.empty(n)
    snapshot = w.copy()
    mark = n - max(1, n // 10)
    limit = DIVERGENCE_RATIO * power
    ema = 0.0
    for k in range(n):
        x = X[k]
        ek = d[k] - x @ w
        w += (mu * ek) * x
        e[k] = ek
        ema = 0.999 * ema + 0.001 * ek * ek
        if k == mark:
            snapshot = w.copy()
        if not ema < limit:
            raise DivergenceError(
                f"LMS diverged at step {k}: error power {ema:.3g} exceeds "
                f"{DIVERGENCE_RATIO:g} x input power; reduce mu (currently {mu:.3g})"
            )
    norm = np.linalg.norm(w)
    converged = bool(norm == 0.0 or np.linalg.norm(w - snapshot) < 1e-3 * norm)
    return w, e, converged


def _excite(plant, steps, seed, variance, noise_std):
    u = white_noise(seed, steps, variance)
    d = simulate_plant(plant, u)
    if noise_std > 0:
        d = d + np.random.default_rng([seed, 1]).normal(0.0, noise_std, steps)
    return u, d


def lms_identify(
    bank: KautzBank,
    plant,
    mu: float | None = None,
    steps: int | None = None,
    seed: int = 0,
    variance: float = 1.0,
    noise_std: float = 0.0,
) -> IdentificationRun:
    """Identify ``plant`` with an LMS-adapted linear combiner on ``bank``.

    Plant and bank are driven by the same white noise ``u(k)``. The combiner
    output ``y(k) = w . psi(k)`` is compared with the plant output ``d(k)``
    and the weights move along ``mu * psi(k) * e(k)``. Weights start at
    zero. ``bank`` is copied and reset, so the caller's instance is untouched.

    Parameters
    ----------
    bank : KautzBank
    plant : RationalTransferFunction or ImpulseResponse
    mu : float, optional
        Step size; defaults to ``0.01 / (variance * 2N)``.
    steps : int, optional
        Defaults to twenty adaptation time constants, capped at 10^6.
    seed : int
        Seed for the excitation (and measurement noise, if any).
    variance : float
        Excitation power.
    noise_std : float
        Standard deviation of additive noise on ``d(k)``; off by default.

    Raises
    ------
    DivergenceError
        If the running error power exceeds 10^6 times the input power.
    """
    mu = default_step_size(bank.n_outputs, variance) if mu is None else float(mu)
    if not mu > 0:
        raise ValueError("mu must be positive")
    steps = default_steps(mu, variance) if steps is None else int(steps)
    if steps < 1:
        raise ValueError("steps must be at least 1")
    u, d = _excite(plant, steps, seed, variance, noise_std)
    own = bank.copy()
    own.reset()
    X = own.filter(u)
    w, e, converged = _lms(X, d, mu, variance)
    if not converged:
        log.warning("LMS run (mu=%.3g, steps=%d) did not meet the convergence criterion", mu, steps)
    return IdentificationRun(mu, steps, seed, variance, w, e, converged)


def ls_optimal_weights(basis, target) -> np.ndarray:
    """Least-squares weights of ``target`` on the columns of ``basis``.

    For a basis that is orthonormal over the window this is the projection
    ``w_n = <psi_n, h>``; otherwise it is still the exact least-squares fit
    over the window.
    """
    basis = np.asarray(basis, dtype=float)
    h = target.samples if isinstance(target, ImpulseResponse) else np.asarray(target, dtype=float)
    if basis.ndim != 2 or basis.shape[0] != h.size:
        raise ValueError(f"basis of shape {basis.shape} does not match target length {h.size}")
    w, *_ = np.linalg.lstsq(basis, h, rcond=None)
    return w


def fir_identify(
    plant,
    order: int,
    mu: float | None = None,
    steps: int | None = None,
    seed: int = 0,
    variance: float = 1.0,
    noise_std: float = 0.0,
) -> FirModel:
    """LMS-adapted transversal filter with ``order + 1`` taps."""
    if order < 0:
        raise ValueError("order must be non-negative")
    taps = order + 1
    mu = default_step_size(taps, variance) if mu is None else float(mu)
    if not mu > 0:
        raise ValueError("mu must be positive")
    steps = default_steps(mu, variance) if steps is None else int(steps)
    u, d = _excite(plant, steps, seed, variance, noise_std)
    padded = np.concatenate([np.zeros(order), u])
    # row k holds u(k), u(k-1), ..., u(k-order)
    X = np.lib.stride_tricks.sliding_window_view(padded, taps)[:, ::-1]
    w, _, converged = _lms(X, d, mu, variance)
    if not converged:
        log.warning("FIR LMS run (order=%d) did not meet the convergence criterion", order)
    return FirModel(w)


def fir_ls(target, order: int) -> FirModel:
    """Least-squares FIR fit under white excitation: the first ``order + 1`` samples."""
    h = target.samples if isinstance(target, ImpulseResponse) else np.asarray(target, dtype=float)
    coeffs = np.zeros(order + 1)
    n = min(order + 1, h.size)
    coeffs[:n] = h[:n]
    return FirModel(coeffs)
