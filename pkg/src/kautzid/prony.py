"""Pole estimation from an ensemble of training impulse responses.

All responses share one linear-prediction polynomial: the block rows of the
individual channels are stacked into a single overdetermined system whose
least-squares solution gives the coefficients, and the polynomial roots are
the pole estimates.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .kautz import PoleSet
from .signals import ImpulseResponse

__all__ = [
    "TrainingEnsemble",
    "PronyResult",
    "PoleScreeningError",
    "modified_prony",
    "screen_poles",
    "estimate_poles",
    "extend_poles_periodically",
    "poles_for_order",
]

log = logging.getLogger(__name__)

REAL_TOL = 1e-6
PAIR_TOL = 1e-8


class PoleScreeningError(RuntimeError):
    pass


@dataclass(frozen=True)
class TrainingEnsemble:
    responses: tuple[ImpulseResponse, ...]

    def __post_init__(self):
        responses = tuple(self.responses)
        if not responses:
            raise ValueError("a training ensemble needs at least one response")
        rates = {r.sample_rate_hz for r in responses}
        if len(rates) != 1:
            raise ValueError(f"training responses have different sample rates: {sorted(rates)}")
        object.__setattr__(self, "responses", responses)

    @classmethod
    def from_arrays(cls, arrays: Sequence, sample_rate_hz: float) -> "TrainingEnsemble":
        return cls(tuple(ImpulseResponse(a, sample_rate_hz) for a in arrays))

    def __len__(self) -> int:
        return len(self.responses)

    def __getitem__(self, i):
        return self.responses[i]

    @property
    def sample_rate_hz(self) -> float:
        return self.responses[0].sample_rate_hz

    @property
    def shortest(self) -> int:
        return min(len(r) for r in self.responses)

    def subset(self, indices) -> "TrainingEnsemble":
        return TrainingEnsemble(tuple(self.responses[i] for i in indices))


@dataclass(frozen=True)
class PronyResult:
    order: int
    alpha: np.ndarray
    raw_roots: np.ndarray
    residual: float
    rank_deficient: bool = False
    ensemble: TrainingEnsemble | None = field(default=None, repr=False, compare=False)


def _stacked_system(ensemble: TrainingEnsemble, order: int):
    blocks, rhs = [], []
    for r in ensemble.responses:
        h = r.samples
        # row k: [h(k-1), ..., h(k-order)] . alpha = -h(k)
        window = np.lib.stride_tricks.sliding_window_view(h[:-1], order)[:, ::-1]
        blocks.append(window)
        rhs.append(-h[order:])
    return np.vstack(blocks), np.concatenate(rhs)


def modified_prony(ensemble: TrainingEnsemble, order: int) -> PronyResult:
    """Fit one order-``order`` prediction polynomial to every response.

    The monic polynomial ``z^N + alpha_1 z^(N-1) + ... + alpha_N`` is chosen
    so that ``h(k) + sum_i alpha_i h(k-i)`` vanishes in the least-squares
    sense over all channels; its roots (companion-matrix eigenvalues) are
    returned as ``raw_roots``. A rank-deficient system is solved with the
    minimum-norm solution and flagged.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    if order >= ensemble.shortest:
        raise ValueError(
            f"order {order} needs responses longer than {order} samples; "
            f"shortest has {ensemble.shortest}"
        )
    A, b = _stacked_system(ensemble, order)
    alpha, _, rank, _ = np.linalg.lstsq(A, b, rcond=None)
    deficient = rank < order
    if deficient:
        log.warning("Prony system of order %d is rank deficient (rank %d)", order, rank)
    residual = float(np.linalg.norm(A @ alpha - b))
    companion = np.zeros((order, order))
    companion[0, :] = -alpha
    companion[np.arange(1, order), np.arange(order - 1)] = 1.0
    roots = np.linalg.eigvals(companion)
    return PronyResult(order, alpha, roots, residual, bool(deficient), ensemble)


def _upper_pairs(roots: np.ndarray) -> list[complex]:
    """Stable, nonreal roots with a matching conjugate; one per pair (Im > 0)."""
    stable = [z for z in roots if abs(z) < 1.0 and abs(z.imag) >= REAL_TOL]
    upper = [z for z in stable if z.imag > 0]
    lower = [z for z in stable if z.imag < 0]
    pairs = []
    for z in upper:
        match = [i for i, q in enumerate(lower) if abs(q - np.conj(z)) <= PAIR_TOL * max(1.0, abs(z))]
        if match:
            lower.pop(match[0])
            pairs.append(complex(z))
        else:
            log.warning("discarding complex root %s without conjugate partner", z)
    for z in lower:
        log.warning("discarding complex root %s without conjugate partner", z)
    return pairs


def _pair_energies(pairs: list[complex], ensemble: TrainingEnsemble) -> np.ndarray:
    """Energy each pole pair carries in a joint modal fit of the ensemble."""
    if len(pairs) == 0:
        return np.zeros(0)
    length = ensemble.shortest
    k = np.arange(length)[:, None]
    z = np.asarray(pairs)[None, :]
    # real modal basis: Re(z^k), Im(z^k) per pair
    powers = z**k
    basis = np.empty((length, 2 * len(pairs)))
    basis[:, 0::2] = powers.real
    basis[:, 1::2] = powers.imag
    H = np.column_stack([r.samples[:length] for r in ensemble.responses])
    coef, *_ = np.linalg.lstsq(basis, H, rcond=None)
    energies = np.empty(len(pairs))
    for i in range(len(pairs)):
        part = basis[:, 2 * i: 2 * i + 2] @ coef[2 * i: 2 * i + 2]
        energies[i] = np.sum(part**2)
    return energies


def screen_poles(
    result: PronyResult,
    wanted_pairs: int,
    ensemble: TrainingEnsemble | None = None,
    max_retries: int = 10,
    order_step: int = 2,
) -> PoleSet:
    """Keep ``wanted_pairs`` physically meaningful pole pairs.

    Unstable roots (``|z| >= 1``) and real roots (``|Im z| < 1e-6``) are
    discarded and conjugates collapsed to their upper-half-plane member.
    With too few survivors, the estimation is repeated on ``ensemble`` at
    order ``+2`` per retry. With a surplus, the pairs carrying the most
    energy in a joint modal fit of the ensemble are kept. The result is
    sorted by ascending frequency.

    Raises
    ------
    PoleScreeningError
        If ``max_retries`` re-estimations still yield too few pairs.
    """
    if wanted_pairs < 1:
        raise ValueError("wanted_pairs must be at least 1")
    ensemble = ensemble if ensemble is not None else result.ensemble
    retries = 0
    pairs = _upper_pairs(result.raw_roots)
    while len(pairs) < wanted_pairs:
        if ensemble is None:
            raise PoleScreeningError(
                f"found {len(pairs)} of {wanted_pairs} pole pairs and no ensemble to re-estimate from"
            )
        if retries >= max_retries:
            raise PoleScreeningError(
                f"found {len(pairs)} of {wanted_pairs} pole pairs after {retries} retries "
                f"(last order {result.order})"
            )
        retries += 1
        new_order = result.order + order_step
        if new_order >= ensemble.shortest:
            raise PoleScreeningError(
                f"found {len(pairs)} of {wanted_pairs} pole pairs; order {new_order} "
                f"exceeds the response length"
            )
        result = modified_prony(ensemble, new_order)
        pairs = _upper_pairs(result.raw_roots)
    if len(pairs) > wanted_pairs:
        if ensemble is None:
            order = np.argsort([-abs(z) for z in pairs], kind="stable")
        else:
            order = np.argsort(-_pair_energies(pairs, ensemble), kind="stable")
        pairs = [pairs[i] for i in order[:wanted_pairs]]
    pairs.sort(key=lambda z: (np.angle(z), abs(z)))
    return PoleSet.from_complex(
        pairs, order=result.order, retries=retries, residual=result.residual
    )


def estimate_poles(ensemble: TrainingEnsemble, wanted_pairs: int, order: int | None = None) -> PoleSet:
    """Prony estimation at ``order`` (default ``2 * wanted_pairs``) followed by screening."""
    order = 2 * wanted_pairs if order is None else order
    return screen_poles(modified_prony(ensemble, order), wanted_pairs, ensemble)


def extend_poles_periodically(poles: PoleSet, target_pairs: int) -> PoleSet:
    """Repeat the pole sequence cyclically up to ``target_pairs`` pairs."""
    if len(poles) == 0:
        raise ValueError("cannot extend an empty pole set")
    if target_pairs < len(poles):
        raise ValueError(f"target {target_pairs} is smaller than the current {len(poles)} pairs")
    reps = [poles.pairs[i % len(poles)] for i in range(target_pairs)]
    return PoleSet(tuple(reps), poles.provenance)


def poles_for_order(poles: PoleSet, order: int) -> PoleSet:
    """Pole pairs for a Kautz filter of even ``order``: a prefix of the periodic extension."""
    if order < 2 or order % 2:
        raise ValueError(f"Kautz order must be even and at least 2, got {order}")
    n = order // 2
    if n <= len(poles):
        return poles[:n]
    return extend_poles_periodically(poles, n)
