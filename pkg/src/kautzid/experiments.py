"""Experiment orchestration: SDOF study, Monte-Carlo sweeps and the
leave-one-out ensemble study, with CSV reports.

Identification defaults to least squares over the error window (exact and
deterministic); ``mode = "lms"`` replaces it with adaptive runs.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import io
from .adaptive import fir_identify, lms_identify
from .kautz import KautzBank, PoleSet, kautz_model_impulse_response
from .prony import PoleScreeningError, TrainingEnsemble, estimate_poles, poles_for_order
from .signals import ImpulseResponse, impulse_response_to_frf, normalized_error
from .systems import (
    REFERENCE_BAD_CASE,
    REFERENCE_BEST_CASE,
    REFERENCE_TRAINING,
    MdofProxySpec,
    SdofParams,
    UncertaintySpec,
    mdof_proxy_ensemble,
    sample_systems,
    sdof_impulse_response,
)

__all__ = [
    "ExperimentConfig",
    "ErrorCurve",
    "SdofReport",
    "MonteCarloReport",
    "EnsembleReport",
    "load_config",
    "kautz_error_curve",
    "fir_error_curve",
    "order_ratio",
    "run_sdof_experiment",
    "run_monte_carlo",
    "run_ensemble_experiment",
    "write_report",
]

log = logging.getLogger(__name__)

_RECOVERABLE = (PoleScreeningError, np.linalg.LinAlgError, ValueError)


@dataclass
class ExperimentConfig:
    """Run description; unset order sweeps take per-experiment defaults."""

    sample_rate_hz: float = 500.0
    response_length: int = 500
    kautz_orders: tuple[int, ...] | None = None
    fir_orders: tuple[int, ...] | None = None
    training_count: int | None = None
    monte_carlo_trials: int = 1000
    seed: int = 0
    mode: str = "ls"
    # SDOF study
    training: str = "fixed"
    mean_f0_hz: float = 50.0
    mean_theta: float = 0.03
    cov: float = 0.05
    sdof_pairs: int = 5
    bad_case_f0_hz: float = 57.5
    reference_order: int = 10
    # ensemble study
    data_dir: str | None = None
    test_index: int = 11
    ensemble_pairs: int = 6
    ensemble_length: int = 1024
    histogram_bins: int = 20
    # LMS mode
    mu: float | None = None
    steps: int | None = None

    def __post_init__(self):
        for name in ("kautz_orders", "fir_orders"):
            value = getattr(self, name)
            if value is not None:
                setattr(self, name, tuple(int(v) for v in value))
        if self.kautz_orders is not None and any(o < 2 or o % 2 for o in self.kautz_orders):
            raise ValueError(f"Kautz orders must be even and >= 2: {self.kautz_orders}")
        if self.fir_orders is not None and any(o < 1 for o in self.fir_orders):
            raise ValueError("FIR orders must be >= 1")
        for name in ("response_length", "monte_carlo_trials", "sdof_pairs", "ensemble_pairs",
                     "ensemble_length", "histogram_bins"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.training_count is not None and self.training_count < 1:
            raise ValueError("training_count must be at least 1")
        if self.mode not in ("ls", "lms"):
            raise ValueError(f"mode must be 'ls' or 'lms', got {self.mode!r}")
        if self.training not in ("fixed", "random"):
            raise ValueError(f"training must be 'fixed' or 'random', got {self.training!r}")

    def orders(self, kind: str, experiment: str) -> tuple[int, ...]:
        value = self.kautz_orders if kind == "kautz" else self.fir_orders
        if value is not None:
            return value
        defaults = {
            ("kautz", "sdof"): range(2, 41, 2),
            ("kautz", "ensemble"): range(12, 81, 4),
            ("fir", "sdof"): range(10, 401, 10),
            ("fir", "ensemble"): range(50, 801, 50),
        }
        return tuple(defaults[kind, experiment])


def _parse_orders(text: str) -> tuple[int, ...]:
    text = text.strip()
    if ":" in text:
        start, stop, *step = (int(v) for v in text.split(":"))
        return tuple(range(start, stop + 1, step[0] if step else 1))
    return tuple(int(v) for v in text.replace(" ", "").split(",") if v)


def load_config(path, **overrides) -> ExperimentConfig:
    """Read a flat ``key = value`` file; ``#`` starts a comment.

    Order lists are written ``2,4,6`` or ``start:stop:step`` (inclusive).
    """
    types = {f.name: f for f in fields(ExperimentConfig)}
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in types:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _coerce(key, value)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def _coerce(key, value):
    if key in ("kautz_orders", "fir_orders"):
        return _parse_orders(value)
    if value.lower() in ("none", ""):
        return None
    if key in ("sample_rate_hz", "mean_f0_hz", "mean_theta", "cov", "bad_case_f0_hz", "mu"):
        return float(value)
    if key in ("mode", "training", "data_dir"):
        return value
    return int(value)


@dataclass
class ErrorCurve:
    orders: np.ndarray
    mean: np.ndarray
    min: np.ndarray
    max: np.ndarray

    @classmethod
    def from_trials(cls, orders, trials) -> "ErrorCurve":
        trials = np.atleast_2d(np.asarray(trials, dtype=float))
        return cls(np.asarray(orders), trials.mean(axis=0), trials.min(axis=0), trials.max(axis=0))

    def rows(self, kind: str, case: str):
        for o, a, b, c in zip(self.orders, self.mean, self.min, self.max):
            yield (kind, case, int(o), a, b, c)


def kautz_error_curve(
    poles: PoleSet,
    target: ImpulseResponse,
    orders,
    mode: str = "ls",
    seed: int = 0,
    mu: float | None = None,
    steps: int | None = None,
) -> np.ndarray:
    """Normalized error of Kautz models of each order for ``target``.

    In LS mode all orders share one bank (orders are prefixes of the same
    periodic pole sequence), so a single QR factorisation gives the residual
    of every nested model and the curve is non-increasing by construction.
    """
    orders = np.asarray(orders, dtype=int)
    h = target.samples
    K = h.size
    energy = float(h @ h)
    if mode == "ls":
        bank = KautzBank(poles_for_order(poles, int(orders.max())))
        Q, _ = np.linalg.qr(bank.basis_impulse_responses(K))
        captured = np.cumsum((Q.T @ h) ** 2)
        residual = np.maximum(energy - captured, 0.0) / energy
        # residual after n columns sits at index n-1
        return residual[orders - 1]
    out = []
    for n in orders:
        bank = KautzBank(poles_for_order(poles, int(n)))
        run = lms_identify(bank, target, mu=mu, steps=steps, seed=seed)
        model = kautz_model_impulse_response(bank, run.weights, K, target.sample_rate_hz)
        out.append(normalized_error(target, model))
    return np.array(out)


def fir_error_curve(target: ImpulseResponse, orders, mode: str = "ls", seed: int = 0,
                    mu: float | None = None, steps: int | None = None) -> np.ndarray:
    """Normalized error of FIR models; LS mode keeps the first ``n + 1`` samples."""
    h = target.samples
    energy = float(h @ h)
    if mode == "ls":
        tail = np.concatenate([np.cumsum((h**2)[::-1])[::-1], [0.0]])
        return np.array([tail[min(n + 1, h.size)] / energy for n in orders])
    out = []
    for n in orders:
        model = fir_identify(target, int(n), mu=mu, steps=steps, seed=seed)
        out.append(normalized_error(target, model.impulse_response(h.size, target.sample_rate_hz)))
    return np.array(out)


def order_ratio(orders, best, bad, reference_order: int) -> float:
    """Order the bad-case curve needs to match the best case at ``reference_order``,
    divided by ``reference_order``; ``inf`` if never reached in the sweep."""
    orders = np.asarray(orders)
    target = float(np.asarray(best)[orders == reference_order][0])
    hit = np.nonzero(np.asarray(bad) <= target)[0]
    if hit.size == 0:
        return float("inf")
    return float(orders[hit[0]] / reference_order)


@dataclass
class SdofReport:
    config: ExperimentConfig
    training: list[SdofParams]
    poles: PoleSet
    curves: dict[tuple[str, str], ErrorCurve]
    weights: dict[str, np.ndarray]
    overlays: dict[str, tuple[np.ndarray, np.ndarray, np.ndarray]]

    def error(self, kind: str, case: str, order: int) -> float:
        c = self.curves[kind, case]
        return float(c.mean[list(c.orders).index(order)])


@dataclass
class MonteCarloReport:
    config: ExperimentConfig
    curves: dict[tuple[str, str], ErrorCurve]
    trial_errors: dict[str, np.ndarray]
    failures: int

    @property
    def trials(self) -> int:
        return self.config.monte_carlo_trials


@dataclass
class EnsembleReport:
    config: ExperimentConfig
    subsets: list[tuple[int, ...]]
    subset_errors: np.ndarray
    curves: dict[tuple[str, str], ErrorCurve]
    histogram: tuple[np.ndarray, np.ndarray]
    failures: int
    poles: dict[tuple[int, ...], PoleSet] = field(default_factory=dict)


def _test_cases(config: ExperimentConfig):
    return {
        "best": SdofParams(config.mean_f0_hz, config.mean_theta),
        "bad": SdofParams(config.bad_case_f0_hz, config.mean_theta),
    }


def _sdof_ensemble(systems, config) -> TrainingEnsemble:
    return TrainingEnsemble(tuple(
        sdof_impulse_response(s, config.sample_rate_hz, config.response_length) for s in systems
    ))


def run_sdof_experiment(config: ExperimentConfig) -> SdofReport:
    """Fix Kautz poles from the training oscillators, then model the best- and
    bad-case test oscillators at every order with Kautz and FIR filters."""
    if config.training == "fixed":
        training = list(REFERENCE_TRAINING)
        cases = {"best": REFERENCE_BEST_CASE, "bad": REFERENCE_BAD_CASE}
    else:
        count = config.training_count or 5
        spec = UncertaintySpec(config.mean_f0_hz, config.mean_theta, config.cov, config.seed)
        training = sample_systems(spec, count)
        cases = _test_cases(config)
    poles = estimate_poles(_sdof_ensemble(training, config), config.sdof_pairs)
    log.info("SDOF poles: %s", poles.as_array())
    k_orders = config.orders("kautz", "sdof")
    f_orders = config.orders("fir", "sdof")
    curves, weights, overlays = {}, {}, {}
    for case, params in cases.items():
        h = sdof_impulse_response(params, config.sample_rate_hz, config.response_length)
        kc = kautz_error_curve(poles, h, k_orders, config.mode, config.seed, config.mu, config.steps)
        fc = fir_error_curve(h, f_orders, config.mode, config.seed, config.mu, config.steps)
        curves["kautz", case] = ErrorCurve.from_trials(k_orders, kc)
        curves["fir", case] = ErrorCurve.from_trials(f_orders, fc)
        bank = KautzBank(poles_for_order(poles, config.reference_order))
        basis = bank.basis_impulse_responses(config.response_length)
        w, *_ = np.linalg.lstsq(basis, h.samples, rcond=None)
        weights[case] = w
        model = ImpulseResponse(basis @ w, config.sample_rate_hz)
        true_frf = impulse_response_to_frf(h)
        overlays[case] = (true_frf.frequencies_hz, true_frf.values, impulse_response_to_frf(model).values)
        log.info("%s case: order-%d Kautz error %.4g", case, config.reference_order,
                 normalized_error(h, model))
    return SdofReport(config, training, poles, curves, weights, overlays)


def run_monte_carlo(config: ExperimentConfig) -> MonteCarloReport:
    """Repeat the SDOF study over random training sets (seed ``seed + trial``).

    Failed trials are logged and excluded; FIR curves do not depend on the
    training set and are computed once per test case.
    """
    cases = _test_cases(config)
    count = config.training_count or 5
    k_orders = config.orders("kautz", "sdof")
    f_orders = config.orders("fir", "sdof")
    targets = {c: sdof_impulse_response(p, config.sample_rate_hz, config.response_length)
               for c, p in cases.items()}
    trial_errors = {c: [] for c in cases}
    failures = 0
    for trial in range(config.monte_carlo_trials):
        spec = UncertaintySpec(config.mean_f0_hz, config.mean_theta, config.cov, config.seed + trial)
        try:
            poles = estimate_poles(_sdof_ensemble(sample_systems(spec, count), config), config.sdof_pairs)
            errs = {c: kautz_error_curve(poles, h, k_orders, config.mode, config.seed + trial,
                                         config.mu, config.steps)
                    for c, h in targets.items()}
        except _RECOVERABLE as exc:
            failures += 1
            log.warning("trial %d failed: %s", trial, exc)
            continue
        for c in cases:
            trial_errors[c].append(errs[c])
    if failures == config.monte_carlo_trials:
        raise RuntimeError("every Monte-Carlo trial failed")
    if failures:
        log.warning("%d of %d trials failed", failures, config.monte_carlo_trials)
    curves = {}
    for c, h in targets.items():
        curves["kautz", c] = ErrorCurve.from_trials(k_orders, trial_errors[c])
        curves["fir", c] = ErrorCurve.from_trials(
            f_orders, fir_error_curve(h, f_orders, config.mode, config.seed, config.mu, config.steps))
    return MonteCarloReport(config, curves, {c: np.array(v) for c, v in trial_errors.items()}, failures)


def _load_ensemble(config: ExperimentConfig, proxy: MdofProxySpec | None) -> TrainingEnsemble:
    if config.data_dir:
        return io.read_ensemble_dir(config.data_dir)
    spec = proxy or MdofProxySpec(length=config.ensemble_length)
    return mdof_proxy_ensemble(spec, config.sample_rate_hz, config.seed)


def run_ensemble_experiment(
    config: ExperimentConfig,
    proxy: MdofProxySpec | None = None,
    ensemble: TrainingEnsemble | None = None,
) -> EnsembleReport:
    """Leave-one-out study over all training subsets.

    The response at ``test_index`` is the test plant; every subset of
    ``training_count`` (default 4) of the remaining responses yields a pole
    set (``ensemble_pairs`` pairs, periodically repeated to each order),
    which is scored on the test plant.
    """
    ensemble = ensemble or _load_ensemble(config, proxy)
    count = config.training_count or 4
    if len(ensemble) < count + 1:
        raise ValueError(f"need at least {count + 1} responses, got {len(ensemble)}")
    if not 0 <= config.test_index < len(ensemble):
        raise ValueError(f"test_index {config.test_index} outside 0..{len(ensemble) - 1}")
    test = ensemble[config.test_index]
    others = [i for i in range(len(ensemble)) if i != config.test_index]
    k_orders = config.orders("kautz", "ensemble")
    f_orders = config.orders("fir", "ensemble")
    subsets, errors, poles_by_subset = [], [], {}
    failures = 0
    for subset in itertools.combinations(others, count):
        try:
            poles = estimate_poles(ensemble.subset(subset), config.ensemble_pairs)
            curve = kautz_error_curve(poles, test, k_orders, config.mode, config.seed,
                                      config.mu, config.steps)
        except _RECOVERABLE as exc:
            failures += 1
            log.warning("subset %s failed: %s", subset, exc)
            continue
        subsets.append(subset)
        errors.append(curve)
        poles_by_subset[subset] = poles
    if not errors:
        raise RuntimeError("every training subset failed")
    errors = np.array(errors)
    top = errors[:, -1]
    hist = np.histogram(top, bins=config.histogram_bins, range=(float(top.min()), float(top.max())))
    curves = {
        ("kautz", "test"): ErrorCurve.from_trials(k_orders, errors),
        ("fir", "test"): ErrorCurve.from_trials(
            f_orders, fir_error_curve(test, f_orders, config.mode, config.seed, config.mu, config.steps)),
    }
    return EnsembleReport(config, subsets, errors, curves, hist, failures, poles_by_subset)


def write_report(report, out_dir) -> list[Path]:
    """Write the CSV outputs of any report into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    rows = [r for (kind, case), c in sorted(report.curves.items()) for r in c.rows(kind, case)]
    path = out / "error_curve.csv"
    io.write_table(path, ["kind", "case", "order", "mean", "min", "max"], rows)
    written.append(path)
    if isinstance(report, SdofReport):
        path = out / "poles.csv"
        io.write_poles_csv(path, report.poles)
        written.append(path)
        path = out / "weights.csv"
        io.write_table(path, ["case", "index", "value"],
                       [(case, i, v) for case, w in sorted(report.weights.items())
                        for i, v in enumerate(w)])
        written.append(path)
        path = out / "frf_overlay.csv"
        io.write_table(path, ["case", "frequency_hz", "true_real", "true_imag", "model_real", "model_imag"],
                       [(case, f, t.real, t.imag, m.real, m.imag)
                        for case, (fr, tv, mv) in sorted(report.overlays.items())
                        for f, t, m in zip(fr, tv, mv)])
        written.append(path)
    if isinstance(report, EnsembleReport):
        counts, edges = report.histogram
        path = out / "histogram.csv"
        io.write_table(path, ["bin_low", "bin_high", "count"], zip(edges[:-1], edges[1:], counts))
        written.append(path)
        path = out / "subset_errors.csv"
        orders = report.curves["kautz", "test"].orders
        io.write_table(path, ["subset"] + [f"order_{o}" for o in orders],
                       [("-".join(map(str, s)),) + tuple(e) for s, e in zip(report.subsets, report.subset_errors)])
        written.append(path)
        path = out / "summary.csv"
        io.write_table(path, ["key", "value"], [("subsets", len(report.subsets)), ("failures", report.failures)])
        written.append(path)
    if isinstance(report, MonteCarloReport):
        path = out / "summary.csv"
        io.write_table(path, ["key", "value"], [("trials", report.trials), ("failures", report.failures)])
        written.append(path)
    return written
