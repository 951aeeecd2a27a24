"""Leave-one-out pole estimation on a synthetic multi-mode ensemble.

Fourteen responses of a six-mode structure stand in for measurements with
an added mass moved to different positions. One response is held out as
the test plant; every choice of four others yields a pole estimate and a
Kautz model of the held-out response. A data directory of measured
impulse-response CSVs can replace the proxy through ``data_dir``.
"""
import numpy as np

from kautzid import ExperimentConfig, MdofProxySpec, run_ensemble_experiment

report = run_ensemble_experiment(ExperimentConfig(kautz_orders=(12, 24, 48, 80)), proxy=MdofProxySpec())
top = report.subset_errors[:, -1]
print(f"{len(report.subsets)} training subsets, {report.failures} failed")
print(f"order-80 error: min {top.min():.3f}, median {np.median(top):.3f}, max {top.max():.3f}")

counts, edges = report.histogram
print("histogram of order-80 errors:")
for lo, hi, c in zip(edges[:-1], edges[1:], counts):
    print(f"  {lo:.3f}-{hi:.3f} {'#' * int(np.ceil(c / 5))} {c}")
