"""Monte-Carlo view of how the required order grows for an unusual plant.

Each trial draws a new set of five training oscillators around 50 Hz,
estimates poles from them and fits both test oscillators. The ratio printed
at the end compares the order the 57.5 Hz case needs to match the order-10
error of the 50 Hz case.
"""
from kautzid import ExperimentConfig, order_ratio, run_monte_carlo

cfg = ExperimentConfig(monte_carlo_trials=30, kautz_orders=tuple(range(2, 81, 2)), fir_orders=(10,))
report = run_monte_carlo(cfg)
best = report.curves["kautz", "best"]
bad = report.curves["kautz", "bad"]
print(f"{report.trials} trials, {report.failures} failed")
for order in (10, 20, 40, 80):
    i = list(best.orders).index(order)
    print(f"  order {order:2d}: mean error 50 Hz {best.mean[i]:.2e}, 57.5 Hz {bad.mean[i]:.2e} "
          f"(range {bad.min[i]:.2e} .. {bad.max[i]:.2e})")
print(f"order ratio at reference order 10: {order_ratio(best.orders, best.mean, bad.mean, 10):.1f}")
