"""Fixed poles from five training oscillators, tested on two new ones.

The test oscillator at 50 Hz sits inside the training spread and an
order-10 Kautz filter models it almost exactly. The one at 57.5 Hz lies
outside the spread; the same filter leaves a sizeable error, and higher
orders are needed to bring it down. An FIR filter needs far more taps than
either.
"""
from kautzid import ExperimentConfig, run_sdof_experiment

report = run_sdof_experiment(ExperimentConfig())
print("training oscillators:")
for s in report.training:
    print(f"  {s.f0_hz:5.1f} Hz, damping {s.theta:.3f}")

print("\nnormalized error of the Kautz model:")
for order in (2, 6, 10, 20, 40):
    best = report.error("kautz", "best", order)
    bad = report.error("kautz", "bad", order)
    print(f"  order {order:2d}: 50 Hz case {best:.2e}   57.5 Hz case {bad:.2e}")

fir = report.curves["fir", "best"]
reach = next(int(o) for o, e in zip(fir.orders, fir.mean) if e <= 0.02)
print(f"\nFIR order needed for error 0.02 on the 50 Hz case: {reach}")
