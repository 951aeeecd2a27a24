"""Per-sample cost of FIR and Kautz filters at the orders each one needs."""
from kautzid import cost_model

print(f"{'filter':>12} {'add':>6} {'mul':>7} {'div':>4} {'store':>6}")
for kind, order in (("fir", 110), ("fir", 800), ("kautz", 10), ("kautz", 80)):
    r = cost_model(kind, order)
    print(f"{kind + ' ' + str(order):>12} {r.additions:6d} {r.multiplications:7g} {r.divisions:4d} {r.storage:6d}")
