"""Per-sample operation and storage counts for FIR and Kautz filters."""
from __future__ import annotations

from dataclasses import dataclass

__all__ = ["CostReport", "cost_model"]


@dataclass(frozen=True)
class CostReport:
    """Operation counts per output sample.

    Multiplications are kept doubled (``multiplications_x2``) because the
    Kautz count is half-integer for even orders.
    """

    kind: str
    order: int
    additions: int
    multiplications_x2: int
    divisions: int
    storage: int
    table_formula: bool = True

    @property
    def multiplications(self) -> float:
        return self.multiplications_x2 / 2

    def as_tuple(self):
        return (self.additions, self.multiplications, self.divisions, self.storage)


def cost_model(kind: str, order: int) -> CostReport:
    """Costs of an order-``order`` filter.

    FIR: ``n + 1`` additions, ``n`` multiplications, storage ``n``.
    Kautz: ``5 + 3(n - 3)`` additions, ``3.5(n - 3) + 8`` multiplications,
    storage ``3n``. The Kautz formula holds for ``n >= 3``; smaller orders
    are counted section by section (4 multiplications, 4 additions and 2
    states per section, 2 tap multiplications, plus the combiner) and
    flagged with ``table_formula=False``.
    """
    kind = kind.lower()
    if order < 1:
        raise ValueError("order must be at least 1")
    n = order
    if kind == "fir":
        return CostReport("fir", n, n + 1, 2 * n, 0, n)
    if kind != "kautz":
        raise ValueError(f"unknown filter kind {kind!r}; use 'fir' or 'kautz'")
    if n >= 3:
        return CostReport("kautz", n, 5 + 3 * (n - 3), 7 * (n - 3) + 16, 0, 3 * n)
    sections = 1
    additions = 4 * sections + 2 * sections + (n - 1)
    multiplications = 4 * sections + 2 * sections + n
    storage = 2 * sections + sections
    return CostReport("kautz", n, additions, 2 * multiplications, 0, storage, table_formula=False)
