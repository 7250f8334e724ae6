"""Convergence tables: the common report type for every estimator sweep."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any


@dataclass(frozen=True)
class ConvergenceTable:
    """Rows (index, exact estimate) with an optional target and tolerance.

    ``tolerance`` is relative to the target when the target is nonzero and
    absolute otherwise.
    """

    label: str
    rows: tuple[tuple[Any, Fraction], ...]
    target: Fraction | None = None
    tolerance: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple((i, Fraction(v)) for i, v in self.rows))
        if self.target is not None:
            object.__setattr__(self, "target", Fraction(self.target))

    def __len__(self):
        return len(self.rows)

    @property
    def indices(self) -> list:
        return [i for i, _ in self.rows]

    @property
    def values(self) -> list[Fraction]:
        return [v for _, v in self.rows]

    @property
    def last(self) -> Fraction:
        if not self.rows:
            raise ValueError(f"table {self.label!r} is empty")
        return self.rows[-1][1]

    def value_at(self, index) -> Fraction:
        for i, v in self.rows:
            if i == index:
                return v
        raise KeyError(index)

    def residual(self, value: Fraction) -> Fraction | None:
        if self.target is None:
            return None
        return abs(value - self.target)

    def relative_error(self, value: Fraction) -> Fraction | None:
        if self.target is None:
            return None
        if self.target == 0:
            return abs(value)
        return abs(value - self.target) / abs(self.target)

    def within(self, tolerance: Fraction | None = None, value: Fraction | None = None) -> bool:
        tol = self.tolerance if tolerance is None else Fraction(tolerance)
        if tol is None or self.target is None:
            raise ValueError("table has no target/tolerance to test against")
        return self.relative_error(self.last if value is None else value) <= tol

    def is_monotone_nondecreasing(self) -> bool:
        vals = self.values
        return all(a <= b for a, b in zip(vals, vals[1:]))


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())
