"""The weight sequence driving the recursive growth algorithm.

w_0 = 1, w_1 = 0, w_2 = alpha - 1 and w_k = (k-1-alpha)...(2-alpha)(alpha-1)
for k >= 3, equivalently w_{k+1} = (k - alpha) w_k for k >= 2.  For rational
alpha everything is kept as an exact Fraction; a float alpha gives floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

Number = Union[Fraction, float]


def parse_alpha(text: str) -> Number:
    """Parse an alpha given as 'P/Q' or a decimal; exact when possible."""
    text = text.strip()
    if "/" in text:
        a = Fraction(text)
    else:
        try:
            a = Fraction(text)  # decimal strings stay exact
        except ValueError:
            a = Fraction(float(text))
    check_alpha(a)
    return a


def check_alpha(alpha: Number):
    if not (1 < alpha <= 2):
        raise ValueError(f"alpha must lie in (1, 2], got {alpha}")


@dataclass
class WeightSeq:
    """Cached weight sequence for a fixed alpha in (1, 2]."""

    alpha: Number
    _cache: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        check_alpha(self.alpha)
        one = Fraction(1) if self.exact else 1.0
        self._cache = [one, 0 * one, self.alpha - 1]

    @property
    def exact(self) -> bool:
        return isinstance(self.alpha, (Fraction, int))

    def w(self, k: int) -> Number:
        if k < 0:
            raise ValueError("weight index must be >= 0")
        while len(self._cache) <= k:
            j = len(self._cache) - 1  # w_{j+1} = (j - alpha) w_j, j >= 2
            self._cache.append((j - self.alpha) * self._cache[j])
        return self._cache[k]


def marchal_weight(k: int, ws: WeightSeq) -> Number:
    return ws.w(k)


def total_weight(s: int, n: int, alpha: Number) -> Number:
    """Total growth weight alpha*(s+n) + s - 1 of a graph with surplus s
    and leaf labels 0..n; depends on nothing else."""
    return alpha * (s + n) + s - 1
