"""Exact scalars, multi-indices, and integer weight windows.

Scalars are ``fractions.Fraction`` values (plain ``int`` is accepted
everywhere and compares/hashes equal to the reduced fraction, so the two may
be mixed freely).  Multi-indices are plain tuples of ints whose length is the
ambient rank; every operation checks rank compatibility.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterator

from .errors import ArgumentError, StructureError

Scalar = Fraction

MultiIndex = tuple  # tuple[int, ...]


def parse_scalar(text: str) -> Fraction:
    """Parse "p" or "p/q" into a reduced fraction."""
    return Fraction(text.strip())


def format_scalar(value) -> str:
    return str(Fraction(value))


def check_rank(a: MultiIndex, b: MultiIndex) -> None:
    if len(a) != len(b):
        raise StructureError(f"rank mismatch: {len(a)} vs {len(b)}")


def mi_zero(n: int) -> MultiIndex:
    return (0,) * n


def mi_unit(i: int, n: int) -> MultiIndex:
    """Unit vector e_i, 1-based."""
    if not 1 <= i <= n:
        raise ArgumentError(f"index {i} out of range 1..{n}")
    return tuple(1 if k == i - 1 else 0 for k in range(n))


def mi_add(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    check_rank(a, b)
    return tuple(x + y for x, y in zip(a, b))


def mi_sub(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    check_rank(a, b)
    return tuple(x - y for x, y in zip(a, b))


def mi_neg(a: MultiIndex) -> MultiIndex:
    return tuple(-x for x in a)


def mi_geq(a: MultiIndex, b: MultiIndex) -> bool:
    """Componentwise partial order: a >= b iff a_i >= b_i for all i."""
    check_rank(a, b)
    return all(x >= y for x, y in zip(a, b))


def mi_abs_sum(a: MultiIndex) -> int:
    return sum(abs(x) for x in a)


def mi_total(a: MultiIndex) -> int:
    return sum(a)


def falling(x, k: int):
    """Falling factorial x(x-1)...(x-k+1); exact for int or Fraction x."""
    out = 1
    for j in range(k):
        out *= x - j
    return out


def binomial(m: int, k: int) -> int:
    if k < 0 or k > m:
        return 0
    out = 1
    for j in range(k):
        out = out * (m - j) // (j + 1)
    return out


def format_multiindex(a: MultiIndex) -> str:
    return "(" + ",".join(str(x) for x in a) + ")"


def parse_multiindex(text: str) -> MultiIndex:
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    parts = [p.strip() for p in body.split(",") if p.strip()]
    if not parts:
        raise StructureError(f"empty multi-index: {text!r}")
    return tuple(int(p) for p in parts)


class TruncationBox:
    """Inclusive integer window on weight keys with a safety margin.

    The outer box is [lower, upper] componentwise; the inner box shrinks both
    bounds by ``margin``.  Closure computations apply generators only when the
    result stays inside the outer box and judge completeness on the inner box.
    """

    def __init__(self, lower: MultiIndex, upper: MultiIndex, margin: int = 0):
        lower = tuple(lower)
        upper = tuple(upper)
        check_rank(lower, upper)
        if margin < 0:
            raise ArgumentError("margin must be nonnegative")
        if not mi_geq(upper, lower):
            raise ArgumentError(f"empty box: lower={lower} upper={upper}")
        inner_lo = tuple(x + margin for x in lower)
        inner_hi = tuple(x - margin for x in upper)
        if not mi_geq(inner_hi, inner_lo):
            raise ArgumentError(
                f"empty inner box: lower={lower} upper={upper} margin={margin}"
            )
        self.lower = lower
        self.upper = upper
        self.margin = margin
        self.inner_lower = inner_lo
        self.inner_upper = inner_hi

    @property
    def rank(self) -> int:
        return len(self.lower)

    def contains(self, key: MultiIndex) -> bool:
        return mi_geq(key, self.lower) and mi_geq(self.upper, key)

    def contains_inner(self, key: MultiIndex) -> bool:
        return mi_geq(key, self.inner_lower) and mi_geq(self.inner_upper, key)

    def keys(self) -> Iterator[MultiIndex]:
        ranges = [range(lo, hi + 1) for lo, hi in zip(self.lower, self.upper)]
        return itertools.product(*ranges)

    def inner_keys(self) -> Iterator[MultiIndex]:
        ranges = [
            range(lo, hi + 1) for lo, hi in zip(self.inner_lower, self.inner_upper)
        ]
        return itertools.product(*ranges)

    def expand(self, pad: int) -> "TruncationBox":
        return TruncationBox(
            tuple(x - pad for x in self.lower),
            tuple(x + pad for x in self.upper),
            self.margin,
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncationBox)
            and self.lower == other.lower
            and self.upper == other.upper
            and self.margin == other.margin
        )

    def __repr__(self) -> str:
        return f"TruncationBox({self.lower}, {self.upper}, margin={self.margin})"
