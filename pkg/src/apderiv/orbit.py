"""Dynamics of x, D_p(x), D_p^2(x), ... tracked through valuations only.

If x = a p^l with p not dividing a, then D_p(x) = a l p^(l-1), so the next
valuation is l - 1 + ord_p(l) no matter what a is.  Everything here runs
that recursion on exponents, which keeps 500-digit valuations cheap.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import cycle, islice
from typing import Iterator, Sequence

from .core import (
    INF,
    Number,
    PSplit,
    check_prime,
    dp_split,
    guarded_pow,
    split_of,
    valuation,
)
from .errors import ParameterError, TooLarge


def ord_step(p: int, ell: int) -> int:
    """Valuation of D_p(a p^ell) given ell >= 1 and p not dividing a."""
    if ell < 1:
        raise ParameterError("ord_step needs ell >= 1; D_p of a p-free value is 0")
    return ell - 1 + valuation(p, ell)


@dataclass(frozen=True)
class OrdSequence:
    terms: tuple
    truncated_at: int

    def increments(self) -> list[int]:
        """First differences, defined only while every term is finite."""
        if INF in self.terms:
            raise ParameterError("inc sequence is undefined once the orbit reaches 0")
        return [b - a for a, b in zip(self.terms, self.terms[1:])]


def iter_ords(p: int, start: Number) -> Iterator[int | float]:
    s = split_of(p, start)
    if s is None:
        while True:
            yield INF
    ell = s.exponent
    while True:
        yield ell
        if ell == 0:
            break
        ell = ord_step(p, ell)
    while True:
        yield INF


def ord_sequence(p: int, start: Number, terms: int) -> OrdSequence:
    check_prime(p)
    if terms < 1:
        raise ParameterError("terms must be >= 1")
    return OrdSequence(tuple(islice(iter_ords(p, start), terms)), terms)


@dataclass(frozen=True)
class SegmentSpec:
    """The block (k - 1, followed by (k - 1) mod p copies of -1)."""

    k: int
    head: int
    run_len: int

    def terms(self) -> tuple[int, ...]:
        return (self.head,) + (-1,) * self.run_len

    def __len__(self) -> int:
        return self.run_len + 1


def segment(p: int, k: int) -> SegmentSpec:
    if k < 1:
        raise ParameterError("segment parameter must be >= 1")
    return SegmentSpec(k, k - 1, (k - 1) % p)


@dataclass(frozen=True)
class LChain:
    ell: int
    steps: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.steps)


def lchain(p: int, ell: int) -> LChain:
    check_prime(p)
    if ell < p:
        raise ParameterError(f"l-chain needs ell >= p (got {ell} < {p})")
    cur = valuation(p, ell - ell % p)
    steps = [cur]
    while cur > p:
        m = cur - 1
        cur = valuation(p, m - m % p)
        steps.append(cur)
    return LChain(ell, tuple(steps))


@dataclass(frozen=True)
class IncProfile:
    """Predicted inc_p sequence: prefix of -1's, the segments, then the last one forever."""

    prime: int
    ell: int
    prefix_len: int
    segments: tuple[SegmentSpec, ...]

    @property
    def period(self) -> int:
        return self.segments[-1].k

    @property
    def periodic_segment(self) -> int:
        return len(self.segments) - 1

    def cycle_start(self) -> int:
        """Index into the ord sequence where the periodic tail begins."""
        return self.prefix_len + sum(len(s) for s in self.segments[:-1])

    def iter_increments(self) -> Iterator[int]:
        yield from (-1,) * self.prefix_len
        for s in self.segments[:-1]:
            yield from s.terms()
        yield from cycle(self.segments[-1].terms())

    def unroll(self, terms: int) -> list[int]:
        return list(islice(self.iter_increments(), terms))

    def i_tuple(self) -> tuple[int, ...]:
        """(prefix length, then the number of -1's in each segment)."""
        return (self.prefix_len,) + tuple(s.run_len for s in self.segments)

    def to_text(self) -> str:
        parts = [f"prefix={self.prefix_len}"]
        parts += [f"S({s.k})[{s.run_len}]" for s in self.segments]
        parts.append(f"tail=S({self.period}) period={self.period}")
        return "; ".join(parts)

    def to_json(self) -> dict:
        return {
            "prefix_len": self.prefix_len,
            "segments": [{"k": s.k, "head": s.head, "run_len": s.run_len} for s in self.segments],
            "period": self.period,
        }


def inc_profile(p: int, ell: int | PSplit) -> IncProfile:
    if isinstance(ell, PSplit):
        ell = ell.exponent
    chain = lchain(p, ell)
    return IncProfile(p, ell, ell % p, tuple(segment(p, k) for k in chain.steps))


def period(p: int, x: Number) -> int:
    check_prime(p)
    s = split_of(p, x)
    if s is None or s.exponent < p:
        return 1
    return inc_profile(p, s.exponent).period


class OrbitKind(enum.Enum):
    ZERO = "zero"
    FIXED_POINT = "fixed_point"
    DIVERGES_POSITIVE = "diverges_positive"
    DIVERGES_NEGATIVE = "diverges_negative"


@dataclass(frozen=True)
class OrbitClass:
    kind: OrbitKind
    # for fixed points: the landed value a*p^p, when it could be materialized
    value: PSplit | None = None
    cycle_start: int | None = field(default=None, compare=False)


def classify(p: int, x: Number, *, need_value: bool = False) -> OrbitClass:
    """Which of the three eventual behaviours the D_p-orbit of x has.

    Divergence direction is read from the sign of x: once on the cycle the
    orbit is monotone and never changes sign.
    """
    check_prime(p)
    s = split_of(p, x)
    if s is None or s.exponent < p:
        return OrbitClass(OrbitKind.ZERO)
    start = inc_profile(p, s.exponent).cycle_start()
    ell = s.exponent
    for _ in range(start):
        ell = ord_step(p, ell)
    if ell != p:
        kind = OrbitKind.DIVERGES_POSITIVE if s.sign > 0 else OrbitKind.DIVERGES_NEGATIVE
        return OrbitClass(kind, cycle_start=start)
    landed = s
    try:
        for _ in range(start):
            landed = dp_split(landed)
    except TooLarge:
        if need_value:
            raise
        landed = None
    return OrbitClass(OrbitKind.FIXED_POINT, landed, cycle_start=start)


def reverse_construct(p: int, i_values: Sequence[int]) -> int:
    """Exponent l such that p^l has the prescribed -1 run lengths i_0, ..., i_N."""
    check_prime(p)
    if len(i_values) < 2:
        raise ParameterError("need i_0 and at least one segment entry (N >= 1)")
    if any(not 0 <= i < p for i in i_values):
        raise ParameterError(f"every entry must lie in [0, {p - 1}]")
    k = i_values[-1] + 1
    for i in reversed(i_values[:-1]):
        k = guarded_pow(p, k, "tower level") + i + 1
    return k - 1
