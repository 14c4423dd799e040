"""Exact p-adic arithmetic: valuations, D_p, the full derivative D, and the
two exponent-preserving representations of an integer.

Integers of the form ``unit * p**exponent`` are carried as :class:`PSplit` so
that the exponent can be astronomically large without ever materializing
the integer.  Integers with positive valuation additionally have a unique
:class:`StandardForm` ``a * p**(b * p**k)`` with ``p`` dividing neither ``a``
nor ``b``.
"""

from __future__ import annotations

import math
import re
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

from .errors import FactorBoundExceeded, ParameterError, TooLarge

INF = math.inf

DEFAULT_MAX_BITS = 1 << 20
DEFAULT_FACTOR_BOUND = 10**7

_limits = {"max_bits": DEFAULT_MAX_BITS, "factor_bound": DEFAULT_FACTOR_BOUND}


def max_bits() -> int:
    return _limits["max_bits"]


def set_max_bits(bits: int) -> None:
    if bits < 64:
        raise ParameterError("max_bits must be at least 64")
    _limits["max_bits"] = bits


def factor_bound() -> int:
    return _limits["factor_bound"]


def set_factor_bound(bound: int) -> None:
    if bound < 2:
        raise ParameterError("factor bound must be at least 2")
    _limits["factor_bound"] = bound


@contextmanager
def size_limit(bits: int) -> Iterator[None]:
    """Temporarily change the per-integer bit bound."""
    old = _limits["max_bits"]
    set_max_bits(bits)
    try:
        yield
    finally:
        _limits["max_bits"] = old


def power_bits(p: int, e: int) -> int:
    """Upper estimate of the bit length of ``p**e`` without computing it."""
    if e <= 0:
        return 1
    # a float cannot hold e once it has hundreds of digits; such powers are
    # over any sane limit anyway
    if e.bit_length() > 60:
        return 1 << 62
    return int(e * math.log2(p)) + 1


def check_bits(what: str, bits: int) -> None:
    if bits > _limits["max_bits"]:
        raise TooLarge(what, bits, _limits["max_bits"])


def guarded_pow(p: int, e: int, what: str = "power") -> int:
    check_bits(f"{what} {p}^e ({e.bit_length()}-bit e)", power_bits(p, e))
    return p**e


# -- primes ---------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# the bases above are a deterministic witness set below this bound
_MR_LIMIT = 3317044064679887385961981


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    if n >= _MR_LIMIT:
        raise ParameterError(f"primality of {n} cannot be decided deterministically here")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=256)
def check_prime(p: int) -> int:
    """Return ``p`` unchanged, or raise :class:`ParameterError` if it is not prime."""
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise ParameterError(f"p must be a prime, got {p!r}")
    return p


# -- valuations and D_p -----------------------------------------------------


def valuation(p: int, x: int) -> int:
    """ord_p(x) for nonzero x, without validating p."""
    x = abs(x)
    if p == 2:
        return (x & -x).bit_length() - 1
    v = 0
    # peel p^(2^j) blocks first so that large valuations cost O(log v) divisions
    block, width = p, 1
    while x % block == 0:
        x //= block
        v += width
        block, width = block * block, width * 2
    while width > 1:
        block, width = math.isqrt(block), width // 2
        if x % block == 0:
            x //= block
            v += width
    return v


def ord_p(p: int, x: int) -> int | float:
    """p-adic valuation of x; ``INF`` for x == 0."""
    check_prime(p)
    if x == 0:
        return INF
    return valuation(p, x)


def pfloor(p: int, x: int) -> int:
    """Largest multiple of p that is <= x."""
    check_prime(p)
    return x - x % p  # Python's % is already floored: x % p lies in [0, p-1]


def dp(p: int, x: int) -> int:
    """Arithmetic partial derivative D_p(x) = (x / p) * ord_p(x)."""
    check_prime(p)
    if x == 0:
        return 0
    v = valuation(p, x)
    return (x // p) * v if v else 0


def factorize(n: int, bound: int | None = None) -> dict[int, int]:
    """Trial-division factorization of ``|n|``; raises past ``bound``."""
    bound = factor_bound() if bound is None else bound
    n = abs(n)
    factors: dict[int, int] = {}
    if n < 2:
        return factors
    d = 2
    while d * d <= n:
        if d > bound:
            raise FactorBoundExceeded(f"cofactor {n} has no factor <= {bound}")
        while n % d == 0:
            n //= d
            factors[d] = factors.get(d, 0) + 1
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def d_full(x: int) -> int:
    """Full arithmetic derivative D(x), the sum of D_p(x) over primes p | x."""
    return sum((x // q) * e for q, e in factorize(x).items())


# -- representations ----------------------------------------------------------


@dataclass(frozen=True)
class PSplit:
    """A nonzero integer written as ``unit * prime**exponent`` with p not dividing unit."""

    prime: int
    unit: int
    exponent: int

    def __post_init__(self):
        if self.unit == 0 or self.unit % self.prime == 0:
            raise ParameterError(f"unit {self.unit} must be nonzero and prime to {self.prime}")
        if self.exponent < 0:
            raise ParameterError("exponent must be non-negative")

    @property
    def sign(self) -> int:
        return 1 if self.unit > 0 else -1

    def bits(self) -> int:
        return power_bits(self.prime, self.exponent) + self.unit.bit_length()

    def digits(self) -> int:
        """Estimated decimal length of the materialized value."""
        return _digits_estimate(self.prime, self.exponent, self.unit)

    def value(self) -> int:
        check_bits(f"value *{self.prime}^({self.exponent.bit_length()}-bit exponent)", self.bits())
        return self.unit * self.prime**self.exponent

    def __str__(self) -> str:
        return f"{self.unit}*{self.prime}^{self.exponent}"


@dataclass(frozen=True)
class StandardForm:
    """``a * prime**(b * prime**k)`` with prime dividing neither a nor b, b > 0."""

    prime: int
    a: int
    b: int
    k: int

    def __post_init__(self):
        p = self.prime
        if self.a == 0 or self.a % p == 0:
            raise ParameterError(f"a = {self.a} must be nonzero and prime to {p}")
        if self.b <= 0 or self.b % p == 0:
            raise ParameterError(f"b = {self.b} must be positive and prime to {p}")
        if self.k < 0:
            raise ParameterError("k must be non-negative")

    @property
    def exponent(self) -> int:
        return self.b * self.prime**self.k

    def to_psplit(self) -> PSplit:
        return PSplit(self.prime, self.a, self.exponent)

    def digits(self) -> int:
        return _digits_estimate(self.prime, self.exponent, self.a)

    def value(self) -> int:
        return self.to_psplit().value()

    def __str__(self) -> str:
        return f"{self.a}*{self.prime}^({self.b}*{self.prime}^{self.k})"


Number = Union[int, PSplit]


def _digits_estimate(p: int, e: int, unit: int) -> int:
    if e.bit_length() > 900:
        # e * log10(p) as an integer, good to a few units
        return e * int(math.log10(p) * 10**9) // 10**9 + len(str(abs(unit)))
    return int(e * math.log10(p) + math.log10(abs(unit))) + 1


def psplit(p: int, x: int) -> PSplit:
    check_prime(p)
    if x == 0:
        raise ParameterError("0 has no p-split")
    v = valuation(p, x)
    return PSplit(p, x // p**v, v)


def split_of(p: int, x: Number) -> PSplit | None:
    """Normalize an int or PSplit to a PSplit; None stands for zero."""
    if isinstance(x, PSplit):
        if x.prime != p:
            raise ParameterError(f"value is split over {x.prime}, expected {p}")
        return x
    return None if x == 0 else psplit(p, x)


def to_standard(s: PSplit) -> StandardForm:
    if s.exponent < 1:
        raise ParameterError("standard form needs ord_p(x) >= 1")
    k = valuation(s.prime, s.exponent)
    return StandardForm(s.prime, s.unit, s.exponent // s.prime**k, k)


def from_standard(sf: StandardForm) -> PSplit:
    return sf.to_psplit()


def dp_standard(sf: StandardForm) -> PSplit:
    """D_p(a p^(b p^k)) = a b p^(b p^k + k - 1), computed on the exponent only."""
    exponent = sf.exponent
    check_bits("standard-form exponent b*p^k", exponent.bit_length())
    return PSplit(sf.prime, sf.a * sf.b, exponent + sf.k - 1)


def dp_split(s: PSplit | None) -> PSplit | None:
    """D_p applied to a p-split value; None represents zero."""
    if s is None or s.exponent == 0:
        return None
    e = s.exponent
    v = valuation(s.prime, e)
    unit = s.unit * (e // s.prime**v)
    check_bits("coefficient", unit.bit_length())
    return PSplit(s.prime, unit, e - 1 + v)


# -- text syntax ----------------------------------------------------------------

# coefficient is optional: "2^(5*2^1)", "-2^10" and "5*2^10" all parse
_COEFF = r"^([+-]?\d+\*|[+-]?)"
_STANDARD_RE = re.compile(_COEFF + r"(\d+)\^\((\d+)\*(\d+)\^(\d+)\)$")
_POWER_RE = re.compile(_COEFF + r"(\d+)\^(\d+)$")
_INT_RE = re.compile(r"^[+-]?\d+$")


def _parse_int(token: str) -> int:
    digits = len(token.lstrip("+-"))
    check_bits(f"decimal literal ({digits} digits); use the a*p^(b*p^k) form for huge values",
               int(digits * math.log2(10)) + 1)
    if digits > 4000 and hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    return int(token)


def _coefficient(text: str) -> int:
    text = text.rstrip("*")
    return int(text + "1") if text in ("", "+", "-") else _parse_int(text)


def parse_number(text: str, p: int | None = None) -> Number:
    """Parse a decimal integer, ``a*p^e``, or standard-form ``a*p^(b*p^k)``.

    Plain decimals come back as ``int``; the symbolic forms come back as a
    normalized :class:`PSplit` whose prime must agree with ``p`` when given.
    """
    token = text.strip().replace(" ", "")
    if _INT_RE.match(token):
        return _parse_int(token)
    m = _STANDARD_RE.match(token)
    if m:
        a = _coefficient(m.group(1))
        q, b, q2, k = (int(g) for g in m.groups()[1:])
        if q != q2:
            raise ParameterError(f"mismatched primes in {text!r}")
        if k.bit_length() > 64:
            raise TooLarge(f"k in {text!r}", k.bit_length(), max_bits())
        e = b * guarded_pow(q, k, "exponent")
    else:
        m = _POWER_RE.match(token)
        if not m:
            raise ParameterError(f"cannot parse number {text!r}")
        a = _coefficient(m.group(1))
        q, e = (int(g) for g in m.groups()[1:])
    check_prime(q)
    if p is not None and q != p:
        raise ParameterError(f"{text!r} is written over {q}, expected p={p}")
    if a == 0 or e == 0:
        return a
    inner = psplit(q, a)
    return PSplit(q, inner.unit, inner.exponent + e)
