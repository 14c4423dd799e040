"""Anti-partial derivatives: solutions x of D_p(x) = y.

With x = a p^(b p^k) in standard form, D_p(x) = a b p^(b p^k + k - 1), so for
y = a0 p^l0 the solutions are exactly the k with b = (l0 + 1 - k) / p^k a
positive integer prime to p that divides a0.  Only O(log l0) values of k
need checking, so y never has to be materialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    Number,
    PSplit,
    StandardForm,
    check_bits,
    check_prime,
    dp_standard,
    guarded_pow,
    split_of,
)
from .errors import EmptySet, InfiniteSet, ParameterError, VerificationFailure

# members of an AntiSet are materialized for display below this many digits
DISPLAY_DIGITS = 4000


@dataclass(frozen=True)
class AntiSet:
    """All integral anti-partial derivatives of ``target``, ascending in k."""

    prime: int
    target: PSplit
    members: tuple[StandardForm, ...]
    c_values: tuple[int, ...]
    primitive_index: int = 0

    @property
    def count(self) -> int:
        return len(self.members)

    @property
    def primitive(self) -> StandardForm:
        if not self.members:
            raise EmptySet(f"{self.target} has no anti-partial derivative w.r.t. {self.prime}")
        return self.members[self.primitive_index]

    def to_json(self) -> dict:
        return {
            "p": self.prime,
            "y": render_split(self.target),
            "count": self.count,
            "members": [render_standard(m) for m in self.members],
            "primitive": self.primitive_index if self.members else None,
            "c_values": list(self.c_values),
        }


def render_split(s: PSplit) -> int | dict:
    if s.digits() <= DISPLAY_DIGITS:
        return s.value()
    return {"form": f"{s.unit}*{s.prime}^{s.exponent}", "digits": s.digits()}


def render_standard(m: StandardForm) -> dict:
    out = {"a": m.a, "b": m.b, "k": m.k}
    if m.digits() <= DISPLAY_DIGITS:
        out["value"] = m.value()
    else:
        out["form"] = str(m)
        out["digits"] = m.digits()
    return out


def _target(p: int, y: Number) -> PSplit:
    check_prime(p)
    s = split_of(p, y)
    if s is None:
        raise InfiniteSet(p)
    return s


def _candidate_ks(p: int, ell0: int):
    """Yield (k, b) with b p^k + k - 1 = ell0, b > 0 and p not dividing b."""
    total = ell0 + 1
    k, pk = 0, 1
    while pk + k <= total:
        q, r = divmod(total - k, pk)
        if r == 0 and q % p:
            yield k, q
        k += 1
        pk *= p


def anti_derivatives(p: int, y: Number) -> AntiSet:
    s = _target(p, y)
    check_bits("target exponent", s.exponent.bit_length())
    if s.exponent == 0:
        # D_p(x) = y with p not dividing y forces x = y p
        members = [StandardForm(p, s.unit, 1, 0)]
    else:
        members = [StandardForm(p, s.unit // b, b, k)
                   for k, b in _candidate_ks(p, s.exponent) if s.unit % b == 0]
    c_values: tuple[int, ...] = ()
    if members:
        k0 = members[0].k
        step = p**k0
        c_values = tuple((m.k - k0) // step for m in members)
    return AntiSet(p, s, tuple(members), c_values)


def count_anti(p: int, y: Number) -> int:
    return anti_derivatives(p, y).count


def count_anti_rational(p: int, y: Number) -> int:
    """Number of rational x with D_p(x) = y (b no longer has to divide a0)."""
    s = _target(p, y)
    if s.exponent == 0:
        return 1
    return sum(1 for _ in _candidate_ks(p, s.exponent))


def primitive_anti(p: int, y: Number) -> StandardForm:
    return anti_derivatives(p, y).primitive


def _require_primitive(x0: StandardForm) -> None:
    if x0.k == 0:
        return
    y = dp_standard(x0)
    anti = anti_derivatives(x0.prime, y)
    if not anti.members or anti.primitive != x0:
        raise ParameterError(f"{x0} is not the primitive anti-partial derivative of its D_p")


def _exact_c_values(x0: StandardForm):
    """Yield (c, b) for c in [0, b0) with p^(p^k0 c) exactly dividing b0 - c."""
    p, b0 = x0.prime, x0.b
    step = p**x0.k
    c = 0
    while c < b0:
        e = step * c
        # p^e <= b0 - c is necessary, and bounds c by log_p(b0)
        if e.bit_length() > b0.bit_length() + 1:
            break
        rest = b0 - c
        pe = p**e
        if pe > rest:
            break
        q, r = divmod(rest, pe)
        if r == 0 and q % p:
            yield c, q
        c += 1


def c_set(x0: StandardForm) -> list[int]:
    _require_primitive(x0)
    ab = x0.a * x0.b
    return [c for c, b in _exact_c_values(x0) if ab % b == 0]


def c_set_rational(x0: StandardForm) -> list[int]:
    _require_primitive(x0)
    return [c for c, _ in _exact_c_values(x0)]


@dataclass(frozen=True)
class RationalAnti:
    """a p^(b p^k) with rational a; the non-integral case of :func:`expand_c`."""

    prime: int
    a: Fraction
    b: int
    k: int


def _expand(x0: StandardForm, c: int) -> tuple[Fraction, int, int]:
    p = x0.prime
    e = p**x0.k * c
    b, r = divmod(x0.b - c, guarded_pow(p, e, "c-expansion"))
    if c < 0 or c >= x0.b or r or b % p == 0:
        raise ParameterError(f"c = {c} is not in C_Q({x0})")
    return Fraction(x0.a * x0.b, b), b, e + x0.k


def expand_c(x0: StandardForm, c: int) -> StandardForm:
    a, b, k = _expand(x0, c)
    if a.denominator != 1:
        raise ParameterError(f"c = {c} gives a rational anti-derivative only")
    return StandardForm(x0.prime, a.numerator, b, k)


def expand_c_rational(x0: StandardForm, c: int) -> RationalAnti:
    a, b, k = _expand(x0, c)
    return RationalAnti(x0.prime, a, b, k)


# -- constructions with a prescribed number of anti-derivatives ---------------


def construct_k0(p: int, m: int) -> int:
    """p + p^2 + ... + p^m; any x0 with this k is primitive."""
    check_prime(p)
    if m < 2:
        raise ParameterError("m must be >= 2")
    return sum(p**j for j in range(1, m + 1))


def is_primitive_k0(p: int, k0: int) -> bool:
    """True when k0 = 0 or k0 = p + ... + p^m for some m >= 2."""
    if k0 == 0:
        return True
    total, j = p, 1
    while total < k0:
        j += 1
        total += p**j
    return total == k0 and j >= 2


def construct_b0(p: int, n: int, k0: int) -> tuple[int, list[int]]:
    check_prime(p)
    if n < 1 or k0 < 0:
        raise ParameterError("need n >= 1 and k0 >= 0")
    step = p**k0
    cs = [0]
    for _ in range(n):
        prev = cs[-1]
        cs.append(guarded_pow(p, step * prev, "c recursion") + prev)
    return cs[-1], cs


def construct_a0(p: int, n: int, k0: int, b0: int, c_list: list[int]) -> int:
    step = p**k0
    a0 = 1
    for c in c_list[1:n]:
        q, r = divmod(b0 - c, p ** (step * c))
        if r:
            raise ParameterError("c_list does not come from construct_b0")
        a0 *= q
    check_bits("a0", a0.bit_length())
    return a0


@dataclass(frozen=True)
class ConstructionResult:
    p: int
    n: int
    k0: int
    c_list: tuple[int, ...]
    b0: int
    a0: int
    x0: StandardForm
    y: PSplit
    count: int
    c_rational: tuple[int, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "k0": self.k0,
            "c_list": [_render_int(c) for c in self.c_list],
            "b0": _render_int(self.b0),
            "a0": _render_int(self.a0),
            "x0": render_standard(self.x0),
            "y": render_split(self.y),
            "count": self.count,
            "count_rational": len(self.c_rational),
        }


def _render_int(v: int) -> int | dict:
    digits = int(v.bit_length() * 0.30103) + 1
    if digits <= DISPLAY_DIGITS:
        return v
    return {"form": "integer", "digits": digits}


def construct_with_n_antis(p: int, n: int, k0: int = 0) -> ConstructionResult:
    """Build x0 with D_p(x0) having exactly n integral anti-derivatives, and check it."""
    check_prime(p)
    if not is_primitive_k0(p, k0):
        raise ParameterError(f"k0 = {k0} is neither 0 nor p + p^2 + ... + p^m")
    b0, cs = construct_b0(p, n, k0)
    a0 = construct_a0(p, n, k0, b0, cs)
    x0 = StandardForm(p, a0, b0, k0)
    y = dp_standard(x0)
    anti = anti_derivatives(p, y)
    if anti.count != n or anti.primitive != x0:
        raise VerificationFailure(f"construction gave {anti.count} anti-derivatives, expected {n}")
    if list(anti.c_values) != cs[:n]:
        raise VerificationFailure("enumerated c values disagree with the recursion")
    return ConstructionResult(p, n, k0, tuple(cs), b0, a0, x0, y, anti.count,
                              tuple(c_set_rational(x0)))
