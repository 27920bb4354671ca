"""Certified real arithmetic on directed-rounded MPFR enclosures.

A BoundedReal is a closed interval [lo, hi] of MPFR values that is
guaranteed to contain the exact real it stands for.  Every operation
rounds the lower endpoint toward -inf and the upper endpoint toward
+inf, so enclosures never narrow away the true value.  Quantities that
are exactly rational (single Euler-product factors, reciprocals of
integers, ...) are computed in exact rational arithmetic first and
converted outward once.

Verdicts of comparisons are three-valued: a strict or non-strict
inequality either Holds with a certified positive margin, Fails with a
certified non-positive one, or stays Undecided when the margin
enclosure straddles zero at the precision cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Callable, Iterator

import gmpy2
from gmpy2 import mpfr, mpq

from .config import DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS
from .errors import DomainError, PrecisionError, UsageError

if TYPE_CHECKING:
    from .primes import PrimeTable

RationalLike = int | Fraction | mpq


@lru_cache(maxsize=64)
def _ctx(bits: int, upward: bool) -> gmpy2.context:
    return gmpy2.context(
        precision=bits,
        round=gmpy2.RoundUp if upward else gmpy2.RoundDown,
        trap_inexact=False,
    )


def ctx_down(bits: int) -> gmpy2.context:
    """Context rounding toward -inf at the given precision."""
    return _ctx(bits, False)


def ctx_up(bits: int) -> gmpy2.context:
    """Context rounding toward +inf at the given precision."""
    return _ctx(bits, True)


class BoundedReal:
    """Certified enclosure [lo, hi] of a real number."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: mpfr, hi: mpfr):
        if gmpy2.is_nan(lo) or gmpy2.is_nan(hi):
            raise DomainError("NaN endpoint in enclosure")
        if lo > hi:
            raise DomainError(f"inverted enclosure [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    # -- constructors --------------------------------------------------

    @staticmethod
    def from_rational(q: RationalLike, bits: int = DEFAULT_PRECISION_BITS) -> "BoundedReal":
        """Tightest representable enclosure of an exact rational."""
        q = mpq(q)
        return BoundedReal(mpfr(q, bits, ctx_down(bits)), mpfr(q, bits, ctx_up(bits)))

    @staticmethod
    def from_int(n: int, bits: int = DEFAULT_PRECISION_BITS) -> "BoundedReal":
        return BoundedReal.from_rational(mpq(n), bits)

    @staticmethod
    def from_rational_bounds(
        lo: RationalLike, hi: RationalLike, bits: int = DEFAULT_PRECISION_BITS
    ) -> "BoundedReal":
        return BoundedReal(mpfr(mpq(lo), bits, ctx_down(bits)), mpfr(mpq(hi), bits, ctx_up(bits)))

    # -- introspection -------------------------------------------------

    @property
    def bits(self) -> int:
        return max(self.lo.precision, self.hi.precision)

    def width(self) -> mpfr:
        return ctx_up(self.bits).sub(self.hi, self.lo)

    def mid(self) -> float:
        return (float(self.lo) + float(self.hi)) / 2.0

    def contains(self, q: RationalLike) -> bool:
        """Exact containment test for a rational (no rounding involved)."""
        q = mpq(q)
        return self.lo <= q <= self.hi

    def contains_interval(self, other: "BoundedReal") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def strictly_positive(self) -> bool:
        return self.lo > 0

    def strictly_negative(self) -> bool:
        return self.hi < 0

    def at_bits(self, bits: int) -> "BoundedReal":
        """Re-round endpoints outward at a different precision."""
        return BoundedReal(
            ctx_down(bits).add(self.lo, 0), ctx_up(bits).add(self.hi, 0)
        )

    def __repr__(self) -> str:
        return f"BoundedReal[{self.lo}, {self.hi}]"

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other) -> "BoundedReal":
        if isinstance(other, BoundedReal):
            return other
        if isinstance(other, (int, Fraction, mpq)):
            return BoundedReal.from_rational(other, self.bits)
        return NotImplemented  # type: ignore[return-value]

    def __neg__(self) -> "BoundedReal":
        return BoundedReal(-self.hi, -self.lo)

    def __add__(self, other) -> "BoundedReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        b = max(self.bits, o.bits)
        return BoundedReal(ctx_down(b).add(self.lo, o.lo), ctx_up(b).add(self.hi, o.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "BoundedReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        b = max(self.bits, o.bits)
        return BoundedReal(ctx_down(b).sub(self.lo, o.hi), ctx_up(b).sub(self.hi, o.lo))

    def __rsub__(self, other) -> "BoundedReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other) -> "BoundedReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        b = max(self.bits, o.bits)
        dn, up = ctx_down(b), ctx_up(b)
        if self.lo >= 0 and o.lo >= 0:  # common fast path
            return BoundedReal(dn.mul(self.lo, o.lo), up.mul(self.hi, o.hi))
        cands_lo = [dn.mul(a, c) for a in (self.lo, self.hi) for c in (o.lo, o.hi)]
        cands_hi = [up.mul(a, c) for a in (self.lo, self.hi) for c in (o.lo, o.hi)]
        return BoundedReal(min(cands_lo), max(cands_hi))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "BoundedReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.lo <= 0 <= o.hi:
            raise DomainError("division by an enclosure containing zero")
        b = max(self.bits, o.bits)
        dn, up = ctx_down(b), ctx_up(b)
        if self.lo >= 0 and o.lo > 0:  # common fast path
            return BoundedReal(dn.div(self.lo, o.hi), up.div(self.hi, o.lo))
        cands_lo = [dn.div(a, c) for a in (self.lo, self.hi) for c in (o.lo, o.hi)]
        cands_hi = [up.div(a, c) for a in (self.lo, self.hi) for c in (o.lo, o.hi)]
        return BoundedReal(min(cands_lo), max(cands_hi))

    def __rtruediv__(self, other) -> "BoundedReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def square(self) -> "BoundedReal":
        b = self.bits
        dn, up = ctx_down(b), ctx_up(b)
        if self.lo >= 0:
            return BoundedReal(dn.mul(self.lo, self.lo), up.mul(self.hi, self.hi))
        if self.hi <= 0:
            return BoundedReal(dn.mul(self.hi, self.hi), up.mul(self.lo, self.lo))
        m = max(up.mul(self.lo, self.lo), up.mul(self.hi, self.hi))
        return BoundedReal(mpfr(0, b), m)


def log_br(x: BoundedReal) -> BoundedReal:
    """Outward-rounded natural log; requires a certified positive input."""
    if x.lo <= 0:
        raise DomainError(f"log of enclosure with non-positive lower bound: {x!r}")
    b = x.bits
    return BoundedReal(ctx_down(b).log(x.lo), ctx_up(b).log(x.hi))


def exp_br(x: BoundedReal) -> BoundedReal:
    b = x.bits
    return BoundedReal(ctx_down(b).exp(x.lo), ctx_up(b).exp(x.hi))


def loglog_br(x: BoundedReal) -> BoundedReal:
    """log(log(x)) for enclosures certified > 1."""
    if x.lo <= 1:
        raise DomainError(f"loglog needs a lower bound > 1, got {x!r}")
    return log_br(log_br(x))


def log_int(n: int, bits: int = DEFAULT_PRECISION_BITS) -> BoundedReal:
    """Enclosure of log(n) for an exact positive integer."""
    if n <= 0:
        raise DomainError("log of a non-positive integer")
    return BoundedReal(ctx_down(bits).log(n), ctx_up(bits).log(n))


# -- fundamental constants ----------------------------------------------
#
# Validated decimal literals, 165 digits each so the highest supported
# working precision (512 bits ~ 154 digits) never outruns them.  Each
# enclosure is the literal +/- 10^-160; cross-consistency of gamma and
# e^gamma is asserted by the test suite.

_GAMMA_LITERAL = (
    "0.5772156649015328606065120900824024310421593359399235988057672348848677"
    "2677766467093694706329174674951463144724980708248096050401448654283622417399764492"
    "3536253500333742937"
)
_EXP_GAMMA_LITERAL = (
    "1.7810724179901979852365041031071795491696452143034302053576658765128410"
    "7681358829370757421648841828033482224522514574200105579457424819650088156857512645"
    "0011584595726740397"
)
_MERTENS_LITERAL = (
    "0.2614972128476427837554268386086958590515666482611992061920642139249245"
    "1089736820971414263143424665105161772887648602199778339032427004442454348740197238"
    "6406661949557093932"
)
_LITERAL_ERROR = Fraction(1, 10**160)
_CONSTANT_CAP_BITS = MAX_PRECISION_BITS


def _const_from_literal(literal: str, bits: int) -> BoundedReal:
    if bits > _CONSTANT_CAP_BITS:
        raise PrecisionError(
            f"constant literals support at most {_CONSTANT_CAP_BITS} bits, got {bits}"
        )
    center = Fraction(literal)
    return BoundedReal.from_rational_bounds(
        center - _LITERAL_ERROR, center + _LITERAL_ERROR, bits
    )


@lru_cache(maxsize=None)
def const_gamma(bits: int = DEFAULT_PRECISION_BITS) -> BoundedReal:
    """Euler-Mascheroni constant gamma = 0.5772156649..."""
    return _const_from_literal(_GAMMA_LITERAL, bits)


@lru_cache(maxsize=None)
def const_exp_gamma(bits: int = DEFAULT_PRECISION_BITS) -> BoundedReal:
    """e^gamma = 1.7810724179..."""
    return _const_from_literal(_EXP_GAMMA_LITERAL, bits)


@lru_cache(maxsize=None)
def const_mertens(bits: int = DEFAULT_PRECISION_BITS) -> BoundedReal:
    """Meissel-Mertens constant B = 0.2614972128..."""
    return _const_from_literal(_MERTENS_LITERAL, bits)


def zeta_int(
    t: int,
    cutoff: int,
    table: "PrimeTable",
    bits: int = DEFAULT_PRECISION_BITS,
) -> BoundedReal:
    """Enclosure of zeta(t) for integer t >= 2 via a truncated Euler product.

    The product over primes p <= cutoff is exact per factor; the omitted
    tail over p > cutoff is enclosed by [1, exp(t * cutoff^(1-t) / (t-1))].
    """
    if t < 2:
        raise UsageError("zeta_int requires t >= 2")
    if cutoff < 3:
        raise UsageError("zeta_int requires cutoff >= 3")
    dn, up = ctx_down(bits), ctx_up(bits)
    lo = mpfr(1, bits)
    hi = mpfr(1, bits)
    for p in table.primes_up_to(cutoff):
        pt = p**t
        factor = mpq(pt, pt - 1)
        lo = dn.mul(lo, mpfr(factor, bits, dn))
        hi = up.mul(hi, mpfr(factor, bits, up))
    tail_log = mpq(t, (t - 1) * cutoff ** (t - 1))
    hi = up.mul(hi, up.exp(mpfr(tail_log, bits, up)))
    return BoundedReal(lo, hi)


# -- verdicts -------------------------------------------------------------


class VerdictState(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a certified comparison, with the signed margin rhs - lhs.

    For strict comparisons: Holds implies margin.lo > 0 and Fails implies
    margin.hi <= 0.  For non-strict ones the boundary case margin == [0, 0]
    counts as Holds (an exactly attained '<=').
    """

    state: VerdictState
    margin: BoundedReal

    @property
    def holds(self) -> bool:
        return self.state is VerdictState.HOLDS

    @property
    def fails(self) -> bool:
        return self.state is VerdictState.FAILS

    @property
    def undecided(self) -> bool:
        return self.state is VerdictState.UNDECIDED

    def exit_code(self) -> int:
        return {VerdictState.HOLDS: 0, VerdictState.FAILS: 1, VerdictState.UNDECIDED: 2}[
            self.state
        ]


@dataclass(frozen=True)
class RetryPolicy:
    """Precision ladder for resolving Undecided comparisons."""

    start_bits: int = DEFAULT_PRECISION_BITS
    max_bits: int = MAX_PRECISION_BITS

    def ladder(self) -> Iterator[int]:
        bits = self.start_bits
        while True:
            yield min(bits, self.max_bits)
            if bits >= self.max_bits:
                return
            bits *= 2


def _classify_margin(margin: BoundedReal, strict: bool) -> VerdictState:
    if strict:
        if margin.lo > 0:
            return VerdictState.HOLDS
        if margin.hi <= 0:
            return VerdictState.FAILS
    else:
        if margin.lo >= 0:
            return VerdictState.HOLDS
        if margin.hi < 0:
            return VerdictState.FAILS
    return VerdictState.UNDECIDED


def compare_strict(
    lhs: BoundedReal,
    rhs: BoundedReal,
    refine: Callable[[int], tuple[BoundedReal, BoundedReal]] | None = None,
    policy: RetryPolicy | None = None,
) -> Verdict:
    """Certified verdict on lhs < rhs.

    When the given enclosures straddle and `refine` is supplied, both sides
    are recomputed along the policy's precision ladder before giving up
    and returning Undecided.
    """
    return _compare(lhs, rhs, strict=True, refine=refine, policy=policy)


def compare_nonstrict(
    lhs: BoundedReal,
    rhs: BoundedReal,
    refine: Callable[[int], tuple[BoundedReal, BoundedReal]] | None = None,
    policy: RetryPolicy | None = None,
) -> Verdict:
    """Certified verdict on lhs <= rhs."""
    return _compare(lhs, rhs, strict=False, refine=refine, policy=policy)


def _compare(lhs, rhs, strict, refine, policy) -> Verdict:
    margin = rhs - lhs
    state = _classify_margin(margin, strict)
    if state is not VerdictState.UNDECIDED or refine is None:
        return Verdict(state, margin)
    policy = policy or RetryPolicy(start_bits=max(lhs.bits, rhs.bits))
    for bits in policy.ladder():
        if bits <= max(lhs.bits, rhs.bits):
            continue
        lhs, rhs = refine(bits)
        margin = rhs - lhs
        state = _classify_margin(margin, strict)
        if state is not VerdictState.UNDECIDED:
            return Verdict(state, margin)
    return Verdict(VerdictState.UNDECIDED, margin)


def compare_exact(lhs: RationalLike, rhs: RationalLike, strict: bool = True) -> Verdict:
    """Verdict for two exact rationals; the margin enclosure is tight.

    Exact equality is decidable here, unlike for transcendental enclosures:
    equal operands Fail a strict comparison and Hold a non-strict one.
    """
    diff = mpq(rhs) - mpq(lhs)
    margin = BoundedReal.from_rational(diff)
    if diff > 0 or (not strict and diff == 0):
        return Verdict(VerdictState.HOLDS, margin)
    return Verdict(VerdictState.FAILS, margin)
