"""The four certified inequality checks.

All checks work in ratio form -- sigma(n)/n or n/phi(n) against
e^gamma * log log n -- so every quantity stays near unity no matter how
large n is.  Left sides are exact rationals computed per factor; right
sides are transcendental enclosures.  Conventions at the bottom of the
range: n = 1 and n = 2 Fail the Robin and Nicolas checks (for n = 1 the
right side is undefined, for n = 2 it is negative).
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache

import gmpy2
from gmpy2 import mpq

from .arith import Factorization, first_primes, harmonic
from .arith import phi_ratio_exact, sigma_ratio_exact
from .config import DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS
from .errors import UsageError
from .intervals import (
    BoundedReal,
    Verdict,
    VerdictState,
    _classify_margin,
    const_exp_gamma,
    ctx_down,
    ctx_up,
    exp_br,
    log_br,
)


class CriterionId(str, Enum):
    """Stable tokens naming the four checks in CLI commands and reports."""

    ROBIN = "robin"
    NICOLAS = "nicolas"
    LAGARIAS = "lagarias"
    RS_UPPER = "rs-upper"


# Scans hit the same small primes millions of times; cache their log
# enclosures per precision.
@lru_cache(maxsize=65536)
def _log_prime(p: int, bits: int) -> tuple:
    return (ctx_down(bits).log(p), ctx_up(bits).log(p))


def log_n_enclosure(f: Factorization, bits: int = DEFAULT_PRECISION_BITS) -> BoundedReal:
    """Enclosure of log n = sum e_i log(p_i), with cached per-prime logs."""
    dn, up = ctx_down(bits), ctx_up(bits)
    lo = gmpy2.mpfr(0, bits)
    hi = gmpy2.mpfr(0, bits)
    for p, e in f.entries:
        llo, lhi = _log_prime(p, bits)
        lo = dn.add(lo, dn.mul(llo, e))
        hi = up.add(hi, up.mul(lhi, e))
    return BoundedReal(lo, hi)


def loglog_enclosure(f: Factorization, bits: int = DEFAULT_PRECISION_BITS) -> BoundedReal:
    """Enclosure of log log n; requires n >= 2 so that log n > 0 certified."""
    return log_br(log_n_enclosure(f, bits))


def _conventional_fail() -> Verdict:
    # n = 1: the right side is undefined; conventional margin of -1
    return Verdict(VerdictState.FAILS, BoundedReal.from_int(-1))


def _ratio_vs_loglog(
    f: Factorization, lhs_exact: mpq, strict: bool, bits: int, max_bits: int
) -> Verdict:
    while True:
        rhs = const_exp_gamma(bits) * loglog_enclosure(f, bits)
        margin = rhs - BoundedReal.from_rational(lhs_exact, bits)
        state = _classify_margin(margin, strict)
        if state is not VerdictState.UNDECIDED or bits >= max_bits:
            return Verdict(state, margin)
        bits = min(2 * bits, max_bits)


def robin_check(
    f: Factorization,
    bits: int = DEFAULT_PRECISION_BITS,
    max_bits: int = MAX_PRECISION_BITS,
) -> Verdict:
    """Certified verdict on sigma(n)/n < e^gamma * log log n (strict)."""
    if not f.entries:
        return _conventional_fail()
    return _ratio_vs_loglog(f, sigma_ratio_exact(f), True, bits, max_bits)


def nicolas_check(
    f: Factorization,
    bits: int = DEFAULT_PRECISION_BITS,
    max_bits: int = MAX_PRECISION_BITS,
) -> Verdict:
    """Certified verdict on n/phi(n) < e^gamma * log log n (strict)."""
    if not f.entries:
        return _conventional_fail()
    return _ratio_vs_loglog(f, phi_ratio_exact(f), True, bits, max_bits)


def rs_upper_check(
    f: Factorization,
    bits: int = DEFAULT_PRECISION_BITS,
    max_bits: int = MAX_PRECISION_BITS,
) -> Verdict:
    """Certified verdict on n/phi(n) <= e^gamma log log n + 5/(2 log log n).

    Non-strict, exactly as the classical bound is stated.  Requires n >= 3
    so that log log n is certified positive.
    """
    if not f.entries or f.value < 3:
        raise UsageError("rs-upper check requires n >= 3")
    lhs_exact = phi_ratio_exact(f)
    while True:
        llog = loglog_enclosure(f, bits)
        rhs = const_exp_gamma(bits) * llog + BoundedReal.from_rational(mpq(5, 2), bits) / llog
        margin = rhs - BoundedReal.from_rational(lhs_exact, bits)
        state = _classify_margin(margin, False)
        if state is not VerdictState.UNDECIDED or bits >= max_bits:
            return Verdict(state, margin)
        bits = min(2 * bits, max_bits)


def _sigma_int(n: int) -> int:
    """sigma(n) by trial division; n is capped by the harmonic summation cap."""
    from math import isqrt

    k = 64
    primes = first_primes(k)
    while primes[-1] <= isqrt(n):
        k *= 2
        primes = first_primes(k)
    s = 1
    rem = n
    for p in primes:
        if p * p > rem:
            break
        if rem % p == 0:
            pk = p
            while rem % p == 0:
                rem //= p
                pk *= p
            s *= (pk - 1) // (p - 1)
    if rem > 1:
        s *= rem + 1
    return s


def lagarias_check(
    n: int,
    bits: int = DEFAULT_PRECISION_BITS,
    max_bits: int = MAX_PRECISION_BITS,
) -> Verdict:
    """Certified verdict on sigma(n) <= h(n) + e^(h(n)) * log(h(n)).

    Non-strict: the n = 1 boundary attains equality and Holds.
    """
    if n < 1:
        raise UsageError(f"lagarias check requires n >= 1, got {n}")
    sig = _sigma_int(n)
    while True:
        h = harmonic(n, bits)
        rhs = h + exp_br(h) * log_br(h)
        margin = rhs - BoundedReal.from_int(sig, bits)
        state = _classify_margin(margin, False)
        if state is not VerdictState.UNDECIDED or bits >= max_bits:
            return Verdict(state, margin)
        bits = min(2 * bits, max_bits)


def run_check(
    criterion: CriterionId,
    f: Factorization,
    bits: int = DEFAULT_PRECISION_BITS,
    max_bits: int = MAX_PRECISION_BITS,
) -> Verdict:
    """Dispatch a criterion over a factorization (lagarias uses its value)."""
    if criterion is CriterionId.ROBIN:
        return robin_check(f, bits, max_bits)
    if criterion is CriterionId.NICOLAS:
        return nicolas_check(f, bits, max_bits)
    if criterion is CriterionId.RS_UPPER:
        return rs_upper_check(f, bits, max_bits)
    if criterion is CriterionId.LAGARIAS:
        return lagarias_check(f.value, bits, max_bits)
    raise UsageError(f"unknown criterion {criterion!r}")
