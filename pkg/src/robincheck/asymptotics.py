"""Empirical convergence experiments along extremal integer families.

The ratios f1(n) = sigma(n)/(n log log n) and f2(n) = n/(phi(n) log log n)
approach explicit constants along families like prod_{p <= x} p^(t-1);
convergence is log-slow, so these experiments assert trends and loose
finite-scale tolerances, never the limits themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import gmpy2
from gmpy2 import mpq

from .arith import Factorization
from .config import DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS
from .criteria import loglog_enclosure
from .errors import DomainError, UsageError
from .intervals import (
    BoundedReal,
    Verdict,
    VerdictState,
    const_exp_gamma,
    ctx_down,
    ctx_up,
    log_br,
    zeta_int,
)
from .primes import PrimeTable

_ZETA_CUTOFF = 10_000


class RatioVariant(str, Enum):
    F1 = "f1"  # sigma(n) / (n log log n)
    F2 = "f2"  # n / (phi(n) log log n)


class Family(str, Enum):
    T_POWERFUL = "t_powerful"  # n = prod_{p <= x} p^(t-1)
    ODD_T_POWERFUL = "odd_t_powerful"  # n = prod_{2 < p <= x} p^(t-1)
    PRIMORIAL = "primorial"  # n = prod_{p <= x} p
    SQUAREFULL_SQUARES = "squarefull_squares"  # n = prod_{p <= x} p^2


def f1(f: Factorization, bits: int = DEFAULT_PRECISION_BITS) -> BoundedReal:
    """Certified enclosure of sigma(n)/(n log log n) for n >= 3."""
    _require_n3(f)
    from .arith import sigma_over_n

    return sigma_over_n(f, bits) / loglog_enclosure(f, bits)


def f2(f: Factorization, bits: int = DEFAULT_PRECISION_BITS) -> BoundedReal:
    """Certified enclosure of n/(phi(n) log log n) for n >= 3."""
    _require_n3(f)
    from .arith import phi_ratio

    return phi_ratio(f, bits) / loglog_enclosure(f, bits)


def _require_n3(f: Factorization) -> None:
    if not f.entries or (len(f.entries) == 1 and f.entries[0] == (2, 1)):
        raise DomainError("ratio functions require n >= 3")


@dataclass(frozen=True)
class GridPoint:
    x: int
    log_n: BoundedReal
    value: BoundedReal


@dataclass(frozen=True)
class RatioSeries:
    """Certified ratio values along a family's extremal sequence."""

    variant: RatioVariant
    family: Family
    t: int
    xmax: int
    points: tuple[GridPoint, ...]
    target: BoundedReal
    truncated: bool = False


def _family_shape(family: Family, t: int) -> tuple[bool, int]:
    """(include_two, exponent) for the family; exponent+1 drives the target."""
    if family is Family.PRIMORIAL:
        return True, 1
    if family is Family.SQUAREFULL_SQUARES:
        return True, 2
    if family is Family.T_POWERFUL:
        return True, t - 1
    if family is Family.ODD_T_POWERFUL:
        return False, t - 1
    raise UsageError(f"unknown family {family!r}")


def series_target(
    variant: RatioVariant,
    family: Family,
    t: int,
    table: PrimeTable,
    bits: int = DEFAULT_PRECISION_BITS,
) -> BoundedReal:
    """Limit constant for the (variant, family) pair.

    f1 families approach e^gamma / zeta(t_eff), halved again by the odd
    restriction's missing Euler factor; f2 families approach e^gamma
    (e^gamma / 2 when odd).
    """
    include_two, exponent = _family_shape(family, t)
    t_eff = exponent + 1
    eg = const_exp_gamma(bits)
    if variant is RatioVariant.F2:
        return eg if include_two else eg / 2
    zt = zeta_int(t_eff, min(_ZETA_CUTOFF, table.limit), table, bits)
    if include_two:
        return eg / zt
    missing = BoundedReal.from_rational(mpq(2**t_eff, 2**t_eff - 1), bits)
    return eg / (zt * 2 / missing)


def _grid(table: PrimeTable, xmax: int) -> tuple[list[int], bool]:
    """Primes nearest to geometric x2 steps from 10 up to xmax."""
    from bisect import bisect_right

    xs: list[int] = []
    truncated = False
    x = 10
    while x <= xmax:
        if x > table.limit:
            truncated = True
            break
        idx = bisect_right(table.primes, x)
        below = table.primes[idx - 1]
        above = table.primes[idx] if idx < len(table.primes) else below
        pick = below if (x - below) <= (above - x) else above
        if pick > table.limit:
            truncated = True
            break
        if not xs or pick != xs[-1]:
            xs.append(pick)
        x *= 2
    return xs, truncated


def limsup_experiment(
    variant: RatioVariant,
    family: Family,
    t: int,
    xmax: int,
    table: PrimeTable,
    bits: int = DEFAULT_PRECISION_BITS,
) -> RatioSeries:
    """Evaluate the ratio along the family at a log-spaced prime grid.

    Products and log n accumulate incrementally over the shared prime
    table, so the whole series costs one pass up to xmax.
    """
    variant = RatioVariant(variant)
    family = Family(family)
    if t < 2:
        raise UsageError("t must be >= 2")
    if family is Family.SQUAREFULL_SQUARES and t < 3:
        # squares are the t = 3 instance; smaller t cannot be squarefull
        raise UsageError("squarefull_squares family needs t >= 3")
    include_two, exponent = _family_shape(family, t)
    if exponent < 1:
        raise UsageError("family exponent must be >= 1 (t too small)")
    xs, truncated = _grid(table, xmax)
    if not xs:
        raise UsageError(f"no grid points at or below {min(xmax, table.limit)}")

    t_eff = exponent + 1
    dn, up = ctx_down(bits), ctx_up(bits)
    ratio_lo = gmpy2.mpfr(1, bits)
    ratio_hi = gmpy2.mpfr(1, bits)
    logn_lo = gmpy2.mpfr(0, bits)
    logn_hi = gmpy2.mpfr(0, bits)
    points: list[GridPoint] = []
    gi = 0
    for p in table.primes_up_to(xs[-1]):
        if include_two or p > 2:
            if variant is RatioVariant.F1:
                factor = mpq(p**t_eff - 1, p**exponent * (p - 1))
            else:
                factor = mpq(p, p - 1)
            ratio_lo = dn.mul(ratio_lo, gmpy2.mpfr(factor, bits, dn))
            ratio_hi = up.mul(ratio_hi, gmpy2.mpfr(factor, bits, up))
            logn_lo = dn.add(logn_lo, dn.mul(dn.log(p), exponent))
            logn_hi = up.add(logn_hi, up.mul(up.log(p), exponent))
        if gi < len(xs) and p == xs[gi]:
            log_n = BoundedReal(logn_lo, logn_hi)
            value = BoundedReal(ratio_lo, ratio_hi) / log_br(log_n)
            points.append(GridPoint(x=p, log_n=log_n, value=value))
            gi += 1

    target = series_target(variant, family, t, table, bits)
    return RatioSeries(
        variant=variant,
        family=family,
        t=t,
        xmax=xmax,
        points=tuple(points),
        target=target,
        truncated=truncated,
    )


def tfree_ratio_bound(
    f: Factorization, t: int, bits: int = DEFAULT_PRECISION_BITS
) -> Verdict:
    """Certify sigma(n)/n <= prod_{p | n} (1 - p^-t)/(1 - p^-1) for t-free n.

    Both sides are exact rationals, so equality (all exponents = t-1) is
    decidable and counts as Holds.
    """
    if t < 2:
        raise UsageError("t must be >= 2")
    if any(e >= t for _, e in f.entries):
        raise DomainError(f"{f} is not {t}-free")
    lhs = mpq(1)
    rhs = mpq(1)
    for p, e in f.entries:
        lhs *= mpq(p ** (e + 1) - 1, p**e * (p - 1))
        rhs *= mpq(p**t - 1, p ** (t - 1) * (p - 1))
    diff = rhs - lhs
    margin = BoundedReal.from_rational(diff, bits)
    if diff >= 0:
        return Verdict(VerdictState.HOLDS, margin)
    return Verdict(VerdictState.FAILS, margin)
