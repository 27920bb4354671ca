"""Bound-shrinking machinery for the t-free verification pipeline.

The driver here is the product P_t(x) = prod_{p <= x} (1 - p^-t)/(1 - p^-1),
which bounds sigma(n)/n for any t-free n whose largest prime factor is
below its logarithm.  Starting from a threshold z0 where a certified
expression goes negative, the bound on log n is shrunk repeatedly --
each step anchors at the largest prime below the current bound -- until
it reaches a fixed point.  For t = 5 the fixed point is 73.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpq

from .arith import Factorization
from .config import DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS
from .criteria import CriterionId, robin_check
from .errors import PrecisionError, ResourceError, UsageError
from .intervals import (
    BoundedReal,
    Verdict,
    VerdictState,
    const_exp_gamma,
    ctx_down,
    ctx_up,
    exp_br,
    log_br,
    log_int,
    zeta_int,
)
from .primes import PrimeTable, theta
from .scans import SQUAREFULL_NICOLAS_EXCEPTIONS, ScanReport, scan_violators

_MAX_CASCADE_STEPS = 10_000
_ZETA_CUTOFF = 10_000


def p_t_product(
    t: int, x: int, table: PrimeTable, bits: int = DEFAULT_PRECISION_BITS
) -> BoundedReal:
    """Enclosure of prod_{p <= x} (1 - p^-t)/(1 - p^-1), exact per factor."""
    if t < 2:
        raise UsageError("t must be >= 2")
    if x < 2:
        raise UsageError("x must be >= 2")
    table._check_range(x)
    dn, up = ctx_down(bits), ctx_up(bits)
    lo = gmpy2.mpfr(1, bits)
    hi = gmpy2.mpfr(1, bits)
    for p in table.primes_up_to(x):
        factor = mpq(p**t - 1, p ** (t - 1) * (p - 1))
        lo = dn.mul(lo, gmpy2.mpfr(factor, bits, dn))
        hi = up.mul(hi, gmpy2.mpfr(factor, bits, up))
    return BoundedReal(lo, hi)


def tail_log_bound(t: int, x: int, bits: int = DEFAULT_PRECISION_BITS) -> BoundedReal:
    """Enclosure of t * x^(1-t) / (t-1), the log-tail bound of the
    Euler product beyond x."""
    if t < 2:
        raise UsageError("t must be >= 2")
    if x < 3:
        raise UsageError("x must be >= 3")
    return BoundedReal.from_rational(mpq(t, (t - 1) * x ** (t - 1)), bits)


def threshold_expression(
    t: int,
    z: int,
    table: PrimeTable,
    bits: int = DEFAULT_PRECISION_BITS,
    zeta_cutoff: int = _ZETA_CUTOFF,
) -> BoundedReal:
    """Enclosure of t/(t-1) * z^(1-t) + log(1 + 1/log^2 z) - log zeta(t).

    Certified negativity at z means every t-free integer m with largest
    prime below log m and log m >= z passes the Robin check.
    """
    if z < 3:
        raise UsageError("z must be >= 3")
    term1 = tail_log_bound(t, z, bits)
    logz = log_int(z, bits)
    term2 = log_br(1 + 1 / logz.square())
    term3 = log_br(zeta_int(t, min(zeta_cutoff, table.limit), table, bits))
    return term1 + term2 - term3


def find_z0(
    t: int,
    table: PrimeTable,
    bits: int = DEFAULT_PRECISION_BITS,
    max_bits: int = MAX_PRECISION_BITS,
) -> int:
    """Minimal integer z0 >= 3 with the threshold expression certified
    negative; also certifies non-negativity at z0 - 1 when z0 > 3.

    The expression is strictly decreasing in z, so binary search between a
    doubling bracket and 3 finds the crossing.
    """
    if t < 2:
        raise UsageError("t must be >= 2")

    def sign_at(z: int) -> int:
        """-1 certified negative, +1 certified non-negative."""
        b = bits
        cutoff = _ZETA_CUTOFF
        while True:
            e = threshold_expression(t, z, table, b, cutoff)
            if e.hi < 0:
                return -1
            if e.lo >= 0:
                return 1
            if b >= max_bits and cutoff >= min(table.limit, 8 * _ZETA_CUTOFF):
                raise PrecisionError(
                    f"threshold expression at z={z} undecided at {b} bits"
                )
            b = min(2 * b, max_bits)
            cutoff = min(2 * cutoff, table.limit)

    hi = 3
    while sign_at(hi) > 0:
        hi *= 2
        if hi > 1 << 62:
            raise ResourceError("no certified-negative z found below 2^62")
    if hi == 3:
        return 3
    lo = hi // 2  # certified non-negative by the bracket loop
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if sign_at(mid) < 0:
            hi = mid
        else:
            lo = mid
    # search invariant: sign_at(hi) < 0 and sign_at(hi - 1) > 0 both certified
    return hi


@dataclass(frozen=True)
class CascadeStep:
    z_bound: int
    anchor_prime: int
    p_value: BoundedReal
    next_bound: BoundedReal


@dataclass(frozen=True)
class CascadeTrace:
    """Record of the bound-shrinking iteration for one t."""

    t: int
    z0: int
    steps: tuple[CascadeStep, ...]
    terminal_z: int

    @property
    def terminal_step(self) -> CascadeStep:
        return self.steps[-1]


def cascade_down(
    t: int,
    start_z: int,
    table: PrimeTable,
    bits: int = DEFAULT_PRECISION_BITS,
) -> CascadeTrace:
    """Shrink the bound z on log m by iterating
    z -> exp(P_t(q) * e^-gamma) with q the largest prime below z.

    Stops once the integer bound fails to decrease; the terminal step
    certifies exp(P_t(q_final) * e^-gamma) > terminal_z, which is what
    makes the fixed point a genuine floor.
    """
    if start_z < 3:
        raise UsageError("start_z must be >= 3")
    inv_eg = 1 / const_exp_gamma(bits)
    steps: list[CascadeStep] = []
    z_bound = start_z
    bound_hi = gmpy2.mpfr(start_z, bits)
    for _ in range(_MAX_CASCADE_STEPS):
        q = table.largest_below(bound_hi)
        p_val = p_t_product(t, q, table, bits)
        next_bound = exp_br(p_val * inv_eg)
        next_z = int(gmpy2.ceil(next_bound.hi))
        steps.append(
            CascadeStep(z_bound=z_bound, anchor_prime=q, p_value=p_val, next_bound=next_bound)
        )
        if next_z >= z_bound:
            terminal_z = int(gmpy2.floor(next_bound.hi))
            if not next_bound.lo > terminal_z:
                raise PrecisionError(
                    f"terminal bound enclosure {next_bound!r} too wide to certify fixed point"
                )
            return CascadeTrace(t=t, z0=start_z, steps=tuple(steps), terminal_z=terminal_z)
        z_bound = next_z
        bound_hi = next_bound.hi
    raise ResourceError(f"cascade did not terminate within {_MAX_CASCADE_STEPS} steps")


# -- adjacent finite verifications -----------------------------------------


@dataclass(frozen=True)
class SmallCaseReport:
    """Exhaustive five-prime small-case sweep under the log-n ceiling."""

    p5_bound: BoundedReal
    log_ceiling_certified: bool  # exp(P_5(11) e^-gamma) < 13.55
    enumerated: int
    above_5040: int
    failures: tuple[int, ...]
    undecided: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.log_ceiling_certified and not self.failures and not self.undecided


def verify_five_prime_smallcase(
    table: PrimeTable,
    bits: int = DEFAULT_PRECISION_BITS,
    max_bits: int = MAX_PRECISION_BITS,
    log_ceiling: mpq = mpq(1355, 100),
    safety: mpq = mpq(5, 100),
) -> SmallCaseReport:
    """Certify the five-prime small case: sigma(n)/n <= P_5(11) = 4.6411...
    for n = 2^e1 3^e2 5^e3 7^e4 11^e5 with e_i in [1, 4], which forces
    log n <= 13.55 for any Robin violator; sweep every such n (plus a
    safety margin on the ceiling) and certify all above 5040 pass."""
    p5 = p_t_product(5, 11, table, bits)
    ceiling = exp_br(p5 * (1 / const_exp_gamma(bits)))
    ceiling_ok = ceiling.hi < gmpy2.mpfr(log_ceiling, bits, ctx_down(bits))

    limit_log = BoundedReal.from_rational(log_ceiling + safety, bits)
    failures: list[int] = []
    undecided: list[int] = []
    enumerated = 0
    above = 0
    primes5 = (2, 3, 5, 7, 11)
    for e1 in range(1, 5):
        for e2 in range(1, 5):
            for e3 in range(1, 5):
                for e4 in range(1, 5):
                    for e5 in range(1, 5):
                        f = Factorization(tuple(zip(primes5, (e1, e2, e3, e4, e5))))
                        if not f.log_enclosure(bits).lo <= limit_log.hi:
                            continue
                        enumerated += 1
                        n = f.value
                        if n <= 5040:
                            continue
                        above += 1
                        v = robin_check(f, bits, max_bits)
                        if v.fails:
                            failures.append(n)
                        elif v.undecided:
                            undecided.append(n)
    return SmallCaseReport(
        p5_bound=p5,
        log_ceiling_certified=bool(ceiling_ok),
        enumerated=enumerated,
        above_5040=above,
        failures=tuple(sorted(failures)),
        undecided=tuple(sorted(undecided)),
    )


def verify_census_product_bound(
    table: PrimeTable, bits: int = DEFAULT_PRECISION_BITS
) -> Verdict:
    """Certify prod_{p <= 73} p^4 < prod_{p <= 20000} p via 4*theta(73) < theta(20000)."""
    if table.limit < 20000:
        raise ResourceError("table limit must be >= 20000")
    lhs = theta(73, table, bits) * 4
    rhs = theta(20000, table, bits)
    margin = rhs - lhs
    if margin.lo > 0:
        return Verdict(VerdictState.HOLDS, margin)
    if margin.hi <= 0:
        return Verdict(VerdictState.FAILS, margin)
    return Verdict(VerdictState.UNDECIDED, margin)


@dataclass(frozen=True)
class TotientProductBoundaryReport:
    """Where prod p_i/(p_i - 1) >= e^gamma log(2 theta(p_m)) flips."""

    holds_m: tuple[int, ...]  # certified >= (expected 1..4)
    fails_m: tuple[int, ...]  # certified <  (expected 5..25)
    chain_certified_m: tuple[int, ...]  # log(2 theta(p_m)) > log p_m + 1/log p_m
    undecided_m: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return (
            self.holds_m == tuple(range(1, 5))
            and self.fails_m == tuple(range(5, 26))
            and self.chain_certified_m == tuple(range(26, 101))
            and not self.undecided_m
        )


def verify_totient_product_boundary(
    table: PrimeTable, bits: int = DEFAULT_PRECISION_BITS
) -> TotientProductBoundaryReport:
    """Certify prod_{i<=m} p_i/(p_i-1) >= e^gamma log(2 log(p_1...p_m))
    exactly for m <= 4, its failure for 5 <= m <= 25, and the analytic
    chain inequality log(2 theta(p_m)) > log p_m + 1/log p_m for
    26 <= m <= 100."""
    dn, up = ctx_down(bits), ctx_up(bits)
    eg = const_exp_gamma(bits)
    lhs = mpq(1)
    theta_lo = gmpy2.mpfr(0, bits)
    theta_hi = gmpy2.mpfr(0, bits)
    holds: list[int] = []
    fails: list[int] = []
    chain: list[int] = []
    und: list[int] = []
    for m in range(1, 101):
        p = table.nth(m)
        lhs *= mpq(p, p - 1)
        theta_lo = dn.add(theta_lo, dn.log(p))
        theta_hi = up.add(theta_hi, up.log(p))
        th = BoundedReal(theta_lo, theta_hi)
        if m <= 25:
            rhs = eg * log_br(th * 2)
            lhs_br = BoundedReal.from_rational(lhs, bits)
            if lhs_br.lo >= rhs.hi:
                holds.append(m)
            elif lhs_br.hi < rhs.lo:
                fails.append(m)
            else:
                und.append(m)
        elif m >= 26:
            logp = log_int(p, bits)
            chain_lhs = log_br(th * 2)
            chain_rhs = logp + 1 / logp
            if chain_lhs.lo > chain_rhs.hi:
                chain.append(m)
            else:
                und.append(m)
    return TotientProductBoundaryReport(
        holds_m=tuple(holds),
        fails_m=tuple(fails),
        chain_certified_m=tuple(chain),
        undecided_m=tuple(und),
    )


@dataclass(frozen=True)
class SquarefullBoundReport:
    """Nicolas exceptions among squarefull integers below the certified bound."""

    bound_certified: bool  # exp(exp(e^-gamma * 35/8)) < 116145
    scan: ScanReport
    expected: tuple[int, ...]

    @property
    def ok(self) -> bool:
        found = tuple(n for n in self.scan.violators if n >= 2)
        return self.bound_certified and found == self.expected and not self.scan.undecided


def verify_squarefull_nicolas_bound(
    bits: int = DEFAULT_PRECISION_BITS, max_bits: int = MAX_PRECISION_BITS
) -> SquarefullBoundReport:
    """Certify exp(exp(e^-gamma * 35/8)) < 116145 and match the pinned
    15-element exception list over squarefull n <= 116144."""
    inner = exp_br(BoundedReal.from_rational(mpq(35, 8), bits) / const_exp_gamma(bits))
    outer = exp_br(inner)
    bound_ok = bool(outer.hi < 116145)
    scan = scan_violators("squarefull", CriterionId.NICOLAS, 116144, bits, max_bits)
    return SquarefullBoundReport(
        bound_certified=bound_ok,
        scan=scan,
        expected=SQUAREFULL_NICOLAS_EXCEPTIONS,
    )
