"""Class enumerators and golden-set verification scans.

Range scans over sieved classes use a two-tier strategy: a sound integer
filter first (the right side of each criterion is monotone increasing,
so a fixed-point lower bound at the block start certifies almost every n
in one vectorized comparison), then a full certified check for the few
survivors.  Everything is deterministic; re-runs produce identical
reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import isqrt

import gmpy2
import numpy as np
from gmpy2 import mpq

from .arith import (
    ExponentPattern,
    Factorization,
    first_primes,
    sigma_ratio_exact,
)
from .config import DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS
from .criteria import (
    CriterionId,
    lagarias_check,
    nicolas_check,
    robin_check,
    run_check,
)
from .errors import ResourceError, UsageError
from .intervals import (
    BoundedReal,
    Verdict,
    const_exp_gamma,
    ctx_down,
    ctx_up,
    exp_br,
    log_br,
    log_int,
)
from .primes import PrimeTable

MAX_SCAN_LIMIT = 1 << 24
_BLOCK_CAP = 4096
_FULL_CHECK_BELOW = 64
_FILTER_SHIFT = 20  # thresholds quantized to multiples of 2^-20

# Golden fixtures.  These are pinned expected values; the scans recompute
# them from scratch and any mismatch is a failure, not a fixture update.
SET_A = (
    1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 16, 18, 20, 24, 30, 36, 48, 60, 72, 84,
    120, 180, 240, 360, 720, 840, 2520, 5040,
)
SET_B = (2, 3, 5, 6, 10, 30)
ODD_ROBIN_EXCEPTIONS = (1, 3, 5, 9)
ODD_NICOLAS_EXCEPTIONS = (1, 3, 5, 9, 15)
# 72 = 2^3 * 3^2 is squarefull and sits in SET_A, so it belongs here even
# though the published exception list stops at 36
SQUAREFULL_ROBIN_EXCEPTIONS = (1, 4, 8, 9, 16, 36, 72)
SQUAREFULL_NICOLAS_EXCEPTIONS = (
    4, 8, 9, 16, 36, 72, 108, 144, 216, 900, 1800, 2700, 3600, 44100, 88200,
)

EXPECTED_SETS: dict[str, tuple[int, ...]] = {
    "setA": SET_A,
    "squarefree-robin": (1,) + SET_B,
    "odd-robin": ODD_ROBIN_EXCEPTIONS,
    "odd-nicolas": ODD_NICOLAS_EXCEPTIONS,
    "squarefull-robin": SQUAREFULL_ROBIN_EXCEPTIONS,
    "squarefull-nicolas": (1,) + SQUAREFULL_NICOLAS_EXCEPTIONS,
}  # n=1 appears wherever the scan range includes it (convention: 1 fails)


@dataclass(frozen=True)
class ScanReport:
    """Deterministic record of one range scan."""

    class_name: str
    criterion: CriterionId
    range_max: int
    violators: tuple[int, ...]
    scanned_count: int
    undecided: tuple[int, ...] = ()
    notes: tuple[str, ...] = ()


# -- enumerators ----------------------------------------------------------


def hr_enumerate(xmax: int) -> list[int]:
    """All integers <= xmax whose factorization uses the first consecutive
    primes with non-increasing exponents, ascending (includes 1)."""
    if xmax < 1:
        raise UsageError(f"xmax must be >= 1, got {xmax}")
    primes = first_primes(max(1, xmax.bit_length() + 1))
    out = [1]

    def descend(i: int, emax: int, val: int) -> None:
        p = primes[i]
        v = val * p
        e = 1
        while e <= emax and v <= xmax:
            out.append(v)
            if v * primes[i + 1] <= xmax:
                descend(i + 1, e, v)
            v *= p
            e += 1

    if xmax >= 2:
        descend(0, xmax.bit_length(), 1)
    out.sort()
    return out


@dataclass(frozen=True)
class CensusEntry:
    value: int
    factorization: Factorization
    verdict: Verdict


@dataclass(frozen=True)
class Census:
    """Finite family of pattern-descent integers with per-element verdicts."""

    entries: tuple[CensusEntry, ...]
    max_prime: int
    max_exponent: int

    @property
    def total(self) -> int:
        return len(self.entries)

    @property
    def above_5040(self) -> tuple[CensusEntry, ...]:
        return tuple(e for e in self.entries if e.value > 5040)

    @property
    def all_above_5040_hold(self) -> bool:
        return all(e.verdict.holds for e in self.above_5040)


def hr_5free_census(
    bits: int = DEFAULT_PRECISION_BITS, max_bits: int = MAX_PRECISION_BITS
) -> Census:
    """All 5-free consecutive-prime integers n > 1 with largest prime <= 73.

    Exponents range over [1, 4] non-increasing across the first 21 primes;
    there is no size bound -- the family is finite on its own.  Each
    element carries its certified Robin verdict.
    """
    primes = first_primes(21)
    entries: list[CensusEntry] = []

    def descend(i: int, emax: int, acc: list[tuple[int, int]]) -> None:
        if i == len(primes):
            return
        for e in range(1, emax + 1):
            acc.append((primes[i], e))
            f = Factorization(tuple(acc))
            entries.append(CensusEntry(f.value, f, robin_check(f, bits, max_bits)))
            descend(i + 1, e, acc)
            acc.pop()

    descend(0, 4, [])
    entries.sort(key=lambda entry: entry.value)
    return Census(entries=tuple(entries), max_prime=73, max_exponent=4)


def squarefull_enumerate(xmax: int) -> list[int]:
    """All n <= xmax with every prime factor squared, via n = a^2 * b^3
    with b squarefree.  That representation is unique, so no duplicates
    arise before the final sort."""
    if xmax < 1:
        raise UsageError(f"xmax must be >= 1, got {xmax}")
    out: list[int] = []
    b = 1
    while b * b * b <= xmax:
        if _is_squarefree_small(b):
            b3 = b * b * b
            a = 1
            while a * a * b3 <= xmax:
                out.append(a * a * b3)
                a += 1
        b += 1
    out.sort()
    return out


def _is_squarefree_small(n: int) -> bool:
    for p in _trial_primes_covering(isqrt(n)):
        if p * p > n:
            return True
        e = 0
        while n % p == 0:
            n //= p
            e += 1
            if e >= 2:
                return False
    return True


# -- sieve arrays (cached, treated read-only) -----------------------------


@lru_cache(maxsize=2)
def _sigma_array(n: int) -> np.ndarray:
    sig = np.zeros(n + 1, dtype=np.int64)
    for d in range(1, n + 1):
        sig[d::d] += d
    return sig


@lru_cache(maxsize=2)
def _phi_array(n: int) -> np.ndarray:
    phi = np.arange(n + 1, dtype=np.int64)
    is_comp = np.zeros(n + 1, dtype=bool)
    for p in range(2, n + 1):
        if not is_comp[p]:
            phi[p::p] -= phi[p::p] // p
            if p <= n // p:
                is_comp[p * p:: p] = True
    return phi


@lru_cache(maxsize=4)
def _powerfree_mask(n: int, t: int) -> np.ndarray:
    # marking c^t-multiples for every integer c >= 2 is equivalent to doing
    # it for primes only (c^t | m implies spf(c)^t | m) and needs no sieve
    mask = np.ones(n + 1, dtype=bool)
    c = 2
    while c**t <= n:
        mask[c**t:: c**t] = False
        c += 1
    return mask


def _trial_primes_covering(root: int) -> list[int]:
    k = 64
    primes = first_primes(k)
    while primes[-1] <= root:
        k *= 2
        primes = first_primes(k)
    return primes


def _trial_factorize(n: int) -> Factorization:
    """Trial division by the first primes; any cofactor left is prime."""
    entries = []
    rem = n
    for p in _trial_primes_covering(isqrt(n)):
        if p * p > rem:
            break
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            entries.append((p, e))
    if rem > 1:
        entries.append((rem, 1))
    return Factorization(tuple(sorted(entries)))


# -- scan driver ----------------------------------------------------------


def _parse_class(class_name: str) -> tuple[str, int]:
    if class_name in ("all", "odd", "squarefree", "squarefull", "hr"):
        return class_name, 0
    if class_name.startswith("tfree:"):
        t = int(class_name.split(":", 1)[1])
        if t < 2:
            raise UsageError("tfree class requires t >= 2")
        return "tfree", t
    raise UsageError(f"unknown class {class_name!r}")


def _class_mask(kind: str, t: int, xmax: int) -> np.ndarray:
    idx = np.arange(xmax + 1)
    if kind == "all":
        mask = np.ones(xmax + 1, dtype=bool)
    elif kind == "odd":
        mask = (idx % 2) == 1
    elif kind == "squarefree":
        mask = _powerfree_mask(xmax, 2).copy()
    elif kind == "tfree":
        mask = _powerfree_mask(xmax, t).copy()
    else:  # pragma: no cover - guarded by _parse_class
        raise UsageError(kind)
    mask[0] = False
    return mask


def _rhs_floor_scaled(rhs_lo: gmpy2.mpfr) -> int:
    """floor(rhs_lo * 2^FILTER_SHIFT) as an int; sound lower threshold."""
    scaled = ctx_down(rhs_lo.precision).mul(rhs_lo, 1 << _FILTER_SHIFT)
    return int(gmpy2.floor(scaled))


def _loglog_rhs_lower(a: int, bits: int) -> gmpy2.mpfr:
    """Certified lower bound of e^gamma * log log a for integer a >= 3."""
    rhs = const_exp_gamma(bits) * log_br(log_int(a, bits))
    return rhs.lo


def _rs_rhs_lower(a: int, bits: int) -> gmpy2.mpfr:
    llog = log_br(log_int(a, bits))
    rhs = const_exp_gamma(bits) * llog + BoundedReal.from_rational(mpq(5, 2), bits) / llog
    return rhs.lo


def scan_violators(
    class_name: str,
    criterion: CriterionId,
    xmax: int,
    bits: int = DEFAULT_PRECISION_BITS,
    max_bits: int = MAX_PRECISION_BITS,
) -> ScanReport:
    """Deterministic report of every violator of `criterion` in the class.

    Violators are the n whose certified verdict is Fails; Undecided
    verdicts (none expected at default precision) are collected separately.
    """
    criterion = CriterionId(criterion)
    kind, t = _parse_class(class_name)
    if xmax < 1:
        raise UsageError(f"xmax must be >= 1, got {xmax}")

    if kind in ("squarefull", "hr"):
        members = squarefull_enumerate(xmax) if kind == "squarefull" else hr_enumerate(xmax)
        violators, undecided = _check_members(members, criterion, bits, max_bits)
        return _finish_report(class_name, criterion, xmax, violators, len(members), undecided)

    if xmax > MAX_SCAN_LIMIT:
        raise ResourceError(f"scan limit {xmax} exceeds budget {MAX_SCAN_LIMIT}")

    mask = _class_mask(kind, t, xmax)
    scanned = int(mask.sum())
    if criterion is CriterionId.LAGARIAS:
        violators, undecided = _scan_lagarias(mask, xmax, bits, max_bits)
    else:
        violators, undecided = _scan_ratio_criterion(mask, criterion, xmax, bits, max_bits)
    return _finish_report(class_name, criterion, xmax, violators, scanned, undecided)


def _finish_report(class_name, criterion, xmax, violators, scanned, undecided) -> ScanReport:
    notes = ()
    if 1 in violators:
        notes = ("n=1 counted as a violator by convention (right side undefined at n=1)",)
    return ScanReport(
        class_name=class_name,
        criterion=criterion,
        range_max=xmax,
        violators=tuple(sorted(violators)),
        scanned_count=scanned,
        undecided=tuple(sorted(undecided)),
        notes=notes,
    )


def _check_members(
    members, criterion: CriterionId, bits: int, max_bits: int
) -> tuple[list[int], list[int]]:
    violators: list[int] = []
    undecided: list[int] = []
    for n in members:
        if criterion is CriterionId.LAGARIAS:
            v = lagarias_check(n, bits, max_bits)
        else:
            f = _trial_factorize(n)
            if criterion is CriterionId.RS_UPPER and n < 3:
                violators.append(n)  # below the bound's domain: conventional violator
                continue
            v = run_check(criterion, f, bits, max_bits)
        if v.fails:
            violators.append(n)
        elif v.undecided:
            undecided.append(n)
    return violators, undecided


def _block_spans(xmax: int):
    """Blocks [a, b) covering [_FULL_CHECK_BELOW, xmax]; sizes grow with a
    so that the monotone right side drifts little within each block."""
    a = _FULL_CHECK_BELOW
    while a <= xmax:
        size = min(_BLOCK_CAP, max(64, a >> 4))
        b = min(a + size, xmax + 1)
        yield a, b
        a = b


def _scan_ratio_criterion(
    mask: np.ndarray, criterion: CriterionId, xmax: int, bits: int, max_bits: int
) -> tuple[list[int], list[int]]:
    if criterion is CriterionId.ROBIN:
        lhs_num = _sigma_array(xmax)
        lhs_den_is_n = True
    else:  # nicolas, rs-upper: n/phi(n)
        lhs_num = np.arange(xmax + 1, dtype=np.int64)
        lhs_den_is_n = False
    phi = _phi_array(xmax) if not lhs_den_is_n else None
    idx = np.arange(xmax + 1, dtype=np.int64)

    violators: list[int] = []
    undecided: list[int] = []

    def full_check(n: int) -> None:
        if criterion is CriterionId.RS_UPPER and n < 3:
            violators.append(n)
            return
        f = _trial_factorize(n)
        v = run_check(criterion, f, bits, max_bits)
        if v.fails:
            violators.append(n)
        elif v.undecided:
            undecided.append(n)

    for n in range(1, min(_FULL_CHECK_BELOW, xmax + 1)):
        if mask[n]:
            full_check(n)

    for a, b in _block_spans(xmax):
        rhs_lo = (
            _rs_rhs_lower(a, bits)
            if criterion is CriterionId.RS_UPPER
            else _loglog_rhs_lower(a, bits)
        )
        m = _rhs_floor_scaled(rhs_lo)
        if lhs_den_is_n:
            # holds certified when sigma(n) * 2^s < n * m
            cand = (lhs_num[a:b] << _FILTER_SHIFT) >= idx[a:b] * m
        else:
            cand = (idx[a:b] << _FILTER_SHIFT) >= phi[a:b] * m
        for off in np.nonzero(cand & mask[a:b])[0]:
            full_check(a + int(off))

    return violators, undecided


def _scan_lagarias(
    mask: np.ndarray, xmax: int, bits: int, max_bits: int
) -> tuple[list[int], list[int]]:
    """Lagarias scan with an incrementally maintained harmonic enclosure."""
    sig = _sigma_array(xmax)
    violators: list[int] = []
    undecided: list[int] = []
    dn, up = ctx_down(bits), ctx_up(bits)
    h_lo = gmpy2.mpfr(0, bits)
    h_hi = gmpy2.mpfr(0, bits)
    pos = 0  # harmonic sum currently covers 1..pos

    def advance(to: int):
        nonlocal pos, h_lo, h_hi
        while pos < to:
            pos += 1
            h_lo = dn.add(h_lo, dn.div(1, pos))
            h_hi = up.add(h_hi, up.div(1, pos))

    def full_check(n: int) -> None:
        advance(n)
        h = BoundedReal(h_lo, h_hi)
        rhs = h + exp_br(h) * log_br(h)
        sig_n = int(sig[n])
        if sig_n <= rhs.lo:
            return
        if sig_n > rhs.hi:
            violators.append(n)
            return
        v = lagarias_check(n, 2 * bits, max_bits)  # rare: re-derive from scratch
        if v.fails:
            violators.append(n)
        elif v.undecided:
            undecided.append(n)

    for n in range(1, min(_FULL_CHECK_BELOW, xmax + 1)):
        if mask[n]:
            full_check(n)

    for a, b in _block_spans(xmax):
        advance(a)
        h_point = BoundedReal(h_lo, h_lo)
        rhs_floor = h_point + exp_br(h_point) * log_br(h_point)
        m = int(gmpy2.floor(rhs_floor.lo))
        cand = np.nonzero((sig[a:b] >= m) & mask[a:b])[0]
        for off in cand:
            full_check(a + int(off))

    return violators, undecided


# -- verification scans ---------------------------------------------------


def _times_prime(f: Factorization, q: int) -> Factorization:
    entries = dict(f.entries)
    entries[q] = entries.get(q, 0) + 1
    return Factorization(tuple(sorted(entries.items())))


@dataclass(frozen=True)
class ExceptionProductReport:
    """Result of checking r*q over Robin violators r and primes q >= 7."""

    qmax: int
    pairs_checked: int
    violations: tuple[tuple[int, int], ...]  # (q, r) with certified Fails
    expected: tuple[tuple[int, int], ...]
    eleven_r_all_hold: bool
    undecided: tuple[tuple[int, int], ...] = ()

    @property
    def ok(self) -> bool:
        return self.violations == self.expected and self.eleven_r_all_hold and not self.undecided


# the published exception list stops at (7, 360), but (7, 720) multiplies
# to exactly 5040, the largest element of SET_A, so it fails too
EXCEPTION_PRODUCT_PAIRS = ((7, 12), (7, 120), (7, 360), (7, 720))


def verify_exception_products(
    qmax: int,
    table: PrimeTable,
    bits: int = DEFAULT_PRECISION_BITS,
    max_bits: int = MAX_PRECISION_BITS,
) -> ExceptionProductReport:
    """For every r in the pinned violator set and prime 7 <= q <= qmax,
    certify r*q passes the Robin check except exactly at the pinned
    (q, r) pairs; also certify 11*r always passes."""
    if qmax < 11:
        raise UsageError("qmax must be >= 11")
    table._check_range(qmax)
    facts = {r: _trial_factorize(r) for r in SET_A}
    violations: list[tuple[int, int]] = []
    undecided: list[tuple[int, int]] = []
    pairs = 0
    eleven_ok = True
    for q in table.primes_up_to(qmax):
        if q < 7:
            continue
        for r in SET_A:
            pairs += 1
            v = robin_check(_times_prime(facts[r], q), bits, max_bits)
            if v.fails:
                violations.append((q, r))
            elif v.undecided:
                undecided.append((q, r))
            if q == 11 and not v.holds:
                eleven_ok = False
    return ExceptionProductReport(
        qmax=qmax,
        pairs_checked=pairs,
        violations=tuple(sorted(violations)),
        expected=EXCEPTION_PRODUCT_PAIRS,
        eleven_r_all_hold=eleven_ok,
        undecided=tuple(undecided),
    )


@dataclass(frozen=True)
class SetSReport:
    """Exception lists over the class {3^a * 5^b * q^c : q >= 7 prime}."""

    xmax: int
    member_count: int
    robin_exceptions: tuple[int, ...]
    nicolas_exceptions: tuple[int, ...]
    undecided: tuple[int, ...] = ()

    @property
    def ok(self) -> bool:
        return (
            self.robin_exceptions == (1, 3, 5, 9)
            and self.nicolas_exceptions == (1, 3, 5, 9, 15)
            and not self.undecided
        )


def set_s_enumerate(xmax: int, table: PrimeTable) -> list[tuple[int, Factorization]]:
    """Members of {3^a * 5^b * q^c} up to xmax, ascending by value."""
    if xmax < 1:
        raise UsageError(f"xmax must be >= 1, got {xmax}")
    out: list[tuple[int, Factorization]] = []
    base35: list[tuple[int, tuple[tuple[int, int], ...]]] = []
    pow3 = 1
    a = 0
    while pow3 <= xmax:
        pow5 = 1
        b = 0
        while pow3 * pow5 <= xmax:
            entries = tuple(
                (p, e) for p, e in ((3, a), (5, b)) if e > 0
            )
            base35.append((pow3 * pow5, entries))
            pow5 *= 5
            b += 1
        pow3 *= 3
        a += 1
    for val, entries in base35:
        out.append((val, Factorization(entries)))
    for q in table.primes_up_to(xmax):
        if q < 7:
            continue
        for val, entries in base35:
            qc = q
            c = 1
            while val * qc <= xmax:
                out.append((val * qc, Factorization(entries + ((q, c),))))
                qc *= q
                c += 1
    out.sort(key=lambda pair: pair[0])
    return out


def verify_set_s(
    xmax: int,
    table: PrimeTable,
    bits: int = DEFAULT_PRECISION_BITS,
    max_bits: int = MAX_PRECISION_BITS,
) -> SetSReport:
    """Certify both exception lists over the 3-5-q class up to xmax."""
    if xmax < 31:
        raise UsageError("xmax must be >= 31 to exercise both exception lists")
    members = set_s_enumerate(xmax, table)
    robin_exc: list[int] = []
    nicolas_exc: list[int] = []
    undecided: list[int] = []
    for n, f in members:
        vr = robin_check(f, bits, max_bits)
        vn = nicolas_check(f, bits, max_bits)
        if vr.fails:
            robin_exc.append(n)
        if vn.fails:
            nicolas_exc.append(n)
        if vr.undecided or vn.undecided:
            undecided.append(n)
    return SetSReport(
        xmax=xmax,
        member_count=len(members),
        robin_exceptions=tuple(sorted(robin_exc)),
        nicolas_exceptions=tuple(sorted(nicolas_exc)),
        undecided=tuple(sorted(undecided)),
    )


_PATTERN_BRUTE_CAP = 2_000_000


def pattern_max_ratio(
    e: ExponentPattern,
    prime_budget: int,
    bits: int = DEFAULT_PRECISION_BITS,
) -> tuple[Factorization, BoundedReal]:
    """The maximizer of sigma(n)/n over all n with exponent pattern e.

    Assigning the largest exponents to the smallest primes is optimal; this
    verifies that by brute force over every injective assignment of the
    pattern onto the first `prime_budget` primes and returns the maximizer
    with its certified ratio enclosure.
    """
    s = len(e)
    if s == 0:
        return Factorization(()), BoundedReal.from_int(1, bits)
    if prime_budget < s:
        raise UsageError(f"prime budget {prime_budget} smaller than pattern length {s}")
    count = 1
    for i in range(prime_budget, prime_budget - s, -1):
        count *= i
        if count > _PATTERN_BRUTE_CAP:
            raise ResourceError(
                f"brute-force budget exceeded: P({prime_budget},{s}) > {_PATTERN_BRUTE_CAP}"
            )
    primes = first_primes(prime_budget)
    best_ratio = mpq(0)
    best: tuple[tuple[int, int], ...] | None = None
    for assignment in permutations(primes, s):
        entries = tuple(sorted(zip(assignment, e.exps)))
        ratio = sigma_ratio_exact(Factorization(entries))
        if ratio > best_ratio:
            best_ratio = ratio
            best = entries
    assert best is not None
    minimal = tuple(sorted(zip(primes[:s], e.exps)))
    if best != minimal:
        raise AssertionError(
            f"brute force found maximizer {best} differing from minimal assignment {minimal}"
        )
    f = Factorization(best)
    return f, BoundedReal.from_rational(best_ratio, bits)


@dataclass(frozen=True)
class PrimorialScanReport:
    """Primorials N_k checked against n/phi(n) > e^gamma log log n."""

    kmax: int
    failed_k: tuple[int, ...]
    undecided_k: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.failed_k and not self.undecided_k


def primorial_nicolas_scan(
    kmax: int,
    table: PrimeTable,
    bits: int = DEFAULT_PRECISION_BITS,
) -> PrimorialScanReport:
    """Certify n/phi(n) > e^gamma log log n at n = N_k for each k <= kmax.

    The ratio and log N_k = sum log p are maintained incrementally as exact
    per-prime factors accumulate into enclosures, so the scan is linear in
    the number of primes.
    """
    if kmax < 1:
        raise UsageError("kmax must be >= 1")
    if kmax > len(table.primes):
        raise ResourceError(f"table holds only {len(table.primes)} primes")
    dn, up = ctx_down(bits), ctx_up(bits)
    ratio_lo = gmpy2.mpfr(1, bits)
    ratio_hi = gmpy2.mpfr(1, bits)
    theta_lo = gmpy2.mpfr(0, bits)
    theta_hi = gmpy2.mpfr(0, bits)
    eg = const_exp_gamma(bits)
    failed: list[int] = []
    und: list[int] = []
    for k in range(1, kmax + 1):
        p = table.primes[k - 1]
        factor = mpq(p, p - 1)
        ratio_lo = dn.mul(ratio_lo, gmpy2.mpfr(factor, bits, dn))
        ratio_hi = up.mul(ratio_hi, gmpy2.mpfr(factor, bits, up))
        theta_lo = dn.add(theta_lo, dn.log(p))
        theta_hi = up.add(theta_hi, up.log(p))
        rhs = eg * log_br(BoundedReal(theta_lo, theta_hi))
        if rhs.hi < ratio_lo:
            continue
        if rhs.lo >= ratio_hi:
            failed.append(k)
        else:
            und.append(k)
    return PrimorialScanReport(kmax=kmax, failed_k=tuple(failed), undecided_k=tuple(und))


def density_even_nonsquarefree(xmax: int, bits: int = DEFAULT_PRECISION_BITS) -> BoundedReal:
    """Exact count of even non-squarefree n <= xmax divided by xmax."""
    if xmax < 100:
        raise UsageError("xmax must be >= 100 for a meaningful density")
    if xmax > MAX_SCAN_LIMIT:
        raise ResourceError(f"{xmax} exceeds scan budget {MAX_SCAN_LIMIT}")
    sf = _powerfree_mask(xmax, 2)
    idx = np.arange(xmax + 1)
    count = int(((idx % 2 == 0) & ~sf & (idx >= 1)).sum())
    return BoundedReal.from_rational(mpq(count, xmax), bits)
