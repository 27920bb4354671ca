"""Exact factorizations, multiplicative-function arithmetic, classification.

Every criterion downstream consumes a Factorization rather than a raw
integer, so primorial-scale inputs never have to materialize: log n is
always available as sum of e_i * log(p_i) and sigma(n)/n, n/phi(n) as
products of exact per-prime rationals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from typing import TYPE_CHECKING

import gmpy2
from gmpy2 import mpq

from .config import DEFAULT_PRECISION_BITS
from .errors import (
    DomainError,
    IncompleteFactorizationError,
    ResourceError,
    UsageError,
)
from .intervals import BoundedReal, ctx_down, ctx_up, log_int

if TYPE_CHECKING:
    from .primes import PrimeTable

HARMONIC_CAP = 10**7


@dataclass(frozen=True)
class Factorization:
    """Prime-power representation: ((p1, e1), (p2, e2), ...), p strictly increasing.

    The empty tuple represents n = 1.
    """

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prev = 1
        for p, e in self.entries:
            if p <= prev:
                raise UsageError(f"primes must be strictly increasing, got {self.entries}")
            if e < 1:
                raise UsageError(f"exponents must be >= 1, got {p}^{e}")
            prev = p

    @property
    def value(self) -> int:
        n = 1
        for p, e in self.entries:
            n *= p**e
        return n

    @property
    def omega(self) -> int:
        """Number of distinct prime factors."""
        return len(self.entries)

    @property
    def big_omega(self) -> int:
        """Number of prime factors counted with multiplicity."""
        return sum(e for _, e in self.entries)

    def largest_prime(self) -> int:
        """P(n); 1 for n = 1 by convention."""
        return self.entries[-1][0] if self.entries else 1

    def log_enclosure(self, bits: int = DEFAULT_PRECISION_BITS) -> BoundedReal:
        """Enclosure of log n as sum of e_i * log(p_i)."""
        dn, up = ctx_down(bits), ctx_up(bits)
        lo = gmpy2.mpfr(0, bits)
        hi = gmpy2.mpfr(0, bits)
        for p, e in self.entries:
            lo = dn.add(lo, dn.mul(dn.log(p), e))
            hi = up.add(hi, up.mul(up.log(p), e))
        return BoundedReal(lo, hi)

    def __str__(self) -> str:
        if not self.entries:
            return "1"
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.entries)


@dataclass(frozen=True)
class ExponentPattern:
    """Non-increasing tuple of positive exponents; empty for n = 1."""

    exps: tuple[int, ...]

    def __post_init__(self) -> None:
        prev = None
        for e in self.exps:
            if e < 1:
                raise UsageError(f"pattern exponents must be >= 1, got {self.exps}")
            if prev is not None and e > prev:
                raise UsageError(f"pattern must be non-increasing, got {self.exps}")
            prev = e

    def __len__(self) -> int:
        return len(self.exps)


@dataclass(frozen=True)
class NumberClass:
    """Membership flags for the integer classes the scans partition by."""

    t: int
    odd: bool
    squarefree: bool
    squarefull: bool
    t_free: bool
    hardy_ramanujan: bool
    in_set_s: bool


_FIRST_PRIMES_CACHE: list[int] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73]


def first_primes(k: int) -> list[int]:
    """The first k primes, grown on demand from a small trial-division cache."""
    while len(_FIRST_PRIMES_CACHE) < k:
        c = _FIRST_PRIMES_CACHE[-1] + 2
        while True:
            if all(c % p for p in _FIRST_PRIMES_CACHE if p * p <= c):
                _FIRST_PRIMES_CACHE.append(c)
                break
            c += 2
    return _FIRST_PRIMES_CACHE[:k]


def factorize(n: int, table: "PrimeTable") -> Factorization:
    """Factor n by trial division against the table.

    A cofactor left over after removing all table primes <= sqrt(remaining)
    is itself prime, so the result is always correct; inputs whose factors
    outrun the table raise instead of silently mis-factoring.
    """
    if n < 1:
        raise UsageError(f"factorize requires n >= 1, got {n}")
    entries: list[tuple[int, int]] = []
    rem = n
    for p in table.primes:
        if p * p > rem:
            break
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            entries.append((p, e))
    if rem > 1:
        if rem <= table.limit * table.limit:
            # every prime <= sqrt(rem) has been tried, so rem is prime
            entries.append((rem, 1))
        else:
            raise IncompleteFactorizationError(
                f"cofactor {rem} of {n} cannot be certified prime with table limit {table.limit}"
            )
    entries.sort()
    return Factorization(tuple(entries))


_LITERAL_RE = re.compile(r"^\d+(\^\d+)?(\*\d+(\^\d+)?)*$")


def parse_factor_literal(text: str) -> Factorization:
    """Parse an explicit factorization literal like '2^4*3^2*5*7'."""
    s = text.replace(" ", "")
    if not _LITERAL_RE.match(s):
        raise UsageError(f"malformed factorization literal: {text!r}")
    seen: dict[int, int] = {}
    for part in s.split("*"):
        if "^" in part:
            base_s, exp_s = part.split("^")
            base, exp = int(base_s), int(exp_s)
        else:
            base, exp = int(part), 1
        if base < 2 or exp < 1:
            raise UsageError(f"bad prime power {part!r} in literal")
        if not gmpy2.is_prime(base):
            raise UsageError(f"{base} in factorization literal is not prime")
        if base in seen:
            raise UsageError(f"prime {base} repeated in literal")
        seen[base] = exp
    return Factorization(tuple(sorted(seen.items())))


def sigma_exact(f: Factorization) -> int:
    """sigma(n) = product of (p^(e+1) - 1) / (p - 1), exact."""
    s = 1
    for p, e in f.entries:
        s *= (p ** (e + 1) - 1) // (p - 1)
    return s


def sigma_ratio_exact(f: Factorization) -> mpq:
    """sigma(n)/n as an exact rational."""
    r = mpq(1)
    for p, e in f.entries:
        r *= mpq(p ** (e + 1) - 1, p**e * (p - 1))
    return r


def phi_ratio_exact(f: Factorization) -> mpq:
    """n/phi(n) = product of p/(p-1), exact."""
    r = mpq(1)
    for p, _ in f.entries:
        r *= mpq(p, p - 1)
    return r


def _product_enclosure(factors, bits: int) -> BoundedReal:
    """Interval product of exact positive rationals, each converted outward once."""
    dn, up = ctx_down(bits), ctx_up(bits)
    lo = gmpy2.mpfr(1, bits)
    hi = gmpy2.mpfr(1, bits)
    for q in factors:
        lo = dn.mul(lo, gmpy2.mpfr(q, bits, dn))
        hi = up.mul(hi, gmpy2.mpfr(q, bits, up))
    return BoundedReal(lo, hi)


def sigma_over_n(f: Factorization, bits: int = DEFAULT_PRECISION_BITS) -> BoundedReal:
    """Certified enclosure of sigma(n)/n, factor-wise."""
    return _product_enclosure(
        (mpq(p ** (e + 1) - 1, p**e * (p - 1)) for p, e in f.entries), bits
    )


def phi_ratio(f: Factorization, bits: int = DEFAULT_PRECISION_BITS) -> BoundedReal:
    """Certified enclosure of n/phi(n); enclosure of 1 for n = 1."""
    return _product_enclosure((mpq(p, p - 1) for p, _ in f.entries), bits)


def kappa(f: Factorization) -> Factorization:
    """Squarefree kernel: same primes, all exponents 1."""
    return Factorization(tuple((p, 1) for p, _ in f.entries))


def exponent_pattern(f: Factorization) -> ExponentPattern:
    """Exponents of f sorted non-increasing."""
    return ExponentPattern(tuple(sorted((e for _, e in f.entries), reverse=True)))


def minimal_number(e: ExponentPattern, table: "PrimeTable") -> Factorization:
    """Smallest integer with the given exponent pattern: p_i gets exponent e_i."""
    if len(e) > len(table.primes):
        raise ResourceError(
            f"pattern length {len(e)} exceeds table prime count {len(table.primes)}"
        )
    return Factorization(tuple((table.primes[i], e.exps[i]) for i in range(len(e))))


def classify(f: Factorization, t: int = 2) -> NumberClass:
    """Compute all class-membership flags; n = 1 sets every flag true."""
    if t < 2:
        raise UsageError(f"t-free classification requires t >= 2, got {t}")
    entries = f.entries
    odd = all(p != 2 for p, _ in entries)
    squarefree = all(e == 1 for _, e in entries)
    squarefull = all(e >= 2 for _, e in entries)
    t_free = all(e < t for _, e in entries)
    exps = [e for _, e in entries]
    consecutive = [p for p, _ in entries] == first_primes(len(entries))
    non_increasing = all(exps[i] >= exps[i + 1] for i in range(len(exps) - 1))
    hardy_ramanujan = consecutive and non_increasing
    big = [p for p, _ in entries if p >= 7]
    in_set_s = 2 not in {p for p, _ in entries} and len(big) <= 1
    return NumberClass(
        t=t,
        odd=odd,
        squarefree=squarefree,
        squarefull=squarefull,
        t_free=t_free,
        hardy_ramanujan=hardy_ramanujan,
        in_set_s=in_set_s,
    )


def harmonic(n: int, bits: int = DEFAULT_PRECISION_BITS, cap: int = HARMONIC_CAP) -> BoundedReal:
    """Enclosure of h(n) = 1 + 1/2 + ... + 1/n by outward-rounded summation."""
    if n < 1:
        raise UsageError(f"harmonic requires n >= 1, got {n}")
    if n > cap:
        raise ResourceError(f"harmonic summation cap is {cap}, got n={n}")
    dn, up = ctx_down(bits), ctx_up(bits)
    lo = gmpy2.mpfr(0, bits)
    hi = gmpy2.mpfr(0, bits)
    for k in range(1, n + 1):
        lo = dn.add(lo, dn.div(1, k))
        hi = up.add(hi, up.div(1, k))
    return BoundedReal(lo, hi)
