"""Independent oracles for the test suite.

Everything here is deliberately naive -- trial division, divisor loops,
exact Fractions -- so that it shares no code path with the package
implementations it checks.
"""

from fractions import Fraction
from math import isqrt


def naive_primes(limit: int) -> list[int]:
    """Primes <= limit by per-candidate trial division."""
    out = []
    for n in range(2, limit + 1):
        if all(n % d for d in range(2, isqrt(n) + 1)):
            out.append(n)
    return out


def naive_sieve(limit: int) -> list[int]:
    """Primes <= limit by a plain boolean sieve (no segmentation, no odd trick)."""
    flags = [True] * (limit + 1)
    flags[0] = flags[1] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            for m in range(p * p, limit + 1, p):
                flags[m] = False
    return [i for i, f in enumerate(flags) if f]


def sigma_naive(n: int) -> int:
    """Divisor sum by the definition."""
    s = 0
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            s += d
            if d != n // d:
                s += n // d
    return s


def phi_naive(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if _gcd(k, n) == 1)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def factor_naive(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_squarefree_naive(n: int) -> bool:
    return all(e == 1 for e in factor_naive(n).values()) if n > 1 else True


def is_squarefull_naive(n: int) -> bool:
    return all(e >= 2 for e in factor_naive(n).values()) if n > 1 else True


def is_tfree_naive(n: int, t: int) -> bool:
    return all(e < t for e in factor_naive(n).values()) if n > 1 else True


def is_hr_naive(n: int) -> bool:
    """Consecutive primes from 2 with non-increasing exponents."""
    if n == 1:
        return True
    fac = sorted(factor_naive(n).items())
    primes = naive_primes(fac[-1][0])
    if [p for p, _ in fac] != primes:
        return False
    exps = [e for _, e in fac]
    return all(exps[i] >= exps[i + 1] for i in range(len(exps) - 1))


def harmonic_fraction(n: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def digit_bounds(printed: str) -> tuple[Fraction, Fraction]:
    """Interval of width one last-digit ulp around a printed decimal.

    Published decimals are sometimes truncated and sometimes rounded, so a
    value 'reproduces the printed digits' when its enclosure lies within
    printed +/- 10^-digits.
    """
    v = Fraction(printed)
    ulp = Fraction(1, 10 ** len(printed.split(".")[1]))
    return v - ulp, v + ulp


def assert_prints_as(enclosure, printed: str, max_width: float | None = None) -> None:
    """The enclosure sits within one last-digit ulp of the printed decimal."""
    lo, hi = digit_bounds(printed)
    assert lo < enclosure.lo and enclosure.hi < hi, (
        f"enclosure {enclosure!r} does not pin printed value {printed}"
    )
    if max_width is not None:
        assert float(enclosure.width()) < max_width
