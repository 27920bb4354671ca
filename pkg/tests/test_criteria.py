"""The four certified checks against pinned paper values and oracles."""

import pytest
from gmpy2 import mpq

from robincheck.arith import factorize, kappa, phi_ratio_exact
from robincheck.criteria import (
    CriterionId,
    lagarias_check,
    log_n_enclosure,
    nicolas_check,
    robin_check,
    rs_upper_check,
    run_check,
)
from robincheck.errors import ResourceError, UsageError
from robincheck.primes import primorial_fact

from .helpers import harmonic_fraction, sigma_naive


class TestRobin:
    def test_5040_fails(self, table_small):
        assert robin_check(factorize(5040, table_small)).fails

    def test_15_holds(self, table_small):
        assert robin_check(factorize(15, table_small)).holds

    def test_5041_holds(self, table_small):
        assert sigma_naive(5041) == 5113
        assert robin_check(factorize(5041, table_small)).holds

    def test_16_fails(self, table_small):
        assert robin_check(factorize(16, table_small)).fails

    def test_conventions(self, table_small):
        assert robin_check(factorize(1, table_small)).fails
        v2 = robin_check(factorize(2, table_small))
        assert v2.fails
        assert v2.margin.hi < 0  # right side genuinely negative at n = 2

    def test_margin_sign_contract(self, table_small):
        for n in (3, 4, 15, 5040, 5041, 720720):
            v = robin_check(factorize(n, table_small))
            if v.holds:
                assert v.margin.lo > 0
            else:
                assert v.margin.hi <= 0

    def test_primorial_scale(self, table):
        # ratio form keeps primorial inputs cheap; N_1000 has ~3400 digits
        f = primorial_fact(1000, table)
        assert robin_check(f).holds


class TestNicolas:
    def test_15_fails(self, table_small):
        assert nicolas_check(factorize(15, table_small)).fails

    def test_21_holds(self, table_small):
        assert nicolas_check(factorize(21, table_small)).holds

    def test_44100_fails(self, table_small):
        assert nicolas_check(factorize(44100, table_small)).fails

    def test_conventions(self, table_small):
        assert nicolas_check(factorize(1, table_small)).fails
        assert nicolas_check(factorize(2, table_small)).fails

    def test_robin_implied_by_nicolas(self, table_small):
        # sigma(n)/n < n/phi(n), so a Nicolas pass forces a Robin pass
        for n in range(2, 10_001):
            f = factorize(n, table_small)
            if nicolas_check(f).holds:
                assert robin_check(f).holds

    def test_kernel_left_side_identity(self, table_small):
        for n in range(2, 10_001):
            f = factorize(n, table_small)
            assert phi_ratio_exact(f) == phi_ratio_exact(kappa(f))


class TestLagarias:
    def test_boundary_n1(self):
        v = lagarias_check(1)
        assert v.holds
        assert v.margin.contains(0)

    def test_6_holds(self):
        assert sigma_naive(6) == 12
        assert lagarias_check(6).holds

    def test_5040_holds(self):
        assert sigma_naive(5040) == 19344
        v = lagarias_check(5040)
        assert v.holds
        # margin vs the exact harmonic oracle: h + e^h log h - 19344
        import mpmath as mp

        mp.mp.dps = 30
        h = mp.mpf(str(float(harmonic_fraction(5040))))
        ref = float(h + mp.exp(h) * mp.log(h)) - 19344
        assert abs(v.margin.mid() - ref) < 0.01

    def test_cap(self):
        with pytest.raises(ResourceError):
            lagarias_check(10**7 + 1)
        with pytest.raises(UsageError):
            lagarias_check(0)


class TestRsUpper:
    def test_n9_fails(self, table_small):
        assert rs_upper_check(primorial_fact(9, table_small)).fails

    def test_30_holds(self, table_small):
        assert rs_upper_check(factorize(30, table_small)).holds

    def test_n8_holds(self, table_small):
        # margin is only ~5e-4; certified comfortably at 128 bits
        v = rs_upper_check(primorial_fact(8, table_small))
        assert v.holds
        assert 0 < v.margin.mid() < 0.001

    def test_domain(self, table_small):
        with pytest.raises(UsageError):
            rs_upper_check(factorize(2, table_small))


class TestDispatchAndDeterminism:
    def test_run_check_dispatch(self, table_small):
        f = factorize(30, table_small)
        for crit in CriterionId:
            v = run_check(crit, f)
            assert v.state.value in ("holds", "fails")

    def test_deterministic_margins(self, table_small):
        f = factorize(5040, table_small)
        a = robin_check(f)
        b = robin_check(f)
        assert a.state == b.state
        assert a.margin.lo == b.margin.lo and a.margin.hi == b.margin.hi

    def test_log_n_enclosure_vs_value(self, table_small):
        import math

        for n in (2, 12, 5040, 720720):
            enc = log_n_enclosure(factorize(n, table_small))
            assert float(enc.lo) <= math.log(n) <= float(enc.hi) or abs(
                enc.mid() - math.log(n)
            ) < 1e-12
