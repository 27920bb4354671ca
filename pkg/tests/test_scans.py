"""Enumerators, range scans, and the verification drivers."""

import math

import pytest
from gmpy2 import mpq

from robincheck.arith import ExponentPattern, classify, factorize, sigma_ratio_exact
from robincheck.criteria import CriterionId
from robincheck.errors import ResourceError, UsageError
from robincheck.scans import (
    ODD_NICOLAS_EXCEPTIONS,
    ODD_ROBIN_EXCEPTIONS,
    SET_A,
    SET_B,
    SQUAREFULL_NICOLAS_EXCEPTIONS,
    SQUAREFULL_ROBIN_EXCEPTIONS,
    density_even_nonsquarefree,
    hr_5free_census,
    hr_enumerate,
    pattern_max_ratio,
    primorial_nicolas_scan,
    scan_violators,
    set_s_enumerate,
    squarefull_enumerate,
    verify_exception_products,
    verify_set_s,
)

from .helpers import is_hr_naive, is_squarefree_naive, is_squarefull_naive


class TestHrEnumerate:
    def test_exhaustive_12(self):
        assert hr_enumerate(12) == [1, 2, 4, 6, 8, 12]

    def test_exhaustive_100(self):
        assert hr_enumerate(100) == [
            1, 2, 4, 6, 8, 12, 16, 24, 30, 32, 36, 48, 60, 64, 72, 96,
        ]

    def test_against_bruteforce(self, table_small):
        expected = [n for n in range(1, 5001) if is_hr_naive(n)]
        assert hr_enumerate(5000) == expected

    def test_count_band_sanity(self):
        # asymptotic leading exponent 2 pi sqrt(log x / (3 log log x));
        # assert the count's log within a loose factor-4 band of it
        x = 10**6
        count = len(hr_enumerate(x))
        lead = 2 * math.pi * math.sqrt(math.log(x) / (3 * math.log(math.log(x))))
        assert lead / 4 <= math.log(count) <= 4 * lead


class TestSquarefullEnumerate:
    def test_exhaustive_50(self):
        assert squarefull_enumerate(50) == [1, 4, 8, 9, 16, 25, 27, 32, 36, 49]

    def test_no_duplicates(self):
        vals = squarefull_enumerate(116144)
        assert len(vals) == len(set(vals))

    def test_against_bruteforce(self):
        expected = [n for n in range(1, 20_001) if is_squarefull_naive(n)]
        assert squarefull_enumerate(20_000) == expected


class TestCensus:
    def test_counts_and_verdicts(self):
        census = hr_5free_census()
        assert census.total == 12649
        above = census.above_5040
        assert len(above) == 12614
        assert census.all_above_5040_hold
        assert not any(e.verdict.undecided for e in census.entries)

    def test_entries_are_5free_hr_with_p_le_73(self):
        census = hr_5free_census()
        seen = set()
        for e in census.entries[:200] + census.entries[-5:]:
            c = classify(e.factorization, t=5)
            assert c.hardy_ramanujan and c.t_free
            assert e.factorization.largest_prime() <= 73
            assert e.value not in seen
            seen.add(e.value)

    def test_pattern_consequence_sampled(self, table_small):
        # a passing minimal pattern representative forces every same-pattern
        # n to pass; spot-check against direct checks below 1e6
        from robincheck.criteria import robin_check

        census = hr_5free_census()
        by_pattern = {
            tuple(sorted((e for _, e in entry.factorization.entries), reverse=True)): entry
            for entry in census.entries
            if entry.value <= 200
        }
        for pattern, entry in by_pattern.items():
            if not entry.verdict.holds:
                continue
            for n in range(2, 10**6, 9871):  # arbitrary deterministic stride
                f = factorize(n, table_small)
                if tuple(sorted((e for _, e in f.entries), reverse=True)) == pattern:
                    assert robin_check(f).holds


class TestScanViolators:
    def test_set_a(self):
        rep = scan_violators("all", CriterionId.ROBIN, 5040)
        assert rep.violators == SET_A
        assert rep.scanned_count == 5040
        assert rep.undecided == ()
        assert any("n=1" in note for note in rep.notes)

    def test_odd_robin(self):
        rep = scan_violators("odd", CriterionId.ROBIN, 100_000)
        assert rep.violators == ODD_ROBIN_EXCEPTIONS

    def test_odd_nicolas(self):
        rep = scan_violators("odd", CriterionId.NICOLAS, 100_000)
        assert rep.violators == ODD_NICOLAS_EXCEPTIONS

    def test_squarefree_robin(self):
        rep = scan_violators("squarefree", CriterionId.ROBIN, 100_000)
        assert rep.violators == (1,) + SET_B

    def test_squarefull_nicolas(self):
        rep = scan_violators("squarefull", CriterionId.NICOLAS, 116144)
        assert rep.violators == (1,) + SQUAREFULL_NICOLAS_EXCEPTIONS

    def test_squarefull_robin_includes_72(self):
        # 72 = 2^3 * 3^2 is squarefull and sits in the pinned violator set
        # for the all-integers scan, so it must appear here too
        rep = scan_violators("squarefull", CriterionId.ROBIN, 116144)
        assert 72 in SET_A
        assert 72 in rep.violators
        assert rep.violators == SQUAREFULL_ROBIN_EXCEPTIONS

    def test_hr_class(self):
        rep = scan_violators("hr", CriterionId.ROBIN, 5040)
        assert set(rep.violators) == set(SET_A) & set(hr_enumerate(5040))

    def test_tfree_class(self):
        rep = scan_violators("tfree:5", CriterionId.ROBIN, 10_000)
        # 5-free violators are exactly the pinned set (none is 5-full)
        assert rep.violators == tuple(n for n in SET_A if n <= 10_000)

    def test_lagarias_scan_empty(self):
        rep = scan_violators("all", CriterionId.LAGARIAS, 3000)
        assert rep.violators == ()
        assert rep.scanned_count == 3000

    def test_reports_reproducible(self):
        a = scan_violators("odd", CriterionId.ROBIN, 20_000)
        b = scan_violators("odd", CriterionId.ROBIN, 20_000)
        assert a == b

    def test_filter_matches_direct_checks(self, table_small):
        # the vectorized fast path must agree with per-n certified checks
        from robincheck.criteria import robin_check

        rep = scan_violators("all", CriterionId.ROBIN, 3000)
        direct = tuple(
            n for n in range(1, 3001) if robin_check(factorize(n, table_small)).fails
        )
        assert rep.violators == direct

    def test_bad_class(self):
        with pytest.raises(UsageError):
            scan_violators("evens", CriterionId.ROBIN, 100)
        with pytest.raises(UsageError):
            scan_violators("tfree:1", CriterionId.ROBIN, 100)

    def test_budget(self):
        with pytest.raises(ResourceError):
            scan_violators("all", CriterionId.ROBIN, 10**9)


class TestExceptionProducts:
    def test_violations_exact(self, table_small):
        rep = verify_exception_products(10_000, table_small)
        assert rep.ok
        # (7, 720) multiplies to 5040, which is itself a pinned violator
        assert rep.violations == ((7, 12), (7, 120), (7, 360), (7, 720))
        assert all(7 * r in SET_A for _, r in rep.violations)
        assert rep.eleven_r_all_hold
        assert rep.pairs_checked == 28 * sum(1 for p in table_small.primes if 7 <= p <= 10_000)

    def test_7_840_holds(self, table_small):
        from robincheck.criteria import robin_check

        assert robin_check(factorize(7 * 840, table_small)).holds

    def test_range_check(self, table_small):
        with pytest.raises(UsageError):
            verify_exception_products(7, table_small)


class TestSetS:
    def test_enumeration_matches_classify(self, table_small):
        members = {n for n, _ in set_s_enumerate(2000, table_small)}
        expected = {
            n for n in range(1, 2001) if classify(factorize(n, table_small)).in_set_s
        }
        assert members == expected

    def test_exception_lists(self, table):
        rep = verify_set_s(100_000, table)
        assert rep.ok
        assert rep.robin_exceptions == (1, 3, 5, 9)
        assert rep.nicolas_exceptions == (1, 3, 5, 9, 15)

    def test_31_both_hold(self, table_small):
        from robincheck.criteria import nicolas_check, robin_check

        f = factorize(31, table_small)
        assert robin_check(f).holds and nicolas_check(f).holds

    def test_precondition(self, table_small):
        with pytest.raises(UsageError):
            verify_set_s(30, table_small)


class TestPatternMaxRatio:
    def test_single_exponent(self):
        f, ratio = pattern_max_ratio(ExponentPattern((1,)), 5)
        assert f.value == 2
        assert ratio.contains(mpq(3, 2))

    def test_two_one(self):
        f, ratio = pattern_max_ratio(ExponentPattern((2, 1)), 5)
        assert f.value == 12
        assert ratio.contains(mpq(28, 12))

    def test_three_two_one(self):
        f, ratio = pattern_max_ratio(ExponentPattern((3, 2, 1)), 6)
        assert f.value == 360
        assert ratio.contains(sigma_ratio_exact(f))

    def test_budget_errors(self):
        with pytest.raises(UsageError):
            pattern_max_ratio(ExponentPattern((1, 1)), 1)
        with pytest.raises(ResourceError):
            pattern_max_ratio(ExponentPattern((1,) * 9), 40)


class TestPrimorialScan:
    def test_k2_satisfied(self, table_small):
        rep = primorial_nicolas_scan(2, table_small)
        assert rep.ok

    def test_first_thousand(self, table):
        rep = primorial_nicolas_scan(1000, table)
        assert rep.ok
        assert rep.failed_k == () and rep.undecided_k == ()

    def test_budget(self, table_small):
        with pytest.raises(ResourceError):
            primorial_nicolas_scan(10**7, table_small)


class TestDensity:
    def test_exact_100(self):
        d = density_even_nonsquarefree(100)
        assert d.contains(mpq(30, 100))

    def test_near_asymptote_1e6(self):
        d = density_even_nonsquarefree(10**6)
        assert abs(d.mid() - 0.29735) < 0.002

    def test_brute_force_small(self):
        expected = sum(
            1 for n in range(2, 1001, 2) if not is_squarefree_naive(n)
        )
        assert density_even_nonsquarefree(1000).contains(mpq(expected, 1000))
