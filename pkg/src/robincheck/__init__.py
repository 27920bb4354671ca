"""robincheck: certified-arithmetic verification of divisor-sum and
totient inequalities over integer classes.

Everything is built on directed-rounded enclosures: a verdict of Holds
or Fails is a proof at the working precision, and Undecided is surfaced
rather than guessed.
"""

__version__ = "0.1.0"

from .arith import (
    ExponentPattern,
    Factorization,
    NumberClass,
    classify,
    exponent_pattern,
    factorize,
    harmonic,
    kappa,
    minimal_number,
    phi_ratio,
    sigma_exact,
    sigma_over_n,
)
from .criteria import (
    CriterionId,
    lagarias_check,
    nicolas_check,
    robin_check,
    rs_upper_check,
)
from .intervals import (
    BoundedReal,
    RetryPolicy,
    Verdict,
    VerdictState,
    compare_nonstrict,
    compare_strict,
    const_exp_gamma,
    const_gamma,
    const_mertens,
    zeta_int,
)
from .primes import PrimeTable, build_table, prime_recip_sum, primorial_fact, theta
from .scans import (
    ScanReport,
    hr_5free_census,
    hr_enumerate,
    scan_violators,
    squarefull_enumerate,
)

__all__ = [
    "BoundedReal",
    "CriterionId",
    "ExponentPattern",
    "Factorization",
    "NumberClass",
    "PrimeTable",
    "RetryPolicy",
    "ScanReport",
    "Verdict",
    "VerdictState",
    "__version__",
    "build_table",
    "classify",
    "compare_nonstrict",
    "compare_strict",
    "const_exp_gamma",
    "const_gamma",
    "const_mertens",
    "exponent_pattern",
    "factorize",
    "harmonic",
    "hr_5free_census",
    "hr_enumerate",
    "kappa",
    "lagarias_check",
    "minimal_number",
    "nicolas_check",
    "phi_ratio",
    "prime_recip_sum",
    "primorial_fact",
    "robin_check",
    "rs_upper_check",
    "scan_violators",
    "sigma_exact",
    "sigma_over_n",
    "squarefull_enumerate",
    "theta",
    "zeta_int",
]
