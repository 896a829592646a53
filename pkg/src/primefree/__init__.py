"""Periods of composed linear recurrences modulo primes, and compositeness certificates."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetExceeded,
    HTooLarge,
    IndexBelowTowerStart,
    NoFactorFound,
    NonMonotoneEvidence,
    NonReversibleLevel,
    NotPisotOrSalem,
    PrecisionInsufficient,
    PrimefreeError,
)
from .ilrs import (  # noqa: E402
    CompositionChain,
    IlrsSpec,
    WindowReport,
    check_window,
    eval_chain_exact,
    eval_exact,
    validate_ilrs,
)
from .modular import PeriodInfo, check_prime_preperiod_bound, eval_mod, find_period  # noqa: E402
from .tower import TowerReduction, chain_period, eval_chain_mod, find_tower_start  # noqa: E402
from .trace import (  # noqa: E402
    Classification,
    FloorOffsetBound,
    MinPoly,
    classify,
    floor_alpha_pow,
    offset_bound,
    trace_ilrs,
)
from .primes import theta  # noqa: E402
from .certify import (  # noqa: E402
    DivisibilityCertificate,
    PisotFloorCertificate,
    PrimeFreeIntervalCertificate,
    certify_divisibility,
    certify_pisot_floor,
    certify_prime_free_interval,
    delta_estimate,
    smallest_prime_factor_chain,
)
from .verify import VerificationReport, verify_certificate  # noqa: E402
from .cache import PeriodCache, cache_get_or_compute  # noqa: E402
