"""bhlab: a desk-scale numerical laboratory for the multilinear
Bohnenblust-Hille inequality.

Compute both sides of the inequality for explicit multilinear forms,
certify lower bounds on the optimal constants by extremal search, ship
the classical constant sequences and thresholds, and classify candidate
constant sequences with the dichotomy machinery.
"""

__version__ = "0.1.0"
SCHEMA_VERSION = 1

from .constants import (BoundEnvelope, ConstantSequence, alpha, beta, envelope,
                        euler_gamma, euler_gamma_raw, get_sequence,
                        real_lower_bound, upper_bound)
from .errors import (BhlabError, BudgetExceededError, CapViolationError,
                     InvariantViolation, PreconditionError, StoreCorruptError)
from .forms import (COMPLEX, REAL, CertificationPolicy, MultilinearForm,
                    NormReport, SupNormCertificate, bh_ratio, evaluate,
                    mixed_norm, random_form, sup_norm_ascend,
                    sup_norm_complex_certified_upper, sup_norm_real_exact,
                    tensor_product)
from .search import (MarginReport, ResultsStore, SearchResult,
                     optimize_lower_bound, seed_littlewood, seed_random,
                     seed_tensor_power, verify_inequality)
from .sequences import (ClassificationReport, EstimatorSchedule,
                        ExtendedLimitEstimate, SequenceSpec, classify,
                        difference_limit_estimate, dyadic_probe, gen,
                        polynomial_rejection, proposition_py_harness,
                        ratio_limit_estimate)

__all__ = [
    "__version__", "SCHEMA_VERSION",
    "REAL", "COMPLEX",
    "MultilinearForm", "SupNormCertificate", "NormReport",
    "CertificationPolicy", "evaluate", "mixed_norm", "bh_ratio",
    "sup_norm_real_exact", "sup_norm_ascend",
    "sup_norm_complex_certified_upper", "tensor_product", "random_form",
    "euler_gamma", "euler_gamma_raw", "alpha", "beta", "upper_bound",
    "real_lower_bound", "envelope", "get_sequence", "ConstantSequence",
    "BoundEnvelope",
    "SequenceSpec", "EstimatorSchedule", "ExtendedLimitEstimate",
    "ClassificationReport", "gen", "ratio_limit_estimate",
    "difference_limit_estimate", "dyadic_probe", "classify",
    "polynomial_rejection", "proposition_py_harness",
    "SearchResult", "ResultsStore", "MarginReport", "seed_littlewood",
    "seed_random", "seed_tensor_power", "optimize_lower_bound",
    "verify_inequality",
    "BhlabError", "PreconditionError", "BudgetExceededError",
    "InvariantViolation", "CapViolationError", "StoreCorruptError",
]
