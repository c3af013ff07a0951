"""Named constant sequences, the Euler constant and the alpha/beta thresholds.

The classical upper-bound sequences for the complex inequality constants:

* ``bh-original``   n^((n+1)/(2n)) * 2^((n-1)/2)
* ``davie-kaijser`` 2^((n-1)/2)
* ``queffelec``     (2/sqrt(pi))^(n-1)

and the real-scalar lower bound ``real-lower`` 2^(1-1/n), whose n = 2
value sqrt(2) is sharp.  No closed-form subexponential reference is
available for either field, so the shipped ``complex-reference`` is the
pointwise minimum of davie-kaijser and queffelec (a labeled stand-in) and
any real reference must be loaded from a user table.

gamma is defined only as lim (-log m + sum_{k<=m} 1/k); ``euler_gamma``
accelerates the raw partial expression with its 1/(2m) - 1/(12 m^2)
asymptotic correction at m = 10^6.  alpha = e^(1-gamma/2)/sqrt(2) is the
ceiling for doubling ratios of admissible sequences and beta = log2(alpha)
the corresponding polynomial-exponent ceiling.

Every formula has a log-space twin (``log_value``) because sequence
classification probes indices far beyond double-precision overflow
(2^((n-1)/2) overflows near n ~ 2100); plain values switch to the
exp-of-log route above n = 300.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvariantViolation, PreconditionError

GAMMA_SUM_TERMS = 10**6
LOG_SPACE_THRESHOLD = 300

SQRT2 = math.sqrt(2.0)

UPPER_BOUND_NAMES = ("bh-original", "davie-kaijser", "queffelec")


@lru_cache(maxsize=64)
def euler_gamma_raw(m):
    """The m-th partial expression (-log m) + sum_{k=1}^m 1/k.

    Strictly decreasing in m and always above the limit gamma.
    """
    if m < 1:
        raise PreconditionError("m must be a positive integer")
    return math.fsum(1.0 / k for k in range(1, m + 1)) - math.log(m)


@lru_cache(maxsize=1)
def euler_gamma():
    """Euler constant, accelerated to well below 1e-12 absolute error.

    raw(m) = gamma + 1/(2m) - 1/(12 m^2) + O(m^-4), so subtracting the
    first two correction terms at m = 10^6 leaves an O(1e-24) truncation
    error; the compensated harmonic sum keeps rounding at the few-ulp
    level.  Always below every raw partial expression.
    """
    m = GAMMA_SUM_TERMS
    return euler_gamma_raw(m) - 1.0 / (2.0 * m) + 1.0 / (12.0 * m * m)


def alpha():
    """Doubling-ratio ceiling e^(1 - gamma/2) / sqrt(2), about 1.44."""
    return math.exp(1.0 - 0.5 * euler_gamma()) / SQRT2


def beta():
    """Polynomial-exponent ceiling log2(alpha), about 0.526."""
    return math.log2(alpha())


def _as_float_array(n):
    arr = np.asarray(n, dtype=np.float64)
    if np.any(arr < 1):
        raise PreconditionError("sequence index must be at least 1")
    return arr


def _scalar_like(n, arr):
    if np.isscalar(n) or getattr(n, "ndim", 0) == 0:
        return float(arr)
    return arr


def log_upper_bound(name, n):
    """Natural log of a named upper-bound sequence, safe for huge n."""
    x = _as_float_array(n)
    if name == "bh-original":
        out = (x + 1.0) / (2.0 * x) * np.log(x) + 0.5 * (x - 1.0) * math.log(2.0)
    elif name == "davie-kaijser":
        out = 0.5 * (x - 1.0) * math.log(2.0)
    elif name == "queffelec":
        out = (x - 1.0) * math.log(2.0 / math.sqrt(math.pi))
    else:
        raise PreconditionError(f"unknown upper-bound sequence {name!r}")
    return _scalar_like(n, out)


def upper_bound(name, n):
    """Named upper-bound sequence; all three equal 1 at n = 1."""
    x = _as_float_array(n)
    if np.all(x <= LOG_SPACE_THRESHOLD):
        if name == "bh-original":
            out = x ** ((x + 1.0) / (2.0 * x)) * 2.0 ** (0.5 * (x - 1.0))
        elif name == "davie-kaijser":
            out = 2.0 ** (0.5 * (x - 1.0))
        elif name == "queffelec":
            out = (2.0 / math.sqrt(math.pi)) ** (x - 1.0)
        else:
            raise PreconditionError(f"unknown upper-bound sequence {name!r}")
        return _scalar_like(n, out)
    with np.errstate(over="ignore"):
        return _scalar_like(n, np.exp(log_upper_bound(name, x)))


def real_lower_bound(n):
    """Known real-scalar lower bound 2^(1 - 1/n); sharp at n = 2."""
    x = _as_float_array(n)
    return _scalar_like(n, 2.0 ** (1.0 - 1.0 / x))


def log_real_lower_bound(n):
    x = _as_float_array(n)
    return _scalar_like(n, (1.0 - 1.0 / x) * math.log(2.0))


@dataclass(frozen=True)
class ConstantSequence:
    """Named evaluator n -> positive real with a log-space twin.

    ``horizon`` limits table-backed sequences; closed forms leave it None.
    """

    name: str
    kind: str  # upper | lower | reference
    field_scope: str  # real | complex | both
    value_fn: object
    log_value_fn: object
    horizon: int | None = None

    def _check(self, n):
        arr = np.asarray(n)
        if np.any(arr < 1):
            raise PreconditionError("sequence index must be at least 1")
        if self.horizon is not None and np.any(arr > self.horizon):
            raise PreconditionError(
                f"sequence {self.name!r} is only defined up to n = {self.horizon}")

    def eval(self, n):
        self._check(n)
        return self.value_fn(n)

    def log_eval(self, n):
        self._check(n)
        return self.log_value_fn(n)


def _formula_sequence(name, kind, scope, value_fn, log_value_fn):
    return ConstantSequence(name, kind, scope, value_fn, log_value_fn)


def _min_of(names):
    def value(n):
        return _scalar_like(n, np.minimum.reduce(
            [np.asarray(upper_bound(m, n)) for m in names]))

    def log_value(n):
        return _scalar_like(n, np.minimum.reduce(
            [np.asarray(log_upper_bound(m, n)) for m in names]))

    return value, log_value


def builtin_sequences():
    """Registry of every shipped constant sequence, by name."""
    seqs = {}
    for name in UPPER_BOUND_NAMES:
        seqs[name] = _formula_sequence(
            name, "upper", "complex",
            lambda n, _m=name: upper_bound(_m, n),
            lambda n, _m=name: log_upper_bound(_m, n))
    seqs["real-lower"] = _formula_sequence(
        "real-lower", "lower", "real", real_lower_bound, log_real_lower_bound)
    ref_value, ref_log = _min_of(("davie-kaijser", "queffelec"))
    seqs["complex-reference"] = _formula_sequence(
        "complex-reference", "reference", "complex", ref_value, ref_log)
    return seqs


_BUILTIN = None


def get_sequence(name):
    global _BUILTIN
    if _BUILTIN is None:
        _BUILTIN = builtin_sequences()
    try:
        return _BUILTIN[name]
    except KeyError:
        raise PreconditionError(f"unknown constant sequence {name!r}") from None


def reference_from_table(name, values, field_scope="real"):
    """Reference sequence backed by an explicit per-n table (n = 1...)."""
    table = np.asarray([float(v) for v in values], dtype=np.float64)
    if table.size == 0:
        raise PreconditionError("reference table is empty")
    if np.any(table < 1.0):
        raise PreconditionError("reference table values must be at least 1")

    def value(n):
        idx = np.asarray(n, dtype=np.int64) - 1
        return _scalar_like(n, table[idx])

    def log_value(n):
        idx = np.asarray(n, dtype=np.int64) - 1
        return _scalar_like(n, np.log(table[idx]))

    return ConstantSequence(name, "reference", field_scope, value, log_value,
                            horizon=int(table.size))


def load_reference_table(path, field_scope="real"):
    """Load {"name": ..., "values": [...]} from JSON."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return reference_from_table(data["name"], data["values"], field_scope)


@dataclass(frozen=True)
class BoundEnvelope:
    """Per-(field, n) corridor [best lower, best shipped upper]."""

    n: int
    field: str
    lower: float
    upper: float
    lower_source: str
    upper_source: str


class EnvelopeViolation(InvariantViolation):
    """A certified lower bound crossed above the shipped upper bound."""

    def __init__(self, envelope_args):
        self.details = envelope_args
        super().__init__(
            "envelope lower {lower} ({lower_source}) exceeds upper {upper} "
            "({upper_source}) at n={n}, field={field}".format(**envelope_args))


def envelope(n, field, store=None, real_reference=None, extra_uppers=()):
    """Assemble the [lower, upper] corridor for one (field, n).

    Lower: max of 1, the real closed-form lower bound (real field only)
    and the best certified search-store record.  Upper: min over shipped
    upper sequences applicable to the field, with the sharp value sqrt(2)
    overriding at (real, 2).  A store record above the upper bound raises
    EnvelopeViolation rather than being silently clamped.
    """
    if n < 1:
        raise PreconditionError("n must be at least 1")
    if field not in ("real", "complex"):
        raise PreconditionError(f"unknown scalar field {field!r}")
    lower, lower_source = 1.0, "unit"
    if field == "real":
        rl = float(real_lower_bound(n))
        if rl > lower:
            lower, lower_source = rl, "real-lower"
    if store is not None:
        best = store.best_lower(field, n)
        # ties go to the store record: it carries an explicit witness form
        if best is not None and best[0] >= lower:
            lower, lower_source = float(best[0]), best[1]

    candidates = []
    if field == "complex":
        for name in UPPER_BOUND_NAMES:
            candidates.append((float(upper_bound(name, n)), name))
    if n == 1:
        # 1-linear ratios are identically 1 over either field
        candidates.append((1.0, "n1-identity"))
    if field == "real" and n == 2:
        candidates.append((SQRT2, "littlewood-sharp"))
    if real_reference is not None and field == "real":
        candidates.append((float(real_reference.eval(n)), real_reference.name))
    for seq in extra_uppers:
        if seq.field_scope in (field, "both"):
            candidates.append((float(seq.eval(n)), seq.name))
    if candidates:
        upper, upper_source = min(candidates, key=lambda c: c[0])
    else:
        upper, upper_source = math.inf, "none"

    args = {"n": n, "field": field, "lower": lower, "upper": upper,
            "lower_source": lower_source, "upper_source": upper_source}
    if lower > upper + 1e-9:
        raise EnvelopeViolation(args)
    return BoundEnvelope(**args)


def constants_table(horizon, real_reference=None):
    """Rows of every shipped sequence for n = 1..horizon (CLI backend)."""
    if horizon < 1:
        raise PreconditionError("horizon must be at least 1")
    ref = get_sequence("complex-reference")
    rows = []
    for n in range(1, horizon + 1):
        row = {"n": n}
        for name in UPPER_BOUND_NAMES:
            row[name] = float(upper_bound(name, n))
        row["real-lower"] = float(real_lower_bound(n))
        row["complex-reference"] = float(ref.eval(n))
        if real_reference is not None:
            if real_reference.horizon is None or n <= real_reference.horizon:
                row[real_reference.name] = float(real_reference.eval(n))
            else:
                row[real_reference.name] = None
        rows.append(row)
    return rows
