"""Candidate-sequence machinery: generators, extended-limit estimation,
dichotomy classification and polynomial-asymptotics rejection.

A candidate sequence R_n is *well-behaved* when both extended limits

    L1 = lim R_{2n} / R_n        (doubling ratio)
    L2 = lim (R_n - R_{n-1})     (consecutive difference)

exist in [0, inf].  For sequences trapped in the corridor
1 <= R_n <= C_n under a reference with doubling ratio alpha, exactly one
of two things holds: the sequence is not well-behaved, or it is
well-behaved with L1 in [1, alpha] and L2 = 0.  ``classify`` renders that
trichotomy (plus explicit corridor violations) as data.

Limits are estimated by a declared finite protocol: values are evaluated
on dyadic windows [2^j, 2^{j+1}) plus structure-aware probe subsequences
at n = 2^k, 2^k - 1, 2^k + 1 and 3*2^k (split by the parity of k, because
both shipped counterexamples concentrate their pathology there).  The
verdict is

* converges    -- total spread over the last ``conv_windows`` windows and
                  the probe values inside that index range is at most
                  ``tol``;
* diverges-to-infinity -- minima of three consecutive window groups grow
                  strictly, each step by a factor >= ``divergence_factor``
                  or an increment >= ``divergence_step``;
* no-extended-limit -- otherwise; the evidence list then contains two
                  subsequences whose tails are separated by more than tol.

Generators with values beyond double-precision range (the block
counterexample, the power-of-two/reference mix) are evaluated in natural
log space throughout; consecutive differences fall back to exact
per-generator formulas where floating subtraction of huge values would
cancel catastrophically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import ConstantSequence, alpha, beta, get_sequence
from .errors import PreconditionError

DEFAULT_HORIZON = 2**20

LN2 = math.log(2.0)
SQRT2 = math.sqrt(2.0)

CONVERGES = "converges"
DIVERGES = "diverges-to-infinity"
NO_LIMIT = "no-extended-limit"

LOG_FORCED_GENERATORS = ("blocks", "mix")


@dataclass(frozen=True)
class SequenceSpec:
    """Generator id + parameters, evaluation horizon and representation.

    ``candidate`` marks sequences that must stay in [1, inf); generation
    validates that on a structured sample of indices.
    """

    generator: str
    params: dict
    horizon: int
    log_space: bool
    candidate: bool


@dataclass(frozen=True)
class _GeneratorImpl:
    log_values: object          # ns (int array) -> log R_n
    exact_differences: object   # ns -> R_n - R_{n-1} with NaN = "use generic"
    known_ratio_limit: float | None


def _block_index(ns):
    # n lies in {2^k - 1, ..., 2^{k+1} - 2}  <=>  2^k <= n + 1 < 2^{k+1}
    return np.frexp(ns.astype(np.float64) + 1.0)[1] - 1


def _is_power_of_two(ns):
    return (ns & (ns - 1)) == 0


def _make_power(params):
    a = float(params.get("a", 1.0))
    b = float(params.get("b", 1.0))
    if b <= 0.0:
        raise PreconditionError("power generator requires b > 0")

    def log_values(ns):
        return math.log(b) + a * np.log(ns.astype(np.float64))

    return _GeneratorImpl(log_values, None, 2.0**a)


def _make_exponential(params):
    a = float(params.get("a", 2.0))
    b = float(params.get("b", 1.0))
    c = float(params.get("c", 1.0))
    if a <= 0.0 or b <= 0.0:
        raise PreconditionError("exponential generator requires a > 0 and b > 0")

    def log_values(ns):
        return math.log(b) + c * ns.astype(np.float64) * math.log(a)

    step = a**c
    limit = math.inf if step > 1.0 else (1.0 if step == 1.0 else 0.0)
    return _GeneratorImpl(log_values, None, limit)


def _make_exp_reciprocal(params):
    a = float(params.get("a", 2.0))
    b = float(params.get("b", 1.0))
    c = float(params.get("c", 1.0))
    if a <= 0.0 or b <= 0.0:
        raise PreconditionError("exp-reciprocal generator requires a > 0 and b > 0")

    def log_values(ns):
        return math.log(b) + (c / ns.astype(np.float64)) * math.log(a)

    return _GeneratorImpl(log_values, None, 1.0)


def _make_log(params):
    b = float(params.get("b", 1.0))
    if b <= 0.0:
        raise PreconditionError("log generator requires b > 0")

    def log_values(ns):
        with np.errstate(divide="ignore"):
            return math.log(b) + np.log(np.log(ns.astype(np.float64)))

    return _GeneratorImpl(log_values, None, 1.0)


def _make_polynomial(params):
    coeffs = [float(c) for c in params.get("coeffs", ())]
    if not coeffs or coeffs[-1] <= 0.0:
        raise PreconditionError(
            "polynomial generator requires coefficients a_0..a_k with a_k > 0")

    def log_values(ns):
        vals = np.polynomial.polynomial.polyval(ns.astype(np.float64), coeffs)
        if np.any(vals <= 0.0):
            raise PreconditionError(
                "polynomial takes non-positive values on the requested range")
        return np.log(vals)

    degree = len(coeffs) - 1
    return _GeneratorImpl(log_values, None, 2.0**degree)


def _make_constant(params):
    b = float(params.get("b", 1.0))
    if b <= 0.0:
        raise PreconditionError("constant generator requires b > 0")

    def log_values(ns):
        return np.full(ns.shape, math.log(b))

    return _GeneratorImpl(log_values, None, 1.0)


def _make_contra(params):
    # sqrt(n) on powers of two, 2*sqrt(n) elsewhere: doubling ratio sqrt(2)
    # everywhere, but consecutive differences blow up near 2^k.
    def log_values(ns):
        off = np.where(_is_power_of_two(ns), 0.0, LN2)
        return 0.5 * np.log(ns.astype(np.float64)) + off

    return _GeneratorImpl(log_values, None, SQRT2)


def _make_blocks(params):
    # n^k on odd blocks B_k = {2^k - 1, ..., 2^{k+1} - 2}, (min B_k)^k + k n
    # on even blocks.  The k = 1 block {1, 2} follows the odd rule, which
    # extends the definition down to n = 1.
    def log_values(ns):
        k = _block_index(ns)
        kf = k.astype(np.float64)
        logn = np.log(ns.astype(np.float64))
        odd = kf * logn
        log_min_pow = kf * (kf * LN2 + np.log1p(-np.exp2(-kf)))
        with np.errstate(divide="ignore"):
            even = np.logaddexp(log_min_pow, np.log(kf) + logn)
        return np.where(k % 2 == 1, odd, even)

    def exact_differences(ns):
        # inside an even block the difference is exactly k; everything else
        # is resolvable from log magnitudes.
        k_here = _block_index(ns)
        k_prev = _block_index(ns - 1)
        same_even = (k_here == k_prev) & (k_here % 2 == 0)
        out = np.full(ns.shape, np.nan)
        out[same_even] = k_here[same_even].astype(np.float64)
        return out

    return _GeneratorImpl(log_values, exact_differences, None)


def _make_mix(params):
    # 2^(1 - 1/n) on powers of two, a reference upper sequence elsewhere:
    # stays inside the corridor yet is not well-behaved.
    ref = params.get("reference", "davie-kaijser")
    if isinstance(ref, str):
        ref = get_sequence(ref)
    if not isinstance(ref, ConstantSequence):
        raise PreconditionError("mix reference must be a sequence name or object")

    def log_values(ns):
        nf = ns.astype(np.float64)
        low = (1.0 - 1.0 / nf) * LN2
        return np.where(_is_power_of_two(ns), low, np.asarray(ref.log_eval(ns)))

    return _GeneratorImpl(log_values, None, None)


def _make_real_lower(params):
    def log_values(ns):
        return (1.0 - 1.0 / ns.astype(np.float64)) * LN2

    return _GeneratorImpl(log_values, None, 1.0)


_GENERATORS = {
    "power": _make_power,
    "exponential": _make_exponential,
    "exp-reciprocal": _make_exp_reciprocal,
    "log": _make_log,
    "polynomial": _make_polynomial,
    "constant": _make_constant,
    "contra": _make_contra,
    "blocks": _make_blocks,
    "mix": _make_mix,
    "real-lower": _make_real_lower,
}

GENERATOR_NAMES = tuple(sorted(_GENERATORS))


def _realize(spec):
    return _GENERATORS[spec.generator](spec.params)


def gen(generator, params=None, horizon=DEFAULT_HORIZON, log_space=None,
        candidate=False):
    """Build a SequenceSpec, validating generator id and parameters.

    The blocks and mix generators overflow doubles almost immediately and
    force log-space representation.  Under ``candidate`` the values are
    checked to stay at or above 1 on small indices and around every power
    of two up to the horizon.
    """
    if generator not in _GENERATORS:
        raise PreconditionError(f"unknown generator {generator!r}")
    if horizon < 2:
        raise PreconditionError("horizon must be at least 2")
    params = dict(params or {})
    forced = generator in LOG_FORCED_GENERATORS
    if forced and log_space is False:
        raise PreconditionError(
            f"generator {generator!r} forces log-space evaluation")
    spec = SequenceSpec(generator, params, int(horizon),
                        bool(forced or log_space), bool(candidate))
    _realize(spec)  # validates params eagerly
    if candidate:
        ns = sample_indices(spec.horizon)
        lv = log_values(spec, ns)
        if np.any(lv < -1e-12):
            bad = int(ns[np.argmin(lv)])
            raise PreconditionError(
                f"candidate sequence drops below 1 at n = {bad}")
    return spec


def sample_indices(horizon):
    """Small indices plus every 2^k and its neighbours up to the horizon."""
    small = np.arange(1, min(horizon, 1024) + 1, dtype=np.int64)
    extra = []
    k = 1
    while 2**k <= horizon:
        for n in (2**k - 1, 2**k, 2**k + 1):
            if 1 <= n <= horizon:
                extra.append(n)
        k += 1
    return np.unique(np.concatenate([small, np.array(extra, dtype=np.int64)]))


def log_values(spec, ns):
    """log R_n on an integer index array (scalars accepted)."""
    arr = np.atleast_1d(np.asarray(ns, dtype=np.int64))
    if np.any(arr < 1) or np.any(arr > spec.horizon):
        raise PreconditionError("index outside [1, horizon]")
    out = _realize(spec).log_values(arr)
    return out if np.ndim(ns) else float(out[0])


def values(spec, ns):
    """R_n itself; overflows to inf where the value exceeds double range."""
    with np.errstate(over="ignore"):
        return np.exp(log_values(spec, ns))


def known_ratio_limit(spec):
    """Closed-form doubling-ratio limit, or None when the generator has none."""
    return _realize(spec).known_ratio_limit


def differences(spec, ns):
    """R_n - R_{n-1}, exact per-generator where log arithmetic would cancel.

    Where both neighbours exceed double range the difference is resolved
    to +-inf from the log magnitudes; an unresolvable tie raises.
    """
    arr = np.atleast_1d(np.asarray(ns, dtype=np.int64))
    if np.any(arr < 2):
        raise PreconditionError("differences need n >= 2")
    impl = _realize(spec)
    la = log_values(spec, arr)
    lb = log_values(spec, arr - 1)
    with np.errstate(over="ignore", invalid="ignore"):
        ea = np.exp(la)
        eb = np.exp(lb)
        direct = ea - eb
    safe = np.isfinite(ea) & np.isfinite(eb)
    out = np.where(safe, direct,
                   np.where(la > lb, np.inf,
                            np.where(la < lb, -np.inf, np.nan)))
    if impl.exact_differences is not None:
        exact = impl.exact_differences(arr)
        out = np.where(np.isnan(exact), out, exact)
    if np.any(np.isnan(out)):
        bad = int(arr[np.argmax(np.isnan(out))])
        raise PreconditionError(
            f"difference at n = {bad} is not resolvable in log space")
    return out if np.ndim(ns) else float(out[0])


# ---------------------------------------------------------------------------
# extended-limit estimation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EstimatorSchedule:
    """Declared finite protocol for extended-limit estimation."""

    conv_windows: int = 4
    trend_windows: int = 12
    probe_tail: int = 6
    tol: float = 1e-2
    divergence_factor: float = 1.25
    divergence_step: float = 1.0


@dataclass(frozen=True)
class SubsequenceEvidence:
    label: str
    tail: tuple

    def to_dict(self):
        return {"subsequence": self.label, "tail": list(self.tail)}


@dataclass(frozen=True, eq=False)
class ExtendedLimitEstimate:
    """Verdict on one extended limit, with liminf/limsup tail estimates."""

    status: str
    value: float | None
    liminf_est: float
    limsup_est: float
    evidence: tuple
    tol: float

    def to_dict(self):
        return {
            "status": self.status,
            "value": self.value,
            "liminf_est": self.liminf_est,
            "limsup_est": self.limsup_est,
            "tol": self.tol,
            "evidence": [e.to_dict() for e in self.evidence],
        }


_PROBE_BASES = {
    "n=2^k": lambda k: 2**k,
    "n=2^k-1": lambda k: 2**k - 1,
    "n=2^k+1": lambda k: 2**k + 1,
    "n=3*2^k": lambda k: 3 * 2**k,
}


def _probe_evidence(quantity, limit, bases, schedule, pool_floor):
    """Evidence tails for every probe family, plus the pool of probe
    values late enough (n >= pool_floor) to count toward convergence."""
    out = []
    pool = []
    for label in bases:
        fn = _PROBE_BASES[label]
        ks = [k for k in range(3, limit.bit_length() + 1) if fn(k) <= limit]
        if not ks:
            continue
        ks = np.array(ks, dtype=np.int64)
        ns = np.array([fn(int(k)) for k in ks], dtype=np.int64)
        vals = quantity(ns)
        pool.extend(float(v) for v in vals[ns >= pool_floor])
        tail = schedule.probe_tail
        out.append(SubsequenceEvidence(label, tuple(float(v) for v in vals[-tail:])))
        for parity, word in ((0, "even"), (1, "odd")):
            mask = ks % 2 == parity
            if np.any(mask):
                sub = vals[mask]
                out.append(SubsequenceEvidence(
                    f"{label} (k {word})",
                    tuple(float(v) for v in sub[-tail:])))
    return out, pool


def _trend_diverges(minima, schedule):
    usable = [m for m in minima]
    groups = 3
    size = len(usable) // groups
    if size < 2:
        return False
    usable = usable[len(usable) - groups * size:]
    mins = [min(usable[i * size:(i + 1) * size]) for i in range(groups)]
    m0, m1, m2 = mins
    if not (m2 > m1 > m0):
        return False
    f = schedule.divergence_factor
    step = schedule.divergence_step
    by_factor = m0 > 0 and m1 >= m0 * f and m2 >= m1 * f
    by_step = (m1 - m0) >= step and (m2 - m1) >= step
    return by_factor or by_step


def _estimate(quantity, limit, schedule, bases):
    j_hi = (limit + 1).bit_length() - 2
    j_conv_lo = j_hi - schedule.conv_windows + 1
    if j_conv_lo < 3:
        raise PreconditionError(
            f"horizon too small for the estimation schedule (needs windows "
            f"up to [2^{schedule.conv_windows + 2}, ...))")
    j_trend_lo = max(3, j_hi - schedule.trend_windows + 1)
    ns = np.arange(2**j_trend_lo, 2 ** (j_hi + 1), dtype=np.int64)
    q = np.asarray(quantity(ns), dtype=np.float64)
    if np.any(np.isnan(q)):
        raise PreconditionError("estimator quantity produced NaN")

    win_min, win_max = [], []
    for j in range(j_trend_lo, j_hi + 1):
        lo = 2**j - 2**j_trend_lo
        seg = q[lo:lo + 2**j]
        win_min.append(float(seg.min()))
        win_max.append(float(seg.max()))

    probes, probe_pool = _probe_evidence(quantity, limit, bases, schedule,
                                         pool_floor=2**j_conv_lo)

    conv_from = j_conv_lo - j_trend_lo
    pool = win_min[conv_from:] + win_max[conv_from:] + probe_pool
    liminf_est = min(pool)
    limsup_est = max(pool)

    evidence = [
        SubsequenceEvidence("dyadic-window-minima", tuple(win_min[-8:])),
        SubsequenceEvidence("dyadic-window-maxima", tuple(win_max[-8:])),
    ] + probes

    if liminf_est == math.inf:
        status, value = DIVERGES, None
    elif math.isfinite(limsup_est - liminf_est) and \
            limsup_est - liminf_est <= schedule.tol:
        status, value = CONVERGES, 0.5 * (liminf_est + limsup_est)
    elif _trend_diverges(win_min, schedule):
        status, value = DIVERGES, None
    else:
        status, value = NO_LIMIT, None
    return ExtendedLimitEstimate(status, value, liminf_est, limsup_est,
                                 tuple(evidence), schedule.tol)


def ratio_limit_estimate(spec, schedule=None):
    """Estimate lim R_{2n}/R_n over the dyadic-window/probe protocol."""
    schedule = schedule or EstimatorSchedule()
    limit = spec.horizon // 2
    if limit < 2:
        raise PreconditionError("horizon too small for ratio estimation")

    def quantity(ns):
        with np.errstate(over="ignore"):
            return np.exp(log_values(spec, 2 * ns) - log_values(spec, ns))

    return _estimate(quantity, limit, schedule,
                     ("n=2^k", "n=2^k-1", "n=3*2^k"))


def difference_limit_estimate(spec, schedule=None):
    """Estimate lim (R_n - R_{n-1}) over the same protocol.

    Probes additionally cover n = 2^k + 1, the first index after each
    power of two, where the shipped counterexample jumps back up.
    """
    schedule = schedule or EstimatorSchedule()
    limit = spec.horizon

    def quantity(ns):
        return differences(spec, ns)

    return _estimate(quantity, limit, schedule,
                     ("n=2^k-1", "n=2^k", "n=2^k+1", "n=3*2^k"))


# ---------------------------------------------------------------------------
# dyadic probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DyadicProbeStep:
    """One step along n0, 2 n0, 4 n0, ...: the growth factor is
    (2^l n0 / R_{2^l n0}) / (n0 / R_{n0})."""

    l: int
    n: int
    value: float
    log_value: float
    growth_factor: float
    dominates_four_thirds: bool

    def to_dict(self):
        return {
            "l": self.l, "n": self.n, "value": self.value,
            "log_value": self.log_value, "growth_factor": self.growth_factor,
            "dominates_four_thirds": self.dominates_four_thirds,
        }


def dyadic_probe(spec, n0, l_max):
    """Track n/R_n along the dyadic subsequence 2^l * n0.

    For corridor-bounded sequences the growth factors must eventually
    dominate (4/3)^l; factors sinking toward 0 are violation evidence.
    """
    if n0 < 1 or l_max < 1:
        raise PreconditionError("need n0 >= 1 and l_max >= 1")
    if n0 * 2**l_max > spec.horizon:
        raise PreconditionError(
            f"dyadic probe reaches n = {n0 * 2 ** l_max} beyond horizon "
            f"{spec.horizon}")
    ns = n0 * 2 ** np.arange(0, l_max + 1, dtype=np.int64)
    lv = log_values(spec, ns)
    steps = []
    ln43 = math.log(4.0 / 3.0)
    with np.errstate(over="ignore"):
        for l in range(1, l_max + 1):
            log_growth = l * LN2 + lv[0] - lv[l]
            steps.append(DyadicProbeStep(
                l=l,
                n=int(ns[l]),
                value=float(np.exp(lv[l])),
                log_value=float(lv[l]),
                growth_factor=float(np.exp(log_growth)),
                dominates_four_thirds=bool(log_growth >= l * ln43 - 1e-12),
            ))
    return steps


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ClassificationReport:
    """Outcome of the dichotomy machinery on one candidate sequence."""

    um: ExtendedLimitEstimate
    dois: ExtendedLimitEstimate
    well_behaved: str          # yes | no
    dichotomy_branch: str      # branch-i | branch-ii | envelope-violation | undetermined
    ratio_in_alpha_window: bool
    violation_index: int | None
    notes: tuple

    def to_dict(self):
        return {
            "um": self.um.to_dict(),
            "dois": self.dois.to_dict(),
            "well_behaved": self.well_behaved,
            "dichotomy_branch": self.dichotomy_branch,
            "ratio_in_alpha_window": self.ratio_in_alpha_window,
            "violation_index": self.violation_index,
            "notes": list(self.notes),
        }


def _envelope_scan(spec, upper_reference, tol, j_trend_lo, j_hi):
    small = np.arange(1, min(spec.horizon, 4096) + 1, dtype=np.int64)
    extra = sample_indices(spec.horizon)
    dense = np.arange(2**j_trend_lo, min(2 ** (j_hi + 1), spec.horizon + 1),
                      dtype=np.int64)
    ns = np.unique(np.concatenate([small, extra, dense]))
    lv = np.asarray(log_values(spec, ns))
    log_ref = np.asarray(upper_reference.log_eval(ns), dtype=np.float64)
    too_low = lv < math.log1p(-tol)
    too_high = lv > np.logaddexp(log_ref, math.log(tol))
    bad = too_low | too_high
    if np.any(bad):
        return int(ns[np.argmax(bad)])
    return None


def classify(spec, upper_reference, schedule=None):
    """Run both estimators, the corridor check and the branch decision.

    Branches: ``envelope-violation`` when some sampled index leaves
    [1 - tol, reference + tol] (the violating index is reported);
    ``branch-i`` when inside the corridor but not well-behaved;
    ``branch-ii`` when well-behaved with ratio limit inside
    [1 - tol, alpha + tol] and difference limit 0 +- tol.  A well-behaved
    sequence whose measured limits contradict the corridor (possible only
    when the reference is not an alpha-ratio sequence, or the horizon is
    too small) is reported ``undetermined`` with loud notes rather than
    forced into a branch.
    """
    schedule = schedule or EstimatorSchedule()
    tol = schedule.tol
    um = ratio_limit_estimate(spec, schedule)
    dois = difference_limit_estimate(spec, schedule)

    j_hi = (spec.horizon + 1).bit_length() - 2
    j_trend_lo = max(3, j_hi - schedule.trend_windows + 1)
    violation_index = _envelope_scan(spec, upper_reference, tol,
                                     j_trend_lo, j_hi)

    well_behaved = "yes" if (um.status != NO_LIMIT and dois.status != NO_LIMIT) \
        else "no"
    ratio_in_window = (um.status == CONVERGES
                       and 1.0 - tol <= um.value <= alpha() + tol)
    dois_zero = dois.status == CONVERGES and abs(dois.value) <= tol

    notes = []
    if violation_index is not None:
        branch = "envelope-violation"
    elif well_behaved == "no":
        branch = "branch-i"
    elif ratio_in_window and dois_zero:
        branch = "branch-ii"
    else:
        branch = "undetermined"
        if not ratio_in_window:
            shown = um.value if um.status == CONVERGES else um.status
            notes.append(
                f"INCONSISTENT: well-behaved with doubling ratio {shown} "
                f"outside [1, {alpha():.6f}] yet no corridor crossing found "
                f"up to the horizon; the reference is not an alpha-ratio "
                f"upper sequence or the horizon is too small")
        if not dois_zero:
            shown = dois.value if dois.status == CONVERGES else dois.status
            notes.append(
                f"INCONSISTENT: well-behaved inside the corridor but the "
                f"difference limit is {shown}, not 0")
    return ClassificationReport(um, dois, well_behaved, branch,
                                bool(ratio_in_window), violation_index,
                                tuple(notes))


# ---------------------------------------------------------------------------
# polynomial-asymptotics rejection
# ---------------------------------------------------------------------------

REASON_NEGATIVE = "optimal constants lie in [1, inf); negative exponents are impossible"
REASON_POLYNOMIAL = "asymptotic equality with a non-constant polynomial is excluded"
REASON_RATIO = ("doubling ratio 2^q = {ratio:.9g} falls outside [1, alpha] "
                "with alpha = {alpha:.9g}")


@dataclass(frozen=True)
class PolynomialVerdict:
    q: float
    c: float
    admissible: bool
    doubling_ratio: float
    reason: str | None

    def to_dict(self):
        return {"q": self.q, "c": self.c, "admissible": self.admissible,
                "doubling_ratio": self.doubling_ratio, "reason": self.reason}


def polynomial_rejection(q, c=1.0):
    """Can the optimal constants grow like c * n^q?

    A sequence asymptotic to c n^q has doubling ratio exactly 2^q, so q
    must lie in [0, beta] (boundary included); q < 0 contradicts the
    constants living in [1, inf) and integer q >= 1 is the non-constant
    polynomial case.
    """
    q = float(q)
    c = float(c)
    if c <= 0.0:
        raise PreconditionError("leading coefficient c must be positive")
    ratio = 2.0**q
    if q < 0.0:
        return PolynomialVerdict(q, c, False, ratio, REASON_NEGATIVE)
    if q.is_integer() and q >= 1.0:
        return PolynomialVerdict(q, c, False, ratio, REASON_POLYNOMIAL)
    if q > beta():
        return PolynomialVerdict(
            q, c, False, ratio, REASON_RATIO.format(ratio=ratio, alpha=alpha()))
    return PolynomialVerdict(q, c, True, ratio, None)


# ---------------------------------------------------------------------------
# harness: ratio limit in [1, 2) forces vanishing differences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HarnessEntry:
    label: str
    declared_ratio_limit: float
    difference_status: str
    difference_value: float | None
    max_tail_difference: float
    passed: bool

    def to_dict(self):
        return {
            "label": self.label,
            "declared_ratio_limit": self.declared_ratio_limit,
            "difference_status": self.difference_status,
            "difference_value": self.difference_value,
            "max_tail_difference": self.max_tail_difference,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class HarnessReport:
    entries: tuple

    @property
    def all_pass(self):
        return all(e.passed for e in self.entries)

    def to_dict(self):
        return {"all_pass": self.all_pass,
                "entries": [e.to_dict() for e in self.entries]}


def _spec_label(spec):
    inner = ", ".join(f"{k}={spec.params[k]}" for k in sorted(spec.params))
    return f"{spec.generator}({inner})"


def proposition_py_harness(family, tol=1e-2, schedule=None):
    """Verify that declared ratio limits in [1, 2) force differences to 0.

    Every member must be well-behaved by construction with a known
    doubling-ratio limit; a member whose limit is unknown or falls outside
    [1, 2) is rejected as input, not counted as a failure.  The report
    carries the maximal tail difference per member.
    """
    schedule = schedule or EstimatorSchedule(tol=tol)
    for spec in family:
        declared = known_ratio_limit(spec)
        if declared is None:
            raise PreconditionError(
                f"{_spec_label(spec)}: no closed-form ratio limit; the "
                f"harness requires well-behaved inputs with known limits")
        if not 1.0 <= declared < 2.0:
            raise PreconditionError(
                f"{_spec_label(spec)}: ratio limit {declared} outside [1, 2)")
    entries = []
    for spec in family:
        est = difference_limit_estimate(spec, schedule)
        max_tail = max(abs(est.liminf_est), abs(est.limsup_est))
        passed = est.status == CONVERGES and abs(est.value) <= schedule.tol
        entries.append(HarnessEntry(
            _spec_label(spec), known_ratio_limit(spec), est.status,
            est.value, max_tail, passed))
    return HarnessReport(tuple(entries))
