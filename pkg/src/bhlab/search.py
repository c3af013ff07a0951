"""Certified lower-bound search for the optimal inequality constants.

Any certified ratio mixed/sup of a concrete form is a true lower bound on
the optimal constant for its (field, degree), so the searcher maximizes
that ratio by coordinate ascent over coefficients.  The inner loop scores
candidates with the fast heuristic sup (an upper-biased objective, which
is fine for steering); the final answer is re-certified once with the
strict oracle -- exact vertex enumeration over the reals, the Lipschitz
phase grid over the complexes -- and only the certified value is reported
or stored.

Results persist in a JSON store (a flat array of records).  Commits take
a single-writer file lock, never decrease the record for a given
(field, n, N), and re-check the certified value against the shipped upper
bounds: a value above the applicable cap is the highest-severity event
and is raised, never silently stored.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np
from filelock import FileLock

from . import constants
from .errors import (BudgetExceededError, CapViolationError,
                     PreconditionError, StoreCorruptError)
from .forms import (COMPLEX, EXACT, REAL, CertificationPolicy, MultilinearForm,
                    as_complex, bh_ratio, form_from_dict, form_to_dict,
                    mixed_norm, random_form, sup_norm_ascend,
                    sup_norm_real_exact, tensor_product)

CAP_SLACK = 1e-9
IMPROVEMENT_TOL = 1e-12

# multiplicative coefficient moves; complex forms add quarter-turn phases
_REAL_STEPS = (1.1, 0.9, 1.01, 0.99, -1.0)
_COMPLEX_STEPS = (1.1, 0.9, 1.01, 0.99, -1.0, 1j, -1j)


@dataclass(frozen=True, eq=False)
class SearchResult:
    """A certified lower bound together with its witness form."""

    form: MultilinearForm
    certified_lower: float
    method: dict
    timestamp: str

    def to_record(self):
        return {
            "form": form_to_dict(self.form),
            "certified_lower": self.certified_lower,
            "method": self.method,
            "timestamp": self.timestamp,
        }

    @staticmethod
    def from_record(record):
        return SearchResult(
            form_from_dict(record["form"]),
            float(record["certified_lower"]),
            dict(record["method"]),
            str(record["timestamp"]),
        )


def seed_littlewood():
    """The 2x2 form [[1, 1], [1, -1]]: ratio sqrt(2) over the reals."""
    return MultilinearForm(REAL, np.array([[1.0, 1.0], [1.0, -1.0]]))


def seed_random(degree, dim, field, seed=0):
    """Gaussian form with unit max-modulus coefficient (deterministic)."""
    return random_form(degree, dim, field, seed)


def seed_tensor_power(base, k):
    """k-fold tensor power of a form; k = 1 returns the base itself."""
    if k < 1:
        raise PreconditionError("tensor power needs k >= 1")
    out = base
    for _ in range(k - 1):
        out = tensor_product(out, base)
    return out


def _pad_to_dim(form, dim):
    if form.dim == dim:
        return form
    if form.dim > dim:
        raise PreconditionError("cannot shrink a form's dimension")
    width = dim - form.dim
    return MultilinearForm(
        form.field, np.pad(form.coeffs, [(0, width)] * form.degree))


class ResultsStore:
    """JSON-backed store of best search results, one file per store.

    The on-disk format is a flat array of SearchResult records.  Commits
    serialize through a sibling ``.lock`` file and rewrite atomically.
    """

    def __init__(self, path):
        self.path = os.fspath(path)
        self._lock = FileLock(self.path + ".lock")

    def load(self):
        if not os.path.exists(self.path):
            return []
        try:
            with open(self.path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise StoreCorruptError(f"store {self.path} is not valid JSON: {exc}")
        if not isinstance(data, list):
            raise StoreCorruptError(f"store {self.path} is not a JSON array")
        for i, record in enumerate(data):
            try:
                self._validate_record(record)
            except (KeyError, TypeError, ValueError, PreconditionError) as exc:
                raise StoreCorruptError(
                    f"store {self.path} record {i} is invalid: {exc}",
                    record_id=i)
        return data

    @staticmethod
    def _validate_record(record):
        form = form_from_dict(record["form"])
        value = float(record["certified_lower"])
        if not (math.isfinite(value) and value > 0):
            raise ValueError(f"certified_lower {value} is not a positive real")
        record["method"]
        record["timestamp"]
        return form

    @staticmethod
    def _key(record):
        f = record["form"]
        return (f["field"], int(f["degree"]), int(f["dim"]))

    def best_record(self, field, degree, dim):
        best = None
        for record in self.load():
            if self._key(record) == (field, degree, dim):
                if best is None or record["certified_lower"] > best["certified_lower"]:
                    best = record
        return best

    def best_lower(self, field, degree):
        """Best certified value over every dim for (field, degree).

        Returns (value, source-label) or None; this is the hook the
        envelope assembler consumes.
        """
        best = None
        for record in self.load():
            f = record["form"]
            if f["field"] == field and int(f["degree"]) == degree:
                if best is None or record["certified_lower"] > best["certified_lower"]:
                    best = record
        if best is None:
            return None
        return (float(best["certified_lower"]),
                f"search(N={best['form']['dim']})")

    def commit(self, result, real_reference=None):
        """Store ``result`` if it beats the record for its (field, n, N).

        Returns True when stored.  A certified value above the shipped
        upper bound for (field, n) raises CapViolationError and nothing
        is written.
        """
        form = result.form
        env = constants.envelope(form.degree, form.field,
                                 real_reference=real_reference)
        if result.certified_lower > env.upper + CAP_SLACK:
            raise CapViolationError(
                f"certified lower {result.certified_lower} exceeds the shipped "
                f"upper bound {env.upper} ({env.upper_source}) for "
                f"(field={form.field}, n={form.degree})")
        with self._lock:
            records = self.load()
            key = (form.field, form.degree, form.dim)
            existing = [r for r in records if self._key(r) == key]
            if existing:
                current = max(r["certified_lower"] for r in existing)
                if result.certified_lower <= current + IMPROVEMENT_TOL:
                    return False
                records = [r for r in records if self._key(r) != key]
            records.append(result.to_record())
            tmp = self.path + ".tmp"
            with open(tmp, "w", encoding="utf-8") as fh:
                json.dump(records, fh, indent=2, sort_keys=True)
                fh.write("\n")
            os.replace(tmp, self.path)
            return True


def _certification_policy(degree, dim, field, enum_bits, grid_budget,
                          target_gap):
    """Strict certification path for the final answer, or a refusal."""
    if field == REAL:
        if degree * dim > enum_bits:
            raise BudgetExceededError(
                f"no certification path for a real form with n*N = "
                f"{degree * dim} > {enum_bits}")
        return CertificationPolicy(kind="exact", enum_bits=enum_bits)
    return CertificationPolicy(kind="grid", target_gap=target_gap,
                               grid_budget=grid_budget)


# below this many sign bits the exact real oracle is cheap enough to
# serve as the inner objective itself; the heuristic sup can undershoot
# on skewed forms, which would inflate mixed/sup and steer the ascent
# toward forms the final certification then deflates
_EXACT_OBJECTIVE_BITS = 16


def _objective(form, seed):
    if form.field == REAL and form.degree * form.dim <= _EXACT_OBJECTIVE_BITS:
        sup = sup_norm_real_exact(form, max_bits=_EXACT_OBJECTIVE_BITS).lower
    else:
        sup = sup_norm_ascend(form, restarts=3, seed=seed).lower
    if sup <= 0.0:
        return -math.inf
    return mixed_norm(form) / sup


def _start_form(restart, rng, degree, dim, field, seed):
    if restart == 0 and degree % 2 == 0 and dim >= 2:
        base = seed_tensor_power(seed_littlewood(), degree // 2)
        base = _pad_to_dim(base, dim)
        return as_complex(base) if field == COMPLEX else base
    return random_form(degree, dim, field, seed=seed * 7919 + restart)


def _coefficient_moves(value, scale, field):
    steps = _REAL_STEPS if field == REAL else _COMPLEX_STEPS
    moves = [value * s for s in steps]
    if abs(value) < 1e-12 * scale:
        kick = 0.1 * scale
        moves.extend([kick, -kick])
        if field == COMPLEX:
            moves.extend([1j * kick, -1j * kick])
    return moves


def optimize_lower_bound(degree, dim, field, restarts=50, steps=2000, seed=0,
                         store=None, enum_bits=20,
                         grid_budget=2_000_000, target_gap=0.02,
                         certify_top=3):
    """Coordinate-ascent search for a certified ratio lower bound.

    One coefficient moves at a time (multiplicative steps of +-10% and
    +-1%, sign/phase flips, plus a small kick for dead-zero entries); a
    move is kept only when the heuristic objective strictly improves, so
    the per-restart objective sequence is nondecreasing.  Restart r is
    seeded from ``seed + r``.  The best few restarts are re-certified with
    the strict oracle and the best certified value wins.  With a store,
    the result is committed iff it beats the stored record; store I/O
    failure is surfaced in the method descriptor but the result is still
    returned.
    """
    if degree < 1 or dim < 1:
        raise PreconditionError("need degree >= 1 and dim >= 1")
    if restarts < 1 or steps < 1:
        raise PreconditionError("need restarts >= 1 and steps >= 1")
    policy = _certification_policy(degree, dim, field, enum_bits,
                                   grid_budget, target_gap)

    candidates = []
    for r in range(restarts):
        rng = np.random.default_rng(seed + r)
        form = _start_form(r, rng, degree, dim, field, seed)
        obj = _objective(form, seed + r)
        trials = 0
        improved = True
        while improved and trials < steps:
            improved = False
            for flat_index in rng.permutation(form.coeffs.size):
                if trials >= steps:
                    break
                coeffs = form.coeffs.ravel()
                scale = float(np.abs(coeffs).max())
                if scale == 0.0:
                    break
                for new_value in _coefficient_moves(coeffs[flat_index], scale,
                                                    field):
                    if trials >= steps:
                        break
                    trial = coeffs.copy()
                    trial[flat_index] = new_value
                    if not np.any(trial):
                        continue
                    cand = MultilinearForm(field,
                                           trial.reshape(form.coeffs.shape))
                    trials += 1
                    cand_obj = _objective(cand, seed + r)
                    if cand_obj > obj + IMPROVEMENT_TOL:
                        form, obj = cand, cand_obj
                        improved = True
                        break
        candidates.append((obj, r, trials, form))

    candidates.sort(key=lambda t: t[0], reverse=True)
    if field == REAL and degree * dim <= _EXACT_OBJECTIVE_BITS:
        finalists = candidates  # exact certification is cheap: take no chances
    else:
        finalists = candidates[:max(1, certify_top)]
    best = None
    for obj, r, trials, form in finalists:
        report = bh_ratio(form, policy)
        if best is None or report.ratio_lower > best[0]:
            best = (report.ratio_lower, report, r, trials, form)

    certified, report, r_best, trials_best, form_best = best
    method = {
        "seed": seed,
        "restarts": restarts,
        "steps": steps,
        "restart_index": r_best,
        "trials": trials_best,
        "certificate": report.sup.kind,
        "mesh": report.sup.mesh,
    }
    result = SearchResult(form_best, certified, method,
                          datetime.now(timezone.utc).isoformat())
    if store is not None:
        try:
            stored = store.commit(result)
            method["stored"] = stored
        except OSError as exc:
            method["store_error"] = str(exc)
    return result


@dataclass(frozen=True, eq=False)
class MarginReport:
    """Slack of mixed <= c_n * sup for one form and one constant sequence.

    The margin uses the certificate's *lower* sup bound; a nonnegative
    margin is definitive only for an exact certificate and is labeled
    indicative otherwise.
    """

    margin: float
    label: str          # verified | violation | indicative
    constant: float
    mixed: float
    sup_lower: float
    sup_kind: str

    def to_dict(self):
        return {"margin": self.margin, "label": self.label,
                "constant": self.constant, "mixed": self.mixed,
                "sup_lower": self.sup_lower, "sup_kind": self.sup_kind}


def verify_inequality(form, sequence, policy=CertificationPolicy()):
    """Margin report for mixed <= sequence(n) * sup on one form."""
    if sequence.field_scope not in (form.field, "both"):
        raise PreconditionError(
            f"sequence {sequence.name!r} applies to {sequence.field_scope} "
            f"scalars, form is {form.field}")
    report = bh_ratio(form, policy)
    c = float(sequence.eval(form.degree))
    margin = c * report.sup.lower - report.mixed
    if report.sup.kind == EXACT:
        label = "verified" if margin >= 0.0 else "violation"
    else:
        label = "indicative"
    return MarginReport(margin, label, c, report.mixed, report.sup.lower,
                        report.sup.kind)
