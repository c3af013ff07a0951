"""Seeds, the coordinate-ascent searcher, the results store and margins."""

import json
import math
import os

import numpy as np
import pytest

import bhlab as bh
from bhlab.errors import (BudgetExceededError, CapViolationError,
                          PreconditionError, StoreCorruptError)
from bhlab.forms import COMPLEX, REAL, CertificationPolicy, MultilinearForm

SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# seeds
# ---------------------------------------------------------------------------

def test_littlewood_seed_certified_values():
    form = bh.seed_littlewood()
    report = bh.bh_ratio(form)
    assert report.ratio_lower == pytest.approx(SQRT2, abs=1e-12)
    assert report.mixed == pytest.approx(2.0**1.5, abs=1e-12)
    assert report.sup.lower == pytest.approx(2.0, abs=1e-12)


def test_tensor_power_identity_and_square():
    base = bh.seed_littlewood()
    assert np.array_equal(bh.seed_tensor_power(base, 1).coeffs, base.coeffs)
    squared = bh.seed_tensor_power(base, 2)
    assert squared.degree == 4
    assert bh.bh_ratio(squared).ratio_lower == pytest.approx(SQRT2, abs=1e-12)
    with pytest.raises(PreconditionError):
        bh.seed_tensor_power(base, 0)


def test_seed_random_deterministic():
    a = bh.seed_random(2, 3, COMPLEX, seed=5)
    b = bh.seed_random(2, 3, COMPLEX, seed=5)
    c = bh.seed_random(2, 3, COMPLEX, seed=6)
    assert np.array_equal(a.coeffs, b.coeffs)
    assert not np.array_equal(a.coeffs, c.coeffs)
    assert np.abs(a.coeffs).max() == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------------------
# optimizer
# ---------------------------------------------------------------------------

def test_optimize_two_by_two_real_hits_sharp_value():
    result = bh.optimize_lower_bound(2, 2, REAL, restarts=15, steps=300, seed=1)
    assert result.certified_lower >= SQRT2 - 1e-6
    assert result.certified_lower <= SQRT2 + 1e-9
    assert result.method["certificate"] == "exact"


def test_optimize_one_linear_is_exactly_one():
    for field in (REAL, COMPLEX):
        result = bh.optimize_lower_bound(1, 4, field, restarts=2, steps=20,
                                         seed=0)
        assert result.certified_lower == 1.0


def test_optimize_tensor_seeded_four_linear():
    result = bh.optimize_lower_bound(4, 2, REAL, restarts=4, steps=150, seed=2)
    assert result.certified_lower >= SQRT2 - 1e-9


def test_optimize_deterministic():
    a = bh.optimize_lower_bound(2, 2, REAL, restarts=5, steps=100, seed=9)
    b = bh.optimize_lower_bound(2, 2, REAL, restarts=5, steps=100, seed=9)
    assert a.certified_lower == b.certified_lower
    assert np.array_equal(a.form.coeffs, b.form.coeffs)


def test_optimize_complex_certificate_is_grid():
    result = bh.optimize_lower_bound(2, 2, COMPLEX, restarts=3, steps=60,
                                     seed=0)
    assert result.method["certificate"] == "lipschitz-grid"
    assert result.certified_lower <= bh.upper_bound("davie-kaijser", 2) + 1e-9


def test_optimize_refuses_uncertifiable_real_shape():
    with pytest.raises(BudgetExceededError):
        bh.optimize_lower_bound(5, 5, REAL, restarts=1, steps=10, seed=0)


# ---------------------------------------------------------------------------
# results store
# ---------------------------------------------------------------------------

def _result(value=None, seed=0):
    res = bh.optimize_lower_bound(2, 2, REAL, restarts=4, steps=80, seed=seed)
    if value is None:
        return res
    return bh.SearchResult(res.form, value, dict(res.method), res.timestamp)


def test_store_commit_load_roundtrip(tmp_path):
    store = bh.ResultsStore(tmp_path / "store.json")
    result = _result()
    assert store.commit(result) is True
    records = store.load()
    assert len(records) == 1
    loaded = bh.SearchResult.from_record(records[0])
    assert loaded.certified_lower == result.certified_lower
    assert np.array_equal(loaded.form.coeffs, result.form.coeffs)
    assert store.best_lower(REAL, 2) == (result.certified_lower, "search(N=2)")
    assert store.best_lower(COMPLEX, 2) is None


def test_store_monotone(tmp_path):
    store = bh.ResultsStore(tmp_path / "store.json")
    store.commit(_result(value=1.2))
    assert store.commit(_result(value=1.1)) is False
    assert store.best_record(REAL, 2, 2)["certified_lower"] == 1.2
    assert store.commit(_result(value=1.3)) is True
    assert store.best_record(REAL, 2, 2)["certified_lower"] == 1.3
    assert len(store.load()) == 1


def test_store_cap_violation_never_stored(tmp_path):
    store = bh.ResultsStore(tmp_path / "store.json")
    with pytest.raises(CapViolationError):
        store.commit(_result(value=2.0))  # above the sharp sqrt(2) cap
    assert store.load() == []


def test_store_corruption(tmp_path):
    path = tmp_path / "store.json"
    path.write_text("not json at all {{{")
    with pytest.raises(StoreCorruptError):
        bh.ResultsStore(path).load()
    path.write_text(json.dumps({"oops": 1}))
    with pytest.raises(StoreCorruptError):
        bh.ResultsStore(path).load()
    good = _result().to_record()
    bad = dict(good)
    bad = json.loads(json.dumps(bad))
    del bad["certified_lower"]
    path.write_text(json.dumps([good, bad]))
    with pytest.raises(StoreCorruptError) as err:
        bh.ResultsStore(path).load()
    assert err.value.record_id == 1


def test_stored_form_recertifies_reproducibly(tmp_path):
    store = bh.ResultsStore(tmp_path / "store.json")
    result = _result(seed=4)
    store.commit(result)
    loaded = bh.SearchResult.from_record(store.load()[0])
    report = bh.bh_ratio(loaded.form, CertificationPolicy(kind="exact"))
    assert report.ratio_lower == pytest.approx(loaded.certified_lower,
                                               abs=1e-9)


def test_optimize_commits_only_improvements(tmp_path):
    store = bh.ResultsStore(tmp_path / "store.json")
    first = bh.optimize_lower_bound(2, 2, REAL, restarts=6, steps=120, seed=0,
                                    store=store)
    assert first.method["stored"] is True
    again = bh.optimize_lower_bound(2, 2, REAL, restarts=6, steps=120, seed=0,
                                    store=store)
    assert again.method["stored"] is False  # ties do not rewrite the record


# ---------------------------------------------------------------------------
# margins
# ---------------------------------------------------------------------------

def test_verify_littlewood_sharp_margin_is_zero():
    report = bh.verify_inequality(bh.seed_littlewood(),
                                  bh.get_sequence("real-lower"))
    assert report.margin == pytest.approx(0.0, abs=1e-12)
    assert report.label == "verified"


def test_verify_littlewood_complex_against_davie_kaijser():
    form = MultilinearForm(COMPLEX, bh.seed_littlewood().coeffs)
    report = bh.verify_inequality(form, bh.get_sequence("davie-kaijser"),
                                  CertificationPolicy(kind="grid", mesh=0.005))
    # sqrt(2) * 2 sqrt(2) - 2 sqrt(2) = 4 - 2 sqrt(2)
    assert report.margin == pytest.approx(4.0 - 2.0 * SQRT2, abs=0.01)
    assert report.label == "indicative"


def test_verify_one_linear_margin_exactly_zero():
    ones = bh.ConstantSequence("unit", "upper", "both",
                               lambda n: 1.0, lambda n: 0.0)
    form = MultilinearForm(REAL, np.array([0.5, -1.5, 2.0]))
    report = bh.verify_inequality(form, ones)
    assert report.margin == 0.0
    assert report.label == "verified"


def test_verify_field_scope_enforced():
    with pytest.raises(PreconditionError):
        bh.verify_inequality(bh.seed_littlewood(),
                             bh.get_sequence("davie-kaijser"))


def test_verify_flags_violation_with_exact_certificate():
    # constant 1.1 is below the sharp sqrt(2), so the sign form beats it
    low = bh.ConstantSequence("too-low", "upper", "both",
                              lambda n: 1.1, lambda n: math.log(1.1))
    report = bh.verify_inequality(bh.seed_littlewood(), low)
    assert report.margin < 0
    assert report.label == "violation"
