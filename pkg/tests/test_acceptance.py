"""Acceptance suite: every shipped criterion at its stated tolerance.

Each criterion prints one PASS/FAIL line (run with ``pytest -v -s`` to see
them all).  Criterion 01 pins alpha() to the literal 1.4402375 +- 1e-6;
the defining expression e^(1 - gamma/2)/sqrt(2) with the pinned gamma
evaluates to 1.44025269..., so that single clause cannot hold together
with the gamma pin and is expected to fail honestly -- the implementation
follows the defining formula rather than the inconsistent literal.
"""

import json
import math
import re
import time

import numpy as np
import pytest

import bhlab as bh
from bhlab import constants, sequences as sq
from bhlab.cli import main as cli_main
from bhlab.errors import PreconditionError
from bhlab.forms import COMPLEX, REAL, CertificationPolicy, MultilinearForm

SQRT2 = math.sqrt(2.0)


class Criterion:
    def __init__(self, num, description):
        self.num = num
        self.description = description
        self.failures = []
        self.t0 = time.perf_counter()

    def check(self, condition, message):
        if not condition:
            self.failures.append(message)

    def finish(self, runtime_cap=None):
        elapsed = time.perf_counter() - self.t0
        if runtime_cap is not None and elapsed >= runtime_cap:
            self.failures.append(
                f"runtime {elapsed:.1f}s exceeds the {runtime_cap}s cap")
        status = "PASS" if not self.failures else "FAIL"
        print(f"\nACCEPTANCE {self.num:02d} {status} "
              f"[{elapsed:.1f}s]: {self.description}")
        for failure in self.failures:
            print(f"    - {failure}")
        assert not self.failures, \
            f"criterion {self.num:02d}: " + " | ".join(self.failures)


def test_criterion_01_constants():
    c = Criterion(1, "gamma/alpha/beta values and display roundings")
    bh.euler_gamma_raw.cache_clear()
    bh.euler_gamma.cache_clear()
    gamma = bh.euler_gamma()
    a, b = bh.alpha(), bh.beta()
    c.check(abs(gamma - 0.577215664901533) <= 1e-12,
            f"euler_gamma() = {gamma!r}, not 0.577215664901533 +- 1e-12")
    c.check(f"{gamma:.3f}" == "0.577", f"gamma prints {gamma:.3f}, not 0.577")
    c.check(abs(a - 1.4402375) <= 1e-6,
            f"alpha() = {a!r}, not 1.4402375 +- 1e-6 (the defining formula "
            f"exp(1 - gamma/2)/sqrt(2) with the pinned gamma gives "
            f"{math.exp(1 - gamma / 2) / SQRT2!r}; the literal target is "
            f"inconsistent with the gamma pin above)")
    c.check(f"{a:.2f}" == "1.44", f"alpha prints {a:.2f}, not 1.44")
    c.check(abs(b - 0.52631) <= 1e-4, f"beta() = {b!r}, not 0.52631 +- 1e-4")
    c.check(f"{b:.3f}" == "0.526", f"beta prints {b:.3f}, not 0.526")
    c.check(a < 1.5, f"alpha() = {a!r} is not below 3/2")
    c.finish(runtime_cap=2.0)


def test_criterion_02_sharp_real_bilinear_constant():
    c = Criterion(2, "sharp sqrt(2) for real 2-linear forms")
    report = bh.bh_ratio(bh.seed_littlewood(),
                         CertificationPolicy(kind="exact"))
    c.check(abs(report.ratio_lower - SQRT2) <= 1e-9,
            f"littlewood certified ratio {report.ratio_lower!r} != sqrt(2)")
    cap = SQRT2 + 1e-9
    worst = 0.0
    for i in range(10**4):
        form = bh.random_form(2, (i % 4) + 1, REAL, seed=i)
        ratio = bh.bh_ratio(form, CertificationPolicy(kind="exact")).ratio_lower
        worst = max(worst, ratio)
    c.check(worst <= cap,
            f"a random 2-linear form certified {worst!r} > sqrt(2) + 1e-9")
    result = bh.optimize_lower_bound(2, 2, REAL, restarts=200, steps=400,
                                     seed=0)
    c.check(result.certified_lower >= SQRT2 - 1e-6,
            f"200-restart search only reached {result.certified_lower!r}")
    c.check(result.certified_lower <= cap,
            f"search certified {result.certified_lower!r} above the cap")
    c.finish(runtime_cap=60.0)


def test_criterion_03_oracle_equivalence():
    c = Criterion(3, "alternating ascent vs exact vertex enumeration")
    shapes = [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3),
              (3, 4), (4, 2), (4, 3), (6, 2), (5, 2)]
    matches = 0
    for i in range(100):
        degree, dim = shapes[i % len(shapes)]
        form = bh.random_form(degree, dim, REAL, seed=5000 + i)
        exact = bh.sup_norm_real_exact(form)
        heur = bh.sup_norm_ascend(form, restarts=50, seed=i)
        c.check(heur.lower <= exact.upper + 1e-12,
                f"ascent exceeded the exact sup on seed {5000 + i}")
        if abs(heur.lower - exact.lower) <= 1e-9:
            matches += 1
    c.check(matches >= 95, f"ascent matched exact on only {matches}/100")
    c.finish(runtime_cap=60.0)


def test_criterion_04_complex_soundness():
    c = Criterion(4, "grid-certified complex ratios below davie-kaijser")
    policy = CertificationPolicy(kind="grid", target_gap=0.05,
                                 grid_budget=100_000)
    for i in range(10**3):
        degree = i % 3 + 1
        dim = (i // 3) % 3 + 1
        form = bh.random_form(degree, dim, COMPLEX, seed=9000 + i)
        ratio = bh.bh_ratio(form, policy).ratio_lower
        cap = bh.upper_bound("davie-kaijser", degree) + 1e-9
        if ratio > cap:
            c.check(False, f"seed {9000 + i}: ratio_lower {ratio!r} > "
                           f"davie-kaijser({degree}) + 1e-9")
            break
    littlewood_c = MultilinearForm(COMPLEX, bh.seed_littlewood().coeffs)
    rep = bh.bh_ratio(littlewood_c, CertificationPolicy(kind="grid", mesh=0.01))
    c.check(rep.ratio_lower <= 1.0 <= rep.ratio_upper,
            f"bracket [{rep.ratio_lower!r}, {rep.ratio_upper!r}] misses 1.0")
    c.check(rep.ratio_upper - rep.ratio_lower <= 0.05,
            f"bracket width {rep.ratio_upper - rep.ratio_lower!r} > 0.05 "
            f"at mesh 0.01")
    c.finish(runtime_cap=120.0)


def test_criterion_05_tensor_identity():
    c = Criterion(5, "tensor square of the sign form")
    base = bh.seed_littlewood()
    squared = bh.tensor_product(base, base)
    report = bh.bh_ratio(squared, CertificationPolicy(kind="exact"))
    c.check(abs(report.ratio_lower - SQRT2) <= 1e-9,
            f"tensor-square ratio {report.ratio_lower!r} != sqrt(2)")
    sup_base = bh.sup_norm_real_exact(base).lower
    sup_sq = bh.sup_norm_real_exact(squared).lower
    c.check(abs(sup_sq - sup_base * sup_base) <= 1e-9,
            f"sup multiplicativity broke: {sup_sq!r} vs {sup_base!r}^2")
    for seed in range(3):
        a = bh.random_form(2, 2, REAL, seed=seed + 40)
        b = bh.random_form(2, 2, REAL, seed=seed + 80)
        lhs = bh.sup_norm_real_exact(bh.tensor_product(a, b)).lower
        rhs = bh.sup_norm_real_exact(a).lower * bh.sup_norm_real_exact(b).lower
        c.check(abs(lhs - rhs) <= 1e-9,
                f"sup multiplicativity broke on random pair {seed}")
    c.finish()


def test_criterion_06_counterexample_classification():
    c = Criterion(6, "both counterexamples reproduce their limit statuses")
    contra = sq.gen("contra", horizon=2**20)
    um = sq.ratio_limit_estimate(contra)
    c.check(um.status == "converges", f"contra um status {um.status}")
    if um.status == "converges":
        c.check(abs(um.value - SQRT2) <= 0.01,
                f"contra um value {um.value!r} != sqrt(2) +- 0.01")
    dois = sq.difference_limit_estimate(contra)
    c.check(dois.status == "no-extended-limit",
            f"contra dois status {dois.status}")
    tails = {e.label: e.tail for e in dois.evidence}
    c.check("n=2^k" in tails and tails["n=2^k"][-1] < -100.0,
            "missing the divergent n=2^k difference evidence")

    blocks = sq.gen("blocks", horizon=2**20)
    bum = sq.ratio_limit_estimate(blocks)
    c.check(bum.status == "no-extended-limit",
            f"blocks um status {bum.status}")
    btails = {e.label: e.tail for e in bum.evidence}
    c.check(abs(btails.get("n=2^k-1 (k even)", (math.inf,))[-1] - 1.0) <= 0.01,
            "even-k ratios along n=2^k-1 do not settle near 1")
    c.check(btails.get("n=2^k-1 (k odd)", (0.0,))[-1] >= 1e3,
            "odd-k ratios along n=2^k-1 do not diverge")
    bdois = sq.difference_limit_estimate(blocks)
    c.check(bdois.status == "diverges-to-infinity",
            f"blocks dois status {bdois.status}")
    c.finish(runtime_cap=30.0)


def test_criterion_07_ratio_below_two_harness():
    c = Criterion(7, "50 slow-ratio families show vanishing differences")
    h = 2**18
    family = (
        [sq.gen("power", {"a": round(a, 4)}, horizon=h)
         for a in np.linspace(0.02, 0.55, 25)]
        + [sq.gen("power", {"a": round(a, 4), "b": 2.0}, horizon=h)
           for a in np.linspace(0.05, 0.3, 7)]
        + [sq.gen("log", {"b": b}, horizon=h) for b in (0.5, 1, 2, 5, 10)]
        + [sq.gen("exp-reciprocal", {"a": 2.0, "c": cc}, horizon=h)
           for cc in (-4, -2, -1, 1, 2, 3, 4, 5)]
        + [sq.gen("constant", {"b": b}, horizon=h)
           for b in (1.0, 1.3, 1.7, 2.5, 10.0)]
    )
    c.check(len(family) == 50, f"family has {len(family)} members, not 50")
    declared = [sq.known_ratio_limit(s) for s in family]
    c.check(all(1.0 <= d < 2.0 - 0.01 for d in declared),
            "a declared ratio limit escaped [1, 2 - 0.01)")
    report = sq.proposition_py_harness(family, tol=0.01)
    for entry in report.entries:
        if not entry.passed or entry.max_tail_difference > 0.01:
            c.check(False, f"{entry.label}: tail {entry.max_tail_difference!r}")
    try:
        sq.proposition_py_harness([sq.gen("power", {"a": 1.5}, horizon=h)])
        c.check(False, "the n^1.5 control was not rejected")
    except PreconditionError:
        pass
    c.finish(runtime_cap=60.0)


def test_criterion_08_polynomial_rejection_ledger():
    c = Criterion(8, "polynomial-asymptotics verdicts across the q grid")
    grid = [-1.0, 0.0, 0.3, 0.5, 0.526, 0.6, 1.0, 3.0]
    expected = [False, True, True, True, True, False, False, False]
    for q, admissible in zip(grid, expected):
        v = sq.polynomial_rejection(q)
        c.check(v.admissible == admissible,
                f"q = {q}: got {'admissible' if v.admissible else 'rejected'}")
    v_neg = sq.polynomial_rejection(-1.0)
    c.check(v_neg.reason == sq.REASON_NEGATIVE, "q < 0 reason is wrong")
    for q in (1.0, 3.0):
        c.check(sq.polynomial_rejection(q).reason == sq.REASON_POLYNOMIAL,
                f"q = {q} should carry the non-constant-polynomial reason")
    c.check(abs(bh.beta() - 0.52631) <= 1e-4,
            "ledger is not consistent with beta = 0.52631 +- 1e-4")
    c.finish()


def test_criterion_09_envelope_integrity():
    c = Criterion(9, "bound envelopes are ordered up to n = 50")
    for field in ("real", "complex"):
        for n in range(1, 51):
            env = constants.envelope(n, field)
            if not (1.0 <= env.lower <= env.upper):
                c.check(False, f"envelope({n}, {field}) is out of order")
    ns = np.arange(1, 51)
    dk = bh.upper_bound("davie-kaijser", ns)
    c.check(np.all(dk <= bh.upper_bound("bh-original", ns) + 1e-12),
            "davie-kaijser exceeded the original constants")
    c.check(np.all(bh.upper_bound("queffelec", ns) <= dk + 1e-12),
            "queffelec exceeded davie-kaijser")
    big = np.array([10**3, 10**4, 10**5, 10**6])
    c.check(np.all(constants.log_upper_bound("queffelec", big)
                   <= constants.log_upper_bound("davie-kaijser", big)),
            "log-space ordering failed at large n")
    env2 = constants.envelope(2, "real")
    c.check(abs(env2.lower - SQRT2) <= 1e-12 and abs(env2.upper - SQRT2) <= 1e-12,
            f"envelope(2, real) = [{env2.lower!r}, {env2.upper!r}]")
    c.finish()


def test_criterion_10_cli_determinism(tmp_path, capsys):
    c = Criterion(10, "identical config and store give identical JSON")

    def run(argv):
        code = cli_main(argv)
        out = capsys.readouterr().out
        return code, out

    def scrub(text):
        return re.sub(r'"timestamp": "[^"]*"', '"timestamp": "X"', text)

    store = tmp_path / "store.json"
    code, _ = run(["search", "--n", "2", "--N", "2", "--field", "real",
                   "--restarts", "4", "--steps", "80", "--store", str(store)])
    c.check(code == 0, "seeding search run failed")
    commands = [
        ["constants", "--horizon", "10"],
        ["classify", "--generator", "contra", "--horizon", str(2**16)],
        ["probe", "--generator", "power", "--params", '{"a": 0.5}',
         "--n0", "4", "--l-max", "6"],
        ["report", "--horizon", "5", "--store", str(store)],
        ["search", "--n", "2", "--N", "2", "--field", "real",
         "--restarts", "4", "--steps", "80", "--store", str(store)],
    ]
    for argv in commands:
        first = run(argv)
        second = run(argv)
        c.check(first[0] == second[0], f"exit codes differ for {argv[0]}")
        c.check(scrub(first[1]) == scrub(second[1]),
                f"{argv[0]} output is not byte-identical modulo timestamps")
        json.loads(first[1])  # canonical format stays parseable
    c.finish()
