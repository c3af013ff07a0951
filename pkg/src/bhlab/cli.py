"""Command-line entry point: reproducible experiments, machine output.

Subcommands: constants, verify, search, classify, probe, report.  JSON is
the canonical format (keys sorted, floats emitted in shortest round-trip
form preserving full double precision, non-finite values encoded as the
strings "inf"/"-inf"/"nan"); CSV is a per-command projection and text is
human-readable only.  Identical configuration and store contents produce
byte-identical JSON up to embedded timestamps.

Exit codes: 0 success, 1 refusal (budget or precondition), 2 runtime
invariant violation, 3 I/O or store corruption.  Flags beat the BHLAB_*
environment variables, which beat built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import SCHEMA_VERSION, __version__
from . import constants as consts
from . import search as searchmod
from . import sequences as seqs
from .constants import EnvelopeViolation
from .errors import (BudgetExceededError, InvariantViolation,
                     PreconditionError, StoreCorruptError)
from .forms import CertificationPolicy, form_from_dict
from .search import ResultsStore, seed_littlewood

DEFAULT_Q_GRID = "-1,0,0.3,0.5,0.526,0.6,1,3"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise PreconditionError(message)


def _sanitize(obj):
    """JSON-safe copy: numpy scalars to python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if hasattr(obj, "item"):
        obj = obj.item()
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, complex):
        return [_sanitize(obj.real), _sanitize(obj.imag)]
    return obj


def _config_echo(args):
    skip = {"handler"}
    return _sanitize({k: v for k, v in vars(args).items() if k not in skip})


def _emit(args, payload, csv_rows=None):
    report = {
        "schema_version": SCHEMA_VERSION,
        "package_version": __version__,
        "command": args.command,
        "config": _config_echo(args),
        "result": _sanitize(payload),
    }
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, indent=2, allow_nan=False))
    elif args.format == "csv":
        rows = csv_rows if csv_rows is not None else [report["result"]]
        _print_csv(rows)
    else:
        _print_text(report)


def _print_csv(rows):
    if not rows:
        return
    rows = [_sanitize(r) for r in rows]
    fields = list(rows[0].keys())
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    sys.stdout.write(buf.getvalue())


def _print_text(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        for k in obj:
            v = obj[k]
            if isinstance(v, (dict, list)):
                print(f"{pad}{k}:")
                _print_text(v, indent + 1)
            else:
                print(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                _print_text(v, indent)
                print(f"{pad}-")
            else:
                print(f"{pad}- {v}")
    else:
        print(f"{pad}{obj}")


def _load_real_reference(path):
    if path is None:
        return None
    return consts.load_reference_table(path)


def _store_from(args):
    if getattr(args, "store", None):
        return ResultsStore(args.store)
    return None


# ---------------------------------------------------------------------------
# command handlers: return (payload, csv_rows, exit_code)
# ---------------------------------------------------------------------------

def _cmd_constants(args):
    ref = _load_real_reference(args.real_reference)
    rows = consts.constants_table(args.horizon, real_reference=ref)
    payload = {
        "horizon": args.horizon,
        "alpha": consts.alpha(),
        "beta": consts.beta(),
        "euler_gamma": consts.euler_gamma(),
        "rows": rows,
    }
    return payload, rows, 0


def _policy_from(args):
    return CertificationPolicy(
        kind=args.policy,
        restarts=args.restarts,
        seed=args.seed,
        mesh=args.mesh,
    )


def _cmd_verify(args):
    if args.littlewood:
        form = seed_littlewood()
    elif args.form:
        with open(args.form, "r", encoding="utf-8") as fh:
            form = form_from_dict(json.load(fh))
    else:
        raise PreconditionError("verify needs --form PATH or --littlewood")
    sequence = consts.get_sequence(args.sequence)
    report = searchmod.verify_inequality(form, sequence, _policy_from(args))
    payload = dict(report.to_dict(), sequence=sequence.name,
                   degree=form.degree, dim=form.dim, field=form.field)
    return payload, [payload], 0


def _cmd_search(args):
    store = _store_from(args)
    result = searchmod.optimize_lower_bound(
        args.n, args.N, args.field, restarts=args.restarts, steps=args.steps,
        seed=args.seed, store=store)
    record = result.to_record()
    row = {
        "field": args.field, "n": args.n, "N": args.N,
        "certified_lower": result.certified_lower,
        "certificate": result.method["certificate"],
        "restart_index": result.method["restart_index"],
        "timestamp": result.timestamp,
    }
    return {"record": record}, [row], 0


def _parse_params(text):
    if not text:
        return {}
    try:
        params = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"--params is not valid JSON: {exc}")
    if not isinstance(params, dict):
        raise PreconditionError("--params must be a JSON object")
    return params


def _cmd_classify(args):
    spec = seqs.gen(args.generator, _parse_params(args.params),
                    horizon=args.horizon)
    schedule = seqs.EstimatorSchedule(tol=args.tol)
    reference = consts.get_sequence(args.upper_ref)
    report = seqs.classify(spec, reference, schedule)
    if args.samples_csv:
        _write_samples_csv(args.samples_csv, spec)
    d = report.to_dict()
    row = {
        "generator": args.generator, "horizon": args.horizon,
        "um_status": d["um"]["status"], "um_value": d["um"]["value"],
        "dois_status": d["dois"]["status"], "dois_value": d["dois"]["value"],
        "well_behaved": d["well_behaved"], "branch": d["dichotomy_branch"],
        "violation_index": d["violation_index"],
    }
    return d, [row], 0


def _write_samples_csv(path, spec):
    ns = seqs.sample_indices(spec.horizon)
    lv = seqs.log_values(spec, ns)
    column = "log_R" if spec.log_space else "R"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", column])
        for n, v in zip(ns, lv):
            writer.writerow([int(n), float(v) if spec.log_space
                             else float(math.exp(v)) if v < 700 else "inf"])


def _cmd_probe(args):
    spec = seqs.gen(args.generator, _parse_params(args.params),
                    horizon=args.horizon)
    steps = seqs.dyadic_probe(spec, args.n0, args.l_max)
    rows = [s.to_dict() for s in steps]
    return {"generator": args.generator, "n0": args.n0, "steps": rows}, rows, 0


def _cmd_report(args):
    store = _store_from(args)
    records = store.load() if store is not None else []
    ref = _load_real_reference(args.real_reference)
    fields = [args.field] if args.field != "both" else ["real", "complex"]
    exit_code = 0
    envelopes, violations = [], []
    for field in fields:
        for n in range(1, args.horizon + 1):
            try:
                env = consts.envelope(n, field, store=store,
                                      real_reference=ref)
                row = {"field": field, "n": n, "lower": env.lower,
                       "upper": env.upper, "lower_source": env.lower_source,
                       "upper_source": env.upper_source, "flag": ""}
            except EnvelopeViolation as exc:
                row = dict(exc.details, flag="ENVELOPE-VIOLATION")
                violations.append(row)
                exit_code = 2
            envelopes.append(row)
    ledger = []
    for q in (float(x) for x in args.q_grid.split(",") if x.strip()):
        ledger.append(seqs.polynomial_rejection(q).to_dict())
    payload = {
        "store_records": len(records),
        "envelopes": envelopes,
        "polynomial_ledger": ledger,
        "violations": violations,
    }
    return payload, envelopes, exit_code


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser(env=None):
    env = env if env is not None else os.environ
    parser = _Parser(prog="bhlab",
                     description="numerical laboratory for the multilinear "
                                 "Bohnenblust-Hille inequality")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv", "text"),
                       default="json")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float,
                       default=float(env.get("BHLAB_TOL", "0.01")))
        p.add_argument("--store", default=env.get("BHLAB_STORE"))

    p = sub.add_parser("constants", help="table of every shipped sequence")
    common(p)
    p.add_argument("--horizon", type=int, default=50)
    p.add_argument("--real-reference", default=None,
                   help="JSON table {name, values} used as the real upper "
                        "reference")
    p.set_defaults(handler=_cmd_constants)

    p = sub.add_parser("verify", help="margin of mixed <= c_n * sup on a form")
    common(p)
    p.add_argument("--form", default=None, help="path to a serialized form")
    p.add_argument("--littlewood", action="store_true",
                   help="use the built-in 2x2 sign form")
    p.add_argument("--sequence", default="davie-kaijser")
    p.add_argument("--policy", choices=("auto", "exact", "ascend", "grid"),
                   default="auto")
    p.add_argument("--mesh", type=float, default=None)
    p.add_argument("--restarts", type=int, default=8)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("search", help="certified lower-bound search")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--field", choices=("real", "complex"), required=True)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--steps", type=int, default=2000)
    p.set_defaults(handler=_cmd_search)

    p = sub.add_parser("classify", help="dichotomy classification of a "
                                        "candidate sequence")
    common(p)
    p.add_argument("--generator", required=True,
                   choices=seqs.GENERATOR_NAMES)
    p.add_argument("--params", default="", help="generator parameters as JSON")
    p.add_argument("--horizon", type=int, default=seqs.DEFAULT_HORIZON)
    p.add_argument("--upper-ref", default="davie-kaijser")
    p.add_argument("--samples-csv", default=None,
                   help="also dump (n, R_n or log R_n) samples to this path")
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("probe", help="dyadic growth probe of n/R_n")
    common(p)
    p.add_argument("--generator", required=True,
                   choices=seqs.GENERATOR_NAMES)
    p.add_argument("--params", default="")
    p.add_argument("--horizon", type=int, default=seqs.DEFAULT_HORIZON)
    p.add_argument("--n0", type=int, default=4)
    p.add_argument("--l-max", type=int, default=10)
    p.set_defaults(handler=_cmd_probe)

    p = sub.add_parser("report", help="per-n bound envelopes plus the "
                                      "polynomial-rejection ledger")
    common(p)
    p.add_argument("--horizon", type=int, default=10)
    p.add_argument("--field", choices=("real", "complex", "both"),
                   default="both")
    p.add_argument("--q-grid", default=DEFAULT_Q_GRID)
    p.add_argument("--real-reference", default=None)
    p.set_defaults(handler=_cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        payload, csv_rows, exit_code = args.handler(args)
        _emit(args, payload, csv_rows)
        return exit_code
    except StoreCorruptError as exc:
        detail = f" (record {exc.record_id})" if exc.record_id is not None else ""
        print(f"error: {exc}{detail}", file=sys.stderr)
        return 3
    except (BudgetExceededError, PreconditionError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
