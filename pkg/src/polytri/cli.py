"""Command-line interface.

Exact values are written as ``a/b`` strings and reals with 12 significant
digits. Exit codes: 0 ok, 1 domain error, 2 usage error, 3 verification
failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence, TextIO

from . import closed_forms as cf
from . import gf, oracle
from .polygon import ENUMERATION_CAP, PolygonSpec, enumerate_triangulations
from .sampler import DEFAULT_SEED, SampleRun, make_rng, sample_triangulation, weight_sum
from .weights import WeightSpec, classify, parse_weight

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3


def render(x):
    """Rationals become ``a/b`` strings and reals are cut to 12 significant digits."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return float(f"{x:.12g}")
    return x


def _record(command, n, weight, method, payload, seed=None, samples=None, runtime_ms=None):
    return {
        "command": command,
        "n": n,
        "weight": weight,
        "method": method,
        "payload": payload,
        "meta": {"seed": seed, "samples": samples, "runtime_ms": runtime_ms},
    }


def _geometry(f: WeightSpec, n: int) -> Optional[PolygonSpec]:
    return PolygonSpec.regular(n) if f.needs_geometry else None


# ---------------------------------------------------------------------------
# commands; each returns (record, exit code)


def cmd_moments(args):
    f, n = parse_weight(args.weight), args.n
    p = _geometry(f, n)
    seed = samples = None
    if args.method == "gf":
        rep = gf.moments_exact(n, f)
        payload = {"mean": rep.mean, "variance": rep.variance, "exact": True}
    elif args.method == "numeric":
        rep = gf.moments_numeric(n, f, p)
        payload = {"mean": rep.mean, "variance": rep.variance, "exact": False}
    elif args.method == "enum":
        dist = oracle.exact_distribution(n, f, p)
        payload = {"mean": dist.mean(), "variance": dist.variance(), "exact": dist.exact}
    elif args.method == "closed":
        payload = _closed_moments(n, f, p)
    else:
        seed, samples = args.seed, args.samples
        mc = oracle.monte_carlo(SampleRun(n, f, samples, seed), p)
        payload = {"mean": mc.mean, "stderr": mc.stderr, "samples": mc.samples, "exact": False}
    return _record("moments", n, f.describe(), args.method, payload, seed, samples), EXIT_OK


def _closed_moments(n, f, p):
    if classify(f, n)[1]:
        mean = cf.coh1_expectation(n, 1, f, p)
        var = cf.coh1_variance(n, f, p)
        return {"mean": mean, "variance": var, "exact": f.is_exact, "source": "beta/lambda sums"}
    mean_id, var_id, _ = cf.formulas_for(f)
    if mean_id and var_id:
        return {
            "mean": cf.formula_library(mean_id, n),
            "variance": cf.formula_library(var_id, n),
            "exact": True,
            "source": f"{mean_id},{var_id}",
        }
    raise cf.ClosedFormError(f"no closed form for weight {f}")


def cmd_dist(args):
    f, n = parse_weight(args.weight), args.n
    if args.method == "gf":
        entries = gf.distribution(n, f).entries
    else:
        entries = oracle.exact_distribution(n, f, _geometry(f, n)).entries
    payload = {"entries": [{"value": v, "probability": pr} for v, pr in entries]}
    return _record("dist", n, f.describe(), args.method, payload), EXIT_OK


def cmd_sample(args):
    f, n = parse_weight(args.weight), args.n
    p = _geometry(f, n)
    run = SampleRun(n, f, args.samples, args.seed)
    mc = oracle.monte_carlo(run, p)
    payload = {"mean": mc.mean, "stderr": mc.stderr, "samples": mc.samples}
    if args.emit_triangulations:
        rng = make_rng(args.seed)
        rows = []
        for _ in range(args.samples):
            t = sample_triangulation(n, rng)
            value = weight_sum(t, f, p)
            rows.append({"triangulation": t.text(), "S": Fraction(value) if f.is_exact else value})
        payload["triangulations"] = rows
    return _record("sample", n, f.describe(), "mc", payload, args.seed, args.samples), EXIT_OK


def cmd_portfolio(args):
    k = tuple(int(x) for x in args.k.split(","))
    q = cf.PortfolioQuery(args.n, k)
    payload = {"k": ",".join(map(str, q.k)), "K": q.K, "probability": cf.portfolio_probability(q)}
    return _record("portfolio", args.n, None, "closed", payload), EXIT_OK


def cmd_formula(args):
    value = cf.formula_library(args.id, args.n, Fraction(args.w) if args.w is not None else None)
    if isinstance(value, dict):
        payload = {"entries": [{"exponent": e, "probability": pr} for e, pr in value.items()]}
    else:
        payload = {"id": args.id, "value": value}
    return _record("formula", args.n, None, "closed", payload), EXIT_OK


def cmd_enumerate(args):
    ts = list(enumerate_triangulations(args.n, cap=max(ENUMERATION_CAP, args.n) if args.force else ENUMERATION_CAP))
    if args.format == "text":
        return "\n".join(t.text() for t in ts) + "\n", EXIT_OK
    payload = {"count": len(ts), "triangulations": [t.text() for t in ts]}
    return _record("enumerate", args.n, None, "enum", payload), EXIT_OK


def cmd_verify(args):
    rows = oracle.verify(n_max=args.n_max, mc_samples=args.samples, seed=args.seed)
    failed = sum(not ok for _, ok, _ in rows)
    payload = {
        "passed": len(rows) - failed,
        "failed": failed,
        "checks": [{"check": name, "result": "PASS" if ok else "FAIL", "detail": d} for name, ok, d in rows],
    }
    rec = _record("verify", args.n_max, None, "all", payload, args.seed, args.samples)
    return rec, EXIT_OK if failed == 0 else EXIT_VERIFY


# ---------------------------------------------------------------------------
# output


def _serialize(obj):
    if isinstance(obj, dict):
        return {k: _serialize(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_serialize(v) for v in obj]
    return render(obj)


def to_json(record) -> str:
    return json.dumps(_serialize(record), indent=2) + "\n"


def to_csv(record) -> str:
    """The payload as a table: its list field if it has one, else one row of scalars."""
    payload = _serialize(record["payload"])
    lists = [v for v in payload.values() if isinstance(v, list)]
    if lists and lists[0] and isinstance(lists[0][0], dict):
        rows = lists[0]
    else:
        rows = [{k: v for k, v in payload.items() if not isinstance(v, list)}]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()) if rows else [], lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polytri", description="Random triangulations of convex polygons: exact laws of weight sums."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def data_cmd(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--timing", action="store_true", help="record runtime_ms in meta")
        return p

    p = data_cmd("moments", "mean and variance of S")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--weight", required=True)
    p.add_argument("--method", choices=("gf", "closed", "numeric", "enum", "mc"), default="gf")
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_moments)

    p = data_cmd("dist", "exact distribution of S")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--weight", required=True)
    p.add_argument("--method", choices=("gf", "enum"), default="gf")
    p.set_defaults(func=cmd_dist)

    p = data_cmd("sample", "Monte Carlo estimate of E(S)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--weight", required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--emit-triangulations", action="store_true")
    p.set_defaults(func=cmd_sample)

    p = data_cmd("portfolio", "probability of an angle portfolio at vertex 1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", required=True, help="comma-separated k_1,...,k_{n-2}")
    p.set_defaults(func=cmd_portfolio)

    p = data_cmd("formula", "evaluate a closed-form formula")
    p.add_argument("--id", required=True, choices=cf.formula_ids())
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--w", default=None)
    p.set_defaults(func=cmd_formula)

    p = data_cmd("verify", "run the full cross-check matrix")
    p.add_argument("--n-max", type=int, default=9)
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="list all triangulations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--force", action="store_true", help="lift the enumeration cap")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_enumerate)
    return parser


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        result, code = args.func(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN
    if isinstance(result, str):
        out.write(result)
        return code
    if args.timing:
        result["meta"]["runtime_ms"] = round((time.perf_counter() - start) * 1000, 3)
    fmt = getattr(args, "format", "json")
    out.write(to_csv(result) if fmt == "csv" else to_json(result))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
