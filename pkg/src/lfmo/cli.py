"""Command-line interface exposing the library for scripted use.

Exit codes: 0 on success, 1 on validation/usage errors, 2 when the
verification suite fails.  Every subcommand is deterministic for a fixed
``--seed``.  Times are in subordinator time-units throughout; dimensions
are given either exactly (``--n``) or as a decimal exponent
(``--log10n``); the exact finite-n formulas accept only ``--n``.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .asymptotics import LimitKind, lemma_suite, limit_law_for
from .distribution import (
    ExactN,
    LfmoModel,
    LogScaleN,
    exact_tail_probability,
    mean_last_order_statistic,
    sample_upper_order_statistics,
    shock_rates,
)
from .errors import LfmoError
from .montecarlo import (
    ExperimentConfig,
    decomposition_check,
    gumbel_switch_error_bound,
    mo_equivalence_check,
    parse_subordinator,
    resolve_workers,
    run_experiment,
)
from .stable import Convention, StableParams, c_alpha, convert_convention
from .subordinator import CompoundPoisson, ParetoSteps, laplace_exponent


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's 2
        raise _UsageError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0,
                        help="random seed (default 0); fixing it makes the "
                             "run deterministic")
    parser.add_argument("--out", default=None,
                        help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format (default csv)")


def _add_model(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", required=True,
                        help="subordinator spec as JSON, e.g. "
                             '\'{"kind":"cpp","lambda":1.0,'
                             '"step":{"kind":"pareto","alpha":2.5}}\' or '
                             '\'{"kind":"drift","c":1.0}\'')


def _build_parser() -> _Parser:
    parser = _Parser(prog="lfmo",
                     description="Levy-frailty Marshall-Olkin toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "sample", help="sample upper order statistics",
        description="Sample the top order statistics of the lifetime "
                    "vector. Values are in subordinator time-units.")
    _add_model(p)
    dim = p.add_mutually_exclusive_group(required=True)
    dim.add_argument("--n", type=int, help="exact dimension")
    dim.add_argument("--log10n", type=float,
                     help="dimension as log10(n); uses the Gumbel regime")
    p.add_argument("--top", type=int, default=1,
                   help="how many top order statistics per draw (default 1)")
    p.add_argument("--count", type=int, default=1,
                   help="number of draws (default 1)")
    _add_common(p)

    p = sub.add_parser(
        "tail", help="exact order-statistic tail probabilities",
        description="Exact P(T_{m:n} > t) on a time grid (subordinator "
                    "time-units). Requires an exact dimension (no --log10n).")
    _add_model(p)
    p.add_argument("--n", type=int, required=True, help="exact dimension")
    p.add_argument("--m", type=int, required=True,
                   help="order-statistic index, 1 (first failure) to n (last)")
    p.add_argument("--t-grid", required=True,
                   help="comma-separated times, e.g. 0.25,0.5,1,2")
    _add_common(p)

    p = sub.add_parser(
        "mean-last", help="exact mean of the last failure time",
        description="Exact mean of the last failure (subordinator "
                    "time-units). Requires an exact dimension (no --log10n).")
    _add_model(p)
    p.add_argument("--n", type=int, required=True, help="exact dimension")
    _add_common(p)

    p = sub.add_parser("shock-rates",
                       help="equivalent exponential-shock rates by subset size")
    _add_model(p)
    p.add_argument("--n", type=int, required=True, help="exact dimension")
    _add_common(p)

    p = sub.add_parser("limit", help="limit law and normalization constants")
    _add_model(p)
    p.add_argument("--part2-exponent", type=float, default=None,
                   help="override the (log n)-power of the heavy-tail scaling")
    _add_common(p)

    p = sub.add_parser("experiment", help="run a convergence study from JSON")
    p.add_argument("--config", required=True, help="config file path")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (capped by LFMO_THREADS)")
    _add_common(p)

    p = sub.add_parser("verify",
                       help="run the lemma, decomposition, and shock-model "
                            "equivalence checks; exit 2 on failure")
    _add_common(p)

    p = sub.add_parser("convert-stable-params",
                       help="re-express stable parameters in another convention")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--from", dest="source", required=True,
                   choices=[c.value for c in Convention])
    p.add_argument("--to", dest="target", required=True,
                   choices=[c.value for c in Convention])
    _add_common(p)

    p = sub.add_parser("gumbel-bound",
                       help="sup-CDF error of the Gumbel switch-over at n")
    p.add_argument("--n", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("summarize",
                       help="summary statistics of a sample file emitted by "
                            "the sample subcommand")
    p.add_argument("--input", required=True, help="csv or json sample file")
    _add_common(p)

    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _model_from_args(args) -> tuple:
    model = parse_subordinator(json.loads(args.model))
    return model


def _psi(model):
    return lambda x: laplace_exponent(model, x)


def _cmd_sample(args) -> int:
    model = _model_from_args(args)
    if args.n is not None:
        dimension = ExactN(args.n)
    else:
        dimension = LogScaleN(args.log10n)
    lfmo_model = LfmoModel(dimension, model)
    rng = np.random.default_rng(args.seed)
    draws = sample_upper_order_statistics(lfmo_model, args.top, rng,
                                          count=args.count)
    if args.format == "json":
        payload = {
            "model": json.loads(args.model),
            "dimension": ({"n": args.n} if args.n is not None
                          else {"log10_n": args.log10n}),
            "top": args.top,
            "count": args.count,
            "seed": args.seed,
            "samples": [[float(v) for v in row] for row in draws],
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = ["sample_index,offset_from_top,value"]
        for i, row in enumerate(draws):
            for j, v in enumerate(row):
                lines.append(f"{i},{j},{format(float(v), '.17g')}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_tail(args) -> int:
    model = _model_from_args(args)
    t_values = [float(v) for v in args.t_grid.split(",") if v.strip() != ""]
    rows = [(t, exact_tail_probability(args.n, args.m, t, _psi(model)))
            for t in t_values]
    if args.format == "json":
        payload = {"n": args.n, "m": args.m,
                   "values": [{"t": t, "probability": p} for t, p in rows]}
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = ["t,probability"]
        lines += [f"{format(t, '.17g')},{format(p, '.17g')}" for t, p in rows]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_mean_last(args) -> int:
    model = _model_from_args(args)
    value = mean_last_order_statistic(args.n, _psi(model))
    if args.format == "json":
        _emit(json.dumps({"n": args.n, "mean": value}) + "\n", args.out)
    else:
        _emit(f"n,mean\n{args.n},{format(value, '.17g')}\n", args.out)
    return 0


def _cmd_shock_rates(args) -> int:
    model = _model_from_args(args)
    rates = shock_rates(args.n, _psi(model))
    if args.format == "json":
        _emit(json.dumps({"n": args.n, "rates": [float(r) for r in rates]})
              + "\n", args.out)
    else:
        lines = ["subset_size,rate"]
        lines += [f"{v + 1},{format(float(r), '.17g')}"
                  for v, r in enumerate(rates)]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_limit(args) -> int:
    model = _model_from_args(args)
    law = limit_law_for(model, args.part2_exponent)
    payload = {
        "kind": law.kind.value,
        "alpha": law.alpha,
        "sigma": law.sigma,
        "c_alpha": c_alpha(law.alpha) if law.alpha < 2.0 else None,
        "mean_s1": law.mean_s1,
    }
    if law.kind is LimitKind.PART2_INVERSE_STABLE:
        payload["normalization"] = {
            "center": 0.0,
            "scale": f"(log n)^{law.scaling_exponent:g}",
        }
    else:
        payload["normalization"] = {
            "center": f"log(n) / {law.mean_s1:.12g}",
            "scale": f"(log n)^{1.0 / law.alpha:g} / {law.mean_s1:.12g}",
        }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _cmd_experiment(args) -> int:
    with open(args.config) as fh:
        config = ExperimentConfig.from_dict(json.load(fh))
    workers = resolve_workers(args.workers)
    result = run_experiment(config, workers=workers)
    _emit(result.summary_csv_text(), args.out)
    return 0


def _cmd_verify(args) -> int:
    rng = np.random.default_rng(args.seed)
    lines = []
    ok = True

    report = lemma_suite()
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        values = ", ".join(format(v, ".3e") for v in check.values)
        lines.append(f"{status} lemma:{check.name} [{values}]")
    ok &= report.passed

    model = CompoundPoisson(lam=1.0, step=ParetoSteps(alpha=4.0))
    for t in (-0.5, 0.0, 0.5):
        res = decomposition_check(model, 10 ** 4, t, rng,
                                  path_count=4000, direct_count=40_000)
        status = "PASS" if res.passed else "FAIL"
        lines.append(
            f"{status} decomposition t={t:+.1f} kernel={res.kernel_estimate:.5f} "
            f"direct={res.direct_estimate:.5f} z={res.z_score:+.2f}"
        )
        ok &= res.passed

    mo_model = CompoundPoisson(lam=1.0, step=ParetoSteps(alpha=2.5))
    mo = mo_equivalence_check(mo_model, rng, count=10 ** 5)
    status = "PASS" if mo.passed else "FAIL"
    lines.append(f"{status} shock-model-equivalence max|z|={mo.max_abs_z:.2f}")
    ok &= mo.passed

    lines.append("VERIFY " + ("PASS" if ok else "FAIL"))
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok else 2


def _cmd_convert(args) -> int:
    params = StableParams(args.alpha, args.sigma, args.beta, args.mu,
                          Convention(args.source))
    converted = convert_convention(params, Convention(args.target))
    payload = {
        "alpha": converted.alpha,
        "sigma": converted.sigma,
        "beta": converted.beta,
        "mu": converted.mu,
        "convention": converted.convention.value,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _cmd_gumbel_bound(args) -> int:
    bound = gumbel_switch_error_bound(args.n)
    if args.format == "json":
        _emit(json.dumps({"n": args.n, "bound": bound}) + "\n", args.out)
    else:
        _emit(f"n,bound\n{args.n},{format(bound, '.17g')}\n", args.out)
    return 0


def _read_sample_file(path: str) -> dict[int, list[float]]:
    with open(path) as fh:
        text = fh.read()
    by_offset: dict[int, list[float]] = {}
    stripped = text.lstrip()
    if stripped.startswith("{"):
        payload = json.loads(text)
        for row in payload["samples"]:
            for j, v in enumerate(row):
                by_offset.setdefault(j, []).append(float(v))
    else:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        for line in lines[1:]:
            _, offset, value = line.split(",")
            by_offset.setdefault(int(offset), []).append(float(value))
    if not by_offset:
        raise ValueError(f"no samples found in {path}")
    return by_offset


def _cmd_summarize(args) -> int:
    by_offset = _read_sample_file(args.input)
    rows = []
    for offset in sorted(by_offset):
        v = np.asarray(by_offset[offset])
        rows.append({
            "offset_from_top": offset,
            "count": int(v.size),
            "mean": float(np.mean(v)),
            "std": float(np.std(v, ddof=1)) if v.size > 1 else 0.0,
            "min": float(np.min(v)),
            "max": float(np.max(v)),
        })
    if args.format == "json":
        _emit(json.dumps({"summary": rows}, indent=2) + "\n", args.out)
    else:
        lines = ["offset_from_top,count,mean,std,min,max"]
        for r in rows:
            lines.append(
                f"{r['offset_from_top']},{r['count']},"
                f"{format(r['mean'], '.17g')},{format(r['std'], '.17g')},"
                f"{format(r['min'], '.17g')},{format(r['max'], '.17g')}"
            )
        _emit("\n".join(lines) + "\n", args.out)
    return 0


_HANDLERS = {
    "sample": _cmd_sample,
    "tail": _cmd_tail,
    "mean-last": _cmd_mean_last,
    "shock-rates": _cmd_shock_rates,
    "limit": _cmd_limit,
    "experiment": _cmd_experiment,
    "verify": _cmd_verify,
    "convert-stable-params": _cmd_convert,
    "gumbel-bound": _cmd_gumbel_bound,
    "summarize": _cmd_summarize,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (LfmoError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
