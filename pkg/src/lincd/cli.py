"""Command-line front end: ``lincd <subcommand> [flags]``.

Exit codes: 0 ok, 2 configuration error, 3 input violates a model
assumption, 4 I/O error. Data goes to files; stdout gets one summary line.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .errors import (AmbiguousObservationalError, DegenerateInputError, InconsistentRankError,
                     InsufficientSamplesError, InvalidConfigError, InvalidInputError,
                     NotInModelError, NotPositiveDefiniteError, RankDeficientError)
from .evaluation import BenchmarkGrid, run_benchmark
from .identify import DEFAULT_GAMMA, MODES, iterative_difference_projection
from .model import INTERVENTION_KINDS, GeneratorConfig, exact_precision, generate_random_model, sample_precision_set
from .reduction import membership_test, reduce_contexts

EXIT_OK, EXIT_CONFIG, EXIT_MODEL, EXIT_IO = 0, 2, 3, 4
MODEL_ERRORS = (NotInModelError, NotPositiveDefiniteError, InconsistentRankError,
                AmbiguousObservationalError, RankDeficientError, DegenerateInputError)
ROC_THRESHOLDS = np.linspace(0.97, 0.999, 20)


class CliError(Exception):
    def __init__(self, code, message, payload=None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _config_error(message):
    return CliError(EXIT_CONFIG, message)


def _check_unit(name, value, lower_open=False):
    lo_ok = value > 0 if lower_open else value >= 0
    if value is None or not (lo_ok and value <= 1):
        raise _config_error(f"{name} must lie in {'(' if lower_open else '['}0, 1], got {value}")


def _load_ps(path, observational_index=None):
    try:
        ps = io.load_precision_set(path)
    except (OSError, ValueError, KeyError, TypeError) as err:
        raise CliError(EXIT_IO, f"cannot read precision set {path}: {err}") from err
    if len(ps) == 0:
        raise CliError(EXIT_IO, f"{path} holds no contexts")
    if observational_index is not None:
        if not 0 <= observational_index < len(ps):
            raise _config_error("observational index out of range")
        ps = type(ps)(ps.thetas, observational_index, ps.sample_sizes)
    return ps


def _write(obj, path):
    try:
        io.write_json(obj, path)
    except OSError as err:
        raise CliError(EXIT_IO, f"cannot write {path}: {err}") from err


def cmd_generate(args):
    cfg = GeneratorConfig(d=args.d, p=args.p, K=args.K, density=args.density, kind=args.kind,
                          targets_per_context=args.targets_per_context)
    try:
        cfg.validate()
    except InvalidConfigError as err:
        raise _config_error(str(err)) from err
    model = generate_random_model(cfg, args.seed)
    out = args.output or "model.json"
    _write(model.to_dict(), out)
    if args.thetas:
        try:
            io.save_precision_set(exact_precision(model), args.thetas)
        except OSError as err:
            raise CliError(EXIT_IO, f"cannot write {args.thetas}: {err}") from err
    return f"generated model d={model.d} p={model.p} K={model.K} edges={len(model.dag.edges)} -> {out}"


def cmd_sample(args):
    if args.n is None or args.n <= 0:
        raise _config_error("--n must be a positive integer")
    try:
        model = io.load_model(args.model)
    except (OSError, ValueError, KeyError, TypeError) as err:
        raise CliError(EXIT_IO, f"cannot read model {args.model}: {err}") from err
    try:
        ps = sample_precision_set(model, args.n, seed=args.seed)
    except InsufficientSamplesError as err:
        raise _config_error(str(err)) from err
    out = args.output or "thetas.json"
    try:
        io.save_precision_set(ps, out)
    except OSError as err:
        raise CliError(EXIT_IO, f"cannot write {out}: {err}") from err
    return f"sampled {len(ps)} contexts with n={args.n} -> {out}"


def cmd_reduce(args):
    _check_unit("gamma", args.gamma)
    _check_unit("gamma2", args.gamma2)
    ps = _load_ps(args.input, args.observational_index)
    report = reduce_contexts(ps, args.mode, args.gamma, args.gamma2)
    out = args.output or "reduction_report.json"
    _write(report.to_dict(), out)
    dups = sum(1 for g in report.duplicate_groups if len(g) > 1)
    return f"d={report.d} observational={report.observational_index} duplicate_groups={dups} -> {out}"


def cmd_identify(args):
    _check_unit("gamma", args.gamma)
    ps = _load_ps(args.input, args.observational_index)
    out = args.output or "result.json"
    try:
        result = iterative_difference_projection(ps, args.mode, args.gamma)
    except MODEL_ERRORS as err:
        diag = {"error": type(err).__name__, "message": str(err),
                "diagnostics": getattr(err, "diagnostics", None)}
        raise CliError(EXIT_MODEL, f"{type(err).__name__}: {err}", (diag, out)) from err
    _write(result.to_dict(), out)
    return f"identified d={result.d} targets={list(result.targets_hat)} -> {out}"


def cmd_membership(args):
    _check_unit("gamma2", args.gamma2, lower_open=True)
    ps = _load_ps(args.input, args.observational_index)
    if len(ps) < 2:
        raise CliError(EXIT_IO, "membership test needs an observational and at least one interventional context")
    obs = ps.observational_index if ps.observational_index is not None else 0
    res = membership_test(ps, args.gamma2, obs)
    doc = res.to_dict()
    doc["observational_index"] = obs
    if args.roc:
        # fraction of contexts accepted at each threshold
        scores = np.asarray(res.scores)
        doc["roc"] = [{"threshold": float(t), "accept_rate": float(np.mean(scores >= t))} for t in ROC_THRESHOLDS]
    out = args.output or "test_report.json"
    _write(doc, out)
    return f"accepted {sum(res.accept)}/{len(res.accept)} contexts at gamma2={args.gamma2} -> {out}"


def _parse_sizes(values):
    sizes = []
    for v in values:
        if str(v).lower() in ("inf", "exact"):
            sizes.append(None)
            continue
        try:
            n = int(v)
        except ValueError:
            raise _config_error(f"bad sample size {v!r}") from None
        if n <= 0:
            raise _config_error("sample sizes must be positive")
        sizes.append(n)
    return tuple(sizes)


def cmd_benchmark(args):
    _check_unit("gamma", args.gamma)
    if args.seeds is None or args.seeds <= 0:
        raise _config_error("--seeds must be a positive integer")
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    if jobs <= 0:
        raise _config_error("--jobs must be positive")
    grid = BenchmarkGrid(d=args.d, p=args.p, K=args.K, sample_sizes=_parse_sizes(args.n),
                         seeds=tuple(range(args.seed, args.seed + args.seeds)), gamma=args.gamma,
                         kind=args.kind, density=args.density)
    try:
        grid.validate()
    except InvalidConfigError as err:
        raise _config_error(str(err)) from err
    report = run_benchmark(grid, jobs=jobs, timing=args.timing)
    out = Path(args.output or "report.json")
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(report.to_json() + "\n")
        out.with_suffix(".csv").write_text(report.to_csv())
    except OSError as err:
        raise CliError(EXIT_IO, f"cannot write {out}: {err}") from err
    failures = sum(r.status != "ok" for r in report.records)
    return f"benchmark {len(report.records)} runs, {failures} failures -> {out}, {out.with_suffix('.csv')}"


def _common(p, *, mode=False, gamma=False, gamma2=False, seed=False, jobs=False, obs=False):
    p.add_argument("-o", "--output", help="output path")
    p.add_argument("--config", help="JSON file of flag defaults; explicit flags win")
    if seed:
        p.add_argument("--seed", type=int, default=0)
    if mode:
        p.add_argument("--mode", choices=MODES, default="exact")
    if gamma:
        p.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    if gamma2:
        p.add_argument("--gamma2", type=float, default=0.99)
    if jobs:
        p.add_argument("--jobs", type=int, default=None, help="worker processes (default: logical cores)")
    if obs:
        p.add_argument("--observational-index", type=int, default=None,
                       help="override the observational context of the input")


def _model_flags(p):
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--p", type=int, default=10)
    p.add_argument("--K", type=int, default=None, help="number of interventional contexts (default: d)")
    p.add_argument("--density", type=float, default=0.75)
    p.add_argument("--kind", choices=INTERVENTION_KINDS, default="perfect")


def build_parser():
    parser = argparse.ArgumentParser(prog="lincd", description="Linear causal disentanglement from per-context precision matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="draw a random latent model")
    _common(p, seed=True)
    _model_flags(p)
    p.add_argument("--targets-per-context", type=int, default=1)
    p.add_argument("--thetas", help="also write exact precision matrices here (.json or directory)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sample", help="sample per-context precision matrices from a model file")
    _common(p, seed=True)
    p.add_argument("model")
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("reduce", help="find the observational context and duplicate targets")
    _common(p, mode=True, gamma=True, gamma2=True, obs=True)
    p.add_argument("input")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("identify", help="recover H and the latent model")
    _common(p, mode=True, gamma=True, obs=True)
    p.add_argument("input")
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("benchmark", help="run the synthetic benchmark grid")
    _common(p, seed=True, gamma=True, jobs=True)
    _model_flags(p)
    p.add_argument("--n", nargs="+", default=["2500", "25000", "250000"],
                   help="sample sizes; 'inf' means exact precision matrices")
    p.add_argument("--seeds", type=int, default=100, help="number of seeds, starting at --seed")
    p.add_argument("--timing", action="store_true", help="record per-run wall time")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("membership", help="rank-two test of each context difference")
    _common(p, gamma2=True, obs=True)
    p.add_argument("input")
    p.add_argument("--roc", action="store_true", help="add an acceptance-rate sweep over 20 thresholds")
    p.set_defaults(func=cmd_membership)

    parser._subparsers_map = sub.choices
    return parser


def _apply_config(parser, argv):
    """Re-parse with defaults taken from ``--config`` so explicit flags still win."""
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    try:
        cfg = io.read_json(args.config)
    except (OSError, ValueError) as err:
        raise CliError(EXIT_IO, f"cannot read config {args.config}: {err}") from err
    if not isinstance(cfg, dict):
        raise _config_error("config file must hold a JSON object")
    subparser = parser._subparsers_map[args.command]
    known = {a.dest for a in subparser._actions}
    unknown = sorted(set(k.replace("-", "_") for k in cfg) - known)
    if unknown:
        raise _config_error(f"unknown config keys: {', '.join(unknown)}")
    subparser.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items()})
    return parser.parse_args(argv)


def main(argv=None):
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        if getattr(args, "K", "absent") is None:
            args.K = args.d
        summary = args.func(args)
    except CliError as err:
        if err.payload is not None:
            diag, out = err.payload
            try:
                io.write_json(diag, out)
            except OSError:
                pass
        print(f"error: {err}", file=sys.stderr)
        return err.code
    except MODEL_ERRORS as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_MODEL
    except InvalidInputError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    print(summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
