"""``partition-vc`` command-line front end.

Exit codes: 0 pass, 1 assertion failure, 2 input/config error, 3 budget
exceeded.  A JSON config file (``--config``) supplies defaults for any flag;
explicit flags win.  Budgets come from the environment unless overridden.
"""

from __future__ import annotations

import argparse
import inspect
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from ..budget import Budget
from ..errors import BudgetExceeded, InputError, PartitionVCError, VerificationFailure
from ..mechanisms import MirMechanism, load_instance, mir_allocate, opt_allocation
from ..partitions import bundle_family, covering_family, load_family
from ..vc import alpha_of, vc_dimension
from .records import ResultRecord, dumps
from .suites import SUITES
from .sweeps import SWEEPS, render_csv

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class ConfigError(InputError):
    pass


def _int_list(text: str) -> list[int]:
    """``"4,6,8"`` or ``"8-16"`` (inclusive) or a mix of both."""
    out: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _fraction_list(text: str) -> list[Fraction]:
    return [Fraction(p.strip()) for p in str(text).split(",") if p.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="partition-vc", description=__doc__.splitlines()[0], allow_abbrev=False)
    p.add_argument("--config", help="JSON file of default flag values")
    p.add_argument("--max-pow3-m", type=int, help="cap on m for 3^m enumerations")
    p.add_argument("--max-subset-size", type=int, help="cap on n for 2^n enumerations")
    sub = p.add_subparsers(dest="command", required=True)

    vc = sub.add_parser("vc", help="exact partition VC dimension of a family file")
    vc.add_argument("family")

    al = sub.add_parser("alpha", help="approximation quality of a family file")
    al.add_argument("family")
    al.add_argument("--mode", choices=["exact", "sampled"])
    al.add_argument("--samples", type=int)
    al.add_argument("--seed", type=int)

    me = sub.add_parser("mechanism", help="run MIR + VCG on an instance file")
    me.add_argument("instance")
    grp = me.add_mutually_exclusive_group()
    grp.add_argument("--range", dest="range_path")
    grp.add_argument("--bundle", action="store_true", default=None)
    grp.add_argument("--full-covering", action="store_true", default=None)
    me.add_argument("--allocate-all-items", action="store_true", default=None)

    ve = sub.add_parser("verify-lemmas", help="run a verification suite ('all' for every suite)")
    ve.add_argument("suite")
    ve.add_argument("--seed", type=int)
    ve.add_argument("--trials", type=int)
    ve.add_argument("--witness-dir")
    ve.add_argument("--timing", action="store_true", default=None, help="include wall time (breaks byte identity)")

    sw = sub.add_parser("sweep", help="write a measurement CSV")
    sw.add_argument("kind", choices=sorted(SWEEPS))
    sw.add_argument("--m", dest="grid", help="grid of m values, e.g. 4,6,8 or 8-16")
    sw.add_argument("--seed", type=int)
    sw.add_argument("--out")
    sw.add_argument("--count", type=int, help="families / random ranges per grid point")
    sw.add_argument("--delta", help="code-growth delta (rational)")
    sw.add_argument("--seeds", type=int, help="code-growth seeds")
    sw.add_argument("--attempts", type=int, help="code-growth attempts per build")
    sw.add_argument("--eps", help="covering-size epsilons, comma separated")
    sw.add_argument("--pool", type=int, help="covering-size candidates per greedy step")
    sw.add_argument("--mode", choices=["exact", "sampled"], help="alpha-vs-vc alpha mode")
    return p


DEFAULTS = {
    "alpha": {"mode": "exact", "samples": 1000},
    "verify-lemmas": {"seed": 0, "witness_dir": "."},
    "sweep": {"seed": 0, "grid": "4", "mode": "exact"},
}


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
    known = set(vars(args))
    for key, value in cfg.items():
        attr = key.replace("-", "_")
        if attr == "m":
            attr = "grid"
        if attr not in known:
            raise ConfigError(f"unknown config key {key!r}")
        if getattr(args, attr, None) is None:
            setattr(args, attr, value)
    for key, value in DEFAULTS.get(args.command, {}).items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


def _budget(args) -> Budget:
    b = Budget.from_env()
    return Budget(
        args.max_pow3_m if args.max_pow3_m is not None else b.max_pow3_m,
        args.max_subset_size if args.max_subset_size is not None else b.max_subset_size,
    )


def cmd_vc(args, budget: Budget, out) -> int:
    out.write(dumps(vc_dimension(load_family(args.family), budget)))
    return EXIT_OK


def cmd_alpha(args, budget: Budget, out) -> int:
    family = load_family(args.family)
    if args.mode == "sampled" and args.seed is None:
        raise ConfigError("sampled mode requires --seed")
    out.write(dumps(alpha_of(family, args.mode, args.samples, args.seed, budget)))
    return EXIT_OK


def cmd_mechanism(args, budget: Budget, out) -> int:
    inst = load_instance(args.instance)
    if args.bundle:
        rng = bundle_family(inst.universe)
    elif args.full_covering:
        rng = covering_family(inst.universe)
    elif args.range_path:
        rng = load_family(args.range_path)
    else:
        raise ConfigError("one of --range, --bundle, --full-covering is required")
    outcome = mir_allocate(MirMechanism(rng, bool(args.allocate_all_items)), inst)
    _, opt = opt_allocation(inst, budget)
    payload = outcome.to_json()
    payload["opt_welfare"] = opt
    out.write(dumps(payload))
    return EXIT_OK


def _run_suite(name: str, args, budget: Budget) -> ResultRecord:
    fn = SUITES[name]
    kwargs = {}
    if args.trials is not None and "trials" in inspect.signature(fn).parameters:
        kwargs["trials"] = args.trials
    start = time.perf_counter()
    rec = fn(args.seed, budget, **kwargs)
    if args.timing:
        rec.wall_time = round(time.perf_counter() - start, 3)
    return rec


def cmd_verify(args, budget: Budget, out) -> int:
    if args.suite == "all":
        names = sorted(SUITES)
    elif args.suite in SUITES:
        names = [args.suite]
    else:
        raise ConfigError(f"unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))} or all")
    records = [_run_suite(n, args, budget) for n in names]
    out.write(dumps(records))
    failed = [r for r in records if not r.passed]
    for r in failed:
        path = Path(args.witness_dir) / f"{r.experiment}-failure.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps(r))
        print(f"FAIL {r.experiment}: witness written to {path}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_sweep(args, budget: Budget, out) -> int:
    kwargs = {"budget": budget}
    if args.count is not None and args.kind in ("ratio", "alpha-vs-vc"):
        kwargs["count"] = args.count
    if args.kind == "code-growth":
        if args.delta is not None:
            kwargs["delta"] = Fraction(str(args.delta))
        if args.seeds is not None:
            kwargs["seeds"] = args.seeds
        if args.attempts is not None:
            kwargs["attempts"] = args.attempts
    if args.kind == "covering-size":
        if args.eps is not None:
            kwargs["epsilons"] = _fraction_list(args.eps)
        if args.pool is not None:
            kwargs["pool"] = args.pool
    if args.kind == "alpha-vs-vc":
        kwargs["mode"] = args.mode
    try:
        grid = _int_list(args.grid)
    except ValueError:
        raise ConfigError(f"bad grid {args.grid!r}") from None
    header, rows = SWEEPS[args.kind](grid, args.seed, **kwargs)
    text = render_csv(header, rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


COMMANDS = {
    "vc": cmd_vc,
    "alpha": cmd_alpha,
    "mechanism": cmd_mechanism,
    "verify-lemmas": cmd_verify,
    "sweep": cmd_sweep,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        args = _merge_config(args)
        return COMMANDS[args.command](args, _budget(args), out)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        if exc.witness:
            print(dumps(exc.witness), file=sys.stderr)
        return EXIT_FAIL
    except (InputError, OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PartitionVCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
