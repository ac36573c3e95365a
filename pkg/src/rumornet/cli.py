"""Command-line entry point: ``python -m rumornet <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .broadcast import PROTOCOLS
from .confmodel import CompleteGraph, uniform_pairing
from .degseq import SequenceFamily, protocol_constants
from .drp import DrpOverrides, run_drp
from .harness import ExperimentConfig, run_ensemble, simplicity_montecarlo


def _family(args) -> SequenceFamily:
    if args.spec:
        return SequenceFamily.from_json(json.loads(args.spec))
    if args.config:
        with open(args.config) as fh:
            obj = json.load(fh)
        return SequenceFamily.from_json(obj.get("family", obj.get("sequence", obj)))
    if args.kind == "regular":
        return SequenceFamily.regular(args.n, args.d)
    if args.kind == "power_law":
        return SequenceFamily.power_law(args.n, args.beta, args.d_min, args.cutoff)
    if args.kind == "explicit":
        return SequenceFamily.explicit(int(x) for x in args.degrees.split(","))
    raise SystemExit("give a sequence with --spec, --config or --kind")


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_generate(args) -> None:
    seq = _family(args).build()
    if args.graph:
        g = uniform_pairing(seq, np.random.default_rng(args.seed))
        _emit(args, g.to_edgelist())
    else:
        _emit(args, _dump({"n": seq.n, "total_stubs": seq.total_stubs,
                           "max_degree": seq.max_degree, "degrees": seq.to_list()}))


def cmd_constants(args) -> None:
    seq = _family(args).build()
    _emit(args, _dump(protocol_constants(seq, args.gamma).to_json()))


def cmd_simulate(args) -> None:
    rng = np.random.default_rng(args.seed)
    if args.complete:
        g = CompleteGraph(args.complete)
    else:
        g = uniform_pairing(_family(args).build(), rng)
    eps = tuple(float(e) for e in args.eps.split(","))
    res = PROTOCOLS[args.protocol](g, args.init, args.max_rounds, rng, eps=eps, seed=args.seed)
    _emit(args, res.trajectory_csv() if args.csv else _dump(res.to_json()))


def cmd_drp(args) -> None:
    seq = _family(args).build()
    ov = DrpOverrides(alpha=args.alpha, gamma=args.gamma, seed_target=args.seed_target,
                      bounded_schedule=args.bounded, init=args.init)
    rep = run_drp(seq, eps=args.eps, overrides=ov, seed=args.seed)
    if args.rows:
        with open(args.rows, "w") as fh:
            fh.write(rep.rows_csv())
    _emit(args, _dump(rep.to_json()))


def cmd_sweep(args) -> None:
    if not args.config:
        raise SystemExit("sweep needs --config <path.json>")
    with open(args.config) as fh:
        obj = json.load(fh)
    if args.seed_given:
        obj["master_seed"] = args.seed
    cfg = ExperimentConfig.from_json(obj)
    result = run_ensemble(cfg, threads=args.threads)
    out = args.out or cfg.out
    if out:
        with open(out, "w") as fh:
            fh.write(result.to_csv())
        sys.stdout.write(_dump(result.summary()))
    else:
        sys.stdout.write(result.to_csv())


def cmd_simplicity(args) -> None:
    seq = _family(args).build()
    _emit(args, _dump(simplicity_montecarlo(seq, args.samples, args.seed)))


class _SeedAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.seed_given = True


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, action=_SeedAction, help="64-bit master seed")
    common.add_argument("--config", help="JSON config (sequence spec or sweep config)")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--threads", type=int, default=1)

    seqargs = argparse.ArgumentParser(add_help=False)
    seqargs.add_argument("--spec", help='sequence JSON, e.g. \'{"kind":"regular","n":1000,"d":4}\'')
    seqargs.add_argument("--kind", choices=["regular", "power_law", "explicit"])
    seqargs.add_argument("--n", type=int)
    seqargs.add_argument("--d", type=int)
    seqargs.add_argument("--beta", type=float)
    seqargs.add_argument("--d-min", type=int, dest="d_min")
    seqargs.add_argument("--cutoff", type=int)
    seqargs.add_argument("--degrees", help="comma separated degrees for --kind explicit")

    p = argparse.ArgumentParser(prog="rumornet", description=__doc__)
    p.set_defaults(seed_given=False)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common, seqargs], help="emit a degree sequence or edge list")
    g.add_argument("--graph", action="store_true", help="emit a sampled multigraph edge list")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("constants", parents=[common, seqargs], help="emit protocol constants JSON")
    c.add_argument("--gamma", type=float)
    c.set_defaults(func=cmd_constants)

    s = sub.add_parser("simulate", parents=[common, seqargs], help="single push/pull/push-pull run")
    s.add_argument("--protocol", choices=sorted(PROTOCOLS), default="push")
    s.add_argument("--init", type=int)
    s.add_argument("--max-rounds", type=int, default=10_000, dest="max_rounds")
    s.add_argument("--eps", default="0.01,0.05")
    s.add_argument("--complete", type=int, metavar="N", help="run on K_N instead")
    s.add_argument("--csv", action="store_true", help="emit the trajectory CSV")
    s.set_defaults(func=cmd_simulate)

    d = sub.add_parser("drp", parents=[common, seqargs], help="single DRP run with audit")
    d.add_argument("--eps", type=float, default=0.05)
    d.add_argument("--alpha", type=float)
    d.add_argument("--gamma", type=float)
    d.add_argument("--seed-target", type=int, dest="seed_target")
    d.add_argument("--bounded", action="store_true", help="bounded-degree phase-1 delays")
    d.add_argument("--init", type=int)
    d.add_argument("--rows", help="write the per-round CSV here")
    d.set_defaults(func=cmd_drp)

    w = sub.add_parser("sweep", parents=[common], help="ensemble sweep and slope fit")
    w.set_defaults(func=cmd_sweep)

    m = sub.add_parser("simplicity", parents=[common, seqargs], help="simplicity Monte Carlo")
    m.add_argument("--samples", type=int, default=10_000)
    m.set_defaults(func=cmd_simplicity)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
