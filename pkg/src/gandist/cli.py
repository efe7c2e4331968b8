"""Command line interface: ``gandist <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import harness
from .certify import hoelder_constant, lipschitz_exact_1d
from .measures import NormSpec, example_pair, load_measure
from .relunet import ReluNetwork, assemble, stats
from .transport import dual_potential, save_plan, w1_exact
from .vanilla import FunctionClassSpec, affine_example, vanilla_distance


def _dump(obj, path=None):
    text = json.dumps(obj, indent=1, default=harness._jsonable)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        print(text)


def cmd_w1(args):
    P = load_measure(args.lhs, args.renormalize)
    Q = load_measure(args.rhs, args.renormalize)
    norm = NormSpec.parse(args.p)
    value, plan = w1_exact(P, Q, norm)
    out = {"w1": value, "p": str(norm)}
    if args.emit_plan:
        save_plan(plan, args.emit_plan)
        pot = dual_potential(P, Q, norm)
        out["dual_value"] = pot.dual_value
    _dump(out)
    return 0


def cmd_vanilla(args):
    P = load_measure(args.lhs, args.renormalize)
    Q = load_measure(args.rhs, args.renormalize)
    norm = NormSpec.parse(args.p)
    cls = FunctionClassSpec.parse(args.cls)
    v = vanilla_distance(P, Q, cls, norm)
    _dump({"value": v.value, "solver_gap": v.solver_gap, "class": cls.to_dict(), "p": str(norm)})
    if args.emit_witness:
        _dump(v.witness.to_dict(), args.emit_witness)
    return 0


def cmd_affine(args):
    a, b, v = affine_example(args.gamma, args.eps, args.L)
    P, Q = example_pair(args.gamma, args.eps)
    _dump({"a_star": a, "b_star": b, "value": v, "gamma": args.gamma, "eps": args.eps, "L": args.L})
    return 0


def cmd_build(args):
    f = harness.target_function(args.fn, args.dim, grid_file=args.grid)
    net, bud = assemble(f, args.L, args.B, args.alpha, args.eps, d=args.dim)
    net.save(args.emit)
    K, n, w = stats(net)
    _dump({"N": bud.N, "N_formula": bud.N_formula, "doublings": bud.doublings, "delta_mult": bud.delta_mult,
           "sup_error": bud.sup_error, "layers": K, "neurons": n, "weights": w, "out": args.emit})
    return 0


def cmd_certify(args):
    net = ReluNetwork.load(args.net)
    d = net.input_dim
    hc = hoelder_constant(net, d, args.alpha, args.pairs, seed=args.seed, norm=NormSpec.parse(args.p))
    out = {"hoelder": hc.to_dict(), "stats": list(stats(net))}
    if d == 1:
        out["lipschitz"] = lipschitz_exact_1d(net, (0.0, 1.0)).to_dict()
    _dump(out)
    return 0


def cmd_run(args):
    config = {}
    if args.config:
        with open(args.config) as fh:
            config = json.load(fh)
    rep = harness.run_named(args.experiment, config)
    if args.out:
        rep.save(args.out)
    if args.csv:
        rep.save_csv(args.csv)
    print(rep.summary())
    return 0 if rep.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gandist", description="Vanilla GAN and Wasserstein distances, ReLU approximants")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("w1", help="exact Wasserstein-1 distance")
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs", required=True)
    s.add_argument("--p", default="2")
    s.add_argument("--emit-plan")
    s.add_argument("--renormalize", action="store_true")
    s.set_defaults(func=cmd_w1)

    s = sub.add_parser("vanilla", help="vanilla GAN distance over a Lipschitz or Hölder class")
    s.add_argument("--class", dest="cls", required=True, help="lip:L,B or hoelder:alpha,Gamma")
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs", required=True)
    s.add_argument("--p", default="2")
    s.add_argument("--emit-witness")
    s.add_argument("--renormalize", action="store_true")
    s.set_defaults(func=cmd_vanilla)

    s = sub.add_parser("affine-example", help="affine discriminators on the two-atom pair")
    s.add_argument("--gamma", type=float, required=True)
    s.add_argument("--eps", type=float, default=0.25)
    s.add_argument("--L", type=float, default=20.0)
    s.set_defaults(func=cmd_affine)

    s = sub.add_parser("build-approx", help="assemble a ReLU approximant of a target function")
    s.add_argument("--fn", choices=["abs", "dist-l1", "zero", "custom-grid"], default="abs")
    s.add_argument("--grid", help="JSON file with {'values': nested list} for custom-grid")
    s.add_argument("--dim", type=int, default=1)
    s.add_argument("--L", type=float, default=1.0)
    s.add_argument("--B", type=float, default=0.5)
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--eps", type=float, default=0.1)
    s.add_argument("--emit", required=True)
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("certify", help="Hölder and exact Lipschitz certificates for a network")
    s.add_argument("--net", required=True)
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--pairs", type=int, default=10**5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--p", default="2")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("run", help="run an experiment and write its report")
    s.add_argument("experiment", choices=sorted(harness.EXPERIMENTS))
    s.add_argument("--config")
    s.add_argument("--out")
    s.add_argument("--csv")
    s.set_defaults(func=cmd_run)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"gandist: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
