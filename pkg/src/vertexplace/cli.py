"""``vertexplace`` command line: generate, solve, eval, train, bench."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bench, gnosis
from .objective import DEFAULT_IMAGE_MB, CoverSolution, cost_function, set_cover_cost
from .solvers import GREEDY_VARIANTS, GaConfig
from .topology import TopologySpec, deserialize, generate, serialize


def _spec_from_args(args, n=None) -> TopologySpec:
    return TopologySpec(args.family, n or args.n, p=args.p, k=args.k, m=args.m,
                        seed=args.seed, wifi_ratio=args.wifi_ratio)


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text)


def _read_graph(path):
    return deserialize(Path(path).read_text())


def cmd_generate(args):
    _write(serialize(generate(_spec_from_args(args))), args.output)


def cmd_solve(args):
    t = _read_graph(args.graph)
    model = gnosis.GnosisParams.load(args.model) if args.model else None
    cover = bench.solve(t, args.algo, args.seed, args.image_mb, model, args.greedy_variant,
                        GaConfig(population=args.population, generations=args.generations))
    _write(cover.to_json(), args.output)


def cmd_eval(args):
    t = _read_graph(args.graph)
    cover = CoverSolution.from_json(Path(args.cover).read_text())
    cb = cost_function(t, cover, args.image_mb)
    cf = bench._cf(t, cover, args.image_mb, shared=True) if args.cf_shared else cb.cf
    doc = {
        "vcs": cb.replica_count,
        "transfer_s": cb.transfer_term,
        "cf": cf,
        "set_cover_cost": set_cover_cost(t, cover, args.image_mb).total,
        "unreachable": cb.unreachable,
    }
    _write(json.dumps(doc, indent=1), None)


def cmd_train(args):
    tspec = _spec_from_args(args)
    cfg = gnosis.TrainConfig(
        gamma=args.gamma, actor_lr=args.actor_lr, critic_lr=args.critic_lr, episodes=args.episodes,
        hidden_dim=args.hidden, layers=args.layers, reward_alpha=args.reward_alpha,
        seed=args.seed, advantage=args.advantage,
    )
    history: list[float] = []
    params = gnosis.train(tspec, cfg, history)
    params.save(args.output, cfg)
    if history:
        head = sum(history[:50]) / len(history[:50])
        tail = sum(history[-50:]) / len(history[-50:])
        logging.info("mean return: first 50 episodes %.2f, last 50 %.2f", head, tail)


def cmd_bench(args):
    cfg = bench.SuiteConfig.from_json(Path(args.config).read_text()) if args.config else bench.SuiteConfig()
    if args.workers:
        cfg.workers = args.workers
    training: list[dict] = []
    records = bench.run_suite(cfg, training)
    _write(bench.emit_csv(records), args.out)
    if training and args.out not in (None, "-"):
        Path(args.out).with_suffix(".training.json").write_text(json.dumps(training, indent=1))
    if args.plots:
        bench.write_plots(records, args.plots)
    failed = [r for r in records if r.error]
    for r in failed:
        logging.error("%s", r.error)
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vertexplace", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def topo_args(p, require_n=True):
        p.add_argument("--family", choices=["er", "sw", "ba"], required=True)
        p.add_argument("--n", type=int, required=require_n)
        p.add_argument("--p", type=float)
        p.add_argument("--k", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--wifi-ratio", type=float, default=0.75)

    g = sub.add_parser("generate", help="generate a random topology as JSON")
    topo_args(g)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="compute a vertex cover for a graph document")
    s.add_argument("--graph", required=True)
    s.add_argument("--algo", choices=bench.ALGORITHMS, required=True)
    s.add_argument("--greedy-variant", choices=GREEDY_VARIANTS, default="degree")
    s.add_argument("--model", help="trained model JSON (gnosis only)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--image-mb", type=float, default=DEFAULT_IMAGE_MB)
    s.add_argument("--population", type=int, default=100)
    s.add_argument("--generations", type=int, default=150)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("eval", help="score a cover against a graph")
    e.add_argument("--graph", required=True)
    e.add_argument("--cover", required=True)
    e.add_argument("--image-mb", type=float, default=DEFAULT_IMAGE_MB)
    e.add_argument("--cf-shared", action="store_true",
                   help="use max-min shared delivery times instead of nominal link bandwidth")
    e.set_defaults(func=cmd_eval)

    t = sub.add_parser("train", help="train a GNN actor-critic cover policy")
    topo_args(t)
    d = gnosis.TrainConfig()
    t.add_argument("--episodes", type=int, default=d.episodes)
    t.add_argument("--hidden", type=int, default=d.hidden_dim)
    t.add_argument("--layers", type=int, default=d.layers)
    t.add_argument("--gamma", type=float, default=d.gamma)
    t.add_argument("--actor-lr", type=float, default=d.actor_lr)
    t.add_argument("--critic-lr", type=float, default=d.critic_lr)
    t.add_argument("--reward-alpha", type=float, default=d.reward_alpha)
    t.add_argument("--advantage", choices=["extended", "standard"], default=d.advantage)
    t.add_argument("-o", "--output", required=True)
    t.set_defaults(func=cmd_train)

    b = sub.add_parser("bench", help="run a benchmark suite")
    b.add_argument("--config", help="suite config JSON (defaults to the full grid: 3 families x 3 variants x 4 sizes)")
    b.add_argument("--out", default="-")
    b.add_argument("--plots")
    b.add_argument("--workers", type=int)
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args) or 0
    except (ValueError, OSError) as exc:
        logging.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
