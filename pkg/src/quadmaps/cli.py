"""Command-line front end.

Subcommands: sample, encode, decode, enumerate, verify, experiment, bench.
Objects move on standard streams in the module serializations (one per
line), so commands compose in pipelines.  Exit codes: 0 success, 1
verification or decoding failure, 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from ._backend import backend_name
from .bijection import quad_to_tree, tree_to_quad
from .blossom import (
    BlossomTree,
    blossom_to_embedded,
    embedded_to_blossom,
    sample_well_labelled_coupled,
)
from .enumeration import (
    EnumerationGuardError,
    enumerate_embedded,
    enumerate_plane_trees,
    enumerate_well_labelled,
    exact_counts,
)
from .experiments import (
    ExperimentConfig,
    coupling_and_kemperman_check,
    fidis_gof_experiment,
    profile_experiment,
    radius_experiment,
    tail_experiment,
)
from .labelled import (
    ContourPair,
    EmbeddedTree,
    WellLabelledTree,
    from_contour_pair,
    sample_embedded,
    to_contour_pair,
)
from .maps import Quadrangulation
from .trees import sample_plane_tree


def _open_out(path):
    return open(path, "w") if path else sys.stdout


def _read_in(path):
    return open(path).read() if path else sys.stdin.read()


def _cmd_sample(args) -> int:
    out = _open_out(args.out)
    try:
        for i in range(args.count):
            rng = np.random.default_rng(
                np.random.SeedSequence((args.seed, args.n, i))
            )
            if args.kind == "tree":
                out.write(sample_plane_tree(args.n, rng).to_parens() + "\n")
            elif args.kind == "embedded":
                out.write(sample_embedded(args.n, rng).serialize() + "\n")
            elif args.kind == "well-labelled":
                w, _ = sample_well_labelled_coupled(args.n, rng)
                out.write(w.serialize() + "\n")
            else:
                w, _ = sample_well_labelled_coupled(args.n, rng)
                out.write(tree_to_quad(w).to_text())
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_encode(args) -> int:
    text = _read_in(getattr(args, "infile", None))
    out = _open_out(args.out)
    try:
        if args.kind == "quadrangulation":
            q = Quadrangulation.from_text(text)
            out.write(quad_to_tree(q).serialize() + "\n")
        elif args.kind == "contour":
            t = EmbeddedTree.deserialize(text.strip(), root_label=args.root_label)
            out.write(to_contour_pair(t).serialize() + "\n")
        else:
            t = EmbeddedTree.deserialize(text.strip(), root_label=1)
            out.write(embedded_to_blossom(t).serialize() + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_decode(args) -> int:
    text = _read_in(getattr(args, "infile", None))
    out = _open_out(args.out)
    try:
        if args.kind == "quadrangulation":
            w = WellLabelledTree.deserialize(text.strip(), root_label=1)
            out.write(tree_to_quad(w).to_text())
        elif args.kind == "contour":
            pair = ContourPair.deserialize(text)
            t = from_contour_pair(pair, root_label=args.root_label)
            out.write(t.serialize() + "\n")
        else:
            b = BlossomTree.deserialize(text.strip())
            out.write(blossom_to_embedded(b).serialize() + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _cmd_enumerate(args) -> int:
    out = _open_out(args.out)
    try:
        if args.kind == "tree":
            for t in enumerate_plane_trees(args.n):
                out.write(t.to_parens() + "\n")
        elif args.kind == "embedded":
            for t in enumerate_embedded(args.n, limit=args.limit):
                out.write(t.serialize() + "\n")
        else:
            for t in enumerate_well_labelled(args.n, limit=args.limit):
                out.write(t.serialize() + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _verify_counts(n_max: int) -> list[str]:
    from .enumeration import catalan

    lines = []
    for n in range(1, n_max + 1):
        counts = exact_counts(n)
        n_emb = sum(1 for _ in enumerate_embedded(n))
        n_wl = sum(1 for _ in enumerate_well_labelled(n))
        ok = (
            n_emb == counts.embedded
            and n_wl == counts.well_labelled
            and counts.quadrangulations == counts.well_labelled
        )
        lines.append(f"counts n={n}: |U|={n_emb} |W|={n_wl} {'ok' if ok else 'FAIL'}")
        if not ok:
            raise SystemExit(1)
    return lines


def _verify_bijection(n_max: int) -> list[str]:
    from .labelled import label_distribution
    from .maps import bfs_profile

    lines = []
    for n in range(1, n_max + 1):
        seen = set()
        count = 0
        for w in enumerate_well_labelled(n):
            q = tree_to_quad(w)
            seen.add(q)
            back = quad_to_tree(q)
            if back != w:
                raise SystemExit(1)
            prof = bfs_profile(q)
            dist = label_distribution(w)
            if [prof.count(k) for k in range(1, prof.radius + 1)] != [
                dist.count(k) for k in range(1, dist.max_label + 1)
            ]:
                raise SystemExit(1)
            count += 1
        ok = len(seen) == count == exact_counts(n).quadrangulations
        lines.append(f"bijection n={n}: {count} round trips, {len(seen)} distinct maps "
                     f"{'ok' if ok else 'FAIL'}")
        if not ok:
            raise SystemExit(1)
    return lines


def _verify_cycle(n_max: int) -> list[str]:
    from .walks import verify_cycle_lemma

    lines = []
    for n in range(0, n_max + 1):
        for k in range(1, 4):
            rep = verify_cycle_lemma(n, k)
            lines.append(
                f"cycle-lemma n={n} k={k}: {rep.class_count} classes ok"
            )
    return lines


def _verify_classes(n_max: int) -> list[str]:
    from .blossom import conjugacy_class, embedded_to_blossom
    from .labelled import is_well_labelled

    lines = []
    for n in range(1, n_max + 1):
        blossoms = {}
        for u in enumerate_embedded(n):
            b = embedded_to_blossom(u)
            blossoms[b.serialize()] = (b, is_well_labelled(u))
        done = set()
        n_classes = 0
        for key, (b, _) in blossoms.items():
            if key in done:
                continue
            cls = conjugacy_class(b)
            wl = sum(1 for c in cls if blossoms[c.serialize()][1])
            if 2 * len(cls) != (n + 2) * wl or len(cls) > n + 2:
                raise SystemExit(1)
            done.update(c.serialize() for c in cls)
            n_classes += 1
        lines.append(f"classes n={n}: {n_classes} classes ok")
    return lines


def _cmd_verify(args) -> int:
    suites = {
        "counts": _verify_counts,
        "bijection": _verify_bijection,
        "cycle-lemma": _verify_cycle,
        "classes": _verify_classes,
    }
    try:
        for line in suites[args.suite](args.n_max):
            print(line)
    except SystemExit:
        print(f"verify {args.suite}: FAILED", file=sys.stderr)
        return 1
    return 0


def _cmd_experiment(args) -> int:
    cfg = ExperimentConfig.from_json(_read_in(args.config))
    if args.jobs is not None:
        cfg = ExperimentConfig(
            sizes=cfg.sizes, samples=cfg.samples, seed=cfg.seed,
            out=cfg.out, jobs=args.jobs, params=cfg.params,
        )
    if args.which == "radius":
        out = radius_experiment(cfg)["summary"]
    elif args.which == "profile":
        grid = cfg.params.get("grid") or [0.05 * i for i in range(61)]
        out = {str(n): c.tolist() for n, c in profile_experiment(cfg, grid)["curves"].items()}
    elif args.which == "coupling":
        out = coupling_and_kemperman_check(cfg)
    elif args.which == "tail":
        ys = cfg.params.get("ys") or [0.5 * i for i in range(1, 11)]
        out = tail_experiment(cfg, ys)
    else:
        taus = cfg.params.get("taus") or [0.5]
        out = fidis_gof_experiment(cfg, taus)
    json.dump(out, sys.stdout, indent=2, sort_keys=True, default=float)
    print()
    return 0


def _cmd_bench(args) -> int:
    from .benchmarks import run_benchmark

    run_benchmark(args.sizes, repeats=args.repeats, pure_max=args.pure_max)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="quadmaps",
        description="random quadrangulations, labelled trees, and their codecs",
    )
    parser.add_argument("--version", action="version", version=f"quadmaps {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw uniform objects")
    p.add_argument("--kind", required=True,
                   choices=["tree", "embedded", "well-labelled", "quadrangulation"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_sample)

    for name, fn in (("encode", _cmd_encode), ("decode", _cmd_decode)):
        p = sub.add_parser(name, help=f"{name} between representations")
        p.add_argument("--kind", required=True,
                       choices=["quadrangulation", "contour", "blossom"])
        p.add_argument("--in", dest="infile")
        p.add_argument("--out")
        p.add_argument("--root-label", type=int, default=0, choices=[0, 1])
        p.set_defaults(fn=fn)

    p = sub.add_parser("enumerate", help="stream all objects of a given size")
    p.add_argument("--kind", required=True, choices=["tree", "embedded", "well-labelled"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--limit", type=int, default=None,
                   help="override the exhaustive-size guard")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("verify", help="run exhaustive identity suites")
    p.add_argument("--suite", required=True,
                   choices=["bijection", "cycle-lemma", "classes", "counts"])
    p.add_argument("--n-max", type=int, default=4)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("experiment", help="run a Monte-Carlo experiment")
    p.add_argument("which", choices=["radius", "profile", "coupling", "tail", "fidis"])
    p.add_argument("--config", required=True)
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(fn=_cmd_experiment)

    p = sub.add_parser("bench", help="compare compiled and pure backends")
    p.add_argument("--sizes", type=int, nargs="+", default=[10_000, 100_000, 1_000_000])
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--pure-max", type=int, default=100_000)
    p.set_defaults(fn=_cmd_bench)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, EnumerationGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
