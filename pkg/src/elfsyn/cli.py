"""Command-line surface: stats | refactor | elf | collect | train | eval |
verify | bench.

Exit codes: 0 success (or equivalent), 1 verification mismatch, 2 usage or
I/O errors.  Pass wall times cover the optimization work only, never file
I/O, and include classifier inference for the pruned pass.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import aiger, model as model_mod, passes, verify
from .features import FEATURE_NAMES

CSV_HEADER = ("design", "node_id") + FEATURE_NAMES + ("label",)


def entry() -> None:
    sys.exit(main())


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, aiger.AigerError, model_mod.ModelFormatError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elfsyn",
        description="AIG refactoring with learned cut pruning")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="print graph statistics")
    p.add_argument("input")
    p.set_defaults(func=cmd_stats)

    for name, help_text in (("refactor", "run the plain refactoring pass"),
                            ("elf", "run the classifier-pruned pass")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input")
        p.add_argument("-o", "--output", required=True)
        _add_pass_flags(p)
        if name == "elf":
            p.add_argument("-m", "--model", required=True)
            p.add_argument("-t", "--threshold", type=float, default=0.5)
        p.set_defaults(func=cmd_elf if name == "elf" else cmd_refactor)

    p = sub.add_parser("collect", help="write a labeled feature dataset")
    p.add_argument("inputs", nargs="+")
    p.add_argument("-o", "--output", required=True)
    _add_pass_flags(p)
    p.set_defaults(func=cmd_collect)

    p = sub.add_parser("train", help="train the classifier leave-one-out")
    p.add_argument("dataset")
    p.add_argument("--holdout", required=True,
                   help="design evaluated but excluded from training")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-t", "--threshold", type=float, default=0.5)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a model on a dataset")
    p.add_argument("dataset")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("--design", help="restrict to one design")
    p.add_argument("-t", "--threshold", type=float, default=0.5)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="check two graphs for equivalence")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-n", "--patterns", type=int, default=65536)
    p.add_argument("-x", "--exhaustive", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="compare both passes per design")
    p.add_argument("inputs", nargs="+")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-o", "--output", help="also write the report as CSV")
    _add_pass_flags(p)
    p.add_argument("-t", "--threshold", type=float, default=0.5)
    p.set_defaults(func=cmd_bench)
    return parser


def _add_pass_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("-N", "--max-leaves", type=int, default=10)
    p.add_argument("-z", "--zero-cost", action="store_true")
    p.add_argument("-l", "--preserve-level", action="store_true")


def _params(args) -> passes.PassParams:
    return passes.PassParams(
        max_leaves=args.max_leaves,
        zero_cost=args.zero_cost,
        preserve_level=args.preserve_level,
        threshold=getattr(args, "threshold", 0.5))


def _write_graph(aig, path: str) -> None:
    data = aiger.write_aiger(aig, binary=not path.endswith(".aag"))
    Path(path).write_bytes(data)


def _print_stats(stats: passes.PassStats) -> None:
    print(f"visited {stats.visited}  skipped {stats.skipped}  "
          f"attempted {stats.attempted}  committed {stats.committed}")
    print(f"and {stats.and_before} -> {stats.and_after} "
          f"(gain {stats.total_gain})  "
          f"level {stats.level_before} -> {stats.level_after}  "
          f"time {stats.wall_time:.2f}s")


def cmd_stats(args) -> int:
    aig = aiger.read_aiger(args.input)
    print(f"And {aig.num_ands}  Level {aig.depth()}  "
          f"PIs {len(aig.pis)}  POs {len(aig.pos)}")
    return 0


def cmd_refactor(args) -> int:
    aig = aiger.read_aiger(args.input)
    stats = passes.run_refactor(aig, _params(args))
    _print_stats(stats)
    _write_graph(aig, args.output)
    return 0


def cmd_elf(args) -> int:
    aig = aiger.read_aiger(args.input)
    mlp = model_mod.load_model(Path(args.model).read_bytes())
    stats = passes.run_elf(aig, _params(args), mlp)
    _print_stats(stats)
    _write_graph(aig, args.output)
    return 0


def cmd_collect(args) -> int:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for path in args.inputs:
        design = Path(path).stem
        aig = aiger.read_aiger(path)
        labels, _ = passes.collect_labels(aig, _params(args))
        for row in labels:
            writer.writerow((design, row.node_id) + row.features.as_tuple()
                            + (row.label,))
    Path(args.output).write_text(buf.getvalue())
    return 0


def load_dataset(path):
    """Read a collected dataset: (designs, node_ids, features, labels)."""
    designs, node_ids, rows, labels = [], [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader, ()))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected dataset header: {header}")
        for rec in reader:
            designs.append(rec[0])
            node_ids.append(int(rec[1]))
            rows.append([float(v) for v in rec[2:8]])
            labels.append(int(rec[8]))
    return (np.array(designs), np.array(node_ids),
            np.array(rows, dtype=np.float64), np.array(labels, dtype=np.int64))


def normalize_per_design(designs, features):
    """Standardize each design's block with its own statistics."""
    out = np.empty_like(features)
    for d in dict.fromkeys(designs.tolist()):
        sel = designs == d
        out[sel] = model_mod.normalize_batch(features[sel])
    return out


def _print_metrics(design: str, m: model_mod.Metrics) -> None:
    print(f"{'design':<12}{'recall':>8}{'accuracy':>10}"
          f"{'tp':>8}{'tn':>9}{'fp':>8}{'fn':>7}")
    print(f"{design:<12}{m.recall:>7.2f}%{m.accuracy:>9.2f}%"
          f"{m.tp:>8}{m.tn:>9}{m.fp:>8}{m.fn:>7}")


def cmd_train(args) -> int:
    designs, _, feats, labels = load_dataset(args.dataset)
    if args.holdout not in designs:
        print(f"error: design {args.holdout!r} not present in "
              f"{args.dataset}", file=sys.stderr)
        return 2
    norm = normalize_per_design(designs, feats)
    train_sel = designs != args.holdout
    cfg = model_mod.TrainConfig(seed=args.seed)
    mlp = model_mod.train(norm[train_sel], labels[train_sel], cfg)
    Path(args.output).write_bytes(model_mod.save_model(mlp))
    metrics = model_mod.evaluate(mlp, norm[~train_sel], labels[~train_sel],
                                 args.threshold)
    _print_metrics(args.holdout, metrics)
    return 0


def cmd_eval(args) -> int:
    designs, _, feats, labels = load_dataset(args.dataset)
    mlp = model_mod.load_model(Path(args.model).read_bytes())
    if args.design is not None:
        if args.design not in designs:
            print(f"error: design {args.design!r} not present in "
                  f"{args.dataset}", file=sys.stderr)
            return 2
        sel = designs == args.design
        designs, feats, labels = designs[sel], feats[sel], labels[sel]
    norm = normalize_per_design(designs, feats)
    metrics = model_mod.evaluate(mlp, norm, labels, args.threshold)
    _print_metrics(args.design or "all", metrics)
    return 0


def cmd_verify(args) -> int:
    a = aiger.read_aiger(args.a)
    b = aiger.read_aiger(args.b)
    if args.exhaustive:
        res = verify.check_equiv_exhaustive(a, b)
    else:
        res = verify.check_equiv_random(a, b, args.patterns)
    if res:
        print("equivalent" if args.exhaustive else "equivalent-so-far")
        return 0
    print(f"counterexample: PO {res.po_index} differs under PI assignment "
          f"{''.join(str(v) for v in res.pattern)}")
    return 1


def cmd_bench(args) -> int:
    mlp = model_mod.load_model(Path(args.model).read_bytes())
    params = _params(args)
    rows = []
    for path in args.inputs:
        design = Path(path).stem
        base = passes.run_refactor(aiger.read_aiger(path), params)
        elf = passes.run_elf(aiger.read_aiger(path), params, mlp)
        rows.append({
            "design": design,
            "base_runtime": base.wall_time,
            "elf_runtime": elf.wall_time,
            "base_and": base.and_after,
            "elf_and": elf.and_after,
            "base_level": base.level_after,
            "elf_level": elf.level_after,
            "speedup": base.wall_time / elf.wall_time if elf.wall_time else 0.0,
            "d_and": passes.relative_difference(elf.and_after, base.and_after),
            "d_level": passes.relative_difference(elf.level_after,
                                                  base.level_after)
                       if base.level_after else 0.0,
        })
    fmt = ("{design:<12}{base_runtime:>8.2f}{elf_runtime:>8.2f}"
           "{speedup:>8.2f}x{base_and:>9}{elf_and:>9}{d_and:>+8.2f}%"
           "{base_level:>7}{elf_level:>7}{d_level:>+8.2f}%")
    print(f"{'design':<12}{'base_s':>8}{'elf_s':>8}{'speedup':>9}"
          f"{'base_and':>9}{'elf_and':>9}{'d_and':>9}"
          f"{'b_lev':>7}{'e_lev':>7}{'d_lev':>9}")
    for r in rows:
        print(fmt.format(**r))
    if args.output:
        with open(args.output, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
    return 0
