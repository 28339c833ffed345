"""Shared fixtures: random graph generators and reference graphs."""

from __future__ import annotations

import os
import random
from pathlib import Path

import pytest

from elfsyn import Aig

BENCH_DIR = Path(os.environ.get("ELFSYN_BENCH_DIR",
                                Path(__file__).resolve().parent.parent / "benchmarks"))

EPFL_NAMES = ("div", "hyp", "log2", "multiplier", "sqrt", "square")


def epfl_path(name: str) -> Path:
    path = BENCH_DIR / f"{name}.aig"
    if not path.exists():
        pytest.skip(f"benchmark {name}.aig not present; run "
                    f"scripts/fetch_benchmarks.py first")
    return path


def random_aig(seed: int, n_pis: int = 6, n_nodes: int = 40,
               raw: bool = True) -> Aig:
    """Random combinational AIG; raw construction leaves structural
    duplicates in place, giving the refactoring passes real material."""
    rng = random.Random(seed)
    aig = Aig()
    lits = [aig.add_pi() for _ in range(n_pis)]
    for _ in range(n_nodes):
        x = rng.choice(lits) ^ rng.getrandbits(1)
        y = rng.choice(lits) ^ rng.getrandbits(1)
        if raw:
            if (x | 1) == (y | 1):   # avoid same-node pairs in raw mode
                y = lits[rng.randrange(len(lits))] ^ rng.getrandbits(1)
                if (x | 1) == (y | 1):
                    continue
            lits.append(aig.add_and_raw(x, y))
        else:
            out = aig.add_and(x, y)
            if out > 1:
                lits.append(out)
    for n in aig.live_ands():
        if aig.refs[n] == 0:
            aig.add_po(2 * n + rng.getrandbits(1))
    if not aig.pos:
        aig.add_po(lits[-1] if lits else 0)
    return aig


def reachable_and_set(aig: Aig, excluded: int | None = None) -> set[int]:
    """AND nodes reachable from the POs, optionally treating one node as
    deleted.  Independent of the graph's reference counting."""
    seen: set[int] = set()
    stack = [po >> 1 for po in aig.pos]
    while stack:
        n = stack.pop()
        if n in seen or n == excluded or not aig.is_and(n):
            continue
        seen.add(n)
        stack.append(aig.fanin0[n] >> 1)
        stack.append(aig.fanin1[n] >> 1)
    return seen


def build_feature_example() -> tuple[Aig, int, list[int]]:
    """Reference cut with feature tuple (3, 9, 10, 9, 2, 4).

    A 9-AND chain over four inputs: the second fanin of the first four
    chain nodes is input b, of the next four input c, and the top node
    takes input d.  With three external references on the root and one on
    each of the first seven chain nodes, the cut rooted at the top over
    leaves {a, b, c, d} has volume 9, total fanout 10, root level 9, and
    exactly two reconvergent nodes (b and c).
    """
    aig = Aig()
    a, b, c, d = (aig.add_pi() for _ in range(4))
    chain = aig.add_and(a, b)
    nodes = [chain]
    for leaf in (b, b, b, c, c, c, c):
        chain = aig.add_and(chain, leaf)
        nodes.append(chain)
    root = aig.add_and(chain, d)
    nodes.append(root)
    for _ in range(3):
        aig.add_po(root)
    for n in nodes[:7]:
        aig.add_po(n)
    # an external user of a leaf must not count into the cut's fanout
    aig.add_po(a)
    return aig, root >> 1, [l >> 1 for l in (a, b, c, d)]
