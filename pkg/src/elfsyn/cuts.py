"""Reconvergence-driven cuts and truth-table extraction over their leaves."""

from __future__ import annotations

from dataclasses import dataclass

from .aig import Aig
from .tt import full_mask, var_pattern

MAX_TT_LEAVES = 16


@dataclass
class Cut:
    """A single-root cut: ordered leaves plus the enclosed volume.

    `volume` holds the root and every node on a path from a leaf to the
    root (leaves excluded), in topological order (fanins first).
    """
    root: int
    leaves: list[int]
    volume: list[int]


@dataclass
class TruthTable:
    bits: int
    n_vars: int


def reconv_cut(aig: Aig, root: int, max_leaves: int = 10) -> Cut:
    """Grow a reconvergence-driven cut for `root`.

    Starting from ``leaves = {root}``, repeatedly expands the AND leaf with
    minimal cost, where cost is the number of its fanin nodes not already
    seen minus one.  Cost <= 0 expansions exploit reconvergence and never
    enlarge the leaf set, so they are always taken; a positive-cost
    expansion is taken only while the leaf budget allows.  Ties break on
    the smaller node id, which makes the construction deterministic.
    """
    if not aig.is_and(root):
        raise ValueError(f"node {root} is not a live AND node")
    if max_leaves < 2:
        raise ValueError("max_leaves must be at least 2")
    fanin0, fanin1 = aig.fanin0, aig.fanin1
    leaves = {root}
    seen = {root}
    while True:
        best = best_cost = None
        for v in leaves:
            if fanin0[v] < 0:
                continue  # PI leaves cannot expand
            cost = -1
            if fanin0[v] >> 1 not in seen:
                cost += 1
            if fanin1[v] >> 1 not in seen and fanin1[v] >> 1 != fanin0[v] >> 1:
                cost += 1
            if best is None or (cost, v) < (best_cost, best):
                best, best_cost = v, cost
        if best is None or len(leaves) + best_cost > max_leaves:
            break
        leaves.remove(best)
        for f in (fanin0[best] >> 1, fanin1[best] >> 1):
            if f not in seen:
                seen.add(f)
                leaves.add(f)
    return Cut(root, sorted(leaves), _collect_volume(aig, root, leaves))


def _collect_volume(aig: Aig, root: int, leaf_set: set[int]) -> list[int]:
    """Backward traversal from the root stopping at leaves, fanins first."""
    fanin0, fanin1 = aig.fanin0, aig.fanin1
    order: list[int] = []
    state: dict[int, int] = {}
    stack = [root]
    while stack:
        n = stack[-1]
        if state.get(n) == 2:
            stack.pop()
            continue
        pending = [f for f in (fanin0[n] >> 1, fanin1[n] >> 1)
                   if f not in leaf_set and state.get(f) != 2]
        if pending:
            state[n] = 1
            stack.extend(pending)
        else:
            state[n] = 2
            order.append(n)
            stack.pop()
    return order


def cut_truth_table(aig: Aig, cut: Cut) -> TruthTable:
    """Root function over the leaf variables by bit-parallel simulation."""
    n = len(cut.leaves)
    if n > MAX_TT_LEAVES:
        raise ValueError(f"cut has {n} leaves, at most {MAX_TT_LEAVES} supported")
    mask = full_mask(n)
    value = {leaf: var_pattern(j, n) for j, leaf in enumerate(cut.leaves)}
    fanin0, fanin1 = aig.fanin0, aig.fanin1
    for v in cut.volume:
        f0, f1 = fanin0[v], fanin1[v]
        a = value[f0 >> 1] ^ (mask if f0 & 1 else 0)
        b = value[f1 >> 1] ^ (mask if f1 & 1 else 0)
        value[v] = a & b
    return TruthTable(value[cut.root], n)
