"""Optimization passes: plain refactoring and the classifier-pruned variant.

Both passes share one engine: iterate the AND nodes present at pass start
in ascending id order, form a reconvergence-driven cut per node, price the
factored replacement, and commit when the gain clears the bar.  The pruned
variant classifies every node up front on the unmodified graph and skips
the ones predicted not to improve.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .aig import Aig
from .cuts import reconv_cut
from .features import FeatureVector, collect_with_ids, extract_features
from .model import Mlp, forward, normalize_batch
from .resyn import commit_candidate, discard_candidate, eval_refactor


@dataclass
class PassParams:
    max_leaves: int = 10
    zero_cost: bool = False        # also commit gain == 0 rebuilds
    preserve_level: bool = False   # reject candidates above the old root level
    threshold: float = 0.5         # pruning threshold (classifier pass only)

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")


@dataclass
class PassStats:
    visited: int = 0
    skipped: int = 0
    attempted: int = 0
    committed: int = 0
    total_gain: int = 0
    and_before: int = 0
    and_after: int = 0
    level_before: int = 0
    level_after: int = 0
    wall_time: float = 0.0


@dataclass
class NodeLabel:
    node_id: int
    features: FeatureVector
    label: int


def run_refactor(aig: Aig, params: PassParams | None = None) -> PassStats:
    """One refactoring pass; commits only candidates that shrink the graph
    (or break even with zero_cost).  Functionally equivalence-preserving."""
    return _run_pass(aig, params or PassParams())


def run_elf(aig: Aig, params: PassParams, model: Mlp) -> PassStats:
    """Classifier-pruned refactoring.

    Phase 1 extracts one cut and feature row per live AND node of the
    input graph and classifies the whole set as a single mean-variance
    normalized batch.  Phase 2 runs the normal pass but skips every node
    whose predicted success probability falls below the threshold; cuts of
    attempted nodes are recomputed since the graph changes underneath.
    Classification time is part of the reported wall time.
    """
    t0 = time.perf_counter()
    ids, matrix = collect_with_ids(aig, params.max_leaves)
    if len(ids):
        probs = forward(model, normalize_batch(matrix))
    else:
        probs = []
    keep = {n: p for n, p in zip(ids, probs)}
    return _run_pass(aig, params, keep_prob=keep, t0=t0)


def collect_labels(aig: Aig, params: PassParams | None = None):
    """Baseline pass that records per-visit features and commit outcomes.

    Returns (labels, stats); one row per visited node, features computed at
    visit time, label 1 iff that node's candidate was committed.
    """
    labels: list[NodeLabel] = []
    stats = _run_pass(aig, params or PassParams(), labels_out=labels)
    return labels, stats


def relative_difference(m_new: float, m_base: float) -> float:
    """Signed percentage difference of a metric against a baseline."""
    if m_base == 0:
        raise ZeroDivisionError("baseline metric is zero")
    return (m_new - m_base) / m_base * 100.0


def _run_pass(aig: Aig, params: PassParams, keep_prob=None,
              labels_out=None, t0=None) -> PassStats:
    if t0 is None:
        t0 = time.perf_counter()
    stats = PassStats()
    stats.and_before = aig.num_ands
    stats.level_before = aig.depth()
    snapshot = aig.live_ands()
    refs, level = aig.refs, aig.level
    threshold = params.threshold
    for n in snapshot:
        if aig.is_dead(n) or refs[n] == 0:
            continue  # swept by an earlier commit (or unreferenced)
        stats.visited += 1
        if keep_prob is not None and keep_prob.get(n, 1.0) < threshold:
            stats.skipped += 1
            continue
        stats.attempted += 1
        cut = reconv_cut(aig, n, params.max_leaves)
        feats = extract_features(aig, cut) if labels_out is not None else None
        cand = eval_refactor(aig, cut)
        committed = False
        if cand is not None:
            accept = (cand.gain > 0 or (params.zero_cost and cand.gain == 0)) \
                and (not params.preserve_level or cand.new_level <= level[n]) \
                and cand.new_root >> 1 != n
            if accept:
                commit_candidate(aig, n, cand)
                stats.committed += 1
                stats.total_gain += cand.gain
                committed = True
            else:
                discard_candidate(aig, cand)
        if labels_out is not None:
            labels_out.append(NodeLabel(n, feats, int(committed)))
    stats.and_after = aig.num_ands
    stats.level_after = aig.depth()
    stats.wall_time = time.perf_counter() - t0
    return stats
