"""Six structural cut features, accumulated from the cut's volume in one pass.

Serialization order is fixed everywhere (files, model inputs):
root_fanout, root_level, cut_fanout, cut_size, n_reconv, n_leaves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aig import Aig
from .cuts import Cut, reconv_cut

FEATURE_NAMES = ("root_fanout", "root_level", "cut_fanout", "cut_size",
                 "n_reconv", "n_leaves")


@dataclass(frozen=True)
class FeatureVector:
    root_fanout: int
    root_level: int
    total_cut_fanout: int
    cut_size: int
    n_reconvergent: int
    n_leaves: int

    def as_tuple(self) -> tuple[int, int, int, int, int, int]:
        return (self.root_fanout, self.root_level, self.total_cut_fanout,
                self.cut_size, self.n_reconvergent, self.n_leaves)


def _volume_edge_tally(aig: Aig, cut: Cut) -> dict[int, int]:
    """Edges into the volume, keyed by source node (leaf or volume node)."""
    tally: dict[int, int] = {}
    fanin0, fanin1 = aig.fanin0, aig.fanin1
    for v in cut.volume:
        for f in (fanin0[v] >> 1, fanin1[v] >> 1):
            tally[f] = tally.get(f, 0) + 1
    return tally


def count_reconvergent(aig: Aig, cut: Cut) -> int:
    """Nodes from which two distinct paths inside the cut reconverge.

    With a single root this is exactly the nodes (leaves included, root
    excluded) with two or more fanout edges into the volume.
    """
    tally = _volume_edge_tally(aig, cut)
    return sum(1 for n, c in tally.items() if c >= 2)


def extract_features(aig: Aig, cut: Cut) -> FeatureVector:
    """Features of one cut; PO references count as fanout edges.

    The cut's total fanout counts edges leaving the volume (source inside,
    target outside), which includes every fanout edge of the root.
    """
    tally = _volume_edge_tally(aig, cut)
    refs = aig.refs
    total = sum(refs[v] - tally.get(v, 0) for v in cut.volume)
    return FeatureVector(
        root_fanout=refs[cut.root],
        root_level=aig.level[cut.root],
        total_cut_fanout=total,
        cut_size=len(cut.volume),
        n_reconvergent=sum(1 for c in tally.values() if c >= 2),
        n_leaves=len(cut.leaves),
    )


def collect_all(aig: Aig, max_leaves: int = 10) -> np.ndarray:
    """One feature row per live AND node, ascending node id."""
    ids, matrix = collect_with_ids(aig, max_leaves)
    return matrix


def collect_with_ids(aig: Aig, max_leaves: int = 10):
    ids = aig.live_ands()
    matrix = np.empty((len(ids), 6), dtype=np.float64)
    for row, n in enumerate(ids):
        cut = reconv_cut(aig, n, max_leaves)
        matrix[row] = extract_features(aig, cut).as_tuple()
    return ids, matrix
