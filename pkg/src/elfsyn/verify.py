"""Functional equivalence checking by bit-parallel random simulation.

Patterns are packed into big ints, 64-aligned, one bitmask per primary
input; a single pass over the graph evaluates every pattern at once.
Graphs are compared PO by PO, PIs paired by position.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .aig import Aig


@dataclass
class SimPattern:
    n_patterns: int
    values: list[int]    # one n_patterns-wide bitmask per PI, by PI position


@dataclass
class EquivResult:
    equivalent: bool
    po_index: int | None = None
    pattern: list[int] | None = None   # per-PI bit values of the mismatch

    def __bool__(self) -> bool:
        return self.equivalent


def random_patterns(n_pis: int, n_patterns: int, seed: int = 0) -> SimPattern:
    if n_patterns % 64:
        raise ValueError("pattern count must be a multiple of 64")
    rng = random.Random(seed)
    return SimPattern(n_patterns,
                      [rng.getrandbits(n_patterns) for _ in range(n_pis)])


def simulate(aig: Aig, patterns: SimPattern) -> list[int]:
    """Evaluate all POs under every pattern; returns one bitmask per PO."""
    if len(patterns.values) != len(aig.pis):
        raise ValueError(f"pattern has {len(patterns.values)} inputs, "
                         f"graph has {len(aig.pis)}")
    mask = (1 << patterns.n_patterns) - 1
    value = [0] * aig.num_nodes
    for n, bits in zip(aig.pis, patterns.values):
        value[n] = bits & mask
    fanin0, fanin1 = aig.fanin0, aig.fanin1
    for n in _po_cone_topo(aig):
        f0, f1 = fanin0[n], fanin1[n]
        a = value[f0 >> 1] ^ (mask if f0 & 1 else 0)
        b = value[f1 >> 1] ^ (mask if f1 & 1 else 0)
        value[n] = a & b
    return [value[po >> 1] ^ (mask if po & 1 else 0) for po in aig.pos]


def _po_cone_topo(aig: Aig) -> list[int]:
    fanin0, fanin1 = aig.fanin0, aig.fanin1
    seen = bytearray(aig.num_nodes)
    order: list[int] = []
    for po in aig.pos:
        root = po >> 1
        if seen[root] or fanin0[root] < 0:
            continue
        stack = [root]
        while stack:
            n = stack[-1]
            if seen[n]:
                stack.pop()
                continue
            pending = [f for f in (fanin0[n] >> 1, fanin1[n] >> 1)
                       if not seen[f] and fanin0[f] >= 0]
            if pending:
                stack.extend(pending)
            else:
                seen[n] = 1
                order.append(n)
                stack.pop()
    return order


def _check_interfaces(a: Aig, b: Aig) -> None:
    if len(a.pis) != len(b.pis) or len(a.pos) != len(b.pos):
        raise ValueError(
            f"interface mismatch: {len(a.pis)}/{len(a.pos)} PIs/POs vs "
            f"{len(b.pis)}/{len(b.pos)}")


def _compare(a: Aig, b: Aig, patterns: SimPattern) -> EquivResult:
    out_a = simulate(a, patterns)
    out_b = simulate(b, patterns)
    for po, (wa, wb) in enumerate(zip(out_a, out_b)):
        diff = wa ^ wb
        if diff:
            bit = (diff & -diff).bit_length() - 1
            assignment = [v >> bit & 1 for v in patterns.values]
            return EquivResult(False, po, assignment)
    return EquivResult(True)


def check_equiv_random(a: Aig, b: Aig, n_patterns: int = 65536,
                       seed: int = 0) -> EquivResult:
    """Compare all POs over pseudorandom assignments, in 8192-wide blocks."""
    _check_interfaces(a, b)
    rng = random.Random(seed)
    remaining = n_patterns
    while remaining > 0:
        block = min(remaining, 8192)
        pat = SimPattern(block,
                         [rng.getrandbits(block) for _ in range(len(a.pis))])
        res = _compare(a, b, pat)
        if not res:
            return res
        remaining -= block
    return EquivResult(True)


def check_equiv_exhaustive(a: Aig, b: Aig) -> EquivResult:
    """Sound and complete comparison over all input assignments (<= 16 PIs)."""
    _check_interfaces(a, b)
    n = len(a.pis)
    if n > 16:
        raise ValueError(f"{n} inputs exceed the exhaustive bound of 16")
    width = 1 << n
    from .tt import var_pattern
    pat = SimPattern(max(width, 64),
                     [var_pattern(i, n) for i in range(n)])
    return _compare(a, b, pat)
