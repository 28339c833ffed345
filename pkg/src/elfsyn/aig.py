"""Mutable And-Inverter Graph with structural hashing and reference counts.

Literals are plain ints encoded AIGER-style as ``2 * node + complement``.
Node 0 is the constant-FALSE node, so literal 0 is FALSE and literal 1 is
TRUE.  Nodes are never compacted in place: replaced or unreferenced AND
nodes are tombstoned and their ids are left unused until the graph is
written out (the writer renumbers).
"""

from __future__ import annotations

FALSE = 0
TRUE = 1

_NIL = -1   # fanin marker for constant / primary-input nodes
_DEAD = -2  # fanin marker for tombstoned nodes


def lit(node: int, compl: bool = False) -> int:
    return 2 * node + int(compl)


def lit_node(l: int) -> int:
    return l >> 1


def lit_compl(l: int) -> bool:
    return bool(l & 1)


def lit_neg(l: int) -> int:
    return l ^ 1


class CycleError(ValueError):
    """Replacement would make the replaced node reachable from itself."""


class Aig:
    """AND-inverter graph over int literals.

    Mutating operations require exclusive access; read-only queries may run
    concurrently between mutations.  All bookkeeping (levels, fanout lists,
    reference counts, the structural-hash table) is maintained incrementally
    so queries never trigger recomputation.
    """

    def __init__(self):
        # Parallel per-node tables, index = node id.  Node 0 is constant FALSE.
        self.fanin0 = [_NIL]
        self.fanin1 = [_NIL]
        self.level = [0]
        self.refs = [0]          # live references: AND fanin edges + PO edges
        self.fanouts = [[]]      # AND node ids, one entry per fanin edge
        self.pis: list[int] = []
        self.pos: list[int] = []  # output literals
        self.num_ands = 0        # live (non-tombstoned) AND nodes
        self.created = 0         # monotonic count of AND creations
        self._pi_set: set[int] = set()
        self._strash: dict[tuple[int, int], int] = {}

    # -- node kind queries ------------------------------------------------

    def is_const(self, n: int) -> bool:
        return n == 0

    def is_pi(self, n: int) -> bool:
        return n in self._pi_set

    def is_and(self, n: int) -> bool:
        return self.fanin0[n] >= 0

    def is_dead(self, n: int) -> bool:
        return self.fanin0[n] == _DEAD

    def fanin_lits(self, n: int) -> tuple[int, int]:
        return self.fanin0[n], self.fanin1[n]

    def live_ands(self):
        """Live AND node ids in ascending order."""
        fanin0 = self.fanin0
        return [n for n in range(1, len(fanin0)) if fanin0[n] >= 0]

    @property
    def num_nodes(self) -> int:
        return len(self.fanin0)

    # -- construction -----------------------------------------------------

    def add_pi(self) -> int:
        """Append a primary input; returns its (positive) literal."""
        n = self._new_node()
        self._pi_set.add(n)
        self.pis.append(n)
        return 2 * n

    def add_po(self, l: int) -> int:
        """Register literal `l` as a primary output; returns the PO index."""
        self._check_live_lit(l)
        self.pos.append(l)
        self.refs[l >> 1] += 1
        return len(self.pos) - 1

    def add_and_raw(self, a: int, b: int) -> int:
        """Append an AND node without folding or hashing (parser/tests).

        The strash table still learns the node so later `add_and` calls can
        reuse it, but an existing entry for the same fanin pair is kept.
        """
        self._check_live_lit(a)
        self._check_live_lit(b)
        n = self._new_node()
        self._init_and(n, a, b)
        return 2 * n

    def add_and(self, a: int, b: int) -> int:
        """Structurally hashed AND of two literals.

        Applies the constant/idempotence folds, then reuses an existing node
        with the same canonical fanin pair when one is live; otherwise a new
        node is created with correct level, refcount and fanout links.
        """
        self._check_live_lit(a)
        self._check_live_lit(b)
        if a > b:
            a, b = b, a
        if a == b:
            return a               # x & x
        if a == (b ^ 1):
            return FALSE           # x & ~x
        if a == FALSE:
            return FALSE
        if a == TRUE:
            return b
        hit = self._strash.get((a, b))
        if hit is not None:
            return 2 * hit
        n = self._new_node()
        self._init_and(n, a, b)
        return 2 * n

    def _new_node(self) -> int:
        self.fanin0.append(_NIL)
        self.fanin1.append(_NIL)
        self.level.append(0)
        self.refs.append(0)
        self.fanouts.append([])
        return len(self.fanin0) - 1

    def _init_and(self, n: int, a: int, b: int) -> None:
        self.fanin0[n] = a
        self.fanin1[n] = b
        self.level[n] = 1 + max(self.level[a >> 1], self.level[b >> 1])
        self.refs[a >> 1] += 1
        self.refs[b >> 1] += 1
        self.fanouts[a >> 1].append(n)
        self.fanouts[b >> 1].append(n)
        self.num_ands += 1
        self.created += 1
        self._strash.setdefault(self._key(a, b), n)

    @staticmethod
    def _key(a: int, b: int) -> tuple[int, int]:
        return (a, b) if a <= b else (b, a)

    def _check_live_lit(self, l: int) -> None:
        n = l >> 1
        if n >= len(self.fanin0) or self.fanin0[n] == _DEAD:
            raise ValueError(f"literal {l} references a dead or unknown node")

    # -- levels -----------------------------------------------------------

    def compute_levels(self) -> int:
        """Recompute every live node's level; returns the graph depth.

        Depth is the maximum level over nodes feeding primary outputs.
        Raises ValueError if the fanin relation is cyclic (malformed input).
        """
        level = self.level
        fanin0, fanin1 = self.fanin0, self.fanin1
        done = bytearray(len(fanin0))
        for n in self.pis:
            level[n] = 0
            done[n] = 2
        done[0] = 2
        for root in range(1, len(fanin0)):
            if fanin0[root] < 0 or done[root]:
                continue
            stack = [root]
            while stack:
                n = stack[-1]
                if done[n] == 2:
                    stack.pop()
                    continue
                f0, f1 = fanin0[n] >> 1, fanin1[n] >> 1
                unfinished = [f for f in (f0, f1) if done[f] != 2]
                if not unfinished:
                    level[n] = 1 + max(level[f0], level[f1])
                    done[n] = 2
                    stack.pop()
                    continue
                if done[n] == 1:
                    # children pushed earlier did not complete: a fanin path
                    # leads back to this node
                    raise ValueError("cyclic fanin relation")
                done[n] = 1
                stack.extend(f for f in unfinished if done[f] == 0)
        return self.depth()

    def depth(self) -> int:
        """Maximum level over nodes feeding primary outputs."""
        level = self.level
        return max((level[po >> 1] for po in self.pos), default=0)

    def _propagate_level(self, start: int) -> None:
        # Push exact levels upward after a fanin patch; terminates because
        # each node is re-examined only when a fanin's level changed.
        queue = [start]
        while queue:
            n = queue.pop()
            for f in self.fanouts[n]:
                nl = 1 + max(self.level[self.fanin0[f] >> 1],
                             self.level[self.fanin1[f] >> 1])
                if nl != self.level[f]:
                    self.level[f] = nl
                    queue.append(f)

    # -- MFFC and trial dereferencing --------------------------------------

    def mffc_size(self, node: int) -> int:
        """Number of AND nodes (node included) freed if `node` lost all fanout.

        Computed by trial reference-decrement; refcounts are restored exactly
        before returning, so the graph is observationally unchanged.
        """
        if not self.is_and(node):
            return 0
        count = 1 + self._deref(node)
        self._ref(node)
        return count

    def _deref(self, node: int) -> int:
        """Decrement the fanin cone as if `node` died; returns ANDs hitting 0."""
        refs = self.refs
        fanin0, fanin1 = self.fanin0, self.fanin1
        count = 0
        stack = [node]
        while stack:
            n = stack.pop()
            for f in (fanin0[n] >> 1, fanin1[n] >> 1):
                refs[f] -= 1
                if refs[f] == 0 and fanin0[f] >= 0:
                    count += 1
                    stack.append(f)
        return count

    def _ref(self, node: int) -> None:
        """Exact inverse of `_deref`."""
        refs = self.refs
        fanin0, fanin1 = self.fanin0, self.fanin1
        stack = [node]
        while stack:
            n = stack.pop()
            for f in (fanin0[n] >> 1, fanin1[n] >> 1):
                if refs[f] == 0 and fanin0[f] >= 0:
                    stack.append(f)
                refs[f] += 1

    def dying_count(self, node: int, new_lit: int) -> int:
        """ANDs that die when every reference to `node` moves to `new_lit`.

        Matches what `replace_node(node, new_lit)` will sweep: the moved
        references keep the replacement cone alive during the trial.  State
        is restored exactly.
        """
        new_node = new_lit >> 1
        if new_node == node:
            return 0
        k = self.refs[node]
        self.refs[new_node] += k
        count = 1 + self._deref(node)
        self._ref(node)
        self.refs[new_node] -= k
        return count

    # -- replacement and sweeping ------------------------------------------

    def cone_contains(self, start: int, target: int) -> bool:
        """True if `target` lies in the fanin cone of node `start`.

        Prunes on exact levels: a cone can only contain strictly
        lower-level nodes.
        """
        if start == target:
            return True
        tl = self.level[target]
        fanin0, fanin1, level = self.fanin0, self.fanin1, self.level
        seen = set()
        stack = [start]
        while stack:
            n = stack.pop()
            if n == target:
                return True
            if level[n] <= tl or fanin0[n] < 0 or n in seen:
                continue
            seen.add(n)
            stack.append(fanin0[n] >> 1)
            stack.append(fanin1[n] >> 1)
        return False

    def replace_node(self, old: int, new_lit: int) -> int:
        """Redirect every reference to `old` onto `new_lit` and sweep.

        Complemented edges are preserved (an inverted reference to `old`
        becomes an inverted reference to `new_lit`).  AND nodes whose
        refcount drops to zero are recursively tombstoned.  Returns the
        number of AND nodes swept.
        """
        if not self.is_and(old):
            raise ValueError(f"node {old} is not a live AND node")
        new_node = new_lit >> 1
        if self.is_dead(new_node):
            raise ValueError("replacement literal is dead")
        if new_node == old:
            return 0
        if self.cone_contains(new_node, old):
            raise CycleError(f"literal {new_lit} depends on node {old}")
        for i, po in enumerate(self.pos):
            if po >> 1 == old:
                self.pos[i] = new_lit ^ (po & 1)
                self.refs[old] -= 1
                self.refs[new_node] += 1
        users = self.fanouts[old]
        self.fanouts[old] = []
        for f in users:
            self._patch_fanin(f, old, new_lit)
        assert self.refs[old] == 0
        return self._sweep(old)

    def _patch_fanin(self, f: int, old: int, new_lit: int) -> None:
        fanin0, fanin1 = self.fanin0, self.fanin1
        if fanin0[f] >> 1 != old and fanin1[f] >> 1 != old:
            return  # second fanout-list entry of a node already fully patched
        key = self._key(fanin0[f], fanin1[f])
        if self._strash.get(key) == f:
            del self._strash[key]
        new_node = new_lit >> 1
        moved = 0
        if fanin0[f] >> 1 == old:
            fanin0[f] = new_lit ^ (fanin0[f] & 1)
            moved += 1
        if fanin1[f] >> 1 == old:
            fanin1[f] = new_lit ^ (fanin1[f] & 1)
            moved += 1
        self.refs[old] -= moved
        self.refs[new_node] += moved
        self.fanouts[new_node].extend([f] * moved)
        # A patched node may now duplicate an existing entry's key; the
        # existing node keeps the slot and the duplicate goes unhashed so
        # that sweeps stay exactly the predicted dying set.
        self._strash.setdefault(self._key(fanin0[f], fanin1[f]), f)
        nl = 1 + max(self.level[fanin0[f] >> 1], self.level[fanin1[f] >> 1])
        if nl != self.level[f]:
            self.level[f] = nl
            self._propagate_level(f)

    def _sweep(self, root: int) -> int:
        """Tombstone `root` and cascade through fanins hitting refcount 0."""
        refs, fanin0, fanin1 = self.refs, self.fanin0, self.fanin1
        dead = 0
        stack = [root]
        while stack:
            n = stack.pop()
            if refs[n] != 0 or fanin0[n] < 0:
                continue
            f0, f1 = fanin0[n], fanin1[n]
            self._kill(n)
            dead += 1
            for fl in (f0, f1):
                fn = fl >> 1
                if refs[fn] == 0 and fanin0[fn] >= 0:
                    stack.append(fn)
        return dead

    def _kill(self, n: int) -> None:
        """Tombstone one AND node, detaching it from fanins (no cascade)."""
        f0, f1 = self.fanin0[n], self.fanin1[n]
        key = self._key(f0, f1)
        if self._strash.get(key) == n:
            del self._strash[key]
        self.fanin0[n] = _DEAD
        self.fanin1[n] = _DEAD
        for fl in (f0, f1):
            fn = fl >> 1
            self.refs[fn] -= 1
            self.fanouts[fn].remove(n)
        self.num_ands -= 1
