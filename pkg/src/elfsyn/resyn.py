"""Refactoring kernel: truth table -> irredundant SOP -> factored form -> AIG.

`eval_refactor` speculatively builds the factored replacement through the
structural hash, then measures exactly how many nodes a commit would free.
Predicted gain always equals the realized node-count delta: the dying set
is measured with the replacement cone's references already in place, which
is the same fixpoint `Aig.replace_node` sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .aig import FALSE, TRUE, Aig
from .cuts import Cut, cut_truth_table
from .tt import full_mask, var_pattern


# -- sum-of-products covers ------------------------------------------------

@dataclass(frozen=True)
class Cube:
    """Product term: variable i appears positive (negative) if bit i of
    pos_mask (neg_mask) is set.  A variable never appears in both."""
    pos_mask: int
    neg_mask: int

    @property
    def n_lits(self) -> int:
        return (self.pos_mask | self.neg_mask).bit_count()


@dataclass
class SopCover:
    cubes: list[Cube]
    n_vars: int

    @property
    def n_lits(self) -> int:
        return sum(c.n_lits for c in self.cubes)


def cover_to_tt(cover: SopCover) -> int:
    """Evaluate a cover back into a truth table (empty cover is FALSE)."""
    n = cover.n_vars
    mask = full_mask(n)
    out = 0
    for c in cover.cubes:
        bits = mask
        for v in range(n):
            if c.pos_mask >> v & 1:
                bits &= var_pattern(v, n)
            elif c.neg_mask >> v & 1:
                bits &= ~var_pattern(v, n) & mask
        out |= bits
    return out


def isop(tt) -> SopCover:
    """Irredundant sum-of-products via the Minato-Morreale recursion.

    Cofactors on the topmost dependent variable, covers the parts unique to
    each cofactor with that variable's literal, and recurses on what both
    cofactors can share.  No cube of the result can be dropped without
    changing the function.
    """
    cubes = _isop_cubes(tt.bits, tt.n_vars)
    return SopCover([Cube(p, q) for p, q in cubes], tt.n_vars)


def _isop_cubes(bits: int, n_vars: int):
    mask = full_mask(n_vars)
    pos = [var_pattern(v, n_vars) for v in range(n_vars)]
    neg = [~p & mask for p in pos]
    cubes, func = _isop_rec(bits, bits, n_vars, mask, pos, neg)
    assert func == bits
    return cubes


def _isop_rec(lo: int, hi: int, top: int, mask: int, pos: list, neg: list):
    # Cover of some g with lo <= g <= hi, plus g's own table.
    if lo == 0:
        return [], 0
    if hi == mask:
        return [(0, 0)], mask
    v = top - 1
    while True:
        block = 1 << v
        h = lo & pos[v]
        lo1 = h | (h >> block)
        h = lo & neg[v]
        lo0 = h | (h << block)
        h = hi & pos[v]
        hi1 = h | (h >> block)
        h = hi & neg[v]
        hi0 = h | (h << block)
        if lo0 != lo1 or hi0 != hi1:
            break
        v -= 1
    c0, f0 = _isop_rec(lo0 & ~hi1, hi0, v, mask, pos, neg)
    c1, f1 = _isop_rec(lo1 & ~hi0, hi1, v, mask, pos, neg)
    lo_rest = (lo0 & ~f0) | (lo1 & ~f1)
    cr, fr = _isop_rec(lo_rest, hi0 & hi1, v, mask, pos, neg)
    bit = 1 << v
    cubes = [(p, q | bit) for p, q in c0]
    cubes += [(p | bit, q) for p, q in c1]
    cubes += cr
    func = fr | (f0 & neg[v]) | (f1 & pos[v])
    return cubes, func


# -- algebraic factoring -----------------------------------------------------

@dataclass(frozen=True)
class FLit:
    var: int
    compl: bool


@dataclass(frozen=True)
class FAnd:
    a: object
    b: object


@dataclass(frozen=True)
class FOr:
    a: object
    b: object


FactorTree = FLit | FAnd | FOr


def tree_n_lits(tree: FactorTree) -> int:
    if isinstance(tree, FLit):
        return 1
    return tree_n_lits(tree.a) + tree_n_lits(tree.b)


def tree_to_tt(tree: FactorTree, n_vars: int) -> int:
    mask = full_mask(n_vars)
    if isinstance(tree, FLit):
        vp = var_pattern(tree.var, n_vars)
        return ~vp & mask if tree.compl else vp
    a = tree_to_tt(tree.a, n_vars)
    b = tree_to_tt(tree.b, n_vars)
    return a & b if isinstance(tree, FAnd) else a | b


def factor(cover: SopCover) -> FactorTree:
    """Quick algebraic factoring of a non-constant cover.

    Divides by the best literal, escalating to a quickly extracted level-0
    kernel when one exists, and recurses on quotient and remainder.  The
    result computes the same function and never has more literals than the
    cover.
    """
    cubes = _absorb([(c.pos_mask, c.neg_mask) for c in cover.cubes])
    if not cubes or cubes == [(0, 0)]:
        raise ValueError("constant cover cannot be factored")
    return _gf(cubes, cover.n_vars)


def _absorb(cubes):
    """Drop duplicates and any cube containing another (absorption)."""
    out = []
    for i, c in enumerate(cubes):
        absorbed = False
        for j, d in enumerate(cubes):
            if i == j or not _cube_le(d, c):
                continue
            if d != c or j < i:
                absorbed = True
                break
        if not absorbed:
            out.append(c)
    return out


def _cube_le(d, c):
    # d's literals are a subset of c's (d covers every minterm of c)
    return d[0] & ~c[0] == 0 and d[1] & ~c[1] == 0


def _lit_counts(cubes, n_vars):
    counts = [0] * (2 * n_vars)
    for p, q in cubes:
        while p:
            counts[2 * ((p & -p).bit_length() - 1)] += 1
            p &= p - 1
        while q:
            counts[2 * ((q & -q).bit_length() - 1) + 1] += 1
            q &= q - 1
    return counts


def _best_lit(counts):
    # most frequent literal appearing at least twice; ties fall to the
    # lowest variable, positive polarity first
    best = None
    best_cnt = 1
    for i, cnt in enumerate(counts):
        if cnt > best_cnt:
            best, best_cnt = i, cnt
    if best is None:
        return None
    return best >> 1, bool(best & 1)


def _div_lit(cubes, v, neg):
    bit = 1 << v
    quot, rest = [], []
    for c in cubes:
        if (c[1] if neg else c[0]) >> v & 1:
            quot.append((c[0], c[1] & ~bit) if neg else (c[0] & ~bit, c[1]))
        else:
            rest.append(c)
    return quot, rest


def _quick_divisor(cubes, n_vars):
    """A level-0 kernel found by repeated division by frequent literals."""
    if len(cubes) <= 1:
        return None
    d = cubes
    divided = False
    while True:
        pick = _best_lit(_lit_counts(d, n_vars))
        if pick is None:
            break
        d, _ = _div_lit(d, *pick)
        divided = True
    return d if divided else None


def _weak_div(cubes, divisor):
    """Algebraic division: cubes = quotient x divisor + remainder."""
    qsets = []
    for dp, dq in divisor:
        s = {(p & ~dp, q & ~dq) for p, q in cubes
             if dp & ~p == 0 and dq & ~q == 0}
        qsets.append(s)
    quot = set.intersection(*qsets)
    quotient = sorted(quot)
    if not quotient:
        return [], list(cubes)
    products = {(qp | dp, qn | dq) for qp, qn in quot for dp, dq in divisor}
    remainder = [c for c in cubes if c not in products]
    return quotient, remainder


def _common_cube(cubes):
    p = q = ~0
    for cp, cq in cubes:
        p &= cp
        q &= cq
    return p, q


def _gf(cubes, n_vars) -> FactorTree:
    if len(cubes) == 1:
        return _cube_tree(cubes[0])
    divisor = _quick_divisor(cubes, n_vars)
    if divisor is None:
        return _reduce([_cube_tree(c) for c in cubes], FOr)
    quotient, _ = _weak_div(cubes, divisor)
    if not quotient or quotient == [(0, 0)]:
        return _reduce([_cube_tree(c) for c in cubes], FOr)
    if len(quotient) == 1:
        return _lf(cubes, quotient[0], n_vars)
    common = _common_cube(quotient)
    qfree = [(p & ~common[0], q & ~common[1]) for p, q in quotient]
    d1, r1 = _weak_div(cubes, qfree)
    dc = _common_cube(d1)
    if dc != (0, 0):
        return _lf(cubes, dc, n_vars)
    node = FAnd(_gf(qfree, n_vars), _gf(d1, n_vars))
    return FOr(node, _gf(r1, n_vars)) if r1 else node


def _lf(cubes, cube, n_vars) -> FactorTree:
    """Factor out the most frequent literal of `cube`."""
    counts = _lit_counts(cubes, n_vars)
    pick = None
    best_cnt = 0
    for i in range(2 * n_vars):
        if (cube[1] if i & 1 else cube[0]) >> (i >> 1) & 1 \
                and counts[i] > best_cnt:
            pick, best_cnt = i, counts[i]
    v, neg = pick >> 1, bool(pick & 1)
    quot, rest = _div_lit(cubes, v, neg)
    leaf = FLit(v, neg)
    if quot == [(0, 0)]:
        node = leaf
    else:
        node = FAnd(leaf, _gf(quot, n_vars))
    return FOr(node, _gf(rest, n_vars)) if rest else node


def _cube_tree(cube) -> FactorTree:
    p, q = cube
    lits = []
    v = 0
    while p or q:
        if (p | q) & 1:
            lits.append(FLit(v, bool(q & 1)))
        p >>= 1
        q >>= 1
        v += 1
    assert lits, "empty cube has no tree form"
    return _reduce(lits, FAnd)


def _reduce(nodes, ctor) -> FactorTree:
    """Combine subtrees pairwise per round, keeping the result balanced."""
    while len(nodes) > 1:
        nxt = [ctor(nodes[i], nodes[i + 1])
               for i in range(0, len(nodes) - 1, 2)]
        if len(nodes) & 1:
            nxt.append(nodes[-1])
        nodes = nxt
    return nodes[0]


# -- building the factored form into the graph -------------------------------

class _BudgetExceeded(Exception):
    pass


def build_factored_subgraph(aig: Aig, tree: FactorTree, leaf_lits: list[int]):
    """Materialize the tree bottom-up through the structural hash.

    OR nodes become inverted ANDs of inverted operands.  Returns the root
    literal and the number of AND nodes actually created; hash hits on live
    nodes cost nothing.
    """
    lit, created = _build(aig, tree, leaf_lits, None)
    return lit, len(created)


def _build(aig: Aig, tree: FactorTree, leaf_lits, budget):
    created: list[int] = []

    def go(node):
        if isinstance(node, FLit):
            return leaf_lits[node.var] ^ node.compl
        a = go(node.a)
        b = go(node.b)
        before = aig.created
        if isinstance(node, FAnd):
            out = aig.add_and(a, b)
        else:
            out = aig.add_and(a ^ 1, b ^ 1) ^ 1
        if aig.created > before:
            created.append(out >> 1)
            if budget is not None and len(created) > budget:
                raise _BudgetExceeded
        return out

    try:
        lit = go(tree)
    except _BudgetExceeded:
        _undo(aig, created)
        return None, created
    return lit, created


def _undo(aig: Aig, created: list[int]) -> None:
    for n in reversed(created):
        assert aig.refs[n] == 0
        aig._kill(n)


# -- candidate evaluation -----------------------------------------------------

# Factored forms are pure functions of the cut truth table, and arithmetic
# circuits repeat the same slice functions thousands of times, so the
# tt -> tree mapping is memoized.  Entries: const literal, leaf reference,
# or a factored tree with its polarity.
_CACHE_LIMIT = 1 << 18
_tree_cache: dict[tuple[int, int], tuple] = {}


def _resynthesize(bits: int, n: int):
    key = (bits, n)
    hit = _tree_cache.get(key)
    if hit is not None:
        return hit
    mask = full_mask(n)
    result = None
    if bits == 0:
        result = ("const", FALSE)
    elif bits == mask:
        result = ("const", TRUE)
    else:
        for j in range(n):
            vp = var_pattern(j, n)
            if bits == vp:
                result = ("leaf", j, 0)
                break
            if bits == ~vp & mask:
                result = ("leaf", j, 1)
                break
    if result is None:
        cubes_p = _isop_cubes(bits, n)
        cubes_n = _isop_cubes(~bits & mask, n)
        lits_p = sum((p | q).bit_count() for p, q in cubes_p)
        lits_n = sum((p | q).bit_count() for p, q in cubes_n)
        compl = (len(cubes_n), lits_n) < (len(cubes_p), lits_p)
        cubes = cubes_n if compl else cubes_p
        result = ("tree", _gf(cubes, n), int(compl))
    if len(_tree_cache) >= _CACHE_LIMIT:
        _tree_cache.clear()
    _tree_cache[key] = result
    return result


@dataclass
class Candidate:
    """Speculative replacement for a cut root, not yet committed."""
    new_root: int        # literal
    gain: int            # nodes freed minus nodes added on commit
    new_level: int
    n_new: int
    dying: int           # nodes freed on commit
    created: list[int]   # speculative node ids, swept on discard


def eval_refactor(aig: Aig, cut: Cut) -> Candidate | None:
    """Resynthesize the cut function and price the replacement.

    Returns None when the rebuild was abandoned (budget exceeded, or the
    replacement cone would reach back through the root); the graph is left
    exactly as found in that case.  Constant and single-literal functions
    bypass factoring.
    """
    tt = cut_truth_table(aig, cut)
    root = cut.root
    plan = _resynthesize(tt.bits, tt.n_vars)
    created: list[int] = []
    if plan[0] == "const":
        new_lit = plan[1]
    elif plan[0] == "leaf":
        new_lit = 2 * cut.leaves[plan[1]] + plan[2]
    else:
        budget = aig.mffc_size(root)
        leaf_lits = [2 * leaf for leaf in cut.leaves]
        new_lit, created = _build(aig, plan[1], leaf_lits, budget)
        if new_lit is None:
            return None
        new_lit ^= plan[2]
    if new_lit >> 1 == root:
        return Candidate(new_lit, 0, aig.level[root], 0, 0, [])
    if aig.cone_contains(new_lit >> 1, root):
        _undo(aig, created)
        return None
    dying = aig.dying_count(root, new_lit)
    return Candidate(new_lit, dying - len(created), aig.level[new_lit >> 1],
                     len(created), dying, created)


def commit_candidate(aig: Aig, root: int, cand: Candidate) -> int:
    """Redirect the root onto the candidate; returns the realized delta."""
    swept = aig.replace_node(root, cand.new_root)
    assert swept == cand.dying
    return swept - cand.n_new


def discard_candidate(aig: Aig, cand: Candidate) -> None:
    """Sweep the candidate's speculative nodes; restores live counts."""
    _undo(aig, cand.created)
