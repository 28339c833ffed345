"""AIGER v1 reader/writer (ASCII "aag" and binary "aig", combinational only).

Binary AND rows use the standard 7-bit little-endian variable-length delta
encoding.  Parsing never merges structural duplicates, so declared node
counts survive a parse/write round trip.  Symbol tables and comment
sections are skipped.
"""

from __future__ import annotations

from .aig import Aig

_UNDEF = -3


class AigerError(ValueError):
    """Malformed or unsupported AIGER content."""


def parse_aiger(data: bytes) -> Aig:
    """Build an Aig from raw AIGER file content (ASCII or binary)."""
    if data.startswith(b"aag"):
        return _parse_ascii(data)
    if data.startswith(b"aig"):
        return _parse_binary(data)
    raise AigerError("not an AIGER file (missing aag/aig magic)")


def read_aiger(path) -> Aig:
    with open(path, "rb") as fh:
        return parse_aiger(fh.read())


def write_aiger(aig: Aig, binary: bool = True) -> bytes:
    """Serialize the graph; dead nodes are dropped and ids renumbered.

    Only nodes reachable from the primary outputs are emitted, in
    topological order as the binary format requires.
    """
    order = _reachable_topo(aig)
    remap = {0: 0}
    for i, n in enumerate(aig.pis):
        remap[n] = i + 1
    next_var = len(aig.pis) + 1
    for n in order:
        remap[n] = next_var
        next_var += 1

    def map_lit(l: int) -> int:
        return 2 * remap[l >> 1] + (l & 1)

    n_in, n_and = len(aig.pis), len(order)
    m = n_in + n_and
    out = bytearray()
    magic = b"aig" if binary else b"aag"
    out += b"%s %d %d 0 %d %d\n" % (magic, m, n_in, len(aig.pos), n_and)
    if not binary:
        for i in range(n_in):
            out += b"%d\n" % (2 * (i + 1))
    for po in aig.pos:
        out += b"%d\n" % map_lit(po)
    for n in order:
        lhs = 2 * remap[n]
        a, b = map_lit(aig.fanin0[n]), map_lit(aig.fanin1[n])
        if a < b:
            a, b = b, a
        if binary:
            out += _encode_delta(lhs - a)
            out += _encode_delta(a - b)
        else:
            out += b"%d %d %d\n" % (lhs, a, b)
    return bytes(out)


def _reachable_topo(aig: Aig) -> list[int]:
    """AND nodes reachable from the POs, fanins before fanouts."""
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


def _encode_delta(delta: int) -> bytes:
    chunk = bytearray()
    while delta >= 0x80:
        chunk.append(0x80 | (delta & 0x7F))
        delta >>= 7
    chunk.append(delta)
    return bytes(chunk)


def _parse_header(line: bytes, magic: bytes) -> tuple[int, int, int, int, int]:
    parts = line.split()
    if len(parts) != 6 or parts[0] != magic:
        raise AigerError(f"malformed header: {line!r}")
    try:
        m, i, l, o, a = (int(p) for p in parts[1:])
    except ValueError:
        raise AigerError(f"malformed header: {line!r}") from None
    if min(m, i, l, o, a) < 0:
        raise AigerError(f"malformed header: {line!r}")
    if l > 0:
        raise AigerError("sequential AIGs (L > 0) are not supported")
    return m, i, l, o, a


def _parse_ascii(data: bytes) -> Aig:
    lines = data.split(b"\n")
    m, n_in, _, n_out, n_and = _parse_header(lines[0], b"aag")
    body = lines[1:]
    needed = n_in + n_out + n_and
    if len(body) < needed:
        raise AigerError("truncated file body")

    max_lit = 2 * m + 1
    kind = [_UNDEF] * (m + 1)   # var -> _UNDEF | node marker
    kind[0] = 0

    def parse_lit(tok: bytes, what: str) -> int:
        try:
            v = int(tok)
        except ValueError:
            raise AigerError(f"bad {what} literal: {tok!r}") from None
        if v < 0 or v > max_lit:
            raise AigerError(f"{what} literal {v} exceeds maximum {max_lit}")
        return v

    pi_vars = []
    for row in range(n_in):
        v = parse_lit(body[row].strip(), "input")
        if v < 2 or v & 1:
            raise AigerError(f"invalid input literal {v}")
        if kind[v >> 1] != _UNDEF:
            raise AigerError(f"variable {v >> 1} defined twice")
        kind[v >> 1] = 1
        pi_vars.append(v >> 1)
    po_lits = [parse_lit(body[n_in + row].strip(), "output")
               for row in range(n_out)]
    and_rows = []
    for row in range(n_and):
        toks = body[n_in + n_out + row].split()
        if len(toks) != 3:
            raise AigerError(f"malformed AND row: {body[n_in + n_out + row]!r}")
        lhs = parse_lit(toks[0], "AND")
        rhs0 = parse_lit(toks[1], "AND fanin")
        rhs1 = parse_lit(toks[2], "AND fanin")
        if lhs < 2 or lhs & 1:
            raise AigerError(f"invalid AND literal {lhs}")
        if kind[lhs >> 1] != _UNDEF:
            raise AigerError(f"variable {lhs >> 1} defined twice")
        kind[lhs >> 1] = 2
        and_rows.append((lhs >> 1, rhs0, rhs1))
    return _build(m, pi_vars, po_lits, and_rows, kind)


def _parse_binary(data: bytes) -> Aig:
    nl = data.find(b"\n")
    if nl < 0:
        raise AigerError("truncated header")
    m, n_in, _, n_out, n_and = _parse_header(data[:nl], b"aig")
    if m != n_in + n_and:
        raise AigerError("binary AIGER requires M = I + A")
    pos = nl + 1
    po_lits = []
    max_lit = 2 * m + 1
    for _ in range(n_out):
        nl = data.find(b"\n", pos)
        if nl < 0:
            raise AigerError("truncated output section")
        try:
            v = int(data[pos:nl])
        except ValueError:
            raise AigerError("bad output literal") from None
        if v < 0 or v > max_lit:
            raise AigerError(f"output literal {v} exceeds maximum {max_lit}")
        po_lits.append(v)
        pos = nl + 1

    def decode_delta(at: int) -> tuple[int, int]:
        value, shift = 0, 0
        while True:
            if at >= len(data):
                raise AigerError("truncated binary delta stream")
            byte = data[at]
            at += 1
            value |= (byte & 0x7F) << shift
            if not byte & 0x80:
                return value, at
            shift += 7

    kind = [_UNDEF] * (m + 1)
    kind[0] = 0
    pi_vars = list(range(1, n_in + 1))
    for v in pi_vars:
        kind[v] = 1
    and_rows = []
    for k in range(n_and):
        var = n_in + 1 + k
        lhs = 2 * var
        d0, pos = decode_delta(pos)
        d1, pos = decode_delta(pos)
        rhs0 = lhs - d0
        rhs1 = rhs0 - d1
        if d0 == 0 or rhs1 < 0:
            raise AigerError(f"invalid deltas for AND {lhs}")
        kind[var] = 2
        and_rows.append((var, rhs0, rhs1))
    return _build(m, pi_vars, po_lits, and_rows, kind)


def _build(m, pi_vars, po_lits, and_rows, kind) -> Aig:
    aig = Aig()
    # Lay out one node per declared variable so internal ids match the file.
    for _ in range(m):
        aig._new_node()
    for v in pi_vars:
        aig._pi_set.add(v)
        aig.pis.append(v)
    for var, rhs0, rhs1 in and_rows:
        for rhs in (rhs0, rhs1):
            if kind[rhs >> 1] == _UNDEF:
                raise AigerError(f"fanin literal {rhs} references an "
                                 f"undefined variable")
        aig.fanin0[var] = rhs0
        aig.fanin1[var] = rhs1
        aig.refs[rhs0 >> 1] += 1
        aig.refs[rhs1 >> 1] += 1
        aig.fanouts[rhs0 >> 1].append(var)
        aig.fanouts[rhs1 >> 1].append(var)
        aig._strash.setdefault(aig._key(rhs0, rhs1), var)
    aig.num_ands = len(and_rows)
    aig.created = len(and_rows)
    for l in po_lits:
        if kind[l >> 1] == _UNDEF:
            raise AigerError(f"output literal {l} references an "
                             f"undefined variable")
        aig.pos.append(l)
        aig.refs[l >> 1] += 1
    try:
        aig.compute_levels()
    except ValueError as exc:
        raise AigerError(str(exc)) from None
    return aig
