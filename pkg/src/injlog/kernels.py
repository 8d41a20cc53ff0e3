"""Search kernels for graph homomorphism queries.

Two interchangeable backends compute the same answers in the same
canonical order (assignments ordered lexicographically, node 0 most
significant):

* "backtrack": iterative backtracking with edge-preservation pruning,
  compiled with numba when available.
* "numpy": vectorized scan over candidate assignment blocks.

The default backend is "backtrack"; setting INJLOG_NO_JIT=1 selects the
pure-numpy path instead.  benchmarks/bench_kernels.py compares the two.

A query takes the source and target adjacency matrices plus a pin array:
pinned[i] >= 0 forces node i to that target node, -1 leaves it free.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    _HAVE_NUMBA = False

JIT_DISABLED = os.environ.get("INJLOG_NO_JIT", "") not in ("", "0")


def _bt_first(src_adj, dst_adj, pinned):
    """First valid assignment in lex order; returns (found, assignment)."""
    s = src_adj.shape[0]
    t = dst_adj.shape[0]
    assign = np.full(s, -1, np.int64)
    nxt = np.zeros(s + 1, np.int64)
    i = 0
    while True:
        if i == s:
            return True, assign
        c = nxt[i]
        lo = pinned[i] if pinned[i] >= 0 else c
        hi = pinned[i] + 1 if pinned[i] >= 0 else t
        if pinned[i] >= 0 and c > 0:
            lo = hi  # pinned candidate already tried
        found = np.int64(-1)
        cand = lo
        while cand < hi:
            ok = True
            if src_adj[i, i] and not dst_adj[cand, cand]:
                ok = False
            j = 0
            while ok and j < i:
                if src_adj[i, j] and not dst_adj[cand, assign[j]]:
                    ok = False
                if src_adj[j, i] and not dst_adj[assign[j], cand]:
                    ok = False
                j += 1
            if ok:
                found = cand
                break
            cand += 1
        if found >= 0:
            assign[i] = found
            nxt[i] = found + 1 if pinned[i] < 0 else 1
            i += 1
            nxt[i] = 0
        else:
            assign[i] = -1
            nxt[i] = 0
            i -= 1
            if i < 0:
                return False, assign


def _bt_count(src_adj, dst_adj, pinned, cap):
    """Number of valid assignments, stopping once cap is reached (cap<0: none)."""
    s = src_adj.shape[0]
    t = dst_adj.shape[0]
    assign = np.full(s, -1, np.int64)
    nxt = np.zeros(s + 1, np.int64)
    total = np.int64(0)
    i = 0
    while True:
        if i == s:
            total += 1
            if cap >= 0 and total >= cap:
                return total
            i -= 1
            if i < 0:
                return total
            continue
        c = nxt[i]
        lo = pinned[i] if pinned[i] >= 0 else c
        hi = pinned[i] + 1 if pinned[i] >= 0 else t
        if pinned[i] >= 0 and c > 0:
            lo = hi
        found = np.int64(-1)
        cand = lo
        while cand < hi:
            ok = True
            if src_adj[i, i] and not dst_adj[cand, cand]:
                ok = False
            j = 0
            while ok and j < i:
                if src_adj[i, j] and not dst_adj[cand, assign[j]]:
                    ok = False
                if src_adj[j, i] and not dst_adj[assign[j], cand]:
                    ok = False
                j += 1
            if ok:
                found = cand
                break
            cand += 1
        if found >= 0:
            assign[i] = found
            nxt[i] = found + 1 if pinned[i] < 0 else 1
            i += 1
            nxt[i] = 0
        else:
            assign[i] = -1
            nxt[i] = 0
            i -= 1
            if i < 0:
                return total


def _bt_fill(src_adj, dst_adj, pinned, out):
    """Fill out (preallocated via _bt_count) with assignments in lex order."""
    s = src_adj.shape[0]
    t = dst_adj.shape[0]
    assign = np.full(s, -1, np.int64)
    nxt = np.zeros(s + 1, np.int64)
    row = 0
    i = 0
    while row < out.shape[0]:
        if i == s:
            out[row] = assign
            row += 1
            i -= 1
            if i < 0:
                return row
            continue
        c = nxt[i]
        lo = pinned[i] if pinned[i] >= 0 else c
        hi = pinned[i] + 1 if pinned[i] >= 0 else t
        if pinned[i] >= 0 and c > 0:
            lo = hi
        found = np.int64(-1)
        cand = lo
        while cand < hi:
            ok = True
            if src_adj[i, i] and not dst_adj[cand, cand]:
                ok = False
            j = 0
            while ok and j < i:
                if src_adj[i, j] and not dst_adj[cand, assign[j]]:
                    ok = False
                if src_adj[j, i] and not dst_adj[assign[j], cand]:
                    ok = False
                j += 1
            if ok:
                found = cand
                break
            cand += 1
        if found >= 0:
            assign[i] = found
            nxt[i] = found + 1 if pinned[i] < 0 else 1
            i += 1
            nxt[i] = 0
        else:
            assign[i] = -1
            nxt[i] = 0
            i -= 1
            if i < 0:
                return row
    return row


if _HAVE_NUMBA and not JIT_DISABLED:
    _bt_first = numba.njit(cache=True)(_bt_first)
    _bt_count = numba.njit(cache=True)(_bt_count)
    _bt_fill = numba.njit(cache=True)(_bt_fill)


_CHUNK = 1 << 16


def _np_blocks(s, t, pinned):
    """Yield (rows, s) assignment blocks covering lex order over free slots."""
    free = [i for i in range(s) if pinned[i] < 0]
    nfree = len(free)
    if t == 0 or (nfree and t**nfree > 1 << 62):
        raise ValueError("assignment space too large for the numpy backend")
    total = t**nfree
    base = np.empty(s, np.int64)
    for i in range(s):
        base[i] = pinned[i] if pinned[i] >= 0 else 0
    weights = [t ** (nfree - 1 - k) for k in range(nfree)]
    start = 0
    while start < total:
        stop = min(start + _CHUNK, total)
        lin = np.arange(start, stop, dtype=np.int64)
        block = np.broadcast_to(base, (stop - start, s)).copy()
        for k, pos in enumerate(free):
            block[:, pos] = (lin // weights[k]) % t
        yield block
        start = stop


def _np_valid(src_adj, dst_adj, block):
    ok = np.ones(block.shape[0], dtype=bool)
    s = src_adj.shape[0]
    for i in range(s):
        for j in range(s):
            if src_adj[i, j]:
                ok &= dst_adj[block[:, i], block[:, j]]
    return ok


def _np_first(src_adj, dst_adj, pinned):
    for block in _np_blocks(src_adj.shape[0], dst_adj.shape[0], pinned):
        ok = _np_valid(src_adj, dst_adj, block)
        hits = np.flatnonzero(ok)
        if hits.size:
            return True, block[hits[0]].copy()
    return False, np.full(src_adj.shape[0], -1, np.int64)


def _np_count(src_adj, dst_adj, pinned, cap):
    total = 0
    for block in _np_blocks(src_adj.shape[0], dst_adj.shape[0], pinned):
        total += int(_np_valid(src_adj, dst_adj, block).sum())
        if cap >= 0 and total >= cap:
            return min(total, cap)
    return total


def _np_list(src_adj, dst_adj, pinned):
    rows = []
    for block in _np_blocks(src_adj.shape[0], dst_adj.shape[0], pinned):
        ok = _np_valid(src_adj, dst_adj, block)
        if ok.any():
            rows.append(block[ok])
    if rows:
        return np.concatenate(rows, axis=0)
    return np.empty((0, src_adj.shape[0]), np.int64)


def _as_query(src_adj, dst_adj, pinned):
    src = np.ascontiguousarray(src_adj, dtype=np.bool_)
    dst = np.ascontiguousarray(dst_adj, dtype=np.bool_)
    s = src.shape[0]
    if pinned is None:
        pins = np.full(s, -1, np.int64)
    else:
        pins = np.ascontiguousarray(pinned, dtype=np.int64)
    if s and pins.size and int(pins.max()) >= dst.shape[0]:
        raise ValueError("pin out of target range")
    return src, dst, pins


def _degenerate(src, dst, pins):
    """Handle empty source/target before touching a backend.

    Returns (handled, first, count, listing)."""
    s, t = src.shape[0], dst.shape[0]
    if s == 0:
        empty = np.empty(0, np.int64)
        return True, (True, empty), 1, empty.reshape(1, 0)
    if t == 0:
        none = np.full(s, -1, np.int64)
        return True, (False, none), 0, np.empty((0, s), np.int64)
    return False, None, 0, None


def hom_first(src_adj, dst_adj, pinned=None, backend: str | None = None):
    """First pin-respecting homomorphism in lex order, or None."""
    src, dst, pins = _as_query(src_adj, dst_adj, pinned)
    handled, first, _, _ = _degenerate(src, dst, pins)
    if handled:
        found, assign = first
        return assign if found else None
    if _pick(backend) == "numpy":
        found, assign = _np_first(src, dst, pins)
    else:
        found, assign = _bt_first(src, dst, pins)
    return assign if found else None


def hom_exists(src_adj, dst_adj, pinned=None, backend: str | None = None) -> bool:
    return hom_first(src_adj, dst_adj, pinned, backend) is not None


def hom_count(src_adj, dst_adj, pinned=None, cap: int | None = None, backend: str | None = None) -> int:
    """Number of pin-respecting homomorphisms; with cap, counts up to cap."""
    src, dst, pins = _as_query(src_adj, dst_adj, pinned)
    handled, _, count, _ = _degenerate(src, dst, pins)
    if handled:
        return min(count, cap) if cap is not None else count
    c = -1 if cap is None else cap
    if _pick(backend) == "numpy":
        return _np_count(src, dst, pins, c)
    return int(_bt_count(src, dst, pins, c))


def hom_list(src_adj, dst_adj, pinned=None, backend: str | None = None) -> np.ndarray:
    """All pin-respecting homomorphisms as an (n, s) array in lex order."""
    src, dst, pins = _as_query(src_adj, dst_adj, pinned)
    handled, _, _, listing = _degenerate(src, dst, pins)
    if handled:
        return listing
    if _pick(backend) == "numpy":
        return _np_list(src, dst, pins)
    n = int(_bt_count(src, dst, pins, -1))
    out = np.empty((n, src.shape[0]), np.int64)
    _bt_fill(src, dst, pins, out)
    return out


def default_backend() -> str:
    return "numpy" if JIT_DISABLED else "backtrack"


def available_backends() -> tuple[str, ...]:
    return ("backtrack", "numpy")


def jit_active() -> bool:
    """Whether the backtrack backend is actually numba-compiled."""
    return _HAVE_NUMBA and not JIT_DISABLED


def _pick(backend: str | None) -> str:
    b = backend or default_backend()
    if b not in available_backends():
        raise ValueError(f"unknown backend {b!r}")
    return b
