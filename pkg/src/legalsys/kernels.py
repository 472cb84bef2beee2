"""Compiled inner loops for bulk legality checks.

Vertex sets are arrays of ``W`` little-endian 64-bit words; adjacency is an
``(n, W)`` array. Every kernel releases the GIL so callers can split an index
range across threads.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_ONE = np.uint64(1)
_ZERO = np.uint64(0)


def words_for(n: int) -> int:
    return max(1, (n + 63) // 64)


def to_words(mask: int, w: int) -> np.ndarray:
    out = np.zeros(w, dtype=np.uint64)
    for i in range(w):
        out[i] = (mask >> (64 * i)) & 0xFFFFFFFFFFFFFFFF
    return out


def from_words(arr) -> int:
    mask = 0
    for i, x in enumerate(arr):
        mask |= int(x) << (64 * i)
    return mask


def adjacency_words(adj_rows, w: int) -> np.ndarray:
    out = np.zeros((len(adj_rows), w), dtype=np.uint64)
    for v, row in enumerate(adj_rows):
        out[v] = to_words(row, w)
    return out


@njit(cache=True, nogil=True)
def popcount64(x):
    x = x - ((x >> _ONE) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return (x * _H01) >> np.uint64(56)


@njit(cache=True, nogil=True)
def ctz64(x):
    # x != 0
    return popcount64((x & (~x + _ONE)) - _ONE)


@njit(cache=True, nogil=True)
def _connected(adj, s, seen, frontier, nxt):
    w = s.shape[0]
    start = -1
    for i in range(w):
        seen[i] = _ZERO
        frontier[i] = _ZERO
        if start < 0 and s[i] != _ZERO:
            start = i
    if start < 0:
        return False
    low = s[start] & (~s[start] + _ONE)
    seen[start] = low
    frontier[start] = low
    while True:
        for i in range(w):
            nxt[i] = _ZERO
        for i in range(w):
            f = frontier[i]
            while f != _ZERO:
                b = f & (~f + _ONE)
                v = i * 64 + np.int64(popcount64(b - _ONE))
                for j in range(w):
                    nxt[j] |= adj[v, j]
                f ^= b
        grew = False
        for i in range(w):
            x = nxt[i] & s[i] & ~seen[i]
            frontier[i] = x
            if x != _ZERO:
                grew = True
            seen[i] |= x
        if not grew:
            break
    for i in range(w):
        if seen[i] != s[i]:
            return False
    return True


@njit(cache=True, nogil=True)
def _boundary_ok(adj, s, t, n):
    w = s.shape[0]
    for v in range(n):
        inside = (s[v // 64] >> np.uint64(v % 64)) & _ONE
        hit = False
        for j in range(w):
            other = t[j] if inside else s[j]
            if adj[v, j] & other:
                hit = True
                break
        if not hit:
            return False
    return True


@njit(cache=True, nogil=True)
def orbit_scan(adj, basis, s0, full, start, stop, exhaustive, check_strong):
    """Walk states ``s0 + span(basis)`` for Gray indices ``start..stop-1``.

    Returns ``(first_bad, bad_count, not_strong, min_size, max_size)``;
    ``first_bad`` is -1 when every visited state is legal.
    """
    n = adj.shape[0]
    w = s0.shape[0]
    r = basis.shape[0]
    s = s0.copy()
    g0 = start ^ (start >> 1)
    for k in range(r):
        if (g0 >> k) & 1:
            for j in range(w):
                s[j] ^= basis[k, j]
    t = np.empty(w, dtype=np.uint64)
    seen = np.empty(w, dtype=np.uint64)
    frontier = np.empty(w, dtype=np.uint64)
    nxt = np.empty(w, dtype=np.uint64)
    first_bad = -1
    bad = 0
    not_strong = 0
    min_size = n + 1
    max_size = -1
    for i in range(start, stop):
        size = 0
        for j in range(w):
            t[j] = full[j] & ~s[j]
            size += np.int64(popcount64(s[j]))
        if size < min_size:
            min_size = size
        if size > max_size:
            max_size = size
        ok = size > 0 and size < n
        if ok:
            ok = _connected(adj, s, seen, frontier, nxt)
        if ok:
            ok = _connected(adj, t, seen, frontier, nxt)
        if not ok:
            bad += 1
            if first_bad < 0:
                first_bad = i
            if not exhaustive:
                break
        elif check_strong and not _boundary_ok(adj, s, t, n):
            not_strong += 1
        if i + 1 < stop:
            # Gray step: flip the row indexed by the lowest set bit of i+1
            k = 0
            x = i + 1
            while (x & 1) == 0:
                x >>= 1
                k += 1
            for j in range(w):
                s[j] ^= basis[k, j]
    return first_bad, bad, not_strong, min_size, max_size


@njit(cache=True, nogil=True)
def _connected1(adj, s):
    if s == _ZERO:
        return False
    seen = s & (~s + _ONE)
    frontier = seen
    while frontier != _ZERO:
        nxt = _ZERO
        f = frontier
        while f != _ZERO:
            b = f & (~f + _ONE)
            nxt |= adj[popcount64(b - _ONE)]
            f ^= b
        frontier = nxt & s & ~seen
        seen |= frontier
    return seen == s


@njit(cache=True, nogil=True)
def legal_bitmap(adj, n, strong, lo, hi, out):
    """Fill ``out[x - lo]`` for states ``x`` in ``lo..hi-1`` (single-word graphs)."""
    full = (_ONE << np.uint64(n)) - _ONE if n < 64 else ~_ZERO
    for x in range(lo, hi):
        s = np.uint64(x)
        t = full & ~s
        ok = s != _ZERO and t != _ZERO and _connected1(adj, s) and _connected1(adj, t)
        if ok and strong:
            for v in range(n):
                if (s >> np.uint64(v)) & _ONE:
                    if adj[v] & t == _ZERO:
                        ok = False
                        break
                elif adj[v] & s == _ZERO:
                    ok = False
                    break
        out[x - lo] = 1 if ok else 0


@njit(cache=True, nogil=True)
def colored_orbit_search(bitmap, classes, n):
    """First state whose orbit under the class moves is entirely legal.

    Orbit representatives are the states avoiding the lowest vertex of every
    class; they are scanned in increasing integer order. Returns -1 if none.
    """
    k = classes.shape[0]
    pin = _ZERO
    for c in range(k):
        x = classes[c]
        pin |= x & (~x + _ONE)
    full = (_ONE << np.uint64(n)) - _ONE
    free = full & ~pin
    sub = _ZERO
    combos = np.int64(1) << np.int64(k)
    while True:
        good = True
        s = sub
        for i in range(combos):
            if bitmap[np.int64(s)] == 0:
                good = False
                break
            if i + 1 < combos:
                j = 0
                x = i + 1
                while (x & 1) == 0:
                    x >>= 1
                    j += 1
                s ^= classes[j]
        if good:
            return np.int64(sub)
        if sub == free:
            break
        sub = (sub - free) & free
    return -1


@njit(cache=True, nogil=True)
def first_legal_canonical(adj, n, strong):
    """First legal state containing vertex 0, ordered by size then lexicographically.

    Lexicographic order on sorted vertex tuples is decreasing order of the
    bit-reversed mask, which is increasing order of its complement; so for
    each size the complements are walked with Gosper's hack.
    """
    full = (_ONE << np.uint64(n)) - _ONE
    m = n - 1
    mfull = (np.int64(1) << np.int64(m)) - 1
    limit = np.int64(1) << np.int64(m)
    for k in range(1, n):
        # choose k-1 companions among vertices 1..n-1
        c = m - (k - 1)
        y = (np.int64(1) << np.int64(c)) - 1
        while y < limit:
            x = mfull ^ y
            s = _ONE
            for j in range(m):
                if (x >> j) & 1:
                    s |= _ONE << np.uint64(m - j)
            t = full & ~s
            ok = t != _ZERO and _connected1(adj, s) and _connected1(adj, t)
            if ok and strong:
                for v in range(n):
                    if (s >> np.uint64(v)) & _ONE:
                        if adj[v] & t == _ZERO:
                            ok = False
                            break
                    elif adj[v] & s == _ZERO:
                        ok = False
                        break
            if ok:
                return np.int64(s)
            if y == 0:
                break
            low = y & -y
            r = y + low
            y = (((r ^ y) >> 2) // low) | r
    return -1
