"""Suffix-tree topology as balanced parentheses.

Nodes are handled by the position of their opening parenthesis. Navigation
uses the excess E[p] = #'(' - #')' in bp[0..p] and a small range min-max
tree: 32-bit blocks keep their minimum excess and how often it occurs, and
a segment tree over the blocks answers forward/backward searches, range
minima and the k-th minimum. Leaves ("()") are marked in a second bitvector
so leaf ranks and leaf selection are plain rank/select.
"""

from __future__ import annotations

import numpy as np

from .bitvec import BitVec
from .errors import ContractError, NotFoundError
from .suffix import SuffixArrayBundle, Text, lcp_array

BLK = 32
_INF = 1 << 62

# Byte tables, bits read least-significant first; '(' is +1 and ')' is -1.
_DELTA8 = [0] * 256
_MIN8 = [0] * 256  # minimum prefix excess over the 8 positions
_FWD8 = [8] * (256 * 9)  # _FWD8[x*9+k]: first j with prefix(j) <= -k
_MAXS8 = [0] * 256  # maximum suffix sum S_j = sum of deltas of positions j+1..7
_BWD8 = [-1] * (256 * 9)  # _BWD8[x*9+k]: last j with S_j >= k
for _x in range(256):
    _pre = []
    _e = 0
    for _j in range(8):
        _e += 1 if _x >> _j & 1 else -1
        _pre.append(_e)
    _DELTA8[_x] = _e
    _MIN8[_x] = min(_pre)
    for _k in range(1, 9):
        for _j in range(8):
            if _pre[_j] <= -_k:
                _FWD8[_x * 9 + _k] = _j
                break
    _suf = [_e - _pre[_j] for _j in range(8)]
    _MAXS8[_x] = max(_suf)
    for _k in range(0, 9):
        for _j in range(7, -1, -1):
            if _suf[_j] >= _k:
                _BWD8[_x * 9 + _k] = _j
                break


class SuffixTreeTopo:
    """Ordinal tree navigation over a balanced-parentheses bitvector."""

    def __init__(self, bp: BitVec):
        if len(bp) == 0 or len(bp) % 2:
            raise ContractError("balanced parentheses need an even, non-zero length")
        self.bp = bp
        self.m = m = len(bp)
        self._w = bp._words
        bits = np.unpackbits(bp.words().view(np.uint8), bitorder="little")[:m].astype(np.int64)
        exc = np.cumsum(2 * bits - 1)
        if exc[-1] != 0 or exc.min() < 0 or (m > 1 and exc[:-1].min() < 1):
            raise ContractError("parentheses are not a single balanced tree")
        nxt = np.zeros(m, dtype=np.uint8)
        nxt[:-1] = bits[1:]
        self.leaves = BitVec.from_bits((bits == 1) & (nxt == 0))

        nb = (m + BLK - 1) // BLK
        starts = np.arange(nb) * BLK
        bmin = np.minimum.reduceat(exc, starts)
        is_min = exc == np.repeat(bmin, np.diff(np.append(starts, m)))
        bcnt = np.add.reduceat(is_min.astype(np.int64), starts)
        self._bend = exc[np.minimum(starts + BLK, m) - 1].tolist()
        size = 1
        while size < nb:
            size *= 2
        self._size = size
        tmin = [_INF] * (2 * size)
        tcnt = [0] * (2 * size)
        tmin[size:size + nb] = bmin.tolist()
        tcnt[size:size + nb] = bcnt.tolist()
        for i in range(size - 1, 0, -1):
            a, b = tmin[2 * i], tmin[2 * i + 1]
            if a < b:
                tmin[i], tcnt[i] = a, tcnt[2 * i]
            elif b < a:
                tmin[i], tcnt[i] = b, tcnt[2 * i + 1]
            else:
                tmin[i], tcnt[i] = a, tcnt[2 * i] + tcnt[2 * i + 1]
        self._tmin = tmin
        self._tcnt = tcnt

    # -- primitives ----------------------------------------------------------

    def _bit(self, p: int) -> int:
        return self._w[p >> 6] >> (p & 63) & 1

    def excess(self, p: int) -> int:
        """E[p]; E[-1] is 0."""
        return 2 * self.bp.rank1(p) - p - 1

    def _scan_fwd(self, p: int, end: int, cur: int, t: int) -> tuple[int, int]:
        """First q in [p, end) with E[q] <= t given cur = E[p-1]; (-1, E[end-1]) if none."""
        w = self._w
        while p < end and p & 7:
            cur += 1 if w[p >> 6] >> (p & 63) & 1 else -1
            if cur <= t:
                return p, cur
            p += 1
        while p + 8 <= end:
            x = w[p >> 6] >> (p & 63) & 0xFF
            if cur + _MIN8[x] <= t:
                return p + _FWD8[x * 9 + cur - t], t
            cur += _DELTA8[x]
            p += 8
        while p < end:
            cur += 1 if w[p >> 6] >> (p & 63) & 1 else -1
            if cur <= t:
                return p, cur
            p += 1
        return -1, cur

    def _seg_next(self, b: int, t: int) -> int:
        """First block >= b whose minimum is <= t, or -1."""
        size = self._size
        if b >= size:
            return -1
        tmin = self._tmin
        i = b + size
        while True:
            if tmin[i] <= t:
                while i < size:
                    i = 2 * i if tmin[2 * i] <= t else 2 * i + 1
                return i - size
            while i & 1:
                i >>= 1
            if i == 0:
                return -1
            i += 1

    def _seg_prev(self, b: int, t: int) -> int:
        """Last block <= b whose minimum is <= t, or -1."""
        if b < 0:
            return -1
        size = self._size
        tmin = self._tmin
        i = b + size
        while True:
            if tmin[i] <= t:
                while i < size:
                    i = 2 * i + 1 if tmin[2 * i + 1] <= t else 2 * i
                return i - size
            while i > 1 and not i & 1:
                i >>= 1
            if i == 1:
                return -1
            i -= 1

    def fwd_search(self, p: int, t: int) -> int:
        """First q >= p with E[q] <= t, or -1."""
        if p >= self.m:
            return -1
        b = p // BLK
        end = min((b + 1) * BLK, self.m)
        q, _ = self._scan_fwd(p, end, self.excess(p - 1), t)
        if q >= 0:
            return q
        nb = self._seg_next(b + 1, t)
        if nb < 0:
            return -1
        start = nb * BLK
        q, _ = self._scan_fwd(start, min(start + BLK, self.m), self._bend[nb - 1], t)
        return q

    def _scan_bwd(self, p: int, stop: int, cur: int, t: int) -> int:
        """Last q in [stop, p] with E[q] <= t given cur = E[p]; -1 if none."""
        w = self._w
        while p >= stop and (p & 7) != 7:
            if cur <= t:
                return p
            cur -= 1 if w[p >> 6] >> (p & 63) & 1 else -1
            p -= 1
        while p - 7 >= stop:
            if cur <= t:
                return p
            x = w[(p - 7) >> 6] >> ((p - 7) & 63) & 0xFF
            k = cur - t
            if k <= 8 and _MAXS8[x] >= k:
                return p - 7 + _BWD8[x * 9 + k]
            cur -= _DELTA8[x]
            p -= 8
        while p >= stop:
            if cur <= t:
                return p
            cur -= 1 if w[p >> 6] >> (p & 63) & 1 else -1
            p -= 1
        return -1

    def bwd_search(self, p: int, t: int) -> int:
        """Last q <= p with E[q] <= t, or -1 (E[-1] = 0 is not considered)."""
        if p < 0:
            return -1
        b = p // BLK
        q = self._scan_bwd(p, b * BLK, self.excess(p), t)
        if q >= 0:
            return q
        pb = self._seg_prev(b - 1, t)
        if pb < 0:
            return -1
        end = min((pb + 1) * BLK, self.m) - 1
        return self._scan_bwd(end, pb * BLK, self._bend[pb], t)

    def _scan_min(self, i: int, j: int, cur: int):
        """(min, leftmost argmin, count) of E over [i, j] given cur = E[i-1]."""
        w = self._w
        best, arg, cnt = _INF, -1, 0
        for p in range(i, j + 1):
            cur += 1 if w[p >> 6] >> (p & 63) & 1 else -1
            if cur < best:
                best, arg, cnt = cur, p, 1
            elif cur == best:
                cnt += 1
        return best, arg, cnt

    def _seg_range(self, lo: int, hi: int):
        """(min, count) over blocks [lo, hi]."""
        best, cnt = _INF, 0
        if lo > hi:
            return best, cnt
        size = self._size
        tmin, tcnt = self._tmin, self._tcnt
        lo += size
        hi += size + 1
        while lo < hi:
            if lo & 1:
                v = tmin[lo]
                if v < best:
                    best, cnt = v, tcnt[lo]
                elif v == best:
                    cnt += tcnt[lo]
                lo += 1
            if hi & 1:
                hi -= 1
                v = tmin[hi]
                if v < best:
                    best, cnt = v, tcnt[hi]
                elif v == best:
                    cnt += tcnt[hi]
            lo >>= 1
            hi >>= 1
        return best, cnt

    def range_min(self, i: int, j: int):
        """(min, leftmost argmin, count of min) of E over [i, j]."""
        bi, bj = i // BLK, j // BLK
        if bi == bj:
            return self._scan_min(i, j, self.excess(i - 1))
        best, arg, cnt = self._scan_min(i, (bi + 1) * BLK - 1, self.excess(i - 1))
        mid_min, mid_cnt = self._seg_range(bi + 1, bj - 1)
        if mid_min < best:
            nb = self._seg_next(bi + 1, mid_min)
            s = nb * BLK
            _, marg, _ = self._scan_min(s, s + BLK - 1, self._bend[nb - 1])
            best, arg, cnt = mid_min, marg, mid_cnt
        elif mid_min == best:
            cnt += mid_cnt
        s = bj * BLK
        rmin, rarg, rcnt = self._scan_min(s, j, self._bend[bj - 1])
        if rmin < best:
            best, arg, cnt = rmin, rarg, rcnt
        elif rmin == best:
            cnt += rcnt
        return best, arg, cnt

    def _kth_min(self, p: int, t: int, k: int) -> int:
        """k-th q >= p with E[q] == t, stopping early at the first E[q] < t.

        Assumes E >= t on the scanned region up to that stop point.
        """
        w = self._w
        m = self.m
        cur = self.excess(p - 1)
        b = p // BLK
        end = min((b + 1) * BLK, m)
        while p < end:
            cur += 1 if w[p >> 6] >> (p & 63) & 1 else -1
            if cur < t:
                return p
            if cur == t:
                k -= 1
                if k == 0:
                    return p
            p += 1
        size = self._size
        tmin, tcnt = self._tmin, self._tcnt
        i = b + 1 + size
        if b + 1 >= size:
            return -1
        while True:
            v = tmin[i]
            if v > t or (v == t and tcnt[i] < k):
                if v == t:
                    k -= tcnt[i]
                while i & 1:
                    i >>= 1
                if i == 0:
                    return -1
                i += 1
            elif i < size:
                i = 2 * i
            else:
                blk = i - size
                p = blk * BLK
                cur = self._bend[blk - 1]
                for q in range(p, min(p + BLK, m)):
                    cur += 1 if w[q >> 6] >> (q & 63) & 1 else -1
                    if cur < t:
                        return q
                    if cur == t:
                        k -= 1
                        if k == 0:
                            return q
                raise AssertionError("k-th minimum not inside the located block")

    # -- tree operations -------------------------------------------------------

    root = 0

    @property
    def num_nodes(self) -> int:
        return self.m // 2

    @property
    def num_leaves_total(self) -> int:
        return self.leaves.ones

    def _check(self, v: int) -> None:
        if not 0 <= v < self.m or not self._bit(v):
            raise ContractError("invalid node handle %r" % (v,))

    def is_leaf(self, v: int) -> bool:
        return not self._bit(v + 1)

    def close(self, v: int) -> int:
        return self.fwd_search(v + 1, self.excess(v) - 1)

    def parent(self, v: int):
        if v == 0:
            return None
        q = self.bwd_search(v - 1, self.excess(v) - 2)
        return q + 1

    def preorder(self, v: int) -> int:
        self._check(v)
        return self.bp.rank1(v) - 1

    def node_at_preorder(self, k: int) -> int:
        return self.bp.select1(k + 1)

    def _close_known(self, c: int, e: int) -> int:
        """Closing position of the node opened at c, whose excess E[c] = e is known."""
        m = self.m
        b = (c + 1) // BLK
        end = min((b + 1) * BLK, m)
        q, _ = self._scan_fwd(c + 1, end, e, e - 1)
        if q >= 0:
            return q
        nb = self._seg_next(b + 1, e - 1)
        start = nb * BLK
        q, _ = self._scan_fwd(start, min(start + BLK, m), self._bend[nb - 1], e - 1)
        return q

    def children(self, v: int):
        """Handles of the children of ``v`` in order."""
        return [c for c, _, _ in self.children_ranges(v)]

    def children_ranges(self, v: int) -> list[tuple[int, int, int]]:
        """(handle, first leaf rank, last leaf rank) for each child of ``v``."""
        w = self._w
        lv = self.leaves
        c = v + 1
        if not w[c >> 6] >> (c & 63) & 1:
            return []
        e = self.excess(c)
        lo = lv.rank1(v)
        out = []
        while c < self.m and w[c >> 6] >> (c & 63) & 1:
            cl = self._close_known(c, e)
            hi = lv.rank1(cl) - 1
            out.append((c, lo, hi))
            lo = hi + 1
            c = cl + 1
        return out

    def child_count(self, v: int) -> int:
        self._check(v)
        if self.is_leaf(v):
            return 0
        mn, _, cnt = self.range_min(v + 1, self.close(v) - 1)
        return cnt if mn == self.excess(v) else 0

    def child(self, v: int, j: int) -> int:
        """The j-th child of ``v`` (0-based)."""
        self._check(v)
        if j < 0 or self.is_leaf(v):
            raise NotFoundError("node %d has no child %d" % (v, j))
        if j == 0:
            return v + 1
        e = self.excess(v)
        q = self._kth_min(v + 1, e, j)
        if q < 0 or not self._bit(q + 1) or self.excess(q) != e:
            raise NotFoundError("node %d has no child %d" % (v, j))
        return q + 1

    def num_leaves(self, v: int) -> int:
        self._check(v)
        lv = self.leaves
        return lv.rank1(self.close(v)) - lv.rank1(v - 1)

    def leftmost_leaf_rank(self, v: int) -> int:
        self._check(v)
        return self.leaves.rank1(v - 1)

    def leaf_range(self, v: int) -> tuple[int, int]:
        lo = self.leftmost_leaf_rank(v)
        return lo, lo + self.num_leaves(v) - 1

    def leaf(self, i: int) -> int:
        """Handle of the i-th leaf (0-based), i.e. the leaf of SA position i."""
        return self.leaves.select1(i + 1)

    def lca(self, u: int, v: int) -> int:
        self._check(u)
        self._check(v)
        if u == v:
            return u
        if u > v:
            u, v = v, u
        if v < self.close(u):
            return u
        _, q, _ = self.range_min(u, v)
        return self.parent(q + 1)

    def node_from_range(self, l: int, r: int) -> int:
        """lca of leaves l and r: the node whose leaf interval is [l..r] if one exists."""
        return self.lca(self.leaf(l), self.leaf(r))

    def size_in_bits(self) -> int:
        nblocks = len(self._bend)
        # block minima and counts at 32 bits each, plus the segment tree over them
        return self.bp.size_in_bits() + self.leaves.size_in_bits() + 2 * 32 * (nblocks + self._size)


def bp_from_lcp(lcp: list[int], with_depths: bool = False):
    """Balanced parentheses of the suffix tree whose leaves have the given LCP array.

    Internal nodes are the lcp-intervals; each leaf i is preceded by the
    openings of the internal nodes whose leftmost leaf is i and followed by
    the closings of those whose rightmost leaf is i. Returns the bit array
    and, if asked, string depths indexed by preorder.
    """
    n = len(lcp)
    if n == 1:
        bits = np.array([1, 0], dtype=np.uint8)
        return (bits, [0]) if with_depths else bits
    opens = [0] * n
    closes = [0] * n
    open_depths = [[] for _ in range(n)] if with_depths else None
    st_h = [0]
    st_lb = [0]
    for i in range(1, n):
        h = lcp[i]
        lb = i - 1
        while h < st_h[-1]:
            top = st_h.pop()
            lb = st_lb.pop()
            closes[i - 1] += 1
            opens[lb] += 1
            if with_depths:
                open_depths[lb].append(top)
        if h > st_h[-1]:
            st_h.append(h)
            st_lb.append(lb)
    while len(st_h) > 1:
        top = st_h.pop()
        lb = st_lb.pop()
        closes[n - 1] += 1
        opens[lb] += 1
        if with_depths:
            open_depths[lb].append(top)
    reps = np.empty(2 * n, dtype=np.int64)
    reps[0::2] = np.asarray(opens) + 1
    reps[1::2] = np.asarray(closes) + 1
    vals = np.tile(np.array([1, 0], dtype=np.uint8), n)
    bits = np.concatenate([[1], np.repeat(vals, reps), [0]]).astype(np.uint8)
    if not with_depths:
        return bits
    depths = [0]
    suffix_len = None  # leaves carry no string depth here
    for i in range(n):
        depths.extend(reversed(open_depths[i]))
        depths.append(suffix_len)
    return bits, depths


def build_topology(bundle: SuffixArrayBundle, t: Text, with_depths: bool = False):
    """Suffix-tree topology of ``t`` from its suffix array (via Kasai LCP)."""
    lcp = lcp_array(t, bundle.sa)
    if with_depths:
        bits, depths = bp_from_lcp(lcp, with_depths=True)
        return SuffixTreeTopo(BitVec.from_bits(bits)), depths
    return SuffixTreeTopo(BitVec.from_bits(bp_from_lcp(lcp)))
