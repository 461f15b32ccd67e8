"""Symbol sequences with access, rank, select and partial rank.

The payload is a wavelet matrix: one bitvector per bit of the symbol code,
most significant bit first, each level stably partitioned by the previous
bit. Next to it sit two directories:

* the chunk directory A_a: for each symbol a, ``0 1^c0 0 1^c1 ...`` where
  c_k counts a in the k-th chunk of sigma positions, so the rank of a
  before chunk k is ``select0(k + 1) - k``;
* the partial-rank directory: positions are cut into groups of g; each
  position stores the slot of its symbol among the group's distinct
  symbols and its 1-based occurrence ordinal inside the group, and each
  (group, symbol) slot stores the symbol's rank before the group.
"""

from __future__ import annotations

import numpy as np

from .bitvec import BitVec, _LOW
from .errors import BuildError, NotFoundError
from .params import ceil_log2, group_size, heaviness_threshold


def _width(x: int) -> int:
    """Bits needed to store values in [0..x]."""
    return max(1, int(x).bit_length())


class SequenceIndex:
    """Immutable sequence over [0..sigma-1]."""

    def __init__(self, levels, sigma: int, m: int, chunk_dir=None, prank=None, g=None):
        self.sigma = sigma
        self.m = m
        self.nlevels = len(levels)
        self.levels = levels
        self.g = g if g is not None else group_size(heaviness_threshold(sigma))
        # flattened per-level directories for the hot loops
        self._lv = [(bv._words, bv._sup, bv._blk, bv.zeros) for bv in levels]
        self.chunk_dir = chunk_dir
        if prank is not None:
            local, ordinal, base, gslot = prank
            self._local = local.tolist()
            self._ord = ordinal.tolist()
            self._base = base.tolist()
            self._gslot = gslot.tolist()
        else:
            self._local = self._ord = self._base = self._gslot = None

    # -- construction --------------------------------------------------------

    @classmethod
    def build(cls, symbols, sigma: int, with_chunks: bool = True, g: int | None = None):
        s = np.asarray(symbols, dtype=np.int64)
        if sigma < 1:
            raise BuildError("alphabet size must be positive")
        if len(s) and (s.min() < 0 or s.max() >= sigma):
            raise BuildError("symbol outside [0, %d)" % sigma)
        m = len(s)
        nlevels = max(1, ceil_log2(sigma))
        levels = []
        cur = s
        for lev in range(nlevels):
            bits = (cur >> (nlevels - 1 - lev)) & 1
            levels.append(BitVec.from_bits(bits))
            cur = np.concatenate([cur[bits == 0], cur[bits == 1]])
        g = g if g is not None else group_size(heaviness_threshold(sigma))
        chunks = _build_chunk_dir(s, sigma) if with_chunks else None
        return cls(levels, sigma, m, chunks, _build_prank(s, sigma, g), g)

    # -- payload queries -----------------------------------------------------

    def __len__(self) -> int:
        return self.m

    def _check(self, i: int) -> None:
        if not 0 <= i < self.m:
            raise IndexError("position %d out of range [0, %d)" % (i, self.m))

    def access(self, i: int) -> int:
        self._check(i)
        a = 0
        for w, sup, blk, z in self._lv:
            k = i >> 6
            word = w[k]
            # ones strictly before i
            ones = sup[i >> 9] + blk[k] + (word & ((1 << (i & 63)) - 1)).bit_count()
            if word >> (i & 63) & 1:
                a = a << 1 | 1
                i = z + ones
            else:
                a <<= 1
                i = i - ones
        return a

    def _descend(self, a: int, s: int, e: int):
        """Map the half-open range [s, e) down the levels following symbol a."""
        top = self.nlevels - 1
        for lev, (w, sup, blk, z) in enumerate(self._lv):
            if s:
                p = s - 1
                os_ = sup[p >> 9] + blk[p >> 6] + (w[p >> 6] & _LOW[p & 63]).bit_count()
            else:
                os_ = 0
            if e:
                p = e - 1
                oe = sup[p >> 9] + blk[p >> 6] + (w[p >> 6] & _LOW[p & 63]).bit_count()
            else:
                oe = 0
            if a >> (top - lev) & 1:
                s, e = z + os_, z + oe
            else:
                s, e = s - os_, e - oe
        return s, e

    def rank(self, a: int, i: int, stats=None) -> int:
        """Occurrences of a in S[0..i]; 0 for i == -1."""
        if stats is not None:
            stats.general_rank += 1
        if i < -1 or i >= self.m:
            raise IndexError("rank index %d out of range" % i)
        if not 0 <= a < self.sigma:
            return 0
        s, e = self._descend(a, 0, i + 1)
        return e - s

    def rank_pair(self, a: int, i: int, j: int, stats=None) -> tuple[int, int]:
        """(rank(a, i), rank(a, j)); counts as two rank queries."""
        if stats is not None:
            stats.general_rank += 2
        if not -1 <= i <= j < self.m:
            raise IndexError("rank indices (%d, %d) out of range" % (i, j))
        if not 0 <= a < self.sigma:
            return 0, 0
        s0, e0 = self._descend(a, 0, i + 1)
        s1, e1 = self._descend(a, 0, j + 1)
        return e0 - s0, e1 - s1

    def count(self, a: int) -> int:
        return self.rank(a, self.m - 1) if self.m else 0

    def select(self, a: int, k: int) -> int:
        """Position of the k-th occurrence of a (k >= 1)."""
        if not 0 <= a < self.sigma or k < 1:
            raise NotFoundError("select(%d, %d)" % (a, k))
        s, e = self._descend(a, 0, self.m)
        if k > e - s:
            raise NotFoundError("symbol %d occurs %d < %d times" % (a, e - s, k))
        pos = s + k - 1
        top = self.nlevels - 1
        for lev in range(top, -1, -1):
            bv = self.levels[lev]
            if a >> (top - lev) & 1:
                pos = bv.select1(pos - bv.zeros + 1)
            else:
                pos = bv.select0(pos + 1)
        return pos

    def distinct_symbols(self, l: int, r: int) -> list[tuple[int, int]]:
        """(symbol, frequency) pairs of S[l..r] in increasing symbol order."""
        if not 0 <= l <= r < self.m:
            raise IndexError("range [%d, %d] out of bounds" % (l, r))
        lv = self._lv
        nlev = self.nlevels
        out = []
        stack = [(0, l, r + 1, 0)]
        while stack:
            lev, s, e, pre = stack.pop()
            if lev == nlev:
                out.append((pre, e - s))
                continue
            w, sup, blk, z = lv[lev]
            if s:
                p = s - 1
                os_ = sup[p >> 9] + blk[p >> 6] + (w[p >> 6] & _LOW[p & 63]).bit_count()
            else:
                os_ = 0
            p = e - 1
            oe = sup[p >> 9] + blk[p >> 6] + (w[p >> 6] & _LOW[p & 63]).bit_count()
            # push the one-branch first so the zero-branch pops first
            if oe > os_:
                stack.append((lev + 1, z + os_, z + oe, pre << 1 | 1))
            if (e - oe) > (s - os_):
                stack.append((lev + 1, s - os_, e - oe, pre << 1))
        return out

    def to_array(self) -> np.ndarray:
        """All symbols, decoded level by level."""
        m = self.m
        sym = np.zeros(m, dtype=np.int64)
        idx = np.arange(m)
        for bv in self.levels:
            bits = np.unpackbits(bv.words().view(np.uint8), bitorder="little")[:m].astype(np.int64)
            ones_before = np.concatenate([[0], np.cumsum(bits)])
            b = bits[idx]
            sym = sym << 1 | b
            ob = ones_before[idx]
            idx = np.where(b == 1, bv.zeros + ob, idx - ob)
        return sym

    # -- directories ---------------------------------------------------------

    def partial_rank(self, i: int, stats=None) -> int:
        """rank(access(i), i) from the group directory alone."""
        if stats is not None:
            stats.partial_rank += 1
        self._check(i)
        return self._base[self._gslot[i // self.g] + self._local[i]] + self._ord[i]

    def chunk_base(self, a: int, k: int) -> int:
        """rank(a, k*sigma - 1), read off A_a."""
        return self.chunk_dir[a].select0(k + 1) - k

    # -- accounting / serialization -------------------------------------------

    def payload_bits(self) -> int:
        return sum(bv.size_in_bits() for bv in self.levels)

    def chunk_dir_bits(self) -> int:
        return sum(bv.size_in_bits() for bv in self.chunk_dir) if self.chunk_dir else 0

    def prank_bits(self) -> int:
        nslots = len(self._base)
        return (
            self.m * (_width(self.g - 1) + _width(self.g))
            + nslots * _width(self.m)
            + len(self._gslot) * _width(nslots)
        )

    def to_arrays(self) -> dict:
        out = {"levels": np.concatenate([bv.words() for bv in self.levels]) if self.m else np.zeros(0, np.uint64)}
        out["local"] = np.asarray(self._local, dtype=np.uint16)
        out["ordinal"] = np.asarray(self._ord, dtype=np.uint16)
        out["base"] = np.asarray(self._base, dtype=np.int64)
        out["gslot"] = np.asarray(self._gslot, dtype=np.int64)
        if self.chunk_dir is not None:
            out["chunk_len"] = np.asarray([len(bv) for bv in self.chunk_dir], dtype=np.int64)
            words = [bv.words() for bv in self.chunk_dir]
            out["chunk_words"] = np.concatenate(words) if words else np.zeros(0, np.uint64)
        return out

    @classmethod
    def from_arrays(cls, arrays: dict, sigma: int, m: int, g: int):
        nlevels = max(1, ceil_log2(sigma))
        nw = (m + 63) // 64
        lw = arrays["levels"]
        if len(lw) != nlevels * nw:
            raise ValueError("level payload has %d words, expected %d" % (len(lw), nlevels * nw))
        levels = [BitVec(lw[k * nw:(k + 1) * nw], m) for k in range(nlevels)]
        chunks = None
        if "chunk_len" in arrays:
            chunks = []
            off = 0
            cw = arrays["chunk_words"]
            for length in arrays["chunk_len"].tolist():
                k = (length + 63) // 64
                chunks.append(BitVec(cw[off:off + k], length))
                off += k
        prank = (arrays["local"], arrays["ordinal"], arrays["base"], arrays["gslot"])
        return cls(levels, sigma, m, chunks, prank, g)


def _build_chunk_dir(s: np.ndarray, sigma: int) -> list[BitVec]:
    m = len(s)
    nchunks = (m + sigma - 1) // sigma
    counts = np.zeros((nchunks, sigma), dtype=np.int64)
    if m:
        np.add.at(counts, (np.arange(m) // sigma, s), 1)
    out = []
    for a in range(sigma):
        c = counts[:, a]
        total = nchunks + int(c.sum())
        bits = np.ones(total, dtype=np.uint8)
        zero_at = np.arange(nchunks) + np.concatenate([[0], np.cumsum(c)[:-1]]) if nchunks else np.zeros(0, np.int64)
        bits[zero_at] = 0
        out.append(BitVec.from_bits(bits))
    return out


def _build_prank(s: np.ndarray, sigma: int, g: int):
    """Group directory arrays: (local slot, ordinal, slot base rank, first slot per group)."""
    m = len(s)
    ngroups = (m + g - 1) // g
    if m == 0:
        z = np.zeros(0, dtype=np.int64)
        return z, z, z, np.zeros(1, dtype=np.int64)
    grp = np.arange(m) // g
    order = np.argsort(grp * sigma + s, kind="stable")
    key_sorted = (grp * sigma + s)[order]
    new = np.concatenate([[True], key_sorted[1:] != key_sorted[:-1]])
    slot_sorted = np.cumsum(new) - 1
    starts = np.flatnonzero(new)
    ordinal = np.empty(m, dtype=np.int64)
    ordinal[order] = np.arange(m) - starts[slot_sorted] + 1
    slot = np.empty(m, dtype=np.int64)
    slot[order] = slot_sorted
    slot_group = grp[order[starts]]
    gslot = np.searchsorted(slot_group, np.arange(ngroups + 1))
    local = slot - gslot[grp]
    # global occurrence number of each position
    sym_order = np.argsort(s, kind="stable")
    first = np.searchsorted(s[sym_order], np.arange(sigma))
    prank = np.empty(m, dtype=np.int64)
    prank[sym_order] = np.arange(m) - first[s[sym_order]] + 1
    base = prank[order[starts]] - 1
    return local, ordinal, base, gslot.astype(np.int64)


def group_layout(s: np.ndarray, sigma: int, g: int):
    """Positions sorted by (group, symbol, position) and the slot boundaries.

    Shared with the interval rank builder so both directories agree on slot
    numbering.
    """
    m = len(s)
    grp = np.arange(m) // g
    key = grp * sigma + s
    order = np.argsort(key, kind="stable")
    ks = key[order]
    new = np.concatenate([[True], ks[1:] != ks[:-1]]) if m else np.zeros(0, bool)
    starts = np.flatnonzero(new)
    return order, np.append(starts, m)
