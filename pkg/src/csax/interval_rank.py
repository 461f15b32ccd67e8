"""Small interval rank queries.

For a window [i..j] with j - i <= g, ``query(a, i, j)`` returns
(rank(a, i-1), rank(a, j)) when a occurs in the window and None otherwise,
without any general rank query. The sequence is cut into groups of g
positions. For each group we keep its distinct symbols as slots (in symbol
order) and, per slot, the increasing list of occurrence positions. Slot
membership for a symbol is decided by a blind binary trie over the slot
symbols: the walk branches on the symbol's bits at the stored
discriminating positions and lands on a single candidate slot, which one
access then confirms or rejects. The rank pair comes from the partial ranks
of the leftmost and rightmost occurrences in the window.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right

import numpy as np

from .errors import ContractError
from .sequence import SequenceIndex, _width, group_layout


class IntervalRankIndex:
    def __init__(self, seq: SequenceIndex, occ, slot_start, gslot, hb, left, right, root):
        self.seq = seq
        self.g = seq.g
        self._occ = occ
        self._slot_start = slot_start
        self._gslot = gslot
        self._hb = hb
        self._left = left
        self._right = right
        self._root = root

    @classmethod
    def build(cls, seq: SequenceIndex, symbols=None):
        s = seq.to_array() if symbols is None else np.asarray(symbols, dtype=np.int64)
        if len(s) == 0:
            raise ContractError("interval rank needs a non-empty sequence")
        g = seq.g
        order, slot_start = group_layout(s, seq.sigma, g)
        nslots = len(slot_start) - 1
        slot_first = order[slot_start[:-1]]
        slot_sym = s[slot_first]
        slot_grp = slot_first // g
        ngroups = (len(s) + g - 1) // g
        gslot = np.searchsorted(slot_grp, np.arange(ngroups + 1))
        # discriminating bit between consecutive slots of a group
        hb = np.full(nslots, -1, dtype=np.int64)
        if nslots > 1:
            x = slot_sym[:-1] ^ slot_sym[1:]
            same = slot_grp[:-1] == slot_grp[1:]
            hb[:-1] = np.where(same, np.floor(np.log2(np.maximum(x, 1))).astype(np.int64), -1)
        hb_l = hb.tolist()
        left = [0] * nslots
        right = [0] * nslots
        root = [0] * ngroups
        gs = gslot.tolist()
        for grp in range(ngroups):
            lo, hi = gs[grp], gs[grp + 1]
            # max-Cartesian tree over hb[lo..hi-2]; leaves are slots, encoded as -(slot+1)
            stack = []
            for j in range(lo, hi - 1):
                last = -1
                while stack and hb_l[stack[-1]] < hb_l[j]:
                    last = stack.pop()
                left[j] = last if last >= 0 else -(j + 1)
                right[j] = -(j + 2)
                if stack:
                    right[stack[-1]] = j
                stack.append(j)
            root[grp] = stack[0] if stack else -(lo + 1)
        return cls(seq, order.tolist(), slot_start.tolist(), gs, hb_l, left, right, root)

    def _find_slot(self, grp: int, a: int) -> int:
        """Slot of symbol a in group grp, or -1."""
        node = self._root[grp]
        hb, left, right = self._hb, self._left, self._right
        while node >= 0:
            node = right[node] if a >> hb[node] & 1 else left[node]
        slot = -node - 1
        if self.seq.access(self._occ[self._slot_start[slot]]) == a:
            return slot
        return -1

    def query(self, a: int, i: int, j: int, stats=None):
        if not 0 <= i <= j < self.seq.m:
            raise IndexError("window [%d, %d] out of range" % (i, j))
        if j - i > self.g:
            raise ContractError("window [%d, %d] wider than %d" % (i, j, self.g))
        if stats is not None:
            stats.interval_rank += 1
        if not 0 <= a < self.seq.sigma:
            return None
        occ, ss = self._occ, self._slot_start
        g = self.g
        gi, gj = i // g, j // g
        # rightmost occurrence <= j: right group first, then the left one
        y = -1
        sj = self._find_slot(gj, a)
        if sj >= 0:
            k = bisect_right(occ, j, ss[sj], ss[sj + 1]) - 1
            if k >= ss[sj] and occ[k] >= i:
                y = occ[k]
        si = -1
        if gi != gj:
            si = self._find_slot(gi, a)
            if y < 0 and si >= 0 and occ[ss[si + 1] - 1] >= i:
                y = occ[ss[si + 1] - 1]
        else:
            si = sj
        if y < 0:
            return None
        # leftmost occurrence >= i: left group first, then the right one
        x = -1
        if si >= 0:
            k = bisect_left(occ, i, ss[si], ss[si + 1])
            if k < ss[si + 1] and occ[k] <= j:
                x = occ[k]
        if x < 0:
            x = occ[ss[sj]]
        seq = self.seq
        return seq.partial_rank(x, stats) - 1, seq.partial_rank(y, stats)

    def size_in_bits(self) -> int:
        nslots = len(self._slot_start) - 1
        m = len(self._occ)
        wg = _width(self.g - 1)
        # offsets inside groups, trie nodes (bit index + two child refs), slot boundaries
        return m * wg + nslots * (_width(self.seq.nlevels) + 2 * wg) + (nslots + 1) * _width(m) + len(self._root) * wg

    def to_arrays(self) -> dict:
        return {
            "occ": np.asarray(self._occ, dtype=np.int64),
            "slot_start": np.asarray(self._slot_start, dtype=np.int64),
            "gslot": np.asarray(self._gslot, dtype=np.int64),
            "hb": np.asarray(self._hb, dtype=np.int64),
            "left": np.asarray(self._left, dtype=np.int64),
            "right": np.asarray(self._right, dtype=np.int64),
            "root": np.asarray(self._root, dtype=np.int64),
        }

    @classmethod
    def from_arrays(cls, seq: SequenceIndex, arr: dict) -> "IntervalRankIndex":
        return cls(seq, *(arr[k].tolist() for k in ("occ", "slot_start", "gslot", "hb", "left", "right", "root")))
