"""Heavy/light classification of suffix-tree nodes and per-node dictionaries.

A node is heavy when it has at least d leaves. Marked nodes (bit set in D)
are those with at least two heavy children, or with one heavy child and at
least d light children. A marked node keeps a dictionary from the first
symbol of each heavy child's edge to (child ordinal, rank pair), where the
rank pair is (rank_a(l-1), rank_a(r)) on the reversed-text BWT for the
node's interval [l..r]. Each rank is stored as its remainder inside its
chunk of sigma positions; the chunk part is recovered from the chunk
directory of the sequence when the entry is read. Unmarked heavy nodes with
exactly one heavy child store that child's ordinal instead.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from .bitvec import BitVec
from .errors import ContractError, NotFoundError
from .sequence import SequenceIndex, _width
from .topology import SuffixTreeTopo


@dataclass
class NodeClasses:
    """Per-preorder arrays describing every node of a topology."""

    handle: np.ndarray  # BP position of each node
    parent: np.ndarray  # parent preorder, -1 for the root
    ordinal: np.ndarray  # index among the parent's children
    nleaves: np.ndarray
    nchildren: np.ndarray
    heavy: np.ndarray
    nheavy: np.ndarray  # number of heavy children
    heavy_ord: np.ndarray  # ordinal of the first heavy child, -1 if none
    special: np.ndarray
    marked: np.ndarray
    d: int


def classify_nodes(topo: SuffixTreeTopo, d: int) -> NodeClasses:
    """Heavy/light/special flags and the D marking, in a few array passes."""
    m = topo.m
    bits = np.unpackbits(topo.bp.words().view(np.uint8), bitorder="little")[:m].astype(np.int64)
    exc = np.cumsum(2 * bits - 1)
    pos = np.arange(m)
    opens = pos[bits == 1]
    closes = pos[bits == 0]
    # an opening at excess e is matched by the next closing back at e-1;
    # within one level openings and closings alternate in position order
    okey = exc[opens] * (m + 1) + opens
    ckey = (exc[closes] + 1) * (m + 1) + closes
    close_of = closes[np.argsort(ckey, kind="stable")][np.argsort(np.argsort(okey, kind="stable"), kind="stable")]
    leafmark = np.zeros(m + 1, dtype=np.int64)
    leafmark[1:] = np.cumsum((bits == 1) & (np.append(bits[1:], 0) == 0))
    nleaves = leafmark[close_of + 1] - leafmark[opens]
    nnodes = len(opens)
    depth = exc[opens]
    # parent: last opening before p one level up
    sorted_keys = np.sort(okey)
    order_by_key = np.argsort(okey, kind="stable")
    q = np.searchsorted(sorted_keys, (depth - 1) * (m + 1) + opens) - 1
    parent = np.where(depth > 1, order_by_key[np.maximum(q, 0)], -1)
    # openings are already in preorder, so children of a parent appear in order
    ordinal = np.zeros(nnodes, dtype=np.int64)
    if nnodes > 1:
        kids = np.arange(1, nnodes)
        par = parent[1:]
        srt = np.argsort(par, kind="stable")
        ps = par[srt]
        first = np.searchsorted(ps, ps)
        ordinal[kids[srt]] = np.arange(nnodes - 1) - first
    heavy = nleaves >= d
    nchildren = np.bincount(parent[1:], minlength=nnodes) if nnodes > 1 else np.zeros(1, np.int64)
    hk = np.flatnonzero(heavy[1:]) + 1
    nheavy = np.bincount(parent[hk], minlength=nnodes) if len(hk) else np.zeros(nnodes, np.int64)
    heavy_ord = np.full(nnodes, nnodes, dtype=np.int64)
    np.minimum.at(heavy_ord, parent[hk], ordinal[hk])
    heavy_ord[heavy_ord == nnodes] = -1
    nlight = nchildren - nheavy
    special = nheavy >= 2
    marked = special | ((nheavy == 1) & (nlight >= d))
    return NodeClasses(opens, parent, ordinal, nleaves, nchildren, heavy, nheavy, heavy_ord, special, marked, d)


class NodeDicts:
    """The D bitvector, the dictionaries of marked nodes and heavy-child ordinals."""

    def __init__(self, D: BitVec, bounds: BitVec, keys, child, rem_lo, rem_hi, heavy_child_idx, sigma: int, d: int):
        self.D = D
        self.bounds = bounds  # one 1 per dictionary followed by one 0 per entry
        self.keys = list(keys)
        self.child = list(child)
        self.rem_lo = list(rem_lo)
        self.rem_hi = list(rem_hi)
        self.heavy_child_idx = list(heavy_child_idx)  # ordinal + 1, 0 when absent
        self.sigma = sigma
        self.d = d

    @classmethod
    def assemble(cls, classes: NodeClasses, entries: dict, sigma: int) -> "NodeDicts":
        """``entries`` maps marked preorder -> list of (symbol, ordinal, rem_lo, rem_hi)."""
        marked = classes.marked
        D = BitVec.from_bits(marked)
        bound_bits = []
        keys, child, rlo, rhi = [], [], [], []
        for pre in np.flatnonzero(marked).tolist():
            ent = sorted(entries[pre])
            bound_bits.append(1)
            bound_bits.extend([0] * len(ent))
            for a, o, lo, hi in ent:
                keys.append(a)
                child.append(o)
                rlo.append(lo)
                rhi.append(hi)
        unmarked = ~marked
        hci = np.where(classes.heavy & (classes.nheavy == 1), classes.heavy_ord + 1, 0)[unmarked]
        return cls(D, BitVec.from_bits(bound_bits), keys, child, rlo, rhi, hci.tolist(), sigma, classes.d)

    def is_marked(self, pre: int) -> bool:
        return bool(self.D[pre])

    def _range(self, pre: int) -> tuple[int, int]:
        if not self.D[pre]:
            raise ContractError("node %d carries no dictionary" % pre)
        k = self.D.rank1(pre)  # 1-based dictionary number
        b = self.bounds
        start = b.select1(k) - (k - 1)
        end = b.select1(k + 1) - k if k < b.ones else b.zeros
        return start, end

    def entries_of(self, pre: int) -> list[tuple[int, int, int, int]]:
        s, e = self._range(pre)
        return [(self.keys[x], self.child[x], self.rem_lo[x], self.rem_hi[x]) for x in range(s, e)]

    def lookup(self, pre: int, a: int, l: int, r: int, seq: SequenceIndex, stats=None):
        """(child ordinal, rank_a(l-1), rank_a(r)) if a labels a heavy child, else None.

        [l..r] is the node's interval in the reversed-text BWT; it tells which
        chunk each stored remainder belongs to.
        """
        if stats is not None:
            stats.dict_lookups += 1
        s, e = self._range(pre)
        x = bisect_left(self.keys, a, s, e)
        if x == e or self.keys[x] != a:
            return None
        sigma = self.sigma
        lo = 0 if l == 0 else seq.chunk_base(a, (l - 1) // sigma) + self.rem_lo[x]
        hi = seq.chunk_base(a, r // sigma) + self.rem_hi[x]
        return self.child[x], lo, hi

    def heavy_child_of(self, pre: int) -> int:
        if self.D[pre]:
            raise ContractError("node %d is marked; use its dictionary" % pre)
        v = self.heavy_child_idx[self.D.rank0(pre) - 1]
        if v == 0:
            raise NotFoundError("node %d has no single heavy child" % pre)
        return v - 1

    @property
    def num_entries(self) -> int:
        return len(self.keys)

    def size_report(self) -> dict:
        ws = _width(self.sigma - 1)
        wr = _width(self.sigma)
        return {
            "D": self.D.size_in_bits(),
            "dict_bounds": self.bounds.size_in_bits(),
            "dict_entries": self.num_entries * (2 * ws + 2 * wr),
            "heavy_child_idx": len(self.heavy_child_idx) * _width(self.d),
        }

    def dictionary_bits(self) -> int:
        rep = self.size_report()
        return rep["D"] + rep["dict_bounds"] + rep["dict_entries"]

    def to_arrays(self) -> dict:
        return {
            "D_words": self.D.words(),
            "D_len": np.array([len(self.D)], dtype=np.int64),
            "bounds_words": self.bounds.words(),
            "bounds_len": np.array([len(self.bounds)], dtype=np.int64),
            "keys": np.asarray(self.keys, dtype=np.int64),
            "child": np.asarray(self.child, dtype=np.int64),
            "rem_lo": np.asarray(self.rem_lo, dtype=np.int64),
            "rem_hi": np.asarray(self.rem_hi, dtype=np.int64),
            "heavy_child_idx": np.asarray(self.heavy_child_idx, dtype=np.int64),
        }

    @classmethod
    def from_arrays(cls, arr: dict, sigma: int, d: int) -> "NodeDicts":
        D = BitVec(arr["D_words"], int(arr["D_len"][0]))
        bounds = BitVec(arr["bounds_words"], int(arr["bounds_len"][0]))
        return cls(D, bounds, arr["keys"].tolist(), arr["child"].tolist(), arr["rem_lo"].tolist(),
                   arr["rem_hi"].tolist(), arr["heavy_child_idx"].tolist(), sigma, d)
