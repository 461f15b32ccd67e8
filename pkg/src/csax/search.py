"""Pattern search that walks T's suffix tree while stepping backward on the
reversed text's BWT.

After reading P[0..i-1] the state is the BWT range [l..r] of its reverse
plus a cursor. While the locus of P[0..i-1] is heavy the cursor is that
locus node (the node itself, or the node at the lower end of the edge the
match currently ends in); once the locus turns light the cursor is dropped
for good. Each symbol a = P[i] is handled by exactly one case:

1. at a marked node whose dictionary has a: the stored rank pair gives the
   new range and the heavy child becomes the cursor;
2. at a marked node without a in its dictionary: one general backward
   step, then the match is light;
3. at an unmarked heavy node: fewer than d*d positions of the range hold
   anything but the heavy child's symbol, so two small interval rank
   queries at the two ends settle the new range if a occurs in both
   windows (3a); otherwise one general backward step (3b);
4. light match: the range has at most d positions, so one small interval
   rank query covers it;
5. inside an edge: the range holds a single symbol c, checked with two
   accesses and two partial ranks; a must equal c and the new range follows
   from the partial rank at r.

Only cases 2 and 3b use general rank, and each moves the match to a light
locus, so a query spends at most one backward step (two rank calls) on it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .builder import BuildResult, build_all
from .counters import QueryStats
from .errors import ContractError
from .fm_index import FMIndex
from .node_dict import NodeDicts
from .params import group_size
from .suffix import Alphabet, Text
from .topology import SuffixTreeTopo

LIGHT = -1


@dataclass
class SearchResult:
    interval: tuple | None
    stats: QueryStats
    cases: list  # case label per consumed symbol, for tests

    @property
    def count(self) -> int:
        if self.interval is None:
            return 0
        return self.interval[1] - self.interval[0] + 1


class SelfIndex:
    """Counting, locating and extracting over a text without storing the text."""

    def __init__(self, fm: FMIndex, topo: SuffixTreeTopo, dicts: NodeDicts, alphabet: Alphabet, d: int,
                 digest: bytes = b""):
        self.fm = fm
        self.digest = digest  # sha256 of the original text
        self.topo = topo
        self.dicts = dicts
        self.alphabet = alphabet
        self.d = d
        self.g = group_size(d)
        self.n = fm.n
        if fm.seq.g != self.g:
            raise ContractError("sequence group size %d != %d" % (fm.seq.g, self.g))

    @classmethod
    def from_build(cls, res: BuildResult) -> "SelfIndex":
        digest = hashlib.sha256(res.text.to_bytes()).digest()
        return cls(res.fm, res.topo, res.dicts, res.text.alphabet, res.d, digest)

    @classmethod
    def build(cls, data: bytes, sample_rate: int | None = None) -> "SelfIndex":
        return cls.from_build(build_all(Text.from_bytes(data), sample_rate))

    @property
    def sigma(self) -> int:
        return self.alphabet.sigma

    @property
    def sample_rate(self) -> int:
        return self.fm.samples.b

    # -- counting ----------------------------------------------------------------

    def search_interval(self, pattern: bytes, trace: bool = False) -> SearchResult:
        stats = QueryStats()
        cases = []
        n = self.n
        if not pattern:
            return SearchResult((0, n - 1), stats, cases)
        codes = self.alphabet.encode(pattern)
        if codes is None:
            return SearchResult(None, stats, cases)
        fm, topo, dicts = self.fm, self.topo, self.dicts
        seq, irx, acc = fm.seq, fm.irx, fm.acc
        d, g = self.d, self.g
        l, r = 0, n - 1
        v = 0 if n >= d else LIGHT
        for a in codes:
            if v == LIGHT:
                if r - l > d:
                    raise AssertionError("light range wider than d")
                res = irx.query(a, l, r, stats)
                if res is None:
                    return SearchResult(None, stats, cases)
                l, r = acc[a] + res[0], acc[a] + res[1] - 1
                if trace:
                    cases.append(4)
                continue
            c = seq.access(l)
            if l < r and c == seq.access(r):
                pr = seq.partial_rank(r, stats)
                uniform = pr - seq.partial_rank(l, stats) == r - l
            else:
                uniform = l == r
            if uniform:
                # case 5: strictly inside the edge above v
                if a != c:
                    return SearchResult(None, stats, cases)
                if l == r:
                    pr = seq.partial_rank(r, stats)
                l, r = acc[c] + pr - (r - l + 1), acc[c] + pr - 1
                if trace:
                    cases.append(5)
                continue
            pre = topo.preorder(v)
            if dicts.is_marked(pre):
                hit = dicts.lookup(pre, a, l, r, seq, stats)
                if hit is not None:
                    ordinal, lo, hi = hit
                    l, r = acc[a] + lo, acc[a] + hi - 1
                    v = topo.child(v, ordinal)
                    if trace:
                        cases.append(1)
                    continue
                step = fm.backward_step(a, l, r, stats)
                if trace:
                    cases.append(2)
            else:
                q1 = irx.query(a, l, min(l + g, r), stats)
                q2 = irx.query(a, max(r - g, l), r, stats) if q1 is not None else None
                if q2 is not None:
                    lo, hi = q1[0], q2[1]
                    l, r = acc[a] + lo, acc[a] + hi - 1
                    if hi - lo >= d:
                        v = topo.child(v, dicts.heavy_child_of(pre))
                    else:
                        v = LIGHT
                    if trace:
                        cases.append(3)
                    continue
                step = fm.backward_step(a, l, r, stats)
                if trace:
                    cases.append(-3)
            if step is None:
                return SearchResult(None, stats, cases)
            l, r = step
            v = LIGHT
        return SearchResult((l, r), stats, cases)

    def count(self, pattern: bytes) -> int:
        return self.search_interval(pattern).count

    def count_locate(self, pattern: bytes, limit: int | None = None) -> list[int]:
        res = self.search_interval(pattern)
        if res.interval is None:
            return []
        l, r = res.interval
        if not pattern:
            pos = list(range(self.n))
        else:
            pos = sorted(self.fm.locate(l, r, len(pattern), res.stats))
        return pos if limit is None else pos[:limit]

    def extract(self, i: int, length: int) -> bytes:
        """T[i..i+length-1] as bytes; the range must lie inside the original text."""
        if i < 0 or length < 0 or i + length > self.n - 1:
            raise IndexError("extract range [%d, %d) outside the text of length %d" % (i, i + length, self.n - 1))
        return self.alphabet.decode(self.fm.extract(i, length))

    def extract_codes(self, i: int, length: int) -> list[int]:
        return self.fm.extract(i, length)

    def size_report(self) -> dict:
        rep = dict(self.fm.size_report())
        rep["topology"] = self.topo.size_in_bits()
        rep.update(self.dicts.size_report())
        return rep
