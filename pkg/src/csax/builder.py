"""Index construction by a depth-first walk over Weiner links.

Every internal suffix-tree node X of T is reachable from the root through
Weiner links X -> aX (aX is right-branching, hence so is X). The walk keeps,
for the current node, its interval in B (BWT of T) and the interval of
reverse(X) in the reversed text's BWT. Those two intervals are enough to
fill the dictionary of a marked node with its rank pairs, to find which
symbols a give an internal node aX (a precedes X before at least two
distinct following symbols), and to move both intervals to aX.

Only heavy targets are followed by default, which reaches every heavy
node, and hence every node that needs a dictionary. ``full=True`` follows
every target and visits all internal nodes.

The walk handles the largest target last at the same stack level and pushes
the others one level deeper, so each deeper level at least halves the leaf
count and the number of live levels stays within log2(n) + 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .counters import QueryStats
from .fm_index import FMIndex
from .node_dict import NodeClasses, NodeDicts, classify_nodes
from .params import default_sample_rate, heaviness_threshold
from .sequence import SequenceIndex
from .suffix import Text, build_suffix_array, reverse_text
from .topology import SuffixTreeTopo, build_topology


class InvariantError(AssertionError):
    """An internal consistency check failed during construction."""


@dataclass
class WeinerFrame:
    node: int  # handle in T's topology
    bar_node: int  # handle in the reversed text's topology, -1 when inside an edge
    lo: int  # interval in B
    hi: int
    bar_lo: int  # interval in the reversed text's BWT
    bar_hi: int


@dataclass
class BuildReport:
    visited: list = field(default_factory=list)  # preorders in T, in visit order
    max_depth: int = 0
    v_marks: int = 0  # tri-state transitions over the whole walk
    populated: list = field(default_factory=list)  # preorders whose dictionary was filled
    rank_stats: QueryStats = field(default_factory=QueryStats)


class _Workspace:
    def __init__(self, sigma: int):
        self.V = [0] * sigma
        self.touched = []
        self.marks = 0


class WeinerBuilder:
    """Holds the intermediate structures of both texts for one build."""

    def __init__(self, t: Text, fm: FMIndex, topo: SuffixTreeTopo, bar_topo: SuffixTreeTopo,
                 bseq: SequenceIndex, classes: NodeClasses, full: bool = False):
        self.t = t
        self.n = t.n
        self.sigma = t.sigma
        self.fm = fm
        self.topo = topo
        self.bar_topo = bar_topo
        self.bseq = bseq
        self.classes = classes
        self.d = classes.d
        self.threshold = 1 if full else self.d
        self.acc = fm.acc  # T and its reverse have the same symbol counts
        self.entries = {}
        self.report = BuildReport()
        self.ws = _Workspace(self.sigma)

    def root_frame(self) -> WeinerFrame:
        n = self.n
        return WeinerFrame(0, 0, 0, n - 1, 0, n - 1)

    def _uniform(self, lo: int, hi: int) -> bool:
        seq = self.bseq
        if lo == hi:
            return True
        if seq.access(lo) != seq.access(hi):
            return False
        return seq.partial_rank(hi) - seq.partial_rank(lo) == hi - lo

    def _fill_dict(self, f: WeinerFrame, pre: int, kids) -> None:
        bar = self.fm.seq
        d, sigma = self.d, self.sigma
        stats = self.report.rank_stats
        syms = bar.distinct_symbols(f.bar_lo, f.bar_hi)
        if len(kids) != len(syms):
            raise InvariantError("node %d: %d children but %d distinct symbols" % (pre, len(kids), len(syms)))
        ent = []
        for ordinal, (a, freq) in enumerate(syms):
            if kids[ordinal][2] - kids[ordinal][1] + 1 != freq:
                raise InvariantError("child %d of node %d: leaf count != frequency" % (ordinal, pre))
            if freq < d:
                continue
            lo, hi = bar.rank_pair(a, f.bar_lo - 1, f.bar_hi, stats)
            rem_lo = 0 if f.bar_lo == 0 else lo - bar.chunk_base(a, (f.bar_lo - 1) // sigma)
            rem_hi = hi - bar.chunk_base(a, f.bar_hi // sigma)
            ent.append((a, ordinal, rem_lo, rem_hi))
        if pre in self.entries:
            raise InvariantError("dictionary of node %d filled twice" % pre)
        self.entries[pre] = ent
        self.report.populated.append(pre)

    def _weiner_symbols(self, kids) -> list[int]:
        """Symbols a for which aX is right-branching (seen in two child intervals)."""
        bseq, ws = self.bseq, self.ws
        V, touched = ws.V, ws.touched
        twice = []
        for _, lo, hi in kids:
            for a, _ in bseq.distinct_symbols(lo, hi):
                s = V[a]
                if s == 0:
                    V[a] = 1
                    touched.append(a)
                    ws.marks += 1
                elif s == 1:
                    V[a] = 2
                    twice.append(a)
                    ws.marks += 1
        for a in touched:
            V[a] = 0
        touched.clear()
        return twice

    def process(self, f: WeinerFrame) -> list[WeinerFrame]:
        topo = self.topo
        pre = topo.preorder(f.node)
        self.report.visited.append(pre)
        kids = topo.children_ranges(f.node)
        span = (kids[0][1], kids[-1][2]) if kids else topo.leaf_range(f.node)
        if span != (f.lo, f.hi) or f.bar_hi - f.bar_lo != f.hi - f.lo:
            raise InvariantError("intervals disagree with the topology at node %d" % pre)
        if self.classes.marked[pre]:
            self._fill_dict(f, pre, kids)
        if not kids:
            return []
        linked = self._weiner_symbols(kids)
        if not linked:
            return []
        linked_set = set(linked)
        bseq, bar_topo, acc = self.bseq, self.bar_topo, self.acc
        stats = self.report.rank_stats
        # children of the reversed-text locus, in symbol order, align with the
        # distinct symbols preceding X in T
        preceding = bseq.distinct_symbols(f.lo, f.hi)
        if f.bar_node >= 0:
            bar_kids = bar_topo.children_ranges(f.bar_node)
            if len(bar_kids) != len(preceding):
                raise InvariantError("reversed locus of node %d has %d children, expected %d"
                                     % (pre, len(bar_kids), len(preceding)))
        elif len(preceding) != 1:
            raise InvariantError("edge locus of node %d sees %d preceding symbols" % (pre, len(preceding)))
        out = []
        offset = f.bar_lo
        for k, (a, freq) in enumerate(preceding):
            start = offset
            offset += freq
            if freq < self.threshold or a not in linked_set:
                continue
            if f.bar_node >= 0:
                _, blo, bhi = bar_kids[k]
                if (blo, bhi) != (start, offset - 1):
                    raise InvariantError("child interval mismatch under node %d" % pre)
            else:
                blo, bhi = f.bar_lo, f.bar_hi
            r0, r1 = bseq.rank_pair(a, f.lo - 1, f.hi, stats)
            lo, hi = acc[a] + r0, acc[a] + r1 - 1
            node = topo.node_from_range(lo, hi)
            bar_node = -1 if self._uniform(lo, hi) else bar_topo.node_from_range(blo, bhi)
            out.append(WeinerFrame(node, bar_node, lo, hi, blo, bhi))
        return out

    def traverse(self) -> BuildReport:
        rep = self.report
        levels = [[self.root_frame()]]
        rep.max_depth = 1
        while levels:
            level = levels[-1]
            if not level:
                levels.pop()
                continue
            targets = self.process(level.pop())
            if not targets:
                continue
            targets.sort(key=lambda fr: fr.hi - fr.lo)
            level.append(targets.pop())
            if targets:
                levels.append(targets)
                rep.max_depth = max(rep.max_depth, len(levels))
        rep.v_marks = self.ws.marks
        return rep


@dataclass
class BuildResult:
    text: Text
    fm: FMIndex
    topo: SuffixTreeTopo
    dicts: NodeDicts
    d: int
    report: BuildReport
    classes: NodeClasses


def prepare(t: Text, b: int | None = None, full: bool = False) -> WeinerBuilder:
    """Build the intermediate structures of both texts and a walker over them."""
    n = t.n
    b = default_sample_rate(n) if b is None else b
    d = heaviness_threshold(t.sigma)
    fwd = build_suffix_array(t)
    topo = build_topology(fwd, t)
    rev_text = reverse_text(t)
    rev = build_suffix_array(rev_text)
    bar_topo = build_topology(rev, rev_text)
    fm = FMIndex.build(t, b, rev_bundle=rev)
    bseq = SequenceIndex.build(fwd.bwt, t.sigma, with_chunks=False)
    classes = classify_nodes(topo, d)
    return WeinerBuilder(t, fm, topo, bar_topo, bseq, classes, full=full)


def build_all(t: Text, b: int | None = None, full: bool = False, check_coverage: bool = True) -> BuildResult:
    """Build every component of the self-index for ``t``.

    Intermediate structures of the reversed text (its topology) and of B
    (its sequence index) are dropped when this returns.
    """
    wb = prepare(t, b, full)
    report = wb.traverse()
    classes = wb.classes
    if check_coverage:
        need = set(np.flatnonzero(classes.marked).tolist())
        got = set(report.populated)
        if need != got:
            raise InvariantError("dictionaries missing for %d marked nodes" % len(need - got))
    dicts = NodeDicts.assemble(classes, wb.entries, t.sigma)
    return BuildResult(t, wb.fm, wb.topo, dicts, wb.d, report, classes)
