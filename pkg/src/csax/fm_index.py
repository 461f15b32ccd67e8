"""FM-index over the BWT of the reversed text.

Backward search on the reversed text's BWT with the symbols of P taken left
to right yields the suffix-array range of reverse(P) in the reversed text,
whose width is the number of occurrences of P in T. An occurrence of
reverse(P) at reversed-text position q corresponds to P at T position
n - 1 - q - |P|.

Reading the reversed-text BWT at rank r gives T[n - 1 - SA[r]] for every r,
so LF-walks here move forward through T; that is what ``extract`` uses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitvec import BitVec
from .errors import ContractError
from .interval_rank import IntervalRankIndex
from .params import default_sample_rate
from .sequence import SequenceIndex, _width
from .suffix import SuffixArrayBundle, Text, build_suffix_array, reverse_text


@dataclass
class SampledSA:
    """Suffix-array samples of the reversed text.

    Rank r is marked iff SA[r] % b == 0 or SA[r] == n - 1; ``values`` lists
    the sampled SA values in rank order and ``inv`` holds ISA[k*b].
    """

    b: int
    marked: BitVec
    values: list
    inv: list

    @classmethod
    def build(cls, sa: np.ndarray, b: int) -> "SampledSA":
        n = len(sa)
        mark = (sa % b == 0) | (sa == n - 1)
        isa = np.empty(n, dtype=np.int64)
        isa[sa] = np.arange(n)
        return cls(b, BitVec.from_bits(mark), sa[mark].tolist(), isa[::b].tolist())

    def to_arrays(self) -> dict:
        return {
            "b": np.array([self.b], dtype=np.int64),
            "marked_len": np.array([len(self.marked)], dtype=np.int64),
            "marked": self.marked.words(),
            "values": np.asarray(self.values, dtype=np.int64),
            "inv": np.asarray(self.inv, dtype=np.int64),
        }

    @classmethod
    def from_arrays(cls, arr: dict) -> "SampledSA":
        marked = BitVec(arr["marked"], int(arr["marked_len"][0]))
        return cls(int(arr["b"][0]), marked, arr["values"].tolist(), arr["inv"].tolist())

    def size_in_bits(self, n: int) -> int:
        w = _width(n)
        return self.marked.size_in_bits() + (len(self.values) + len(self.inv)) * w


class FMIndex:
    def __init__(self, seq: SequenceIndex, irx: IntervalRankIndex, acc: list, samples: SampledSA):
        self.seq = seq
        self.irx = irx
        self.acc = acc
        self.samples = samples
        self.n = seq.m
        self.sigma = seq.sigma
        self._marked = samples.marked

    @classmethod
    def build(cls, t: Text, b: int | None = None, rev_bundle: SuffixArrayBundle | None = None) -> "FMIndex":
        n = t.n
        b = default_sample_rate(n) if b is None else b
        if b < 1:
            raise ContractError("sample rate must be >= 1")
        if rev_bundle is None:
            rev_bundle = build_suffix_array(reverse_text(t))
        bwt = rev_bundle.bwt
        seq = SequenceIndex.build(bwt, t.sigma)
        irx = IntervalRankIndex.build(seq, bwt)
        counts = np.bincount(bwt, minlength=t.sigma)
        acc = np.concatenate([[0], np.cumsum(counts)[:-1]]).tolist()
        return cls(seq, irx, acc, SampledSA.build(rev_bundle.sa, b))

    # -- stepping --------------------------------------------------------------

    def backward_step(self, a: int, l: int, r: int, stats=None):
        """Range of a.X given the range [l..r] of X, or None. Two rank queries."""
        if not 0 <= a < self.sigma:
            return None
        lo, hi = self.seq.rank_pair(a, l - 1, r, stats)
        if hi == lo:
            return None
        base = self.acc[a]
        return base + lo, base + hi - 1

    def backward_step_with_ranks(self, a: int, rank_lo: int, rank_hi: int):
        base = self.acc[a]
        return base + rank_lo, base + rank_hi - 1

    def lf(self, j: int, stats=None) -> int:
        """Rank of the suffix one position earlier in the reversed text (one later in T)."""
        seq = self.seq
        return self.acc[seq.access(j)] + seq.partial_rank(j, stats) - 1

    def sa_value(self, r: int, stats=None) -> int:
        """SA of the reversed text at rank r, by LF-walking to a sample."""
        marked = self._marked
        steps = 0
        while not marked[r]:
            r = self.lf(r, stats)
            steps += 1
        if stats is not None:
            stats.lf_steps += steps
        return self.samples.values[marked.rank1(r) - 1] + steps

    def locate(self, l: int, r: int, m: int, stats=None) -> list[int]:
        """T positions of the occurrences whose reversed-text range is [l..r]; unsorted."""
        n = self.n
        out = []
        for k in range(l, r + 1):
            q = self.sa_value(k, stats)
            out.append(n - 1 if q == n - 1 else n - 1 - q - m)
        return out

    def extract(self, i: int, length: int, stats=None) -> list[int]:
        """Symbol codes T[i..i+length-1] (the sentinel may be included)."""
        n = self.n
        if i < 0 or length < 0 or i + length > n:
            raise IndexError("extract range [%d, %d) outside [0, %d]" % (i, i + length, n))
        if length == 0:
            return []
        b = self.samples.b
        j = n - 1 - i
        js = -(-j // b) * b
        if js >= n - 1:
            js, r = n - 1, 0
        else:
            r = self.samples.inv[js // b]
        for _ in range(js - j):
            r = self.lf(r, stats)
        seq = self.seq
        acc = self.acc
        out = []
        for _ in range(length):
            c = seq.access(r)
            out.append(c)
            r = acc[c] + seq.partial_rank(r, stats) - 1
        if stats is not None:
            stats.lf_steps += js - j + length
        return out

    def to_arrays(self) -> dict:
        out = {"acc": np.asarray(self.acc, dtype=np.int64)}
        for prefix, part in (("seq.", self.seq.to_arrays()), ("irx.", self.irx.to_arrays()),
                             ("sa.", self.samples.to_arrays())):
            out.update({prefix + k: v for k, v in part.items()})
        return out

    @classmethod
    def from_arrays(cls, arr: dict, sigma: int, n: int, g: int) -> "FMIndex":
        def part(prefix):
            return {k[len(prefix):]: v for k, v in arr.items() if k.startswith(prefix)}

        seq = SequenceIndex.from_arrays(part("seq."), sigma, n, g)
        irx = IntervalRankIndex.from_arrays(seq, part("irx."))
        return cls(seq, irx, arr["acc"].tolist(), SampledSA.from_arrays(part("sa.")))

    def size_report(self) -> dict:
        return {
            "bwt_payload": self.seq.payload_bits(),
            "chunk_dir": self.seq.chunk_dir_bits(),
            "partial_rank_dir": self.seq.prank_bits(),
            "interval_rank": self.irx.size_in_bits(),
            "acc": len(self.acc) * _width(self.n),
            "samples": self.samples.size_in_bits(self.n),
        }
