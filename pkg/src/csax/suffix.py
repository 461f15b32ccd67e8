"""Texts, suffix arrays (SA-IS) and BWTs.

A :class:`Text` is a dense-coded symbol string whose last symbol is the
sentinel 0. Byte values are mapped to codes 1..sigma-1 in byte order, so
code order equals byte order and the sentinel sorts first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BuildError


@dataclass(frozen=True)
class Alphabet:
    """Bijection between the bytes used by a text and codes 1..sigma-1."""

    symbols: bytes  # symbols[c - 1] is the byte for code c
    table: tuple = field(repr=False, compare=False, default=())

    def __post_init__(self):
        if list(self.symbols) != sorted(set(self.symbols)):
            raise BuildError("alphabet symbols must be strictly increasing")
        if 0 in self.symbols:
            raise BuildError("byte 0x00 is reserved for the sentinel")
        table = [-1] * 256
        for code, byte in enumerate(self.symbols, start=1):
            table[byte] = code
        object.__setattr__(self, "table", tuple(table))

    @property
    def sigma(self) -> int:
        return len(self.symbols) + 1

    def encode(self, data: bytes):
        """Codes for ``data``, or None if some byte is not in the alphabet."""
        table = self.table
        out = [table[b] for b in data]
        if -1 in out:
            return None
        return out

    def decode(self, codes) -> bytes:
        syms = self.symbols
        if any(c == 0 for c in codes):
            raise ValueError("the sentinel has no byte representation")
        return bytes(syms[c - 1] for c in codes)


class Text:
    """Symbol string over [0..sigma-1] ending in a unique sentinel 0."""

    __slots__ = ("symbols", "alphabet")

    def __init__(self, symbols, alphabet: Alphabet):
        arr = np.asarray(symbols, dtype=np.int64)
        if len(arr) == 0 or arr[-1] != 0:
            raise BuildError("text must end with the sentinel 0")
        if np.count_nonzero(arr == 0) != 1:
            raise BuildError("sentinel must occur exactly once")
        if arr.max() >= alphabet.sigma:
            raise BuildError("symbol outside alphabet")
        self.symbols = arr
        self.alphabet = alphabet

    @classmethod
    def from_bytes(cls, data: bytes) -> "Text":
        data = bytes(data)
        if b"\x00" in data:
            raise BuildError("input contains the reserved sentinel byte 0x00")
        alphabet = Alphabet(bytes(sorted(set(data))))
        lut = np.array(alphabet.table, dtype=np.int64)
        body = lut[np.frombuffer(data, dtype=np.uint8)] if data else np.zeros(0, np.int64)
        return cls(np.concatenate([body, [0]]), alphabet)

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def sigma(self) -> int:
        return self.alphabet.sigma

    def __len__(self) -> int:
        return len(self.symbols)

    def to_bytes(self) -> bytes:
        """The original bytes, sentinel excluded."""
        return self.alphabet.decode(self.symbols[:-1].tolist())


def reverse_text(t: Text) -> Text:
    """Reverse of T[0..n-2] with a fresh sentinel appended."""
    body = t.symbols[:-1][::-1]
    return Text(np.concatenate([body, [0]]), t.alphabet)


# -- SA-IS -----------------------------------------------------------------


def _buckets(cnt, end: bool):
    out = [0] * len(cnt)
    total = 0
    for c, k in enumerate(cnt):
        total += k
        out[c] = total if end else total - k
    return out


def _induce(s, sa, stype, cnt):
    n = len(s)
    head = _buckets(cnt, end=False)
    for i in range(n):
        j = sa[i] - 1
        if j >= 0 and not stype[j]:
            c = s[j]
            sa[head[c]] = j
            head[c] += 1
    tail = _buckets(cnt, end=True)
    for i in range(n - 1, -1, -1):
        j = sa[i] - 1
        if j >= 0 and stype[j]:
            c = s[j]
            tail[c] -= 1
            sa[tail[c]] = j


def sais(s: list[int], k: int) -> list[int]:
    """Suffix array of ``s`` by induced sorting.

    ``s`` must end with a unique symbol 0 smaller than all others; symbols
    are in [0..k-1]. Runs in O(n + k) time.
    """
    n = len(s)
    if n == 1:
        return [0]
    if n == 2:
        return [1, 0]
    stype = [False] * n
    stype[n - 1] = True
    for i in range(n - 2, -1, -1):
        a, b = s[i], s[i + 1]
        stype[i] = a < b or (a == b and stype[i + 1])
    is_lms = [False] * n
    lms = []
    for i in range(1, n):
        if stype[i] and not stype[i - 1]:
            is_lms[i] = True
            lms.append(i)
    cnt = [0] * k
    for c in s:
        cnt[c] += 1

    sa = [-1] * n
    tail = _buckets(cnt, end=True)
    for i in reversed(lms):
        c = s[i]
        tail[c] -= 1
        sa[tail[c]] = i
    _induce(s, sa, stype, cnt)

    # name LMS substrings in sorted order
    names = [-1] * n
    name = -1
    prev = -1
    for p in sa:
        if not is_lms[p]:
            continue
        if prev < 0 or not _lms_equal(s, stype, is_lms, prev, p):
            name += 1
        names[p] = name
        prev = p
    reduced = [names[p] for p in lms]
    if name + 1 < len(lms):
        sa1 = sais(reduced, name + 1)
    else:
        sa1 = [0] * len(lms)
        for i, c in enumerate(reduced):
            sa1[c] = i

    sa = [-1] * n
    tail = _buckets(cnt, end=True)
    for idx in reversed(sa1):
        i = lms[idx]
        c = s[i]
        tail[c] -= 1
        sa[tail[c]] = i
    _induce(s, sa, stype, cnt)
    return sa


def _lms_equal(s, stype, is_lms, a, b) -> bool:
    n = len(s)
    if a == n - 1 or b == n - 1:
        return False
    d = 0
    while True:
        if s[a + d] != s[b + d] or stype[a + d] != stype[b + d]:
            return False
        if d > 0 and (is_lms[a + d] or is_lms[b + d]):
            return is_lms[a + d] and is_lms[b + d]
        d += 1


@dataclass
class SuffixArrayBundle:
    sa: np.ndarray
    bwt: np.ndarray


def build_suffix_array(t: Text) -> SuffixArrayBundle:
    """Suffix array and BWT of ``t``; bwt[i] = T[(sa[i] - 1) mod n]."""
    s = t.symbols.tolist()
    sa = np.array(sais(s, t.sigma), dtype=np.int64)
    bwt = t.symbols[(sa - 1) % t.n]
    return SuffixArrayBundle(sa=sa, bwt=bwt)


def lcp_array(t: Text, sa) -> list[int]:
    """Kasai et al.: lcp[i] = LCP(T[sa[i-1]..], T[sa[i]..]), lcp[0] = 0."""
    s = t.symbols.tolist()
    sa = sa.tolist() if isinstance(sa, np.ndarray) else sa
    n = len(s)
    rank = [0] * n
    for i, p in enumerate(sa):
        rank[p] = i
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = sa[r - 1]
        # the unique sentinel stops the scan before either suffix runs out
        while s[i + h] == s[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return lcp
