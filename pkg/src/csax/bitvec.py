"""Plain bitvectors with rank and select directories.

Bits are packed little-endian into 64-bit words. The rank directory is
two-level: an absolute count every 512 bits and a count relative to the
superblock for every word, so rank1 is two list reads plus one popcount.
select1/select0 jump to a superblock with sampled positions (every 512th
one or zero) and finish with a bounded scan.

Directories are rebuilt from the words; only ``m`` and the words are ever
serialized.
"""

from __future__ import annotations

from bisect import bisect_left

import numpy as np

from .errors import NotFoundError

WORD = 64
SB_WORDS = 8
SB_BITS = WORD * SB_WORDS
SAMPLE = 512
MASK64 = (1 << 64) - 1

# _LOW[k] keeps bits 0..k of a word.
_LOW = [(2 << k) - 1 for k in range(WORD)]
_POP8 = [bin(x).count("1") for x in range(256)]
# _SEL8[x * 8 + r] is the offset of the (r+1)-th set bit of byte x.
_SEL8 = [0] * (256 * 8)
for _x in range(256):
    _r = 0
    for _b in range(8):
        if _x >> _b & 1:
            _SEL8[_x * 8 + _r] = _b
            _r += 1


def _select_in_word(word: int, r: int) -> int:
    """Offset of the r-th (1-based) set bit of ``word``."""
    shift = 0
    while True:
        byte = word & 0xFF
        c = _POP8[byte]
        if r <= c:
            return shift + _SEL8[byte * 8 + r - 1]
        r -= c
        word >>= 8
        shift += 8


def pack_bits(bits) -> np.ndarray:
    """Pack an array of 0/1 values into little-endian uint64 words."""
    arr = np.asarray(bits, dtype=np.uint8)
    packed = np.packbits(arr, bitorder="little")
    pad = (-len(packed)) % 8
    if pad:
        packed = np.concatenate([packed, np.zeros(pad, dtype=np.uint8)])
    return packed.view("<u8").copy()


def _as_bit_array(bits) -> np.ndarray:
    if isinstance(bits, str):
        return np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    arr = np.asarray(bits)
    if arr.dtype == np.bool_:
        return arr.astype(np.uint8)
    return (arr != 0).astype(np.uint8)


class BitVec:
    """Immutable bitvector answering access, rank and select."""

    __slots__ = ("m", "ones", "_words", "_sup", "_zsup", "_blk", "_samp1", "_samp0")

    def __init__(self, words: np.ndarray, m: int):
        words = np.asarray(words, dtype=np.uint64)
        nwords = (m + WORD - 1) // WORD
        if len(words) < nwords:
            raise ValueError("word array too short for %d bits" % m)
        words = words[:nwords].copy()
        if m % WORD and nwords:
            words[-1] &= np.uint64((1 << (m % WORD)) - 1)
        self.m = m
        self._build(words)

    @classmethod
    def from_bits(cls, bits) -> "BitVec":
        arr = _as_bit_array(bits)
        return cls(pack_bits(arr), len(arr))

    def _build(self, words: np.ndarray) -> None:
        nwords = len(words)
        nsb = (nwords + SB_WORDS - 1) // SB_WORDS
        pop = np.bitwise_count(words).astype(np.int64)
        padded = np.zeros(nsb * SB_WORDS, dtype=np.int64)
        padded[:nwords] = pop
        per_sb = padded.reshape(nsb, SB_WORDS) if nsb else padded.reshape(0, SB_WORDS)
        sup = np.zeros(nsb + 1, dtype=np.int64)
        np.cumsum(per_sb.sum(axis=1), out=sup[1:])
        within = np.cumsum(per_sb, axis=1) - per_sb
        self.ones = int(sup[-1])
        self._words = words.tolist()
        self._sup = sup.tolist()
        self._blk = within.reshape(-1)[:nwords].tolist()
        # zeros before each superblock; the final entry counts only valid bits
        zsup = np.arange(nsb + 1, dtype=np.int64) * SB_BITS - sup
        zsup[-1] = self.m - self.ones
        self._zsup = zsup.tolist()
        # superblock holding the (k*SAMPLE + 1)-th one / zero
        self._samp1 = (np.searchsorted(sup, np.arange(0, self.ones, SAMPLE) + 1) - 1).tolist()
        zeros = self.m - self.ones
        self._samp0 = (np.searchsorted(zsup, np.arange(0, zeros, SAMPLE) + 1) - 1).tolist()

    def __len__(self) -> int:
        return self.m

    @property
    def zeros(self) -> int:
        return self.m - self.ones

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.m:
            raise IndexError("bit index %d out of range [0, %d)" % (i, self.m))
        return self._words[i >> 6] >> (i & 63) & 1

    access = __getitem__

    def rank1(self, i: int) -> int:
        """Number of set bits in positions 0..i (0 for i == -1)."""
        if i < 0:
            if i == -1:
                return 0
            raise IndexError("rank index %d out of range" % i)
        if i >= self.m:
            raise IndexError("rank index %d out of range [0, %d)" % (i, self.m))
        w = i >> 6
        return self._sup[i >> 9] + self._blk[w] + (self._words[w] & _LOW[i & 63]).bit_count()

    def rank0(self, i: int) -> int:
        return i + 1 - self.rank1(i)

    def select1(self, k: int) -> int:
        """Position of the k-th set bit, k >= 1."""
        if not 1 <= k <= self.ones:
            raise NotFoundError("select1(%d) with %d ones" % (k, self.ones))
        s = (k - 1) >> 9
        samp = self._samp1
        lo = samp[s]
        hi = samp[s + 1] + 2 if s + 1 < len(samp) else len(self._sup)
        sb = bisect_left(self._sup, k, lo, hi) - 1
        r = k - self._sup[sb]
        w = sb * SB_WORDS
        blk = self._blk
        last = min(w + SB_WORDS, len(blk)) - 1
        while w < last and blk[w + 1] < r:
            w += 1
        return (w << 6) + _select_in_word(self._words[w], r - blk[w])

    def select0(self, k: int) -> int:
        """Position of the k-th zero bit, k >= 1."""
        if not 1 <= k <= self.m - self.ones:
            raise NotFoundError("select0(%d) with %d zeros" % (k, self.m - self.ones))
        s = (k - 1) >> 9
        samp = self._samp0
        lo = samp[s]
        hi = samp[s + 1] + 2 if s + 1 < len(samp) else len(self._zsup)
        sb = bisect_left(self._zsup, k, lo, hi) - 1
        r = k - self._zsup[sb]
        w = sb * SB_WORDS
        blk = self._blk
        last = min(w + SB_WORDS, len(blk)) - 1
        while w < last and ((w + 1 - sb * SB_WORDS) << 6) - blk[w + 1] < r:
            w += 1
        before = ((w - sb * SB_WORDS) << 6) - blk[w]
        return (w << 6) + _select_in_word(~self._words[w] & MASK64, r - before)

    def words(self) -> np.ndarray:
        return np.array(self._words, dtype=np.uint64)

    def to_list(self) -> list[int]:
        return [self[i] for i in range(self.m)]

    def size_in_bits(self) -> int:
        """Payload plus directory bits at their designed widths.

        Superblock counters are 64 bits, per-word relative counters 16 bits,
        select samples 32 bits each.
        """
        nwords = len(self._words)
        nsb = len(self._sup) - 1
        return self.m + 64 * nsb + 16 * nwords + 32 * (len(self._samp1) + len(self._samp0))

    def __eq__(self, other) -> bool:
        return isinstance(other, BitVec) and self.m == other.m and self._words == other._words

    def __repr__(self) -> str:
        return "BitVec(m=%d, ones=%d)" % (self.m, self.ones)
