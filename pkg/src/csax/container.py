"""On-disk index container.

Layout (all integers little-endian):

* fixed header: magic ``CSAX``, format version, n, sigma, sample rate b,
  threshold d, group size g, section count, sha256 of the original text;
* section table: per section a 24-byte name, 8-byte numpy dtype string,
  offset, byte length and CRC32 of the payload;
* CRC32 of the header and table together;
* section payloads, each starting on an 8-byte boundary.

Only payload words and plain arrays are stored; rank/select directories are
rebuilt when the index is loaded.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

from .bitvec import BitVec
from .errors import CorruptIndexError
from .fm_index import FMIndex
from .node_dict import NodeDicts
from .search import SelfIndex
from .suffix import Alphabet
from .topology import SuffixTreeTopo

MAGIC = b"CSAX"
VERSION = 1
_HEAD = struct.Struct("<4sIQIIIII32s")
_ENTRY = struct.Struct("<24s8sQQI4x")
_CRC = struct.Struct("<I")


def _compact(arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr)
    if arr.dtype == np.uint64 or arr.size == 0:
        return arr.astype(arr.dtype.newbyteorder("<"))
    lo, hi = int(arr.min()), int(arr.max())
    if lo >= 0:
        for dt in ("<u1", "<u2", "<u4", "<u8"):
            if hi <= np.iinfo(dt).max:
                return arr.astype(dt)
    return arr.astype("<i8")


def index_arrays(idx: SelfIndex) -> dict:
    out = {"alphabet": np.frombuffer(idx.alphabet.symbols, dtype=np.uint8)}
    out.update({"fm." + k: v for k, v in idx.fm.to_arrays().items()})
    out["bp"] = idx.topo.bp.words()
    out["bp_len"] = np.array([len(idx.topo.bp)], dtype=np.int64)
    out.update({"nd." + k: v for k, v in idx.dicts.to_arrays().items()})
    return out


def dumps(idx: SelfIndex) -> bytes:
    arrays = {k: _compact(v) for k, v in index_arrays(idx).items()}
    names = list(arrays)
    table_size = len(names) * _ENTRY.size
    offset = _HEAD.size + table_size + _CRC.size
    offset += -offset % 8
    entries = []
    blobs = []
    for name in names:
        data = arrays[name].tobytes()
        entries.append(_ENTRY.pack(name.encode("ascii"), arrays[name].dtype.str.encode("ascii"),
                                   offset, len(data), zlib.crc32(data)))
        pad = -len(data) % 8
        blobs.append(data + b"\0" * pad)
        offset += len(data) + pad
    head = _HEAD.pack(MAGIC, VERSION, idx.n, idx.sigma, idx.sample_rate, idx.d, idx.g, len(names), idx.digest)
    meta = head + b"".join(entries)
    out = meta + _CRC.pack(zlib.crc32(meta))
    out += b"\0" * (-len(out) % 8)
    return out + b"".join(blobs)


def loads(buf: bytes) -> SelfIndex:
    buf = memoryview(buf)
    if len(buf) < _HEAD.size + _CRC.size:
        raise CorruptIndexError("file too short for an index header")
    magic, version, n, sigma, b, d, g, nsec, digest = _HEAD.unpack_from(buf, 0)
    if magic != MAGIC:
        raise CorruptIndexError("bad magic %r" % bytes(magic))
    if version != VERSION:
        raise CorruptIndexError("unsupported format version %d" % version)
    meta_end = _HEAD.size + nsec * _ENTRY.size
    if meta_end + _CRC.size > len(buf):
        raise CorruptIndexError("section table runs past end of file")
    (crc,) = _CRC.unpack_from(buf, meta_end)
    if zlib.crc32(buf[:meta_end]) != crc:
        raise CorruptIndexError("header checksum mismatch")
    arrays = {}
    end = meta_end + _CRC.size
    for k in range(nsec):
        name, dt, off, size, scrc = _ENTRY.unpack_from(buf, _HEAD.size + k * _ENTRY.size)
        name = name.rstrip(b"\0").decode("ascii")
        if off + size > len(buf):
            raise CorruptIndexError("section %s runs past end of file" % name)
        end = max(end, off + size)
        data = buf[off:off + size]
        if zlib.crc32(data) != scrc:
            raise CorruptIndexError("section %s checksum mismatch" % name)
        arrays[name] = np.frombuffer(data, dtype=np.dtype(dt.rstrip(b"\0").decode("ascii")))
    if len(buf) != end + (-end % 8):
        raise CorruptIndexError("file length %d does not match the section table" % len(buf))
    try:
        return _assemble(arrays, n, sigma, b, d, g, bytes(digest))
    except CorruptIndexError:
        raise
    except Exception as exc:  # inconsistent sections that passed their checksums
        raise CorruptIndexError("index sections are inconsistent: %s" % exc) from exc


def _assemble(arrays, n, sigma, b, d, g, digest) -> SelfIndex:
    def part(prefix):
        return {k[len(prefix):]: v.astype(np.uint64) if v.dtype == np.uint64 else v.astype(np.int64)
                for k, v in arrays.items() if k.startswith(prefix)}

    alphabet = Alphabet(arrays["alphabet"].tobytes())
    if alphabet.sigma != sigma:
        raise CorruptIndexError("alphabet size disagrees with header")
    fm = FMIndex.from_arrays(part("fm."), sigma, n, g)
    if fm.samples.b != b:
        raise CorruptIndexError("sample rate disagrees with header")
    topo = SuffixTreeTopo(BitVec(arrays["bp"].astype(np.uint64), int(arrays["bp_len"][0])))
    if topo.num_leaves_total != n:
        raise CorruptIndexError("topology has %d leaves, expected %d" % (topo.num_leaves_total, n))
    dicts = NodeDicts.from_arrays(part("nd."), sigma, d)
    return SelfIndex(fm, topo, dicts, alphabet, d, digest)


def save(idx: SelfIndex, path) -> int:
    data = dumps(idx)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


def load(path) -> SelfIndex:
    with open(path, "rb") as fh:
        return loads(fh.read())
