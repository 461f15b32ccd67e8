"""Space accounting and text entropy figures for ``csax stats``."""

from __future__ import annotations

import math

import numpy as np

from .search import SelfIndex

# Cap on dictionary storage (D + dictionary boundaries + entries) in bits
# per text symbol. Entries number at most 3n/d, each with two symbol-sized
# fields and two remainders of at most ceil(log2 sigma) + 1 bits, so
# 3n/d * (4d + 2) <= 15n; the boundary bitvector has at most 6n/d <= 3n bits
# and D has one bit per node (<= 2n), both with about 40% directory
# overhead: 15n + 1.4 * 3n + 1.4 * 2n = 22n. Rounded up to 24.
DICT_BITS_PER_SYMBOL = 24
# Cap on the BWT payload plus its rank/select and chunk directories, in units
# of n*log2(sigma). The partial-rank and interval-rank tables are reported
# separately and are not capped.
PAYLOAD_FACTOR = 4


def empirical_entropy(data: bytes, k: int) -> float:
    """H_k in bits per symbol: sum over length-k contexts of |T_w| H_0(T_w), divided by n."""
    n = len(data)
    if n <= k:
        return 0.0
    arr = np.frombuffer(data, dtype=np.uint8).astype(np.int64)
    ctx = np.zeros(n - k, dtype=np.int64)
    for j in range(k):
        ctx = ctx * 256 + arr[j:n - k + j]
    key = ctx * 256 + arr[k:]
    _, pair_counts = np.unique(key, return_counts=True)
    _, ctx_counts = np.unique(ctx, return_counts=True)
    # sum_w sum_c n_wc log(n_w / n_wc) = sum_w n_w log n_w - sum_wc n_wc log n_wc
    total = float(np.sum(ctx_counts * np.log2(ctx_counts))) - float(np.sum(pair_counts * np.log2(pair_counts)))
    return total / n


def space_report(idx: SelfIndex) -> dict:
    sections = idx.size_report()
    n = idx.n
    log_sigma = math.log2(idx.sigma) if idx.sigma > 1 else 0.0
    payload = sections["bwt_payload"] + sections["chunk_dir"]
    dict_bits = idx.dicts.dictionary_bits()
    return {
        "n": n,
        "sigma": idx.sigma,
        "d": idx.d,
        "b": idx.sample_rate,
        "sections": sections,
        "total_bits": sum(sections.values()),
        "payload_bits": payload,
        "payload_cap": PAYLOAD_FACTOR * n * log_sigma,
        "dict_bits": dict_bits,
        "dict_cap": DICT_BITS_PER_SYMBOL * n,
        "dict_entries": idx.dicts.num_entries,
    }


def format_report(rep: dict) -> list[str]:
    n = max(rep["n"], 1)
    lines = ["n=%d sigma=%d d=%d b=%d" % (rep["n"], rep["sigma"], rep["d"], rep["b"])]
    for name, bits in rep["sections"].items():
        lines.append("%-18s %12d bits  %8.3f bits/symbol" % (name, bits, bits / n))
    lines.append("%-18s %12d bits  %8.3f bits/symbol" % ("total", rep["total_bits"], rep["total_bits"] / n))
    lines.append("bwt payload+chunks %d bits, cap %d (4 n log2 sigma)" % (rep["payload_bits"], rep["payload_cap"]))
    lines.append("dictionaries       %d bits in %d entries, cap %d (%d n)"
                 % (rep["dict_bits"], rep["dict_entries"], rep["dict_cap"], DICT_BITS_PER_SYMBOL))
    return lines
