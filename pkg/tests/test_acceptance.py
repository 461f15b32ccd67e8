"""Acceptance criteria 1-10. Run with ``pytest tests/test_acceptance.py``; the
terminal summary prints one PASS/FAIL line per criterion."""

import math
import statistics
import time
import warnings
from bisect import bisect_left, bisect_right

import numpy as np
import pytest

from csax import container
from csax.builder import build_all, prepare
from csax.cli import main as cli_main
from csax.counters import QueryStats
from csax.errors import CorruptIndexError
from csax.interval_rank import IntervalRankIndex
from csax.params import group_size, heaviness_threshold
from csax.report import DICT_BITS_PER_SYMBOL, PAYLOAD_FACTOR, space_report
from csax.search import SelfIndex
from csax.sequence import SequenceIndex
from csax.suffix import Text

from oracle import naive_bwt, naive_children, naive_positions, naive_rank, naive_sa, naive_suffix_tree, with_sentinel

SIGMAS = (2, 4, 16, 64, 256)
TEXTS_PER_SIGMA = 200
PATTERNS_PER_TEXT = 10
MAX_N = 10_000
EXTRACTS_PER_TEXT = 1  # 5 * 200 = 1000 pairs
TIME_LIMIT = 300.0


def random_text(rng, sigma, n):
    alpha = np.sort(rng.choice(np.arange(1, 256), size=min(sigma, 255), replace=False))
    return bytes(rng.choice(alpha, size=n).astype(np.uint8)), alpha


def log_uniform_n(rng, hi):
    return max(1, int(round(math.exp(rng.uniform(0.0, math.log(hi))))))


def make_patterns(rng, text, alpha):
    pats = []
    for _ in range(PATTERNS_PER_TEXT // 2):
        length = int(rng.integers(1, 65))
        start = int(rng.integers(0, len(text)))
        pats.append(text[start:start + length])
    for _ in range(PATTERNS_PER_TEXT - PATTERNS_PER_TEXT // 2):
        length = int(rng.integers(1, 65))
        pats.append(bytes(rng.choice(alpha, size=length).astype(np.uint8)))
    return pats


def check_index(idx, text, pats, extracts, rev_sa, res, tag):
    """Criteria 1-4 on one index; failures are appended to res[k]."""
    t0 = time.perf_counter()
    for p in pats:
        sr = idx.search_interval(p)
        want = naive_positions(text, p)
        if sr.count != len(want):
            res[1].append("%s count(%r) = %d, oracle %d" % (tag, p[:16], sr.count, len(want)))
        res["max_general_rank"] = max(res["max_general_rank"], sr.stats.general_rank)
        res["queries"] += 1
        if sr.stats.general_rank > 2:
            res[4].append("%s %r used %d general ranks" % (tag, p[:16], sr.stats.general_rank))
    res["count_seconds"] += time.perf_counter() - t0
    for p in pats:
        got = idx.count_locate(p)
        if got != naive_positions(text, p):
            res[2].append("%s locate(%r) mismatch" % (tag, p[:16]))
    for i, length in extracts:
        if idx.extract(i, length) != text[i:i + length]:
            res[2].append("%s extract(%d, %d) mismatch" % (tag, i, length))
    fm = idx.fm
    n = fm.n
    lf = [fm.lf(j) for j in range(n)]
    if sorted(lf) != list(range(n)):
        res[3].append("%s lf is not a permutation" % tag)
    elif any(rev_sa[lf[j]] != (rev_sa[j] - 1) % n for j in range(n)):
        res[3].append("%s SA[lf(j)] != SA[j]-1" % tag)


@pytest.fixture(scope="module")
def corpus_results():
    """Build every corpus text once, check criteria 1-4 on the built index and
    on its serialized round trip (criterion 10), then drop the index."""
    res = {k: [] for k in (1, 2, 3, 4, 10)}
    res.update(max_general_rank=0, queries=0, count_seconds=0.0, texts=0, build_seconds=0.0)
    started = time.perf_counter()
    for sigma in SIGMAS:
        rng = np.random.default_rng(1000 + sigma)
        for _ in range(TEXTS_PER_SIGMA):
            n = log_uniform_n(rng, MAX_N)
            text, alpha = random_text(rng, sigma, n)
            pats = make_patterns(rng, text, alpha)
            extracts = []
            for _ in range(EXTRACTS_PER_TEXT):
                i = int(rng.integers(0, n + 1))
                extracts.append((i, int(rng.integers(0, n - i + 1))))
            rev_sa = naive_sa(with_sentinel(text[::-1]))
            t0 = time.perf_counter()
            idx = SelfIndex.build(text)
            res["build_seconds"] += time.perf_counter() - t0
            check_index(idx, text, pats, extracts, rev_sa, res, "sigma=%d n=%d" % (sigma, n))
            loaded = container.loads(container.dumps(idx))
            sub = {k: [] for k in (1, 2, 3, 4)}
            sub.update(max_general_rank=0, queries=0, count_seconds=0.0)
            check_index(loaded, text, pats, extracts, rev_sa, sub, "loaded sigma=%d n=%d" % (sigma, n))
            for k in (1, 2, 3, 4):
                res[10].extend(sub[k])
            res["texts"] += 1
    res["seconds"] = time.perf_counter() - started
    return res


@pytest.mark.criterion(1, "count equals the oracle on the random corpus")
def test_c01_count_matches_oracle(corpus_results, note):
    r = corpus_results
    c1_seconds = r["build_seconds"] + r["count_seconds"]
    note("%d texts, %d queries, build+count %.1fs (whole corpus incl. oracles and round trips %.1fs)"
         % (r["texts"], r["queries"], c1_seconds, r["seconds"]))
    assert r["texts"] == len(SIGMAS) * TEXTS_PER_SIGMA
    assert not r[1], r[1][:5]
    assert c1_seconds < TIME_LIMIT


@pytest.mark.criterion(2, "locate and extract equal the oracle")
def test_c02_locate_extract_match_oracle(corpus_results):
    assert not corpus_results[2], corpus_results[2][:5]


@pytest.mark.criterion(3, "LF is a permutation with SA[lf(j)] = SA[j]-1")
def test_c03_lf_identity(corpus_results):
    assert not corpus_results[3], corpus_results[3][:5]


@pytest.mark.criterion(4, "at most one general backward step (2 ranks) per query")
def test_c04_general_rank_bound(corpus_results, note):
    note("max general ranks in one query: %d" % corpus_results["max_general_rank"])
    assert not corpus_results[4], corpus_results[4][:5]
    assert corpus_results["max_general_rank"] <= 2


def oracle_range(sorted_suffixes, x):
    lo = bisect_left(sorted_suffixes, x)
    hi = bisect_right(sorted_suffixes, x + b"\xff" * (len(sorted_suffixes) + 1)) - 1
    return lo, hi


@pytest.mark.criterion(5, "full Weiner walk visits every internal node; dictionaries hold oracle ranks")
def test_c05_builder_coverage(note):
    rng = np.random.default_rng(5)
    checked_entries = 0
    for k in range(100):
        sigma = SIGMAS[k % len(SIGMAS)]
        text, _ = random_text(rng, sigma, log_uniform_n(rng, 2000))
        t = with_sentinel(text)
        res = build_all(Text.from_bytes(text), full=True)
        topo, dicts = res.topo, res.dicts
        internal = {(lo, hi): x for lo, hi, _, x in naive_suffix_tree(t)}
        visited = [topo.leaf_range(topo.node_at_preorder(p)) for p in res.report.visited]
        assert len(visited) == len(set(visited))
        assert set(visited) == set(internal)

        syms = sorted(set(t))
        code = {b: c for c, b in enumerate(syms)}
        d = heaviness_threshold(len(syms))
        kids = naive_children(t)
        rev = with_sentinel(text[::-1])
        rev_sa = naive_sa(rev)
        rev_sufs = [rev[i:] for i in rev_sa]
        bbar = naive_bwt(rev, rev_sa)
        for (lo, hi), x in internal.items():
            pre = topo.preorder(topo.node_from_range(lo, hi))
            heavy = [(o, c) for o, (c, clo, chi) in enumerate(kids[x]) if chi - clo + 1 >= d]
            nlight = len(kids[x]) - len(heavy)
            marked = len(heavy) >= 2 or (len(heavy) == 1 and nlight >= d)
            assert dicts.is_marked(pre) == marked, x
            if not marked:
                continue
            assert pre in res.report.populated
            l, r = oracle_range(rev_sufs, x[::-1])
            assert [e[0] for e in dicts.entries_of(pre)] == [code[c] for _, c in heavy]
            for o, c in heavy:
                want = (o, naive_rank(bbar, c, l - 1), naive_rank(bbar, c, r))
                assert dicts.lookup(pre, code[c], l, r, res.fm.seq) == want
                checked_entries += 1
    note("%d dictionary entries checked against the rank oracle" % checked_entries)


@pytest.mark.criterion(6, "interval rank equals the scan oracle on every window")
def test_c06_interval_rank_exhaustive(note):
    rng = np.random.default_rng(6)
    sizes = {2: 2000, 4: 2000, 16: 2000, 64: 300, 256: 100}
    total = 0
    for sigma, m in sizes.items():
        for skewed in (False, True):
            if skewed:
                w = 1.0 / np.arange(1, sigma + 1) ** 1.5
                s = rng.choice(sigma, size=m, p=w / w.sum())
            else:
                s = rng.integers(0, sigma, size=m)
            seq = SequenceIndex.build(s, sigma)
            irx = IntervalRankIndex.build(seq, s)
            g = irx.g
            assert g == group_size(heaviness_threshold(sigma))
            onehot = np.zeros((sigma, m + 1), dtype=np.int64)
            onehot[s, np.arange(1, m + 1)] = 1
            pref = np.cumsum(onehot, axis=1)  # pref[a, i + 1] = rank_a(i)
            stats = QueryStats()
            for i in range(m):
                for j in range(i, min(i + g, m - 1) + 1):
                    present = pref[:, j + 1] - pref[:, i] > 0
                    for a in range(sigma):
                        got = irx.query(a, i, j, stats)
                        want = (int(pref[a, i]), int(pref[a, j + 1])) if present[a] else None
                        assert got == want, (sigma, a, i, j)
                        total += 1
            assert stats.general_rank == 0
    note("%d windows checked" % total)


@pytest.mark.criterion(7, "Weiner walk depth <= 2 log2 n + 4")
def test_c07_stack_depth(note):
    rng = np.random.default_rng(7)
    for n in (1000, 10_000, 100_000):
        for sigma in (4, 64):
            text, _ = random_text(rng, sigma, n)
            rep = prepare(Text.from_bytes(text), full=True).traverse()
            bound = 2 * math.log2(n + 1) + 4
            note("n=%d sigma=%d depth=%d bound=%.1f" % (n, sigma, rep.max_depth, bound))
            assert rep.max_depth <= bound


def _median_time(fn, runs=3):
    out = []
    for _ in range(runs):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return statistics.median(out)


@pytest.mark.slow
@pytest.mark.criterion(8, "linearity smoke test (soft)")
def test_c08_scaling(note):
    rng = np.random.default_rng(8)
    small, _ = random_text(rng, 64, 2 ** 18)
    large, _ = random_text(rng, 64, 2 ** 19)
    ts = _median_time(lambda: SelfIndex.build(small))
    tl = _median_time(lambda: SelfIndex.build(large))
    ratio = tl / ts
    soft = []
    line = "build %.2fs -> %.2fs, ratio %.2f (limit 3.0)" % (ts, tl, ratio)
    if ratio > 3.0:
        soft.append(line)
    note(line)

    idx = SelfIndex.build(small)
    per_len = {}
    for m in (8, 64, 512):
        pats = []
        for _ in range(100):
            i = int(rng.integers(0, len(small) - m))
            pats.append(small[i:i + m])
        per_len[m] = _median_time(lambda: [idx.count(p) for p in pats]) / len(pats)
    for a, b in ((8, 64), (64, 512)):
        growth = per_len[b] / per_len[a]
        line = "count |P|=%d %.0fus -> |P|=%d %.0fus, growth %.2f (limit %.1f)" % (
            a, per_len[a] * 1e6, b, per_len[b] * 1e6, growth, 1.5 * b / a)
        if growth > 1.5 * b / a:
            soft.append(line)
        note(line)
    for line in soft:
        note("SOFT-FAIL " + line)
        warnings.warn("soft scaling criterion exceeded: " + line)


@pytest.mark.criterion(9, "payload+directories <= 4 n log2 sigma, dictionaries <= 24 n")
def test_c09_space_caps(note, tmp_path):
    rng = np.random.default_rng(9)
    for sigma in SIGMAS:
        for n in (8192, 16384):
            text, _ = random_text(rng, sigma, n)
            rep = space_report(SelfIndex.build(text))
            note("sigma=%d n=%d payload %.2f n log2 sigma, dictionaries %.2f n"
                 % (sigma, n, rep["payload_bits"] / (n * math.log2(rep["sigma"])), rep["dict_bits"] / n))
            assert rep["payload_bits"] <= PAYLOAD_FACTOR * rep["n"] * math.log2(rep["sigma"])
            assert rep["dict_bits"] <= DICT_BITS_PER_SYMBOL * rep["n"]
    # the same figures appear in the stats command output
    src = tmp_path / "t.txt"
    src.write_bytes(text)
    out_idx = tmp_path / "t.csax"
    assert cli_main(["build", "-i", str(src), "-o", str(out_idx)], out=_Sink()) == 0
    sink = _Sink()
    assert cli_main(["stats", "-x", str(out_idx)], out=sink) == 0
    assert "cap" in sink.text and "dictionaries" in sink.text


class _Sink:
    def __init__(self):
        self.text = ""

    def write(self, s):
        self.text += s

    def flush(self):
        pass


@pytest.mark.criterion(10, "serialization round trip; header bit flips rejected")
def test_c10_round_trip(corpus_results):
    assert not corpus_results[10], corpus_results[10][:5]


@pytest.mark.criterion(10, "serialization round trip; header bit flips rejected")
def test_c10_header_bit_flips():
    rng = np.random.default_rng(10)
    for sigma, n in ((2, 50), (16, 500), (256, 3000)):
        text, _ = random_text(rng, sigma, n)
        blob = bytearray(container.dumps(SelfIndex.build(text)))
        nsec = container._HEAD.unpack_from(blob, 0)[7]
        meta = container._HEAD.size + nsec * container._ENTRY.size + container._CRC.size
        for byte in range(meta):
            for bit in range(8):
                blob[byte] ^= 1 << bit
                with pytest.raises(CorruptIndexError):
                    container.loads(bytes(blob))
                blob[byte] ^= 1 << bit
        assert container.loads(bytes(blob)).count(text[:3]) == len(naive_positions(text, text[:3]))
