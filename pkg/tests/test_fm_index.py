import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csax.counters import QueryStats
from csax.fm_index import FMIndex
from csax.suffix import Text

from oracle import naive_positions, naive_sa, with_sentinel

texts = st.binary(min_size=0, max_size=150).map(lambda b: bytes(x % 3 + 97 for x in b))


def fm_of(data, b=None):
    t = Text.from_bytes(data)
    return t, FMIndex.build(t, b)


def search(t, fm, p):
    codes = t.alphabet.encode(p)
    if codes is None:
        return None
    l, r = 0, fm.n - 1
    for a in codes:
        step = fm.backward_step(a, l, r)
        if step is None:
            return None
        l, r = step
    return l, r


def test_banana_locate():
    t, fm = fm_of(b"banana")
    l, r = search(t, fm, b"ana")
    assert r - l + 1 == 2
    assert sorted(fm.locate(l, r, 3)) == [1, 3]
    assert t.alphabet.decode(fm.extract(1, 3)) == b"ana"
    assert fm.extract(6, 1) == [0]


@given(texts, st.data())
@settings(max_examples=150, deadline=None)
def test_count_locate_extract(data, draw):
    b = draw.draw(st.integers(1, 6))
    t, fm = fm_of(data, b)
    for _ in range(5):
        i = draw.draw(st.integers(0, len(data)))
        p = data[i:i + draw.draw(st.integers(1, 5))] or b"a"
        want = naive_positions(data, p)
        got = search(t, fm, p)
        if not want:
            assert got is None
            continue
        l, r = got
        assert sorted(fm.locate(l, r, len(p))) == want
    i = draw.draw(st.integers(0, len(data)))
    length = draw.draw(st.integers(0, len(data) - i))
    assert t.alphabet.decode(fm.extract(i, length)) == data[i:i + length]


@given(texts)
@settings(max_examples=100, deadline=None)
def test_lf_and_sampled_sa(data):
    t, fm = fm_of(data, 3)
    sa = naive_sa(with_sentinel(data[::-1]))
    n = fm.n
    stats = QueryStats()
    assert sorted(fm.lf(j) for j in range(n)) == list(range(n))
    for j in range(n):
        assert sa[fm.lf(j, stats)] == (sa[j] - 1) % n
        assert fm.sa_value(j) == sa[j]
    assert stats.general_rank == 0


def test_backward_step_uses_two_ranks():
    t, fm = fm_of(b"mississippi")
    stats = QueryStats()
    assert fm.backward_step(t.alphabet.encode(b"s")[0], 0, fm.n - 1, stats) is not None
    assert stats.general_rank == 2
    assert fm.backward_step(99, 0, fm.n - 1) is None


def test_extract_bounds():
    t, fm = fm_of(b"abc")
    with pytest.raises(IndexError):
        fm.extract(2, 3)
    assert fm.extract(0, 4)[-1] == 0


def test_serialization_round_trip():
    rng = np.random.default_rng(4)
    data = bytes(rng.integers(97, 105, 2000).astype(np.uint8))
    t, fm = fm_of(data)
    again = FMIndex.from_arrays(fm.to_arrays(), t.sigma, t.n, fm.seq.g)
    assert again.extract(0, t.n) == fm.extract(0, t.n)
    assert [again.sa_value(j) for j in range(0, t.n, 37)] == [fm.sa_value(j) for j in range(0, t.n, 37)]
    assert set(fm.size_report()) == {"bwt_payload", "chunk_dir", "partial_rank_dir", "interval_rank", "acc", "samples"}
