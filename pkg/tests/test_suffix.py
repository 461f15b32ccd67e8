import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csax.errors import BuildError
from csax.suffix import Text, build_suffix_array, lcp_array, reverse_text, sais

from oracle import naive_bwt, naive_sa, with_sentinel

texts = st.binary(min_size=0, max_size=120).map(lambda b: bytes(x % 4 + 97 for x in b))


def test_banana():
    t = Text.from_bytes(b"banana")
    assert t.n == 7 and t.sigma == 4
    bundle = build_suffix_array(t)
    assert bundle.sa.tolist() == [6, 5, 3, 1, 0, 4, 2]
    assert t.alphabet.decode([c for c in bundle.bwt.tolist() if c]) == b"annbaa"
    assert bundle.bwt.tolist().index(0) == 4


@given(texts)
@settings(max_examples=300, deadline=None)
def test_sais_matches_sorting(data):
    t = Text.from_bytes(data)
    want = naive_sa(with_sentinel(data))
    bundle = build_suffix_array(t)
    assert bundle.sa.tolist() == want
    bwt = bytes(0 if c == 0 else t.alphabet.symbols[c - 1] for c in bundle.bwt.tolist())
    assert bwt == naive_bwt(with_sentinel(data), want)


@pytest.mark.parametrize("data", [b"a" * 300, b"ab" * 150, b"abcab" * 60, bytes(range(1, 256)) * 3])
def test_sais_repetitive(data):
    assert build_suffix_array(Text.from_bytes(data)).sa.tolist() == naive_sa(with_sentinel(data))


def test_sais_random_large_alphabet():
    rng = np.random.default_rng(3)
    data = bytes(rng.integers(1, 256, 3000).astype(np.uint8))
    assert build_suffix_array(Text.from_bytes(data)).sa.tolist() == naive_sa(with_sentinel(data))


def test_sais_on_raw_codes():
    assert sais([2, 1, 2, 1, 0], 3) == [4, 3, 1, 2, 0]


@given(texts)
@settings(max_examples=100, deadline=None)
def test_lcp(data):
    t = Text.from_bytes(data)
    full = with_sentinel(data)
    sa = naive_sa(full)
    want = [0]
    for k in range(1, len(sa)):
        a, b = full[sa[k - 1]:], full[sa[k]:]
        h = 0
        while a[h] == b[h]:
            h += 1
        want.append(h)
    assert lcp_array(t, build_suffix_array(t).sa) == want


def test_reverse_text_keeps_alphabet_and_fresh_sentinel():
    t = Text.from_bytes(b"abcab")
    r = reverse_text(t)
    assert r.to_bytes() == b"bacba"
    assert r.alphabet == t.alphabet
    assert r.symbols[-1] == 0


def test_round_trip_and_rejection():
    assert Text.from_bytes(b"hello").to_bytes() == b"hello"
    assert Text.from_bytes(b"").n == 1
    with pytest.raises(BuildError):
        Text.from_bytes(b"ab\x00c")
    t = Text.from_bytes(b"abc")
    assert t.alphabet.encode(b"cab") == [3, 1, 2]
    assert t.alphabet.encode(b"abz") is None
