import io

import numpy as np
import pytest

from csax.cli import main

from oracle import naive_count, naive_positions


class Out(io.TextIOWrapper):
    def __init__(self):
        super().__init__(io.BytesIO(), encoding="utf-8")

    def value(self) -> bytes:
        self.flush()
        return self.buffer.getvalue()


def run(*argv):
    out = Out()
    code = main(list(argv), out=out)
    return code, out.value()


@pytest.fixture
def corpus(tmp_path):
    rng = np.random.default_rng(3)
    data = bytes(rng.integers(97, 101, 5000).astype(np.uint8))
    src = tmp_path / "text.bin"
    src.write_bytes(data)
    idx = tmp_path / "text.csax"
    code, out = run("build", "-i", str(src), "-o", str(idx))
    assert code == 0
    assert b"n=5001" in out and b"bits/symbol" in out
    return data, str(idx)


def test_count_locate_extract(corpus, tmp_path):
    data, idx = corpus
    for p in (b"ab", b"abcd", b"dddd", b"zz"):
        code, out = run("count", "-x", idx, "-p", p.decode())
        assert code == 0 and int(out) == naive_count(data, p)
        code, out = run("locate", "-x", idx, "-p", p.decode())
        assert code == 0 and [int(x) for x in out.split()] == naive_positions(data, p)
    code, out = run("locate", "-x", idx, "-p", "ab", "--limit", "5")
    assert [int(x) for x in out.split()] == naive_positions(data, b"ab")[:5]
    code, out = run("extract", "-x", idx, "--from", "17", "--len", "40")
    assert code == 0 and out == data[17:57]


def test_pattern_file_is_binary_safe(corpus, tmp_path):
    data, idx = corpus
    pat = tmp_path / "p.bin"
    pat.write_bytes(data[100:110])
    code, out = run("count", "-x", idx, "--pattern-file", str(pat))
    assert code == 0 and int(out) == naive_count(data, data[100:110])
    pat.write_bytes(b"a\x00b\xff")
    code, out = run("count", "-x", idx, "--pattern-file", str(pat))
    assert code == 0 and int(out) == 0


def test_verbose_counters(corpus, capsys):
    _, idx = corpus
    code, _ = run("count", "-x", idx, "-p", "abcabc", "--verbose")
    assert code == 0
    err = capsys.readouterr().err
    assert "general_rank=" in err and "dict_lookups=" in err


def test_stats(corpus):
    _, idx = corpus
    code, out = run("stats", "-x", idx, "--verbose", "-p", "abc")
    text = out.decode()
    assert code == 0
    for key in ("bwt_payload", "partial_rank_dir", "dict_entries", "H_0=", "H_3=", "cap", "query count="):
        assert key in text


def test_empty_input(tmp_path):
    src = tmp_path / "empty"
    src.write_bytes(b"")
    idx = tmp_path / "empty.csax"
    assert run("build", "-i", str(src), "-o", str(idx))[0] == 0
    assert run("count", "-x", str(idx), "-p", "a") == (0, b"0\n")


def test_exit_codes(corpus, tmp_path):
    _, idx = corpus
    assert run()[0] == 1
    assert run("count", "-x", idx)[0] == 1
    assert run("extract", "-x", idx, "--from", "4999", "--len", "5")[0] == 1
    assert run("build", "-i", str(tmp_path / "missing"), "-o", str(tmp_path / "o"))[0] == 2
    bad = tmp_path / "zero.bin"
    bad.write_bytes(b"ab\x00cd")
    assert run("build", "-i", str(bad), "-o", str(tmp_path / "o"))[0] == 2
    blob = bytearray(open(idx, "rb").read())
    blob[9] ^= 4
    broken = tmp_path / "broken.csax"
    broken.write_bytes(bytes(blob))
    assert run("count", "-x", str(broken), "-p", "a")[0] == 3


@pytest.mark.slow
def test_one_mebibyte_round_trip(tmp_path):
    rng = np.random.default_rng(20)
    data = bytes(rng.integers(97, 123, 1 << 20).astype(np.uint8))
    src = tmp_path / "big.bin"
    src.write_bytes(data)
    idx = str(tmp_path / "big.csax")
    assert run("build", "-i", str(src), "-o", idx)[0] == 0
    for k in range(20):
        i = int(rng.integers(0, len(data) - 8))
        p = data[i:i + 3 + k % 5]
        code, out = run("count", "-x", idx, "-p", p.decode())
        assert code == 0 and int(out) == naive_count(data, p)
        code, out = run("locate", "-x", idx, "-p", p.decode(), "--limit", "3")
        assert [int(x) for x in out.split()] == naive_positions(data, p)[:3]
    assert run("extract", "-x", idx, "--from", "1000", "--len", "64")[1] == data[1000:1064]
