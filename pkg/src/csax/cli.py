"""Command-line front end: build, count, locate, extract, stats.

Exit codes: 0 success, 1 usage error, 2 I/O or rejected input, 3 corrupt index.
"""

from __future__ import annotations

import argparse
import os
import resource
import sys
import time

from . import container
from .errors import BuildError, CorruptIndexError
from .report import empirical_entropy, format_report, space_report
from .search import SelfIndex

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_CORRUPT = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="csax", description="Compressed self-index over a byte text.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="index a file")
    b.add_argument("-i", "--input", required=True)
    b.add_argument("-o", "--output", required=True)
    b.add_argument("--sample-rate", type=int, default=None, help="suffix-array sampling step b")

    for name, helptext in (("count", "count occurrences"), ("locate", "list occurrence positions")):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("-x", "--index", required=True)
        grp = c.add_mutually_exclusive_group(required=True)
        grp.add_argument("-p", "--pattern")
        grp.add_argument("--pattern-file")
        c.add_argument("--verbose", action="store_true", help="print query counters to stderr")
        if name == "locate":
            c.add_argument("--limit", type=int, default=None)

    e = sub.add_parser("extract", help="print a substring of the indexed text")
    e.add_argument("-x", "--index", required=True)
    e.add_argument("--from", dest="start", type=int, required=True)
    e.add_argument("--len", dest="length", type=int, required=True)

    s = sub.add_parser("stats", help="space and entropy report")
    s.add_argument("-x", "--index", required=True)
    s.add_argument("--verbose", action="store_true")
    s.add_argument("-p", "--pattern", help="with --verbose, run this query and show its counters")
    return p


def _pattern(args) -> bytes:
    if args.pattern is not None:
        return os.fsencode(args.pattern)
    with open(args.pattern_file, "rb") as fh:
        return fh.read()


def _counters(stats) -> str:
    return " ".join("%s=%d" % kv for kv in stats.as_dict().items())


def _cmd_build(args, out) -> int:
    with open(args.input, "rb") as fh:
        data = fh.read()
    if args.sample_rate is not None and args.sample_rate < 1:
        raise _UsageError("--sample-rate must be >= 1")
    t0 = time.perf_counter()
    idx = SelfIndex.build(data, args.sample_rate)
    seconds = time.perf_counter() - t0
    size = container.save(idx, args.output)
    rep = space_report(idx)
    per = " ".join("%s=%.3f" % (k, v / max(idx.n, 1)) for k, v in rep["sections"].items())
    peak_mb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
    out.write("n=%d sigma=%d d=%d b=%d file_bytes=%d build_seconds=%.3f peak_rss_mb=%.1f\n"
              % (idx.n, idx.sigma, idx.d, idx.sample_rate, size, seconds, peak_mb))
    out.write("bits/symbol: %s\n" % per)
    return EXIT_OK


def _cmd_count(args, out) -> int:
    idx = container.load(args.index)
    res = idx.search_interval(_pattern(args))
    out.write("%d\n" % res.count)
    if args.verbose:
        sys.stderr.write(_counters(res.stats) + "\n")
    return EXIT_OK


def _cmd_locate(args, out) -> int:
    idx = container.load(args.index)
    if args.limit is not None and args.limit < 0:
        raise _UsageError("--limit must be >= 0")
    pos = idx.count_locate(_pattern(args), args.limit)
    out.write("".join("%d\n" % p for p in pos))
    return EXIT_OK


def _cmd_extract(args, out) -> int:
    idx = container.load(args.index)
    if args.start < 0 or args.length < 0 or args.start + args.length > idx.n - 1:
        raise _UsageError("range [%d, %d) outside the text of length %d"
                          % (args.start, args.start + args.length, idx.n - 1))
    data = idx.extract(args.start, args.length)
    out.flush()
    buf = getattr(out, "buffer", None)
    if buf is not None:
        buf.write(data)
        buf.flush()
    else:
        out.write(data.decode("latin-1"))
    return EXIT_OK


def _cmd_stats(args, out) -> int:
    idx = container.load(args.index)
    for line in format_report(space_report(idx)):
        out.write(line + "\n")
    text = idx.extract(0, idx.n - 1) if idx.n > 1 else b""
    ent = " ".join("H_%d=%.4f" % (k, empirical_entropy(text, k)) for k in range(4))
    out.write("entropy (bits/symbol, reported only): %s\n" % ent)
    if args.verbose:
        out.write("dictionary entries=%d marked nodes=%d topology nodes=%d\n"
                  % (idx.dicts.num_entries, idx.dicts.D.ones, idx.topo.num_nodes))
        if args.pattern is not None:
            res = idx.search_interval(os.fsencode(args.pattern))
            out.write("query count=%d %s\n" % (res.count, _counters(res.stats)))
    return EXIT_OK


_COMMANDS = {
    "build": _cmd_build,
    "count": _cmd_count,
    "locate": _cmd_locate,
    "extract": _cmd_extract,
    "stats": _cmd_stats,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = _parser().parse_args(argv)
        return _COMMANDS[args.cmd](args, out)
    except _UsageError as exc:
        sys.stderr.write("csax: %s\n" % exc)
        return EXIT_USAGE
    except CorruptIndexError as exc:
        sys.stderr.write("csax: corrupt index: %s\n" % exc)
        return EXIT_CORRUPT
    except BuildError as exc:
        sys.stderr.write("csax: input rejected: %s\n" % exc)
        return EXIT_IO
    except OSError as exc:
        sys.stderr.write("csax: %s\n" % exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
