"""csax: a compressed self-index with suffix-tree guided backward search."""

from .bitvec import BitVec
from .builder import build_all
from .container import load, loads, save, dumps
from .counters import QueryStats
from .errors import BuildError, ContractError, CorruptIndexError, CsaxError, NotFoundError
from .fm_index import FMIndex
from .interval_rank import IntervalRankIndex
from .search import SelfIndex
from .sequence import SequenceIndex
from .suffix import Text, build_suffix_array, reverse_text

__all__ = [
    "BitVec", "BuildError", "ContractError", "CorruptIndexError", "CsaxError", "FMIndex",
    "IntervalRankIndex", "NotFoundError", "QueryStats", "SelfIndex", "SequenceIndex", "Text",
    "build_all", "build_suffix_array", "dumps", "load", "loads", "reverse_text", "save",
]
