from dataclasses import asdict, dataclass


@dataclass
class QueryStats:
    """Operation counts for one query. Create one per query; never shared."""

    general_rank: int = 0
    interval_rank: int = 0
    partial_rank: int = 0
    dict_lookups: int = 0
    lf_steps: int = 0

    def as_dict(self) -> dict:
        return asdict(self)
