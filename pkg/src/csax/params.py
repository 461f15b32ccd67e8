"""Size parameters shared by several structures."""


def ceil_log2(x: int) -> int:
    """Smallest k with 2**k >= x, for x >= 1."""
    if x < 1:
        raise ValueError("ceil_log2 needs x >= 1")
    return (x - 1).bit_length()


def heaviness_threshold(sigma: int) -> int:
    """d: nodes with at least d leaves are heavy. Never below 2."""
    return max(2, ceil_log2(max(sigma, 1)))


def group_size(d: int) -> int:
    """g = d*d, the window size of small interval rank queries (at least 4)."""
    return max(d * d, 4)


def default_sample_rate(n: int) -> int:
    return max(1, ceil_log2(max(n, 1)))
