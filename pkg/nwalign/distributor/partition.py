"""
Fair contiguous partitioning of pairwise tasks across ranks.
"""

from typing import List, NamedTuple


class Partition(NamedTuple):
    """Contiguous, disjoint chunks covering ``range(total_pairs)``, one per rank."""
    total_pairs: int
    ranks: int
    chunks: List[range]

    def sizes(self) -> List[int]:
        return [len(chunk) for chunk in self.chunks]

    def owner(self, index: int) -> int:
        """Return the rank whose chunk contains task ``index``."""
        for rank, chunk in enumerate(self.chunks):
            if index in chunk:
                return rank
        raise IndexError(f'Task {index} is outside [0, {self.total_pairs})')


def partition_pairs(P: int, R: int) -> Partition:
    """
    Divide P tasks among R ranks in contiguous chunks whose sizes differ by at most one.

    The first ``P mod R`` ranks receive one extra task; ranks beyond P receive
    empty chunks.

    Parameters
    ----------
    P : int
        Number of tasks, usually n(n-1)/2 pairs
    R : int
        Number of ranks

    Returns
    -------
    Partition

    Examples
    --------
    >>> partition_pairs(10, 3).sizes()
    [4, 3, 3]
    >>> partition_pairs(3, 8).sizes()
    [1, 1, 1, 0, 0, 0, 0, 0]
    >>> partition_pairs(10, 3).chunks[1]
    range(4, 7)
    """
    if R < 1:
        raise ValueError(f'Number of ranks must be at least 1, got {R}')
    if P < 0:
        raise ValueError(f'Number of tasks must be non-negative, got {P}')
    base, extra = divmod(P, R)
    chunks = []
    start = 0
    for rank in range(R):
        size = base + 1 if rank < extra else base
        chunks.append(range(start, start + size))
        start += size
    return Partition(P, R, chunks)
