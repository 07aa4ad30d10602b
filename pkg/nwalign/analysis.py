"""
Summaries of benchmark records: medians, speedup and parallel efficiency.
"""

from collections import defaultdict
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np


class ScalingSummary(NamedTuple):
    mode: str
    engine: str
    workers: int
    m: int
    n: int
    runs: int
    median_ns: float
    speedup: Optional[float]
    efficiency: Optional[float]


def summarize(records: Iterable) -> List[ScalingSummary]:
    """
    Reduce ``BenchRecord`` rows to one summary per (mode, engine, workers, m, n).

    The baseline of a configuration is the one-worker configuration of the
    same mode and engine; strong scaling also requires the same problem
    shape. Strong speedup is ``T1 / TW``. Weak speedup is the scaled speedup
    ``W * T1 / TW``, so for both modes ``efficiency = speedup / W``.
    Configurations without a baseline get ``None`` for both.

    Parameters
    ----------
    records : Iterable[BenchRecord]

    Returns
    -------
    List[ScalingSummary]
        Sorted by mode, engine, problem shape and worker count

    Examples
    --------
    >>> from nwalign.bench import BenchRecord
    >>> rows = [BenchRecord('strong', 'wavefront', w, 8, 8, 0, t) for w, t in [(1, 400), (2, 250), (4, 100)]]
    >>> [(s.workers, s.speedup, s.efficiency) for s in summarize(rows)]
    [(1, 1.0, 1.0), (2, 1.6, 0.8), (4, 4.0, 1.0)]
    """
    groups: Dict[Tuple, List[int]] = defaultdict(list)
    for record in records:
        groups[(record.mode, record.engine, record.workers, record.m, record.n)].append(record.elapsed_ns)
    medians = {key: float(np.median(values)) for key, values in groups.items()}

    def baseline(mode, engine, m, n) -> Optional[float]:
        if mode == 'strong':
            return medians.get((mode, engine, 1, m, n))
        candidates = [value for (md, eng, w, _, _), value in medians.items() if md == mode and eng == engine and w == 1]
        return candidates[0] if candidates else None

    summaries = []
    for key in sorted(medians, key=lambda k: (k[0], k[1], k[3], k[4], k[2])):
        mode, engine, workers, m, n = key
        median = medians[key]
        base = baseline(mode, engine, m, n)
        if base is None:
            speedup = efficiency = None
        else:
            speedup = base / median if mode == 'strong' else workers * base / median
            efficiency = speedup / workers
        summaries.append(ScalingSummary(mode, engine, workers, m, n, len(groups[key]), median, speedup, efficiency))
    return summaries
