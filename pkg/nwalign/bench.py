"""
Strong and weak scaling runs of the alignment engines on seeded synthetic inputs.
"""

import logging
import math
import os
import time
from typing import Iterable, List, Mapping, NamedTuple, Optional

from nwalign.core import InvariantViolation, ScoringScheme
from nwalign.engines import get_engine
from nwalign.serial_nw import AlignmentProblem, align_score_only
from nwalign.utils import generate_sequences
from nwalign.wavefront_nw import DEFAULT_GRAIN

_log = logging.getLogger(__name__)

DEFAULT_SEED = 1769
SEED_ENV_VAR = 'NW_SEED'


class BenchRecord(NamedTuple):
    mode: str
    engine: str
    workers: int
    m: int
    n: int
    run_index: int
    elapsed_ns: int


def resolve_seed(seed: Optional[int] = None, environ: Optional[Mapping[str, str]] = None) -> int:
    """
    Pick the generator seed: an explicit ``seed``, else ``NW_SEED``, else ``DEFAULT_SEED``.

    >>> resolve_seed(environ={})
    1769
    >>> resolve_seed(environ={'NW_SEED': '42'})
    42
    >>> resolve_seed(7, environ={'NW_SEED': '42'})
    7
    """
    if seed is not None:
        return seed
    environ = os.environ if environ is None else environ
    raw = environ.get(SEED_ENV_VAR)
    if raw is None or raw == '':
        return DEFAULT_SEED
    if not raw.isdigit():
        raise ValueError(f'{SEED_ENV_VAR} must be a decimal unsigned integer, got {raw!r}')
    return int(raw)


def make_problem(m: int, n: int, seed: int, scheme: Optional[ScoringScheme] = None) -> AlignmentProblem:
    """Return the seeded synthetic DNA problem of shape (m, n)."""
    a, b = generate_sequences([m, n], seed)
    return AlignmentProblem(a=a, b=b, scheme=scheme if scheme is not None else ScoringScheme())


def _time_engine(problem: AlignmentProblem, engine: str, workers: int, grain: int,
                 reps: int, warmup: int, expected: int) -> List[int]:
    align = get_engine(engine, workers, grain)
    for _ in range(warmup):
        align(problem)
    timings = []
    for _ in range(reps):
        start = time.perf_counter_ns()
        _, _, aln = align(problem)
        elapsed = time.perf_counter_ns() - start
        if aln.score != expected:
            raise InvariantViolation(f'{engine} engine with {workers} workers scored {aln.score}, expected {expected}')
        # the clock can be too coarse to see a tiny problem
        timings.append(max(1, elapsed))
    return timings


def _check_counts(workers_list: Iterable[int], reps: int, warmup: int) -> List[int]:
    workers_list = list(workers_list)
    if not workers_list:
        raise ValueError('workers_list must not be empty')
    if any(w < 1 for w in workers_list):
        raise ValueError(f'worker counts must be at least 1, got {workers_list}')
    if reps < 1:
        raise ValueError(f'reps must be at least 1, got {reps}')
    if warmup < 0:
        raise ValueError(f'warmup must be non-negative, got {warmup}')
    return workers_list


def bench_strong(sizes: Iterable[int], workers_list: Iterable[int], reps: int, seed: int = DEFAULT_SEED,
                 grain: int = DEFAULT_GRAIN, warmup: int = 1) -> List[BenchRecord]:
    """
    Time the wavefront engine on fixed problems while the worker count grows.

    Parameters
    ----------
    sizes : Iterable[int]
        Side lengths of the square problems
    workers_list : Iterable[int]
    reps : int
        Timed repetitions per configuration
    seed : int
    grain : int
    warmup : int
        Untimed runs per configuration before the timed ones

    Returns
    -------
    List[BenchRecord]
        ``len(sizes) * len(workers_list) * reps`` records

    Raises
    ------
    InvariantViolation
        If a timed run's score differs from the untimed reference score.
    """
    sizes = list(sizes)
    if not sizes:
        raise ValueError('sizes must not be empty')
    workers_list = _check_counts(workers_list, reps, warmup)
    records = []
    for size in sizes:
        problem = make_problem(size, size, seed)
        expected = align_score_only(problem)
        for workers in workers_list:
            _log.info('Strong scaling: %dx%d, %d workers, %d reps', size, size, workers, reps)
            timings = _time_engine(problem, 'wavefront', workers, grain, reps, warmup, expected)
            records.extend(BenchRecord('strong', 'wavefront', workers, size, size, run, elapsed)
                           for run, elapsed in enumerate(timings))
    return records


def weak_side_length(base_size: int, workers: int) -> int:
    """
    Side length whose cell count is ``workers`` times that of ``base_size``.

    >>> weak_side_length(1000, 1), weak_side_length(1000, 4), weak_side_length(1000, 2)
    (1000, 2000, 1414)
    """
    return max(1, round(base_size * math.sqrt(workers)))


def bench_weak(base_size: int, workers_list: Iterable[int], reps: int, seed: int = DEFAULT_SEED,
               grain: int = DEFAULT_GRAIN, warmup: int = 1) -> List[BenchRecord]:
    """
    Time both engines on problems whose cell count grows with the worker count.

    Serial rows carry the ``workers`` value of the configuration they are
    compared against; the serial engine itself always uses one thread.
    """
    if base_size < 1:
        raise ValueError(f'base_size must be at least 1, got {base_size}')
    workers_list = _check_counts(workers_list, reps, warmup)
    records = []
    for workers in workers_list:
        side = weak_side_length(base_size, workers)
        problem = make_problem(side, side, seed)
        expected = align_score_only(problem)
        for engine in ('serial', 'wavefront'):
            _log.info('Weak scaling: %dx%d, %s engine, %d workers, %d reps', side, side, engine, workers, reps)
            timings = _time_engine(problem, engine, workers, grain, reps, warmup, expected)
            records.extend(BenchRecord('weak', engine, workers, side, side, run, elapsed)
                           for run, elapsed in enumerate(timings))
    return records
