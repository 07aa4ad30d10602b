"""
Parallel single-pair engine.

A cell (i, j) can be computed as soon as (i-1, j), (i, j-1) and (i-1, j-1)
are. All cells of anti-diagonal d = i + j depend only on diagonals d-1 and
d-2, so the engine fills one anti-diagonal at a time: the diagonal is cut into
chunks of ``grain`` cells, the chunks are shared among ``workers`` threads
and a barrier separates consecutive diagonals. A ready-flag grid records
which cells are computed, and instrumented runs check it before every read.

The result is byte-identical to ``nwalign.serial_nw.align_serial`` for every
``workers`` and ``grain`` setting.
"""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Iterator, List, NamedTuple, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, PositiveInt

from nwalign.core import Alignment, InvariantViolation, ScoringScheme, init_matrices
from nwalign.kernels import fill_diagonal_chunks
from nwalign.serial_nw import AlignmentProblem, traceback_one
from nwalign.typing import Cell, ReadyFlags, ScoreMatrix, TracebackMatrix

_log = logging.getLogger(__name__)

DEFAULT_GRAIN = 64


class WavefrontConfig(BaseModel):
    """Worker pool settings. ``workers`` is the thread count, ``grain`` the cells per work unit."""
    model_config = ConfigDict(frozen=True)

    workers: PositiveInt = 1
    grain: PositiveInt = DEFAULT_GRAIN


class Chunk(NamedTuple):
    """Rows ``i_start <= i < i_stop`` of one anti-diagonal."""
    diagonal: int
    i_start: int
    i_stop: int

    def cells(self) -> List[Cell]:
        return [(i, self.diagonal - i) for i in range(self.i_start, self.i_stop)]


class WorkBatch(NamedTuple):
    """All chunks of one anti-diagonal. Chunks of a batch may run concurrently."""
    diagonal: int
    chunks: List[Chunk]

    def cells(self) -> List[Cell]:
        return [cell for chunk in self.chunks for cell in chunk.cells()]


class WriteEvent(NamedTuple):
    """A record of one worker finishing its share of one anti-diagonal."""
    diagonal: int
    worker: int
    chunks: Tuple[int, ...]


def diagonal_bounds(diagonal: int, m: int, n: int) -> Tuple[int, int]:
    """Return the inclusive row range (lo, hi) of interior cells on an anti-diagonal."""
    return max(1, diagonal - n), min(m, diagonal - 1)


def iter_antidiagonals(m: int, n: int, grain: int) -> Iterator[WorkBatch]:
    """Lazily yield the batches of ``schedule_antidiagonals``."""
    if grain < 1:
        raise ValueError(f'grain must be at least 1, got {grain}')
    for diagonal in range(2, m + n + 1):
        lo, hi = diagonal_bounds(diagonal, m, n)
        chunks = [Chunk(diagonal, start, min(hi + 1, start + grain)) for start in range(lo, hi + 1, grain)]
        if chunks:
            yield WorkBatch(diagonal, chunks)


def schedule_antidiagonals(m: int, n: int, grain: int) -> List[WorkBatch]:
    """
    Return the interior cells as batches, one per anti-diagonal, in increasing diagonal order.

    Parameters
    ----------
    m : int
        Number of rows (length of the first sequence)
    n : int
        Number of columns (length of the second sequence)
    grain : int
        Maximum number of cells per chunk

    Returns
    -------
    List[WorkBatch]

    Examples
    --------
    >>> [batch.cells() for batch in schedule_antidiagonals(2, 2, 16)]
    [[(1, 1)], [(1, 2), (2, 1)], [(2, 2)]]
    >>> [len(batch.chunks) for batch in schedule_antidiagonals(1, 3, 1)]
    [1, 1, 1]
    """
    return list(iter_antidiagonals(m, n, grain))


def init_ready_flags(m: int, n: int) -> ReadyFlags:
    """Return an (m+1, n+1) flag grid with row 0 and column 0 marked computed."""
    ready = np.zeros((m + 1, n + 1), dtype=np.bool_)
    ready[0, :] = True
    ready[:, 0] = True
    return ready


def _run_share(score, tb, ready, a, b, scheme: ScoringScheme, diagonal: int, m: int, n: int,
               grain: int, worker: int, workers: int, check: bool, trace: Optional[list]) -> None:
    lo, hi = diagonal_bounds(diagonal, m, n)
    bad_row = fill_diagonal_chunks(score, tb, ready, a, b,
                                   scheme.match_score, scheme.mismatch_score, scheme.gap_penalty,
                                   diagonal, lo, hi, grain, worker, workers, check)
    if bad_row >= 0:
        raise InvariantViolation(f'Cell ({bad_row}, {diagonal - bad_row}) was read before its dependencies were ready')
    if trace is not None:
        nchunks = (hi - lo + grain) // grain
        trace.append(WriteEvent(diagonal, worker, tuple(range(worker, nchunks, workers))))


def fill_wavefront(score: ScoreMatrix, tb: TracebackMatrix, ready: ReadyFlags, problem: AlignmentProblem,
                   cfg: WavefrontConfig, check: bool = False, trace: Optional[list] = None) -> None:
    """
    Fill the interior of ``score`` and ``tb`` anti-diagonal by anti-diagonal.

    Parameters
    ----------
    score : np.ndarray
        Score grid with borders initialized
    tb : np.ndarray
        Direction grid with borders initialized
    ready : np.ndarray
        Flag grid with borders marked computed; interior flags are set as cells complete
    problem : AlignmentProblem
    cfg : WavefrontConfig
    check : bool
        Test the dependency flags before every read
    trace : Optional[list]
        If given, a ``WriteEvent`` is appended each time a worker finishes
        its share of a diagonal

    Returns
    -------
    None

    Raises
    ------
    InvariantViolation
        If ``check`` is set and a cell's dependencies were not ready.
    """
    m, n = problem.shape
    if m == 0 or n == 0:
        return
    a = problem.a.as_array()
    b = problem.b.as_array()
    scheme = problem.scheme
    grain = cfg.grain
    # more threads than the widest diagonal has chunks would only wait at the barrier
    workers = min(cfg.workers, (min(m, n) + grain - 1) // grain)

    if workers == 1:
        for diagonal in range(2, m + n + 1):
            _run_share(score, tb, ready, a, b, scheme, diagonal, m, n, grain, 0, 1, check, trace)
        return

    barrier = threading.Barrier(workers)

    def work(worker: int) -> None:
        try:
            for diagonal in range(2, m + n + 1):
                _run_share(score, tb, ready, a, b, scheme, diagonal, m, n, grain, worker, workers, check, trace)
                barrier.wait()
        except threading.BrokenBarrierError:
            # another worker failed and aborted the barrier; its error is reported instead
            pass
        except BaseException:
            barrier.abort()
            raise

    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix='wavefront') as executor:
        futures = [executor.submit(work, worker) for worker in range(workers)]
        for future in futures:
            future.result()


def align_wavefront(problem: AlignmentProblem, cfg: Optional[WavefrontConfig] = None,
                    instrument: bool = False) -> Tuple[ScoreMatrix, TracebackMatrix, Alignment]:
    """
    Align a pair with the anti-diagonal worker pool.

    Parameters
    ----------
    problem : AlignmentProblem
    cfg : Optional[WavefrontConfig]
        Defaults to a single worker with the default grain
    instrument : bool
        Check the ready flag of every dependency before it is read and verify
        the diagonal write order afterwards. Slower; meant for testing.

    Returns
    -------
    Tuple[np.ndarray, np.ndarray, Alignment]
        The same score grid, direction grid and canonical alignment as
        ``align_serial`` on the same problem.

    Raises
    ------
    InvariantViolation
        If a cell is left uncomputed or, in instrumented runs, read too early.

    Examples
    --------
    >>> from nwalign.core import Sequence
    >>> a, b = Sequence(id='a', residues='GATTACA'), Sequence(id='b', residues='GCATGCU')
    >>> score, tb, aln = align_wavefront(AlignmentProblem(a=a, b=b), WavefrontConfig(workers=4, grain=2))
    >>> aln.score
    0
    """
    cfg = cfg if cfg is not None else WavefrontConfig()
    m, n = problem.shape
    _log.trace('Wavefront fill of a (%s x %s) grid with %s workers, grain %s', m + 1, n + 1, cfg.workers, cfg.grain)
    score, tb = init_matrices(m, n, problem.scheme)
    ready = init_ready_flags(m, n)
    trace = [] if instrument else None
    fill_wavefront(score, tb, ready, problem, cfg, check=instrument, trace=trace)
    if not ready.all():
        missing = np.argwhere(~ready)
        raise InvariantViolation(f'{len(missing)} cells were never computed, first at {tuple(missing[0])}')
    if trace is not None:
        check_write_order(trace)
    aln = traceback_one(tb, problem.a, problem.b, problem.scheme)
    return score, tb, aln


def check_write_order(trace: List[WriteEvent]) -> None:
    """Raise InvariantViolation unless the recorded events never step back to an earlier diagonal."""
    last = 0
    for event in trace:
        if event.diagonal < last:
            raise InvariantViolation(f'Diagonal {event.diagonal} was written after diagonal {last}')
        last = event.diagonal
