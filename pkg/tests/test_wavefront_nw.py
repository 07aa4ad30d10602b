"""
Tests for the anti-diagonal wavefront engine
"""
import os
import time

import numpy as np
import pytest

from nwalign.bench import make_problem as make_bench_problem
from nwalign.core import InvariantViolation, ScoringScheme, Sequence, init_matrices
from nwalign.kernels import fill_diagonal_chunks
from nwalign.serial_nw import AlignmentProblem, align_serial
from nwalign.utils import random_residues
from nwalign.wavefront_nw import (
    WavefrontConfig, WriteEvent, align_wavefront, check_write_order, init_ready_flags, schedule_antidiagonals,
)

from .fixtures import make_problem

RUN_SLOW = bool(os.environ.get('NW_RUN_SLOW'))


def _random_problem(rng, max_length, scheme=None):
    a = Sequence(id='a', residues=random_residues(rng.randint(0, max_length + 1), rng))
    b = Sequence(id='b', residues=random_residues(rng.randint(0, max_length + 1), rng))
    return AlignmentProblem(a=a, b=b, scheme=scheme if scheme is not None else ScoringScheme())


def _assert_same_as_serial(problem, cfg, instrument=False):
    ref_score, ref_tb, ref_aln = align_serial(problem)
    score, tb, aln = align_wavefront(problem, cfg, instrument=instrument)
    assert np.array_equal(score, ref_score)
    assert np.array_equal(tb, ref_tb)
    assert score.dtype == ref_score.dtype and tb.dtype == ref_tb.dtype
    assert aln == ref_aln


def test_schedule_small_grids():
    """Batches follow increasing anti-diagonals and hold the cells of one diagonal each."""
    batches = schedule_antidiagonals(2, 2, 16)
    assert [batch.diagonal for batch in batches] == [2, 3, 4]
    assert [batch.cells() for batch in batches] == [[(1, 1)], [(1, 2), (2, 1)], [(2, 2)]]
    batches = schedule_antidiagonals(1, 3, 1)
    assert [batch.cells() for batch in batches] == [[(1, 1)], [(1, 2)], [(1, 3)]]


def test_schedule_covers_every_cell_once():
    """A 100x100 schedule emits all 10000 interior cells once, widest batch 100."""
    batches = schedule_antidiagonals(100, 100, 32)
    cells = [cell for batch in batches for cell in batch.cells()]
    assert len(cells) == 10000
    assert len(set(cells)) == 10000
    assert max(len(batch.cells()) for batch in batches) == 100
    assert all(len(chunk.cells()) <= 32 for batch in batches for chunk in batch.chunks)
    for batch in batches:
        assert all(i + j == batch.diagonal for i, j in batch.cells())


def test_schedule_of_empty_problem_is_empty():
    assert schedule_antidiagonals(0, 5, 4) == []
    with pytest.raises(ValueError):
        schedule_antidiagonals(3, 3, 0)


def test_ready_flags_mark_borders():
    ready = init_ready_flags(2, 3)
    assert ready[0].all() and ready[:, 0].all()
    assert not ready[1:, 1:].any()


def test_classic_pair_with_four_workers(make_problem):
    """GATTACA/GCATGCU with four workers scores 0 and reproduces the serial grids."""
    problem = make_problem('GATTACA', 'GCATGCU')
    _, _, aln = align_wavefront(problem, WavefrontConfig(workers=4, grain=1))
    assert aln.score == 0
    _assert_same_as_serial(problem, WavefrontConfig(workers=4, grain=1))


@pytest.mark.parametrize('a, b', [('', ''), ('', 'ACG'), ('ACG', ''), ('A', 'A'), ('A', 'CCCCCCCC')])
def test_degenerate_shapes(make_problem, a, b):
    """Empty and single-row problems match the serial engine."""
    _assert_same_as_serial(make_problem(a, b), WavefrontConfig(workers=4, grain=1))


@pytest.mark.parametrize('workers', [1, 2, 4, 8])
@pytest.mark.parametrize('grain', [1, 64])
def test_matches_serial_on_random_pairs(workers, grain):
    """Score grid, direction grid and alignment are byte-identical to the serial engine."""
    rng = np.random.RandomState(100 * workers + grain)
    scheme = ScoringScheme(match_score=2, mismatch_score=-1, gap_penalty=-2)
    for _ in range(10):
        _assert_same_as_serial(_random_problem(rng, 300, scheme), WavefrontConfig(workers=workers, grain=grain))


def test_worker_counts_agree_on_long_pair():
    """Two 512-residue sequences give identical grids for every worker count."""
    rng = np.random.RandomState(512)
    a = Sequence(id='a', residues=random_residues(512, rng))
    b = Sequence(id='b', residues=random_residues(512, rng))
    problem = AlignmentProblem(a=a, b=b)
    runs = [align_wavefront(problem, WavefrontConfig(workers=w, grain=16)) for w in (1, 2, 4, 8)]
    for score, tb, aln in runs[1:]:
        assert np.array_equal(score, runs[0][0])
        assert np.array_equal(tb, runs[0][1])
        assert aln == runs[0][2]


@pytest.mark.skipif(not RUN_SLOW, reason='set NW_RUN_SLOW to run the full engine equivalence sweep')
def test_matches_serial_full_sweep():
    """500 random pairs up to 512 residues, every worker count and grain."""
    rng = np.random.RandomState(2024)
    for _ in range(500):
        problem = _random_problem(rng, 512)
        ref_score, ref_tb, ref_aln = align_serial(problem)
        for workers in (1, 2, 4, 8):
            for grain in (1, 64):
                score, tb, aln = align_wavefront(problem, WavefrontConfig(workers=workers, grain=grain))
                assert np.array_equal(score, ref_score)
                assert np.array_equal(tb, ref_tb)
                assert aln == ref_aln


def test_instrumented_run_passes_checks():
    """Instrumented runs check every dependency read and still match the serial engine."""
    rng = np.random.RandomState(5)
    for workers in (1, 3, 4):
        _assert_same_as_serial(_random_problem(rng, 120), WavefrontConfig(workers=workers, grain=2), instrument=True)


def test_kernel_reports_reads_of_uncomputed_cells():
    """Filling diagonal 3 before diagonal 2 is caught by the ready-flag check."""
    a = Sequence(id='a', residues='ACG').as_array()
    b = Sequence(id='b', residues='ACG').as_array()
    score, tb = init_matrices(3, 3, ScoringScheme())
    ready = init_ready_flags(3, 3)
    bad_row = fill_diagonal_chunks(score, tb, ready, a, b, 1, -1, -1, 3, 1, 2, 4, 0, 1, True)
    assert bad_row == 1
    assert fill_diagonal_chunks(score, tb, ready, a, b, 1, -1, -1, 2, 1, 1, 4, 0, 1, True) == -1
    assert fill_diagonal_chunks(score, tb, ready, a, b, 1, -1, -1, 3, 1, 2, 4, 0, 1, True) == -1


def test_check_write_order():
    """Events may repeat a diagonal across workers but never step back."""
    check_write_order([WriteEvent(2, 0, (0,)), WriteEvent(3, 1, (0,)), WriteEvent(3, 0, (1,)), WriteEvent(4, 0, (0,))])
    with pytest.raises(InvariantViolation):
        check_write_order([WriteEvent(3, 0, (0,)), WriteEvent(2, 0, (0,))])


def test_config_validation():
    with pytest.raises(ValueError):
        WavefrontConfig(workers=0)
    with pytest.raises(ValueError):
        WavefrontConfig(grain=0)


def _median_runtime(problem, workers, reps=5):
    cfg = WavefrontConfig(workers=workers, grain=64)
    align_wavefront(problem, cfg)
    timings = []
    for _ in range(reps):
        start = time.perf_counter()
        align_wavefront(problem, cfg)
        timings.append(time.perf_counter() - start)
    return float(np.median(timings))


@pytest.mark.skipif(not RUN_SLOW or (os.cpu_count() or 1) < 4,
                    reason='set NW_RUN_SLOW on a machine with at least 4 cores to run the strong scaling check')
def test_strong_scaling_trend():
    """On a 4000x4000 problem the full machine is at least 1.5x faster than one worker."""
    problem = make_bench_problem(4000, 4000, seed=1769)
    counts = sorted({1, 2, 4, os.cpu_count()})
    medians = [_median_runtime(problem, w) for w in counts]
    assert medians[-1] <= 0.67 * medians[0]
    for previous, current in zip(medians, medians[1:]):
        assert current <= previous * 1.10
