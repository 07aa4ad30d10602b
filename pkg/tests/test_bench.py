"""
Tests for the scaling harness and its analysis
"""
import pytest

from nwalign.analysis import summarize
from nwalign.bench import (
    DEFAULT_SEED, BenchRecord, bench_strong, bench_weak, make_problem, resolve_seed, weak_side_length,
)
from nwalign.serial_nw import align_score_only


def test_strong_record_count_and_fields():
    records = bench_strong([24, 32], [1, 2, 4], reps=3, seed=5, grain=4)
    assert len(records) == 2 * 3 * 3
    assert {r.mode for r in records} == {'strong'}
    assert {r.engine for r in records} == {'wavefront'}
    assert {(r.m, r.n) for r in records} == {(24, 24), (32, 32)}
    assert sorted({r.run_index for r in records}) == [0, 1, 2]
    assert all(r.elapsed_ns > 0 for r in records)


def test_weak_scales_cell_count_and_times_both_engines():
    records = bench_weak(10, [1, 4, 2], reps=2, seed=5, grain=4)
    sides = {r.workers: r.m for r in records}
    assert sides == {1: 10, 4: 20, 2: 14}
    assert all(r.m == r.n for r in records)
    for workers in (1, 2, 4):
        assert {r.engine for r in records if r.workers == workers} == {'serial', 'wavefront'}
    assert len(records) == 3 * 2 * 2


@pytest.mark.parametrize('base, workers, side', [(1000, 1, 1000), (1000, 4, 2000), (1, 1, 1), (100, 8, 283)])
def test_weak_side_length(base, workers, side):
    assert weak_side_length(base, workers) == side
    assert abs(weak_side_length(base, workers) ** 2 - base ** 2 * workers) <= 2 * weak_side_length(base, workers) + 1


def test_seeded_inputs_are_reproducible():
    """The same seed generates the same problem; a different seed does not."""
    assert make_problem(50, 40, seed=3) == make_problem(50, 40, seed=3)
    assert make_problem(50, 40, seed=3) != make_problem(50, 40, seed=4)
    problem = make_problem(50, 40, seed=3)
    assert problem.shape == (50, 40)
    assert set(problem.a.residues) <= set('ACGT')


def test_resolve_seed():
    assert resolve_seed(environ={}) == DEFAULT_SEED
    assert resolve_seed(environ={'NW_SEED': '123'}) == 123
    assert resolve_seed(9, environ={'NW_SEED': '123'}) == 9
    with pytest.raises(ValueError, match='NW_SEED'):
        resolve_seed(environ={'NW_SEED': '-4'})
    with pytest.raises(ValueError):
        resolve_seed(environ={'NW_SEED': 'abc'})


def test_resolve_seed_reads_process_environment(monkeypatch):
    monkeypatch.setenv('NW_SEED', '77')
    assert resolve_seed() == 77


def test_harness_rejects_empty_configurations():
    with pytest.raises(ValueError):
        bench_strong([], [1], reps=1)
    with pytest.raises(ValueError):
        bench_strong([10], [], reps=1)
    with pytest.raises(ValueError):
        bench_strong([10], [1], reps=0)
    with pytest.raises(ValueError):
        bench_weak(0, [1], reps=1)


def test_timed_runs_keep_scores(monkeypatch):
    """A harness run checks every timed alignment against the untimed score."""
    seen = []
    import nwalign.bench as bench_module
    original = bench_module.align_score_only

    def recording(problem):
        seen.append(problem)
        return original(problem)
    monkeypatch.setattr(bench_module, 'align_score_only', recording)
    bench_strong([16], [1, 2], reps=1, seed=8, grain=2)
    assert len(seen) == 1
    assert align_score_only(seen[0]) == original(make_problem(16, 16, seed=8))


def test_summarize_strong_and_weak():
    records = [BenchRecord('strong', 'wavefront', 1, 8, 8, r, t) for r, t in enumerate([100, 300, 200])]
    records += [BenchRecord('strong', 'wavefront', 2, 8, 8, r, t) for r, t in enumerate([100, 100, 120])]
    records += [BenchRecord('weak', 'serial', 1, 8, 8, 0, 50), BenchRecord('weak', 'serial', 4, 16, 16, 0, 200)]
    summaries = {(s.mode, s.engine, s.workers): s for s in summarize(records)}
    one = summaries[('strong', 'wavefront', 1)]
    two = summaries[('strong', 'wavefront', 2)]
    assert one.median_ns == 200.0 and one.runs == 3
    assert two.median_ns == 100.0
    assert two.speedup == 2.0 and two.efficiency == 1.0
    weak = summaries[('weak', 'serial', 4)]
    assert weak.speedup == 1.0 and weak.efficiency == 0.25


def test_summarize_without_baseline():
    summaries = summarize([BenchRecord('strong', 'wavefront', 2, 8, 8, 0, 10)])
    assert summaries[0].speedup is None and summaries[0].efficiency is None
