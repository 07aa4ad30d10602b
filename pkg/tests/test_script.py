"""
Tests for the nwalign command line
"""
import pytest

from nwalign.core import MatrixSizeError, ScoringScheme
import nwalign.nwalign_script as nwalign_script
from nwalign.nwalign_script import main
from nwalign.oracle import best_score_recursive
from nwalign.seqio import parse_aligned_fasta, parse_alignment_tsv

from .fixtures import tmp_file
from .testing_data import (
    BAD_SCORING_YAML, FIVE_SEQUENCE_FASTA, FIVE_SEQUENCES, INVALID_CHARACTER_FASTA, ONE_RECORD_FASTA, SETTINGS_YAML,
    TWO_RECORD_FASTA,
)


def test_align_prints_pairwise_text(tmp_file, capsys):
    fasta = tmp_file(TWO_RECORD_FASTA)
    assert main(['align', fasta]) == 0
    lines = capsys.readouterr().out.split('\n')
    assert lines[0] == '# gattaca vs gcatgcu'
    assert lines[1].replace('-', '') == 'GATTACA'
    assert lines[3].replace('-', '') == 'GCATGCU'
    assert lines[4] == 'score: 0'


def test_align_engines_agree(tmp_file, capsys):
    fasta = tmp_file(TWO_RECORD_FASTA)
    assert main(['align', fasta, '--format', 'tsv']) == 0
    serial = capsys.readouterr().out
    assert main(['align', fasta, '--format', 'tsv', '--engine', 'wavefront', '--workers', '3', '--grain', '2']) == 0
    assert capsys.readouterr().out == serial


def test_align_all_paths(tmp_file, capsys):
    """Every printed co-optimal alignment reaches the optimal score."""
    fasta = tmp_file(TWO_RECORD_FASTA)
    assert main(['align', fasta, '--all-paths', '0', '--format', 'tsv']) == 0
    alignments = parse_alignment_tsv(capsys.readouterr().out)
    assert len(alignments) > 1
    assert {aln.score for aln in alignments} == {0}
    assert len({(aln.gapped_a, aln.gapped_b) for aln in alignments}) == len(alignments)
    assert main(['align', fasta, '--all-paths', '1', '--format', 'tsv']) == 0
    assert len(parse_alignment_tsv(capsys.readouterr().out)) == 1


def test_settings_file_and_flag_override(tmp_file, capsys):
    """YAML settings apply and command line flags take precedence over them."""
    fasta = tmp_file(TWO_RECORD_FASTA)
    settings = tmp_file(SETTINGS_YAML, suffix='.yaml')
    assert main(['--input', settings, 'align', fasta, '--format', 'tsv']) == 0
    aln, = parse_alignment_tsv(capsys.readouterr().out)
    scheme = ScoringScheme(match_score=2, mismatch_score=-1, gap_penalty=-2)
    assert aln.score == best_score_recursive('GATTACA', 'GCATGCU', scheme)
    assert main(['--input', settings, 'align', fasta, '--format', 'tsv', '--gap', '-5']) == 0
    aln, = parse_alignment_tsv(capsys.readouterr().out)
    assert aln.score == best_score_recursive('GATTACA', 'GCATGCU', scheme.model_copy(update={'gap_penalty': -5}))


def test_align_writes_out_file(tmp_file, tmp_path, capsys):
    out = tmp_path / 'aln.tsv'
    assert main(['align', tmp_file(TWO_RECORD_FASTA), '--format', 'tsv', '--out', str(out)]) == 0
    assert capsys.readouterr().out == ''
    assert parse_alignment_tsv(out.read_text())[0].id_a == 'gattaca'


def test_msa_output(tmp_file, capsys):
    assert main(['msa', tmp_file(FIVE_SEQUENCE_FASTA), '--ranks', '2']) == 0
    records = parse_aligned_fasta(capsys.readouterr().out)
    assert [r.body.replace('-', '') for r in records] == FIVE_SEQUENCES
    assert len({len(r.body) for r in records}) == 1
    assert sum(r.header.endswith('|center') for r in records) == 1


@pytest.mark.parametrize('content, command, message', [
    (ONE_RECORD_FASTA, 'msa', 'need at least 2 sequences'),
    (ONE_RECORD_FASTA, 'align', 'at least 2 records'),
    (INVALID_CHARACTER_FASTA, 'align', 'line 2: invalid character'),
    ('', 'msa', 'no FASTA records'),
])
def test_input_errors_exit_2(tmp_file, capsys, content, command, message):
    assert main([command, tmp_file(content)]) == 2
    assert message in capsys.readouterr().err


def test_missing_file_exits_2(tmp_path, capsys):
    assert main(['align', str(tmp_path / 'missing.fasta')]) == 2
    assert 'error' in capsys.readouterr().err


def test_oversized_grid_exits_2(tmp_file, monkeypatch, capsys):
    """A grid too large to address is an input error, not an internal one."""
    def _too_large(problem):
        raise MatrixSizeError('grid of 100000000 x 100000000 cells exceeds the addressable size')
    monkeypatch.setattr(nwalign_script, 'get_engine', lambda *args: _too_large)
    assert main(['align', tmp_file(TWO_RECORD_FASTA)]) == 2
    err = capsys.readouterr().err
    assert 'exceeds' in err
    assert 'internal' not in err


def test_bad_settings_exit_2(tmp_file, capsys):
    settings = tmp_file(BAD_SCORING_YAML, suffix='.yaml')
    assert main(['--input', settings, 'align', tmp_file(TWO_RECORD_FASTA)]) == 2
    assert 'must be greater' in capsys.readouterr().err


@pytest.mark.parametrize('argv', [
    [],
    ['align'],
    ['frobnicate'],
    ['align', 'x.fasta', '--engine', 'gpu'],
    ['bench', 'sideways'],
    ['bench', 'strong', '--workers-list', '1,two'],
])
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert 'usage' in capsys.readouterr().err


def test_version_exits_0(capsys):
    assert main(['--version']) == 0
    assert 'nwalign version' in capsys.readouterr().out


def test_bench_strong_csv(capsys):
    """Three worker counts and three reps give nine records after the header."""
    assert main(['bench', 'strong', '--sizes', '24', '--workers-list', '1,2,4', '--reps', '3', '--seed', '11',
                 '--grain', '4', '--warmup', '0']) == 0
    lines = [line for line in capsys.readouterr().out.split('\n') if line]
    assert lines[0] == '# seed=11'
    assert lines[1] == 'mode,engine,workers,m,n,run_index,elapsed_ns'
    rows = [line.split(',') for line in lines[2:]]
    assert len(rows) == 9
    assert sorted(int(row[2]) for row in rows) == [1, 1, 1, 2, 2, 2, 4, 4, 4]
    assert all(int(row[6]) > 0 for row in rows)


def test_bench_weak_uses_env_seed(monkeypatch, capsys):
    monkeypatch.setenv('NW_SEED', '5')
    assert main(['bench', 'weak', '--base-size', '10', '--workers-list', '1,4', '--reps', '1', '--warmup', '0']) == 0
    lines = [line for line in capsys.readouterr().out.split('\n') if line]
    assert lines[0] == '# seed=5'
    assert len(lines) == 2 + 2 * 2


def test_selftest_command(capsys):
    assert main(['selftest', '--max-length', '2', '--random-pairs', '2']) == 0
    assert '0 failures' in capsys.readouterr().out


def test_bench_strong_default_size(capsys):
    """Without --sizes one default problem size gives one row per worker count and rep."""
    assert main(['bench', 'strong', '--workers-list', '1,2,4', '--reps', '3', '--seed', '3', '--warmup', '0']) == 0
    lines = [line for line in capsys.readouterr().out.split('\n') if line]
    rows = [line.split(',') for line in lines[2:]]
    assert len(rows) == 9
    assert {(row[3], row[4]) for row in rows} == {('1000', '1000')}
