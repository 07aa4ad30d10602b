"""
Tests for the shared domain types and scoring recurrence
"""
from typing import get_type_hints

import numpy as np
import pytest
from pydantic import ValidationError

from nwalign.core import (
    DIAGONAL, HORIZONTAL, UNSET, VERTICAL, Alignment, AlignmentError, MatrixSizeError, ScoringScheme,
    Sequence, alignment_identity, check_alignment, degap, init_matrices, score_alignment, score_cell,
)
from nwalign.oracle import best_score_recursive
from nwalign.typing import GappedRow, Residues


@pytest.mark.parametrize('up, left, diag, a_sym, b_sym, expected', [
    (-1, -1, 0, 'G', 'G', (1, DIAGONAL)),
    (0, 0, 0, 'A', 'C', (-1, DIAGONAL)),
    (5, -3, -3, 'A', 'C', (4, VERTICAL)),
    (-3, 5, -3, 'A', 'C', (4, HORIZONTAL)),
    (2, 2, 0, 'A', 'C', (1, VERTICAL)),
])
def test_score_cell_examples_and_tie_priority(up, left, diag, a_sym, b_sym, expected):
    """score_cell returns the maximum branch, preferring diagonal, then vertical, then horizontal."""
    assert score_cell(up, left, diag, a_sym, b_sym, ScoringScheme()) == expected


def test_score_cell_is_deterministic():
    """Repeated calls with the same arguments give the same answer."""
    rng = np.random.RandomState(7)
    scheme = ScoringScheme(match_score=3, mismatch_score=-2, gap_penalty=-4)
    for _ in range(200):
        up, left, diag = (int(x) for x in rng.randint(-50, 50, size=3))
        a_sym, b_sym = rng.choice(list('ACGT'), size=2)
        assert score_cell(up, left, diag, a_sym, b_sym, scheme) == score_cell(up, left, diag, a_sym, b_sym, scheme)


def test_init_matrices_borders():
    """Borders are multiples of the gap penalty; interior directions are unset."""
    score, tb = init_matrices(2, 3, ScoringScheme())
    assert score[0].tolist() == [0, -1, -2, -3]
    assert score[:, 0].tolist() == [0, -1, -2]
    assert score.dtype == np.int64
    assert tb.dtype == np.int8
    assert tb[0, 0] == UNSET
    assert (tb[1:, 1:] == UNSET).all()

    score, tb = init_matrices(0, 0, ScoringScheme())
    assert score.shape == (1, 1) and score[0, 0] == 0

    score, _ = init_matrices(1, 1, ScoringScheme(gap_penalty=-2))
    assert score[0].tolist() == [0, -2]
    assert score[:, 0].tolist() == [0, -2]


def test_init_matrices_rejects_impossible_grids():
    """Negative lengths and grids beyond the address space are rejected before allocation."""
    with pytest.raises(ValueError):
        init_matrices(-1, 3, ScoringScheme())
    with pytest.raises(MatrixSizeError):
        init_matrices(2**40, 2**40, ScoringScheme())


def test_scoring_scheme_validation():
    """A scheme must penalize gaps and favor matches over mismatches."""
    with pytest.raises(ValidationError):
        ScoringScheme(gap_penalty=0)
    with pytest.raises(ValidationError):
        ScoringScheme(match_score=-1, mismatch_score=-1)
    scheme = ScoringScheme(match_score=2, mismatch_score=-1, gap_penalty=-2)
    assert scheme.scaled(3) == ScoringScheme(match_score=6, mismatch_score=-3, gap_penalty=-6)
    with pytest.raises(ValueError):
        scheme.scaled(0)


def test_sequence_accepts_only_uppercase_letters():
    """Sequence residues are uppercase ASCII letters; empty sequences are allowed."""
    assert Sequence(id='empty', residues='').length == 0
    assert len(Sequence(id='s', residues='ACGT')) == 4
    assert Sequence(id='s', residues='ACGT').as_array().tolist() == [65, 67, 71, 84]
    for bad in ('acgt', 'AC-T', 'AC T', 'AC1'):
        with pytest.raises(ValidationError):
            Sequence(id='bad', residues=bad)


@pytest.mark.parametrize('gapped_a, gapped_b, expected', [
    ('ACGT', 'ACGT', 4),
    ('A-', 'AT', 0),
    ('G-ATTACA', 'GCA-TGCU', 0),
    ('', '', 0),
])
def test_score_alignment_examples(gapped_a, gapped_b, expected):
    """score_alignment sums column scores."""
    assert score_alignment(Alignment(gapped_a, gapped_b, 0), ScoringScheme()) == expected


def test_classic_pair_optimum_matches_brute_force():
    """The hand-written GATTACA alignment reaches the brute-force optimum."""
    assert score_alignment(Alignment('G-ATTACA', 'GCA-TGCU', 0), ScoringScheme()) == best_score_recursive('GATTACA', 'GCATGCU', ScoringScheme())


@pytest.mark.parametrize('gapped_a, gapped_b', [
    ('ACG', 'AC'),
    ('A-C', 'A-C'),
])
def test_score_alignment_rejects_malformed_rows(gapped_a, gapped_b):
    """Unequal rows and double-gap columns are not alignments."""
    with pytest.raises(AlignmentError):
        score_alignment(Alignment(gapped_a, gapped_b, 0), ScoringScheme())


def test_check_alignment():
    """check_alignment accepts a valid alignment and reports each kind of defect."""
    a, b = Sequence(id='a', residues='ACT'), Sequence(id='b', residues='AT')
    check_alignment(Alignment('ACT', 'A-T', 1), a, b, ScoringScheme())
    with pytest.raises(AlignmentError, match='degap'):
        check_alignment(Alignment('AGT', 'A-T', 1), a, b)
    with pytest.raises(AlignmentError, match='both rows'):
        check_alignment(Alignment('AC-T-', 'A--T-', 1), a, b)
    with pytest.raises(AlignmentError, match='Second row'):
        check_alignment(Alignment('ACT', 'AGT', 1), a, b)
    with pytest.raises(AlignmentError, match='does not match'):
        check_alignment(Alignment('ACT', 'A-T', 3), a, b, ScoringScheme())


def test_degap_and_identity():
    """degap strips gaps; identity counts matching columns over all columns."""
    assert degap('--A-C--') == 'AC'
    assert alignment_identity(Alignment('ACGT', 'ACGT', 4)) == 1.0
    assert alignment_identity(Alignment('A-', 'AT', 0)) == 0.5
    assert alignment_identity(Alignment('', '', 0)) == 0.0


def test_gapped_rows_and_residues_are_typed():
    assert get_type_hints(degap) == {'gapped': GappedRow, 'return': Residues}
    hints = get_type_hints(Alignment)
    assert hints['gapped_a'] is hints['gapped_b'] is GappedRow
