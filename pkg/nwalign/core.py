"""
Domain types and the scoring recurrence shared by every alignment engine.
"""

import sys
from typing import Annotated, NamedTuple, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, StringConstraints, model_validator

from nwalign.typing import DirectionCode, GappedRow, Residues, ScoreMatrix, TracebackMatrix

GAP = '-'

UNSET: DirectionCode = 0
DIAGONAL: DirectionCode = 1
VERTICAL: DirectionCode = 2
HORIZONTAL: DirectionCode = 3

SCORE_DTYPE = np.int64
DIRECTION_DTYPE = np.int8


class AlignmentError(ValueError):
    """Exception raised when an alignment or traceback is malformed."""
    pass


class MatrixSizeError(AlignmentError):
    """Exception raised when a dynamic programming grid cannot be addressed."""
    pass


class InvariantViolation(AssertionError):
    """Exception raised when an engine breaks one of its ordering or completeness contracts."""
    pass


class Sequence(BaseModel):
    """A named sequence of uppercase ASCII residues.

    Normalization (uppercasing, whitespace removal) happens at ingestion in
    ``nwalign.seqio``; anything else is rejected here.

    Examples
    --------
    >>> Sequence(id='s1', residues='ACGT').length
    4
    """
    model_config = ConfigDict(frozen=True)

    id: str
    residues: Annotated[str, StringConstraints(pattern=r'^[A-Z]*$')]

    @property
    def length(self) -> int:
        return len(self.residues)

    def __len__(self) -> int:
        return len(self.residues)

    def as_array(self) -> np.ndarray:
        """Return the residues as a writable uint8 array of ASCII codes."""
        return np.frombuffer(self.residues.encode('ascii'), dtype=np.uint8).copy()


class ScoringScheme(BaseModel):
    """Linear gap scoring: a match score, a mismatch score and a per-residue gap penalty.

    Examples
    --------
    >>> scheme = ScoringScheme()
    >>> scheme.substitution('A', 'A'), scheme.substitution('A', 'C'), scheme.gap_penalty
    (1, -1, -1)
    """
    model_config = ConfigDict(frozen=True)

    match_score: int = 1
    mismatch_score: int = -1
    gap_penalty: int = -1

    @model_validator(mode='after')
    def _check_ordering(self):
        if self.gap_penalty >= 0:
            raise ValueError(f'gap_penalty must be negative, got {self.gap_penalty}')
        if self.match_score <= self.mismatch_score:
            raise ValueError(f'match_score ({self.match_score}) must be greater than mismatch_score ({self.mismatch_score})')
        return self

    def substitution(self, a_sym: str, b_sym: str) -> int:
        return self.match_score if a_sym == b_sym else self.mismatch_score

    def scaled(self, factor: int) -> 'ScoringScheme':
        """Return a copy with every parameter multiplied by a positive integer ``factor``."""
        if factor < 1:
            raise ValueError(f'Scaling factor must be a positive integer, got {factor}')
        return ScoringScheme(match_score=self.match_score*factor,
                             mismatch_score=self.mismatch_score*factor,
                             gap_penalty=self.gap_penalty*factor)


class Alignment(NamedTuple):
    """A pair of equal-length gapped rows and their score under a ScoringScheme."""
    gapped_a: GappedRow
    gapped_b: GappedRow
    score: int
    id_a: str = 'a'
    id_b: str = 'b'


def score_cell(up: int, left: int, diag: int, a_sym: str, b_sym: str, scheme: ScoringScheme) -> Tuple[int, DirectionCode]:
    """
    Score a single interior cell from its three computed neighbors.

    Parameters
    ----------
    up : int
        Score of cell (i-1, j)
    left : int
        Score of cell (i, j-1)
    diag : int
        Score of cell (i-1, j-1)
    a_sym : str
        Residue a[i]
    b_sym : str
        Residue b[j]
    scheme : ScoringScheme

    Returns
    -------
    Tuple[int, int]
        The cell score and the direction code of the winning branch. Ties are
        resolved as diagonal, then vertical, then horizontal.

    Examples
    --------
    >>> score_cell(-1, -1, 0, 'G', 'G', ScoringScheme())
    (1, 1)
    >>> score_cell(0, 0, 0, 'A', 'C', ScoringScheme())
    (-1, 1)
    >>> score_cell(5, -3, -3, 'A', 'C', ScoringScheme())
    (4, 2)
    """
    diag_score = diag + scheme.substitution(a_sym, b_sym)
    up_score = up + scheme.gap_penalty
    left_score = left + scheme.gap_penalty
    best = max(diag_score, up_score, left_score)
    if diag_score == best:
        return best, DIAGONAL
    if up_score == best:
        return best, VERTICAL
    return best, HORIZONTAL


def _check_grid_size(m: int, n: int) -> None:
    if m < 0 or n < 0:
        raise ValueError(f'Sequence lengths must be non-negative, got ({m}, {n})')
    cells = (m + 1) * (n + 1)
    itemsize = np.dtype(SCORE_DTYPE).itemsize
    if cells > sys.maxsize // itemsize:
        raise MatrixSizeError(f'A ({m + 1} x {n + 1}) grid has {cells} cells, which overflows the addressable size of this platform')


def init_matrices(m: int, n: int, scheme: ScoringScheme) -> Tuple[ScoreMatrix, TracebackMatrix]:
    """
    Allocate the score and traceback grids with their borders filled.

    Parameters
    ----------
    m : int
        Length of the row sequence
    n : int
        Length of the column sequence
    scheme : ScoringScheme

    Returns
    -------
    Tuple[np.ndarray, np.ndarray]
        An (m+1, n+1) int64 score grid and an int8 direction grid. Column 0 is
        vertical, row 0 is horizontal and every interior code is unset (0).

    Examples
    --------
    >>> score, tb = init_matrices(2, 3, ScoringScheme())
    >>> score[0].tolist(), score[:, 0].tolist()
    ([0, -1, -2, -3], [0, -1, -2])
    >>> tb.tolist()
    [[0, 3, 3, 3], [2, 0, 0, 0], [2, 0, 0, 0]]
    """
    _check_grid_size(m, n)
    score = np.zeros((m + 1, n + 1), dtype=SCORE_DTYPE)
    score[:, 0] = np.arange(m + 1, dtype=SCORE_DTYPE) * scheme.gap_penalty
    score[0, :] = np.arange(n + 1, dtype=SCORE_DTYPE) * scheme.gap_penalty
    tb = np.zeros((m + 1, n + 1), dtype=DIRECTION_DTYPE)
    tb[1:, 0] = VERTICAL
    tb[0, 1:] = HORIZONTAL
    return score, tb


def degap(gapped: GappedRow) -> Residues:
    """Return ``gapped`` with every gap character removed.

    >>> degap('G-AT-')
    'GAT'
    """
    return gapped.replace(GAP, '')


def _check_shape(aln: Alignment) -> None:
    if len(aln.gapped_a) != len(aln.gapped_b):
        raise AlignmentError(f'Gapped rows differ in length ({len(aln.gapped_a)} != {len(aln.gapped_b)})')
    for column, (x, y) in enumerate(zip(aln.gapped_a, aln.gapped_b)):
        if x == GAP and y == GAP:
            raise AlignmentError(f'Column {column} contains a gap in both rows')


def score_alignment(aln: Alignment, scheme: ScoringScheme) -> int:
    """
    Return the column-wise score of an alignment.

    Parameters
    ----------
    aln : Alignment
    scheme : ScoringScheme

    Returns
    -------
    int

    Raises
    ------
    AlignmentError
        If the rows differ in length or any column is a gap in both rows.

    Examples
    --------
    >>> score_alignment(Alignment('ACGT', 'ACGT', 0), ScoringScheme())
    4
    >>> score_alignment(Alignment('A-', 'AT', 0), ScoringScheme())
    0
    """
    _check_shape(aln)
    total = 0
    for x, y in zip(aln.gapped_a, aln.gapped_b):
        if x == GAP or y == GAP:
            total += scheme.gap_penalty
        else:
            total += scheme.substitution(x, y)
    return total


def check_alignment(aln: Alignment, a: Sequence, b: Sequence, scheme: Optional[ScoringScheme] = None) -> None:
    """
    Raise AlignmentError unless ``aln`` is a well formed global alignment of ``a`` and ``b``.

    Checks equal row lengths, no double-gap columns, max(m, n) <= length <= m + n,
    that each row degaps to its sequence and, if a scheme is given, that the
    recorded score equals the column sum.
    """
    _check_shape(aln)
    length = len(aln.gapped_a)
    if not max(a.length, b.length) <= length <= a.length + b.length:
        raise AlignmentError(f'Alignment length {length} is outside [{max(a.length, b.length)}, {a.length + b.length}]')
    if degap(aln.gapped_a) != a.residues:
        raise AlignmentError(f'First row does not degap to sequence {a.id!r}')
    if degap(aln.gapped_b) != b.residues:
        raise AlignmentError(f'Second row does not degap to sequence {b.id!r}')
    if scheme is not None:
        expected = score_alignment(aln, scheme)
        if expected != aln.score:
            raise AlignmentError(f'Recorded score {aln.score} does not match the column sum {expected}')


def alignment_identity(aln: Alignment) -> float:
    """Fraction of columns that are matches. An empty alignment has identity 0.

    >>> alignment_identity(Alignment('AC-T', 'AGGT', 0))
    0.5
    """
    length = len(aln.gapped_a)
    if length == 0:
        return 0.0
    matches = sum(1 for x, y in zip(aln.gapped_a, aln.gapped_b) if x == y and x != GAP)
    return matches / length
