"""
Reference single-pair aligner.

The grids are filled one cell at a time in row-major order, which is the
baseline every other engine is compared against cell for cell.
"""

import logging
from typing import List, NamedTuple, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from nwalign.core import (
    DIAGONAL, GAP, HORIZONTAL, VERTICAL, Alignment, AlignmentError, ScoringScheme,
    Sequence, init_matrices, score_alignment,
)
from nwalign.kernels import fill_rowmajor, fill_score_only
from nwalign.typing import ScoreMatrix, TracebackMatrix

_log = logging.getLogger(__name__)

DEFAULT_PATH_CAP = 256


class AlignmentProblem(BaseModel):
    """Two sequences to align globally under a scoring scheme."""
    model_config = ConfigDict(frozen=True)

    a: Sequence
    b: Sequence
    scheme: ScoringScheme = ScoringScheme()

    @property
    def shape(self) -> Tuple[int, int]:
        return self.a.length, self.b.length


class TracebackResult(NamedTuple):
    alignments: List[Alignment]
    truncated: bool


def align_serial(problem: AlignmentProblem) -> Tuple[ScoreMatrix, TracebackMatrix, Alignment]:
    """
    Fill the score and traceback grids row by row and return the canonical alignment.

    Parameters
    ----------
    problem : AlignmentProblem

    Returns
    -------
    Tuple[np.ndarray, np.ndarray, Alignment]
        The (m+1, n+1) score grid, the direction grid and the traceback from (m, n).

    Examples
    --------
    >>> a, b = Sequence(id='a', residues='GATTACA'), Sequence(id='b', residues='GCATGCU')
    >>> score, tb, aln = align_serial(AlignmentProblem(a=a, b=b))
    >>> int(score[-1, -1]), aln.score
    (0, 0)
    """
    m, n = problem.shape
    scheme = problem.scheme
    _log.trace('Serial fill of a (%s x %s) grid', m + 1, n + 1)
    score, tb = init_matrices(m, n, scheme)
    fill_rowmajor(score, tb, problem.a.as_array(), problem.b.as_array(),
                  scheme.match_score, scheme.mismatch_score, scheme.gap_penalty)
    aln = traceback_one(tb, problem.a, problem.b, scheme)
    return score, tb, aln


def align_score_only(problem: AlignmentProblem) -> int:
    """Return the optimal global score without keeping the grids (linear memory)."""
    scheme = problem.scheme
    return int(fill_score_only(problem.a.as_array(), problem.b.as_array(),
                               scheme.match_score, scheme.mismatch_score, scheme.gap_penalty))


def traceback_one(tb: TracebackMatrix, a: Sequence, b: Sequence, scheme: Optional[ScoringScheme] = None) -> Alignment:
    """
    Walk the direction codes from (m, n) back to the origin.

    Parameters
    ----------
    tb : np.ndarray
        Fully populated direction grid of shape (m+1, n+1)
    a : Sequence
        Row sequence
    b : Sequence
        Column sequence
    scheme : Optional[ScoringScheme]
        Scheme used to score the result. Defaults to +1/-1/-1.

    Returns
    -------
    Alignment

    Raises
    ------
    AlignmentError
        If an unset (0) or out-of-bounds direction is met, which means the
        engine that filled ``tb`` did not finish.
    """
    scheme = scheme if scheme is not None else ScoringScheme()
    if tb.shape != (a.length + 1, b.length + 1):
        raise AlignmentError(f'Traceback grid shape {tb.shape} does not match sequences of length ({a.length}, {b.length})')
    cols_a = []
    cols_b = []
    i, j = a.length, b.length
    while i > 0 or j > 0:
        code = tb[i, j]
        if code == DIAGONAL and i > 0 and j > 0:
            i -= 1
            j -= 1
            cols_a.append(a.residues[i])
            cols_b.append(b.residues[j])
        elif code == VERTICAL and i > 0:
            i -= 1
            cols_a.append(a.residues[i])
            cols_b.append(GAP)
        elif code == HORIZONTAL and j > 0:
            j -= 1
            cols_a.append(GAP)
            cols_b.append(b.residues[j])
        else:
            raise AlignmentError(f'Invalid direction code {code} at cell ({i}, {j})')
    aln = Alignment(''.join(reversed(cols_a)), ''.join(reversed(cols_b)), 0, a.id, b.id)
    return aln._replace(score=score_alignment(aln, scheme))


def traceback_all(score: ScoreMatrix, a: Sequence, b: Sequence, scheme: ScoringScheme, cap: Optional[int] = DEFAULT_PATH_CAP) -> TracebackResult:
    """
    Enumerate co-optimal alignments by re-deriving every tied branch from the score grid.

    Parameters
    ----------
    score : np.ndarray
        Fully populated score grid
    a : Sequence
    b : Sequence
    scheme : ScoringScheme
        The scheme that produced ``score``
    cap : Optional[int]
        Maximum number of alignments to return. None enumerates everything.

    Returns
    -------
    TracebackResult
        Alignments in depth-first order (diagonal, vertical, horizontal) and
        whether more alignments exist beyond ``cap``.

    Notes
    -----
    The first alignment is always the one ``traceback_one`` produces, since
    both prefer the diagonal, then the vertical branch.

    Examples
    --------
    >>> a, b = Sequence(id='a', residues='AG'), Sequence(id='b', residues='GA')
    >>> grid, _, _ = align_serial(AlignmentProblem(a=a, b=b))
    >>> result = traceback_all(grid, a, b, ScoringScheme())
    >>> sorted((x.gapped_a, x.gapped_b) for x in result.alignments)
    [('-AG', 'GA-'), ('AG-', '-GA')]
    """
    if cap is not None and cap < 1:
        raise ValueError(f'cap must be at least 1, got {cap}')
    m, n = a.length, b.length
    final = int(score[m, n])
    gap = scheme.gap_penalty
    alignments = []
    # Each stack entry is (i, j, path) where path is a linked list of
    # (column_a, column_b, parent) built from the end of the alignment.
    stack = [(m, n, None)]
    while stack:
        i, j, path = stack.pop()
        if i == 0 and j == 0:
            cols_a = []
            cols_b = []
            while path is not None:
                col_a, col_b, path = path
                cols_a.append(col_a)
                cols_b.append(col_b)
            alignments.append(Alignment(''.join(cols_a), ''.join(cols_b), final, a.id, b.id))
            if cap is not None and len(alignments) >= cap:
                break
            continue
        here = score[i, j]
        branches = []
        if i > 0 and j > 0 and score[i - 1, j - 1] + scheme.substitution(a.residues[i - 1], b.residues[j - 1]) == here:
            branches.append((i - 1, j - 1, (a.residues[i - 1], b.residues[j - 1], path)))
        if i > 0 and score[i - 1, j] + gap == here:
            branches.append((i - 1, j, (a.residues[i - 1], GAP, path)))
        if j > 0 and score[i, j - 1] + gap == here:
            branches.append((i, j - 1, (GAP, b.residues[j - 1], path)))
        # push in reverse so the diagonal branch is explored first
        stack.extend(reversed(branches))
    # Every stacked cell lies on an optimal path to the origin, so a
    # non-empty stack means alignments were left out.
    truncated = bool(stack)
    _log.trace('Enumerated %d co-optimal alignments (truncated=%s)', len(alignments), truncated)
    return TracebackResult(alignments, truncated)
