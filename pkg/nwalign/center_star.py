"""
Center-star multiple sequence alignment.

1. Score all n(n-1)/2 pairs.
2. Pick the center: the sequence with the largest summed score against all others.
3. Align every other sequence to the center.
4. Merge the pairwise alignments by union-gapping the center ("once a gap,
   always a gap").

Total cost is O(n^2 k^2) for n sequences of typical length k, dominated by
the first two stages. Both are embarrassingly parallel over pairs and can be
handed to ``nwalign.distributor``; the merge is single-threaded.
"""

import logging
from typing import List, NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from nwalign.core import GAP, Alignment, ScoringScheme, Sequence, degap
from nwalign.engines import get_engine, get_scorer
from nwalign.serial_nw import AlignmentProblem
from nwalign.typing import PairIndex, PairScoreMatrix
from nwalign.wavefront_nw import DEFAULT_GRAIN

_log = logging.getLogger(__name__)


class MsaError(ValueError):
    """Exception raised when a multiple alignment job or merge is invalid."""
    pass


class MsaJob(BaseModel):
    """Sequences to align jointly under one scoring scheme."""
    model_config = ConfigDict(frozen=True)

    sequences: List[Sequence]
    scheme: ScoringScheme = ScoringScheme()

    @field_validator('sequences')
    @classmethod
    def _at_least_two(cls, sequences):
        if len(sequences) < 2:
            raise ValueError(f'need at least 2 sequences, got {len(sequences)}')
        return sequences


class MsaResult(NamedTuple):
    """Gapped rows in input order. All rows have equal length."""
    center_index: int
    rows: List[str]
    ids: List[str]


def pair_indices(n: int) -> List[PairIndex]:
    """
    Return every unordered pair (p, q) with p < q in lexicographic order.

    Parameters
    ----------
    n : int
        Number of sequences, at least 2

    Returns
    -------
    List[Tuple[int, int]]
        n(n-1)/2 pairs

    Examples
    --------
    >>> pair_indices(4)
    [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    >>> len(pair_indices(5))
    10
    """
    if n < 2:
        raise MsaError(f'need at least 2 sequences, got {n}')
    return [(p, q) for p in range(n) for q in range(p + 1, n)]


def fill_pair_scores(n: int, pair_scores) -> PairScoreMatrix:
    """Build the symmetric (n, n) matrix from ``(pair index, score)`` entries over ``pair_indices(n)``."""
    pairs = pair_indices(n)
    scores = np.zeros((n, n), dtype=np.int64)
    for index, value in pair_scores:
        p, q = pairs[index]
        scores[p, q] = value
        scores[q, p] = value
    return scores


def compute_pair_scores(job: MsaJob, engine: str = 'serial', workers: int = 1, grain: int = DEFAULT_GRAIN) -> PairScoreMatrix:
    """Score every pair of ``job`` in this process, in ``pair_indices`` order."""
    scorer = get_scorer(engine, workers, grain)
    seqs = job.sequences
    entries = []
    for index, (p, q) in enumerate(pair_indices(len(seqs))):
        entries.append((index, scorer(AlignmentProblem(a=seqs[p], b=seqs[q], scheme=job.scheme))))
    return fill_pair_scores(len(seqs), entries)


def select_center(scores: PairScoreMatrix) -> int:
    """
    Return the index with the largest row sum, the lowest index on ties.

    Examples
    --------
    >>> select_center(np.array([[0, 2, 3], [2, 0, 7], [3, 7, 0]]))
    1
    >>> select_center(np.zeros((3, 3), dtype=int))
    0
    """
    row_sums = np.asarray(scores).sum(axis=1) - np.diag(scores)
    # np.argmax returns the first occurrence of the maximum
    return int(np.argmax(row_sums))


def align_all_to_center(job: MsaJob, center: int, engine: str = 'serial', workers: int = 1, grain: int = DEFAULT_GRAIN) -> List[Alignment]:
    """
    Align every non-center sequence to the center, in input order.

    Parameters
    ----------
    job : MsaJob
    center : int
        Index of the center sequence
    engine : str
        ``'serial'`` or ``'wavefront'``
    workers : int
    grain : int

    Returns
    -------
    List[Alignment]
        n-1 alignments whose first gapped row is the center.
    """
    if not 0 <= center < len(job.sequences):
        raise MsaError(f'Center index {center} is out of range for {len(job.sequences)} sequences')
    align = get_engine(engine, workers, grain)
    center_seq = job.sequences[center]
    alignments = []
    for index, other in enumerate(job.sequences):
        if index == center:
            continue
        _, _, aln = align(AlignmentProblem(a=center_seq, b=other, scheme=job.scheme))
        alignments.append(aln)
    return alignments


def _gaps_before(gapped_center: str, length: int) -> List[int]:
    """Count the center gap columns in front of each center residue (index ``length`` is the tail)."""
    counts = [0] * (length + 1)
    k = 0
    for char in gapped_center:
        if char == GAP:
            counts[k] += 1
        else:
            k += 1
    return counts


def merge_alignments(alignments: List[Alignment], center: Sequence, job: MsaJob, center_index: Optional[int] = None) -> MsaResult:
    """
    Merge pairwise center alignments into one gapped block.

    A gap column inserted into the center by any pairwise alignment is
    inserted into every row. Within such a gap slot each sequence places its
    own residues first, so no merged column is all gaps.

    Parameters
    ----------
    alignments : List[Alignment]
        One alignment per non-center sequence, in input order, center row first
    center : Sequence
    job : MsaJob
    center_index : Optional[int]
        Position of the center in ``job.sequences``. Looked up by identity
        with ``center`` if not given.

    Returns
    -------
    MsaResult

    Raises
    ------
    MsaError
        If a center row does not degap to the center sequence, or the
        alignment count does not match the job.

    Examples
    --------
    >>> seqs = [Sequence(id=x, residues=x) for x in ('ACT', 'AT', 'ACGT')]
    >>> job = MsaJob(sequences=seqs)
    >>> alns = [Alignment('AC-T', 'ACGT', 2)]
    >>> alns.insert(0, Alignment('ACT', 'A-T', 1))
    >>> merge_alignments(alns, seqs[0], job, center_index=0).rows
    ['AC-T', 'A--T', 'ACGT']
    """
    seqs = job.sequences
    if center_index is None:
        matches = [i for i, seq in enumerate(seqs) if seq == center]
        if not matches:
            raise MsaError(f'Center sequence {center.id!r} is not part of the job')
        center_index = matches[0]
    if len(alignments) != len(seqs) - 1:
        raise MsaError(f'Expected {len(seqs) - 1} pairwise alignments, got {len(alignments)}')

    length = center.length
    per_alignment_gaps = []
    for aln in alignments:
        if degap(aln.gapped_a) != center.residues:
            raise MsaError(f'Alignment of {aln.id_b!r} has a center row that does not degap to {center.id!r}')
        per_alignment_gaps.append(_gaps_before(aln.gapped_a, length))
    slots = [max(gaps[k] for gaps in per_alignment_gaps) for k in range(length + 1)]

    center_row = []
    for k in range(length + 1):
        center_row.append(GAP * slots[k])
        if k < length:
            center_row.append(center.residues[k])

    other_rows = []
    for aln in alignments:
        row = []
        k = 0
        inserted = 0
        for char_center, char_other in zip(aln.gapped_a, aln.gapped_b):
            if char_center == GAP:
                row.append(char_other)
                inserted += 1
            else:
                row.append(GAP * (slots[k] - inserted))
                row.append(char_other)
                k += 1
                inserted = 0
        row.append(GAP * (slots[length] - inserted))
        other_rows.append(''.join(row))

    rows = other_rows[:center_index] + [''.join(center_row)] + other_rows[center_index:]
    _log.debug('Merged %d rows into %d columns', len(rows), len(rows[0]))
    return MsaResult(center_index, rows, [seq.id for seq in seqs])


def msa(job: MsaJob, engine: str = 'serial', workers: int = 1, grain: int = DEFAULT_GRAIN,
        ranks: int = 1, transport: str = 'in-process', **distributor_kwargs) -> MsaResult:
    """
    Run the center-star pipeline.

    Parameters
    ----------
    job : MsaJob
    engine : str
        ``'serial'`` or ``'wavefront'``
    workers : int
        Wavefront worker threads per alignment
    grain : int
        Wavefront cells per work unit
    ranks : int
        Number of distributor ranks. With one rank and the in-process
        transport every stage runs directly in this process.
    transport : str
        ``'in-process'``, ``'socket'`` or ``'dask'``
    distributor_kwargs
        Passed to the distributor (``timeout``, ``addresses``)

    Returns
    -------
    MsaResult
    """
    n = len(job.sequences)
    _log.info('Center star alignment of %d sequences (%d pairs) with the %s engine', n, n * (n - 1) // 2, engine)
    distributed = ranks > 1 or transport.replace('_', '-') != 'in-process'
    if distributed:
        from nwalign.distributor import distribute_center_alignments, scatter_gather
        scores = scatter_gather(job, ranks, transport, engine, workers=workers, grain=grain, **distributor_kwargs)
    else:
        scores = compute_pair_scores(job, engine, workers, grain)
    center = select_center(scores)
    _log.info('Selected sequence %d (%r) as the center', center, job.sequences[center].id)
    if distributed:
        alignments = distribute_center_alignments(job, center, ranks, transport, engine, workers=workers, grain=grain, **distributor_kwargs)
    else:
        alignments = align_all_to_center(job, center, engine, workers, grain)
    return merge_alignments(alignments, job.sequences[center], job, center_index=center)
