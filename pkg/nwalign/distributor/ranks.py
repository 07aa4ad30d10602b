"""
What a rank does with a message, independent of how the message arrived.

Every transport hands decoded ``WorkMessage`` / ``AlignWorkMessage`` objects to
``handle_work`` and ships back whatever it returns, so the in-process, socket
and dask ranks compute exactly the same thing.
"""

import logging
from typing import List, NamedTuple

from nwalign.center_star import pair_indices
from nwalign.core import ScoringScheme, Sequence
from nwalign.engines import get_engine, get_scorer
from nwalign.serial_nw import AlignmentProblem
from nwalign.wavefront_nw import DEFAULT_GRAIN
from .protocol import (
    AlignedEntry, AlignedMessage, AlignWorkMessage, ErrorMessage, Message, ResultMessage,
    WireSequence, WorkMessage,
)

_log = logging.getLogger(__name__)


class RankSettings(NamedTuple):
    """Per-session settings a rank receives in HELLO."""
    scheme: ScoringScheme = ScoringScheme()
    engine: str = 'serial'
    workers: int = 1
    grain: int = DEFAULT_GRAIN


def _to_sequences(wire: List[WireSequence]) -> List[Sequence]:
    return [Sequence(id=seq_id, residues=residues) for seq_id, residues in wire]


def run_score_work(message: WorkMessage, settings: RankSettings) -> ResultMessage:
    """Score the pairs ``start .. start + length`` of ``pair_indices`` over the shipped sequences."""
    if message.length == 0:
        return ResultMessage(message.rank, [])
    sequences = _to_sequences(message.sequences)
    pairs = pair_indices(len(sequences))
    stop = message.start + message.length
    if stop > len(pairs):
        raise ValueError(f'Chunk [{message.start}, {stop}) exceeds the {len(pairs)} pairs of {len(sequences)} sequences')
    scorer = get_scorer(settings.engine, settings.workers, settings.grain)
    entries = []
    for index in range(message.start, stop):
        p, q = pairs[index]
        entries.append((index, scorer(AlignmentProblem(a=sequences[p], b=sequences[q], scheme=settings.scheme))))
    return ResultMessage(message.rank, entries)


def run_align_work(message: AlignWorkMessage, settings: RankSettings) -> AlignedMessage:
    """Align the center (first sequence) with tasks ``start .. start + length``, task t being sequence t + 1."""
    if message.length == 0:
        return AlignedMessage(message.rank, [])
    sequences = _to_sequences(message.sequences)
    center, others = sequences[0], sequences[1:]
    stop = message.start + message.length
    if stop > len(others):
        raise ValueError(f'Chunk [{message.start}, {stop}) exceeds the {len(others)} align tasks')
    align = get_engine(settings.engine, settings.workers, settings.grain)
    entries = []
    for task in range(message.start, stop):
        _, _, aln = align(AlignmentProblem(a=center, b=others[task], scheme=settings.scheme))
        entries.append(AlignedEntry(task, aln.score, aln.gapped_a, aln.gapped_b))
    return AlignedMessage(message.rank, entries)


def handle_work(message: Message, settings: RankSettings) -> Message:
    """
    Run one unit of rank work, turning any failure into an ``ErrorMessage``.

    Parameters
    ----------
    message : WorkMessage or AlignWorkMessage
    settings : RankSettings

    Returns
    -------
    ResultMessage, AlignedMessage or ErrorMessage
    """
    try:
        if isinstance(message, WorkMessage):
            _log.debug('Rank %d scoring pairs [%d, %d)', message.rank, message.start, message.start + message.length)
            return run_score_work(message, settings)
        if isinstance(message, AlignWorkMessage):
            _log.debug('Rank %d aligning tasks [%d, %d)', message.rank, message.start, message.start + message.length)
            return run_align_work(message, settings)
        return ErrorMessage(f'Unexpected {type(message).__name__} for a rank')
    except Exception as e:
        _log.debug('Rank work failed', exc_info=True)
        return ErrorMessage(f'{type(e).__name__}: {e}')
