"""
The coordinator side of the distributor: partition, scatter, gather, check.
"""

import logging
from typing import Dict, List, Optional, Sequence as SequenceType

from nwalign.center_star import MsaJob, fill_pair_scores
from nwalign.core import Alignment, degap
from nwalign.typing import PairScoreMatrix
from nwalign.wavefront_nw import DEFAULT_GRAIN
from .partition import Partition, partition_pairs
from .protocol import (
    AlignedMessage, AlignWorkMessage, ErrorMessage, Message, ResultMessage, WireSequence, WorkMessage,
)
from .ranks import RankSettings
from .transports import TRANSPORTS, SocketTransport, TransportBase
from .utils import DistributionError, ProtocolError

_log = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 60.0


def make_transport(name: str, ranks: int, settings: RankSettings, timeout: float = DEFAULT_TIMEOUT,
                   addresses: Optional[SequenceType[str]] = None) -> TransportBase:
    """
    Open a transport by name.

    >>> make_transport('carrier-pigeon', 2, RankSettings())
    Traceback (most recent call last):
    ...
    ValueError: Unknown transport 'carrier-pigeon'. Choose one of in-process, socket, dask.
    """
    key = name.replace('_', '-')
    if key not in TRANSPORTS:
        raise ValueError(f'Unknown transport {name!r}. Choose one of {", ".join(TRANSPORTS)}.')
    if addresses and key != SocketTransport.name:
        raise ValueError(f'Worker addresses only apply to the socket transport, not {name!r}')
    if key == SocketTransport.name:
        return SocketTransport(ranks, settings, timeout, addresses=addresses)
    return TRANSPORTS[key](ranks, settings, timeout)


def _wire_sequences(job: MsaJob, order: Optional[List[int]] = None) -> List[WireSequence]:
    order = order if order is not None else range(len(job.sequences))
    return [(job.sequences[i].id, job.sequences[i].residues) for i in order]


def _check_reply(rank: int, reply: Message, expected: type) -> None:
    if isinstance(reply, ErrorMessage):
        raise DistributionError(f'worker failed: {reply.text}', rank=rank)
    if not isinstance(reply, expected):
        raise ProtocolError(f'expected {expected.__name__}, got {type(reply).__name__}', rank=rank)
    if reply.rank != rank:
        raise ProtocolError(f'reply claims to come from rank {reply.rank}', rank=rank)


def _gather_entries(partition: Partition, replies: List[Message], expected: type, key) -> Dict[int, object]:
    """Check every reply against its rank's chunk and return the entries keyed by task index."""
    gathered = {}
    for rank, reply in enumerate(replies):
        _check_reply(rank, reply, expected)
        chunk = partition.chunks[rank]
        for entry in reply.entries:
            index = key(entry)
            if index not in chunk:
                raise DistributionError(f'returned task {index} outside its chunk [{chunk.start}, {chunk.stop})', rank=rank)
            if index in gathered:
                raise DistributionError(f'returned task {index} twice', rank=rank)
            gathered[index] = entry
        if len(reply.entries) != len(chunk):
            raise DistributionError(f'returned {len(reply.entries)} results for a chunk of {len(chunk)}', rank=rank)
    if len(gathered) != partition.total_pairs:
        raise DistributionError(f'gathered {len(gathered)} results for {partition.total_pairs} tasks')
    return gathered


def scatter_gather(job: MsaJob, R: int, transport: str = 'in-process', engine: str = 'serial',
                   workers: int = 1, grain: int = DEFAULT_GRAIN, timeout: float = DEFAULT_TIMEOUT,
                   addresses: Optional[SequenceType[str]] = None) -> PairScoreMatrix:
    """
    Score every pair of ``job`` on R ranks and gather the symmetric score matrix.

    Parameters
    ----------
    job : MsaJob
    R : int
        Number of ranks
    transport : str
        ``'in-process'``, ``'socket'`` or ``'dask'``
    engine : str
        Engine each rank uses, ``'serial'`` or ``'wavefront'``
    workers : int
        Wavefront threads inside each rank
    grain : int
    timeout : float
        Seconds to wait for each rank's reply
    addresses : Optional[Sequence[str]]
        ``host:port`` of running socket workers, one per rank

    Returns
    -------
    np.ndarray
        (n, n) int64 matrix, identical to ``compute_pair_scores(job)``

    Raises
    ------
    DistributionError
        If a rank fails, times out or returns results outside its chunk.
    """
    n = len(job.sequences)
    partition = partition_pairs(n * (n - 1) // 2, R)
    settings = RankSettings(job.scheme, engine, workers, grain)
    wire = _wire_sequences(job)
    works = [WorkMessage(rank, chunk.start, len(chunk), wire) for rank, chunk in enumerate(partition.chunks)]
    _log.info('Scattering %d pairs over %d ranks (%s transport), chunk sizes %s',
              partition.total_pairs, R, transport, partition.sizes())
    with make_transport(transport, R, settings, timeout, addresses) as tr:
        replies = tr.exchange(works)
    gathered = _gather_entries(partition, replies, ResultMessage, key=lambda entry: entry[0])
    _log.debug('Gathered %d pair scores', len(gathered))
    return fill_pair_scores(n, gathered.values())


def distribute_center_alignments(job: MsaJob, center: int, R: int, transport: str = 'in-process', engine: str = 'serial',
                                 workers: int = 1, grain: int = DEFAULT_GRAIN, timeout: float = DEFAULT_TIMEOUT,
                                 addresses: Optional[SequenceType[str]] = None) -> List[Alignment]:
    """
    Align every non-center sequence to the center on R ranks.

    The n-1 align tasks are partitioned like pairs. The center travels first
    in every ALIGN message; task t is the t-th non-center sequence in input
    order, so the result matches ``align_all_to_center``.

    Returns
    -------
    List[Alignment]
        n-1 alignments in input order, center row first
    """
    n = len(job.sequences)
    if not 0 <= center < n:
        raise ValueError(f'Center index {center} is out of range for {n} sequences')
    others = [i for i in range(n) if i != center]
    partition = partition_pairs(len(others), R)
    settings = RankSettings(job.scheme, engine, workers, grain)
    wire = _wire_sequences(job, [center] + others)
    works = [AlignWorkMessage(rank, chunk.start, len(chunk), wire) for rank, chunk in enumerate(partition.chunks)]
    _log.info('Scattering %d center alignments over %d ranks (%s transport)', len(others), R, transport)
    with make_transport(transport, R, settings, timeout, addresses) as tr:
        replies = tr.exchange(works)
    gathered = _gather_entries(partition, replies, AlignedMessage, key=lambda entry: entry.task)
    center_seq = job.sequences[center]
    alignments = []
    for task, index in enumerate(others):
        entry = gathered[task]
        other = job.sequences[index]
        if degap(entry.gapped_center) != center_seq.residues or degap(entry.gapped_other) != other.residues:
            raise DistributionError(f'alignment for task {task} does not degap to its inputs', rank=partition.owner(task))
        alignments.append(Alignment(entry.gapped_center, entry.gapped_other, entry.score, center_seq.id, other.id))
    return alignments
