"""
Spread pairwise alignment work over ranks and gather the results.

The pairs of a job are cut into contiguous, balanced chunks
(``partition_pairs``), one per rank. A coordinator sends each rank its chunk
together with the sequences, and the ranks reply with scores (or, for the
align-to-center stage, gapped alignments). Ranks are threads, sockets
speaking the NWD1 protocol, or dask workers.
"""

from nwalign.distributor.utils import DistributionError, ProtocolError, RankTimeoutError, parse_address
from nwalign.distributor.partition import Partition, partition_pairs
from nwalign.distributor.ranks import RankSettings, handle_work
from nwalign.distributor.server import WorkerServer
from nwalign.distributor.transports import DaskTransport, InProcessTransport, SocketTransport, TRANSPORTS
from nwalign.distributor.coordinator import (
    DEFAULT_TIMEOUT, distribute_center_alignments, make_transport, scatter_gather,
)
