"""
Ways of getting work messages to ranks and replies back.

A transport is opened with the rank count and the session settings, then
``exchange`` sends one message per rank (``works[r]`` goes to rank r) and
returns the replies in rank order. Replies are not validated here; a rank
that does not answer within ``timeout`` seconds raises ``RankTimeoutError``.
"""

import logging
import queue
import socket
import threading
from typing import List, Optional, Sequence as SequenceType, Tuple

from .protocol import Hello, Message, ShutdownMessage, read_message, send_message
from .ranks import RankSettings, handle_work
from .server import WorkerServer
from .utils import DistributionError, ProtocolError, RankTimeoutError, parse_address

_log = logging.getLogger(__name__)


class TransportBase:
    """Common interface of the distributor transports. Usable as a context manager."""
    name = 'base'

    def __init__(self, ranks: int, settings: RankSettings, timeout: float):
        if ranks < 1:
            raise ValueError(f'Number of ranks must be at least 1, got {ranks}')
        if timeout <= 0:
            raise ValueError(f'timeout must be positive, got {timeout}')
        self.ranks = ranks
        self.settings = settings
        self.timeout = timeout

    def exchange(self, works: SequenceType[Message]) -> List[Message]:
        raise NotImplementedError

    def close(self) -> None:
        pass

    def _check_works(self, works: SequenceType[Message]) -> None:
        if len(works) != self.ranks:
            raise ValueError(f'Expected one message per rank ({self.ranks}), got {len(works)}')

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()


class InProcessTransport(TransportBase):
    """Each rank is a thread fed through its own inbox queue; replies share one outbox."""
    name = 'in-process'

    def __init__(self, ranks: int, settings: RankSettings, timeout: float):
        super().__init__(ranks, settings, timeout)
        self._inboxes = [queue.Queue() for _ in range(ranks)]
        self._outbox = queue.Queue()
        self._threads = []
        for rank in range(ranks):
            thread = threading.Thread(target=self._rank_loop, args=(rank,), name=f'nwalign-rank-{rank}', daemon=True)
            thread.start()
            self._threads.append(thread)

    def _rank_loop(self, rank: int) -> None:
        inbox = self._inboxes[rank]
        while True:
            message = inbox.get()
            if isinstance(message, ShutdownMessage):
                return
            self._outbox.put((rank, handle_work(message, self.settings)))

    def exchange(self, works: SequenceType[Message]) -> List[Message]:
        self._check_works(works)
        for rank, work in enumerate(works):
            self._inboxes[rank].put(work)
        replies: List[Optional[Message]] = [None] * self.ranks
        for _ in range(self.ranks):
            try:
                rank, reply = self._outbox.get(timeout=self.timeout)
            except queue.Empty:
                missing = replies.index(None)
                raise RankTimeoutError(f'no reply within {self.timeout} s', rank=missing) from None
            replies[rank] = reply
        return replies

    def close(self) -> None:
        for inbox in self._inboxes:
            inbox.put(ShutdownMessage())
        for thread in self._threads:
            thread.join(timeout=self.timeout)


class SocketTransport(TransportBase):
    """
    Ranks reached over TCP with the NWD1 protocol.

    With no ``addresses`` one ``WorkerServer`` per rank is started on the
    loopback interface in a background thread. Otherwise ``addresses[r]``
    (``host:port``) must be a running ``nwalign worker``.
    """
    name = 'socket'

    def __init__(self, ranks: int, settings: RankSettings, timeout: float, addresses: Optional[SequenceType[str]] = None):
        super().__init__(ranks, settings, timeout)
        self._servers: List[WorkerServer] = []
        self._server_threads: List[threading.Thread] = []
        self._socks: List[socket.socket] = []
        if addresses:
            if len(addresses) < ranks:
                raise ValueError(f'{ranks} ranks need {ranks} worker addresses, got {len(addresses)}')
            endpoints = [parse_address(address) for address in addresses[:ranks]]
        else:
            endpoints = self._spawn_local_workers()
        try:
            for rank, endpoint in enumerate(endpoints):
                self._socks.append(self._connect(rank, endpoint))
        except BaseException:
            self.close()
            raise

    def _spawn_local_workers(self) -> List[Tuple[str, int]]:
        endpoints = []
        for rank in range(self.ranks):
            server = WorkerServer('127.0.0.1', 0)
            thread = threading.Thread(target=server.serve, kwargs={'once': True}, name=f'nwalign-worker-{rank}', daemon=True)
            thread.start()
            self._servers.append(server)
            self._server_threads.append(thread)
            endpoints.append(server.address)
        return endpoints

    def _connect(self, rank: int, endpoint: Tuple[str, int]) -> socket.socket:
        try:
            sock = socket.create_connection(endpoint, timeout=self.timeout)
        except OSError as e:
            raise DistributionError(f'cannot connect to {endpoint[0]}:{endpoint[1]}: {e}', rank=rank) from e
        s = self.settings
        self._send(rank, sock, Hello(rank, s.scheme, s.engine, s.workers, s.grain))
        reply = self._receive(rank, sock)
        if not isinstance(reply, Hello) or reply.rank != rank:
            raise ProtocolError(f'expected HELLO acknowledgement, got {reply!r}', rank=rank)
        _log.debug('Rank %d connected at %s:%s', rank, *endpoint)
        return sock

    def _send(self, rank: int, sock: socket.socket, message: Message) -> None:
        try:
            send_message(sock, message)
        except socket.timeout:
            raise RankTimeoutError(f'send blocked for {self.timeout} s', rank=rank) from None
        except OSError as e:
            raise DistributionError(f'send failed: {e}', rank=rank) from e

    def _receive(self, rank: int, sock: socket.socket) -> Message:
        try:
            return read_message(sock)
        except socket.timeout:
            raise RankTimeoutError(f'no reply within {self.timeout} s', rank=rank) from None
        except ProtocolError as e:
            raise ProtocolError(str(e), rank=rank) from e
        except OSError as e:
            raise DistributionError(f'receive failed: {e}', rank=rank) from e

    def exchange(self, works: SequenceType[Message]) -> List[Message]:
        self._check_works(works)
        for rank, (sock, work) in enumerate(zip(self._socks, works)):
            self._send(rank, sock, work)
        return [self._receive(rank, sock) for rank, sock in enumerate(self._socks)]

    def close(self) -> None:
        for sock in self._socks:
            try:
                send_message(sock, ShutdownMessage())
            except OSError:
                pass
            sock.close()
        self._socks = []
        for server in self._servers:
            server.close()
        for thread in self._server_threads:
            thread.join(timeout=self.timeout)
        self._servers = []
        self._server_threads = []


class DaskTransport(TransportBase):
    """Ranks are single-threaded workers of an in-process ``distributed.LocalCluster``."""
    name = 'dask'

    def __init__(self, ranks: int, settings: RankSettings, timeout: float):
        super().__init__(ranks, settings, timeout)
        from distributed import LocalCluster
        from nwalign.utils import ImmediateClient
        self._cluster = LocalCluster(n_workers=ranks, threads_per_worker=1, processes=False, dashboard_address=None)
        self._client = ImmediateClient(self._cluster)
        _log.debug('Dask transport started: %s', self._client)

    def exchange(self, works: SequenceType[Message]) -> List[Message]:
        from nwalign.utils import MapTimeoutError
        self._check_works(works)
        try:
            return list(self._client.map(handle_work, works, [self.settings] * self.ranks, pure=False, timeout=self.timeout))
        except MapTimeoutError as e:
            raise RankTimeoutError(f'no reply within {self.timeout} s', rank=e.pending[0]) from e

    def close(self) -> None:
        self._client.close()
        self._cluster.close()


TRANSPORTS = {
    InProcessTransport.name: InProcessTransport,
    SocketTransport.name: SocketTransport,
    DaskTransport.name: DaskTransport,
}
