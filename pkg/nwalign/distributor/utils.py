import socket
from typing import Optional, Tuple


class DistributionError(Exception):
    """Exception raised when a rank fails, misbehaves or sends a malformed message."""
    def __init__(self, message: str, rank: Optional[int] = None):
        self.rank = rank
        if rank is not None:
            message = f'rank {rank}: {message}'
        super().__init__(message)


class RankTimeoutError(DistributionError):
    """Exception raised when a rank does not answer within the chunk timeout."""
    pass


class ProtocolError(DistributionError):
    """Exception raised for bad magic, unknown frame types or truncated payloads."""
    pass


def parse_address(address: str) -> Tuple[str, int]:
    """
    Split ``host:port`` into a (host, port) tuple.

    >>> parse_address('127.0.0.1:5000')
    ('127.0.0.1', 5000)
    >>> parse_address('[::1]:7000')
    ('::1', 7000)
    """
    host, sep, port = address.rpartition(':')
    if not sep or not port.isdigit():
        raise ValueError(f'Address {address!r} is not of the form host:port')
    host = host.strip('[]') or 'localhost'
    return host, int(port)


def recv_exact(sock: socket.socket, size: int) -> bytes:
    """Read exactly ``size`` bytes, raising ProtocolError if the peer closes early."""
    chunks = []
    remaining = size
    while remaining > 0:
        chunk = sock.recv(min(remaining, 1 << 20))
        if not chunk:
            raise ProtocolError(f'Connection closed with {remaining} of {size} bytes outstanding')
        chunks.append(chunk)
        remaining -= len(chunk)
    return b''.join(chunks)
