"""
A socket rank: accepts a coordinator connection and answers NWD1 frames.
"""

import logging
import socket
from typing import Optional

from .protocol import (
    AlignWorkMessage, ErrorMessage, Hello, ShutdownMessage, WorkMessage, read_message, send_message,
)
from .ranks import RankSettings, handle_work
from .utils import ProtocolError

_log = logging.getLogger(__name__)


class WorkerServer:
    """
    Listen on ``host:port`` and serve coordinator sessions.

    A session starts with a HELLO carrying the scoring scheme and engine
    settings, continues with any number of WORK or ALIGN frames, each
    answered with RESULT, ALIGNED or ERROR, and ends with SHUTDOWN. A frame
    with bad magic, an unknown type or a malformed payload is answered with
    ERROR and the connection is closed.

    Parameters
    ----------
    host : str
    port : int
        0 picks a free port, available as ``address`` after construction.
    """
    def __init__(self, host: str = '127.0.0.1', port: int = 0):
        self._sock = socket.create_server((host, port))
        self.address = self._sock.getsockname()[:2]
        self._closed = False

    def serve(self, once: bool = False) -> None:
        """Serve sessions until ``close`` is called, or for one session if ``once``."""
        _log.info('Worker listening on %s:%s', *self.address)
        try:
            while not self._closed:
                try:
                    conn, peer = self._sock.accept()
                except OSError:
                    # listening socket closed by close()
                    break
                with conn:
                    _log.debug('Session opened by %s', peer)
                    self._session(conn)
                if once:
                    break
        finally:
            self.close()

    def close(self) -> None:
        """Stop serving. A thread blocked in ``serve`` waiting for a connection returns."""
        self._closed = True
        try:
            # close() alone does not wake accept() on Linux
            self._sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        try:
            self._sock.close()
        except OSError:
            pass

    def _session(self, conn: socket.socket) -> None:
        settings: Optional[RankSettings] = None
        while True:
            try:
                message = read_message(conn)
            except ProtocolError as e:
                _log.warning('Closing session after protocol error: %s', e)
                self._reply_error(conn, str(e))
                return
            except OSError as e:
                _log.warning('Session connection failed: %s', e)
                return
            if isinstance(message, ShutdownMessage):
                _log.debug('Session shut down by coordinator')
                return
            if isinstance(message, Hello):
                if message.scheme is None:
                    self._reply_error(conn, 'HELLO from a coordinator must carry the scoring scheme')
                    return
                settings = RankSettings(message.scheme, message.engine, message.workers, message.grain)
                _log.debug('Rank %d configured: %s', message.rank, settings)
                send_message(conn, Hello(message.rank))
            elif isinstance(message, (WorkMessage, AlignWorkMessage)):
                if settings is None:
                    self._reply_error(conn, f'{type(message).__name__} received before HELLO')
                    return
                send_message(conn, handle_work(message, settings))
            else:
                self._reply_error(conn, f'Unexpected {type(message).__name__} from a coordinator')
                return

    @staticmethod
    def _reply_error(conn: socket.socket, text: str) -> None:
        try:
            send_message(conn, ErrorMessage(text))
        except OSError:
            pass
