"""
The NWD1 wire protocol spoken between a coordinator and socket ranks.

Everything is big-endian. A frame is::

    magic "NWD1" (4 bytes) | type (u8) | payload length (u32) | payload

Frame types and payloads:

* 0x01 HELLO. Coordinator to rank: rank id (u32), match (i64), mismatch
  (i64), gap (i64), engine (u8, 0 serial / 1 wavefront), engine workers
  (u32), grain (u32). Rank to coordinator: rank id (u32) only.
* 0x02 WORK: rank id (u32), chunk start (u64), chunk length (u64), sequence
  count (u32), then per sequence id length (u16), id bytes, residue length
  (u64), residue bytes. The chunk indexes ``pair_indices(sequence count)``.
* 0x03 RESULT: rank id (u32), entry count (u64), then per entry pair index
  (u64) and score (i64).
* 0x04 SHUTDOWN: empty.
* 0x05 ALIGN: laid out like WORK. The first sequence is the center and task
  t aligns it with sequence t + 1.
* 0x06 ALIGNED: rank id (u32), entry count (u64), then per entry task index
  (u64), score (i64), gapped center length (u64) and bytes, gapped other
  length (u64) and bytes.
* 0x7F ERROR: UTF-8 text.

A peer that receives an unknown magic or type answers with ERROR and closes
the connection.
"""

import struct
from typing import List, NamedTuple, Optional, Tuple, Union

from nwalign.core import ScoringScheme
from nwalign.wavefront_nw import DEFAULT_GRAIN
from .utils import ProtocolError, recv_exact

MAGIC = b'NWD1'
HEADER = struct.Struct('>4sBI')

HELLO = 0x01
WORK = 0x02
RESULT = 0x03
SHUTDOWN = 0x04
ALIGN = 0x05
ALIGNED = 0x06
ERROR = 0x7F

ENGINE_CODES = {'serial': 0, 'wavefront': 1}
ENGINE_NAMES = {code: name for name, code in ENGINE_CODES.items()}

_HELLO_FULL = struct.Struct('>IqqqBII')
_U16 = struct.Struct('>H')
_U32 = struct.Struct('>I')
_U64 = struct.Struct('>Q')
_CHUNK = struct.Struct('>IQQI')
_COUNTED = struct.Struct('>IQ')
_ENTRY = struct.Struct('>Qq')

WireSequence = Tuple[str, str]


class Hello(NamedTuple):
    """Session opener. A rank's acknowledgement carries only ``rank``."""
    rank: int
    scheme: Optional[ScoringScheme] = None
    engine: str = 'serial'
    workers: int = 1
    grain: int = DEFAULT_GRAIN


class WorkMessage(NamedTuple):
    rank: int
    start: int
    length: int
    sequences: List[WireSequence]


class AlignWorkMessage(NamedTuple):
    rank: int
    start: int
    length: int
    sequences: List[WireSequence]


class ResultMessage(NamedTuple):
    rank: int
    entries: List[Tuple[int, int]]


class AlignedEntry(NamedTuple):
    task: int
    score: int
    gapped_center: str
    gapped_other: str


class AlignedMessage(NamedTuple):
    rank: int
    entries: List[AlignedEntry]


class ShutdownMessage(NamedTuple):
    pass


class ErrorMessage(NamedTuple):
    text: str


Message = Union[Hello, WorkMessage, AlignWorkMessage, ResultMessage, AlignedMessage, ShutdownMessage, ErrorMessage]


def _frame(frame_type: int, payload: bytes) -> bytes:
    if len(payload) > 0xFFFFFFFF:
        raise ProtocolError(f'Payload of {len(payload)} bytes does not fit a u32 length')
    return HEADER.pack(MAGIC, frame_type, len(payload)) + payload


def _pack_sequences(sequences: List[WireSequence]) -> bytes:
    parts = []
    for seq_id, residues in sequences:
        id_bytes = seq_id.encode('utf-8')
        if len(id_bytes) > 0xFFFF:
            raise ProtocolError(f'Sequence id of {len(id_bytes)} bytes does not fit a u16 length')
        residue_bytes = residues.encode('ascii')
        parts.append(_U16.pack(len(id_bytes)))
        parts.append(id_bytes)
        parts.append(_U64.pack(len(residue_bytes)))
        parts.append(residue_bytes)
    return b''.join(parts)


def _pack_gapped(text: str) -> bytes:
    raw = text.encode('ascii')
    return _U64.pack(len(raw)) + raw


def encode_message(message: Message) -> bytes:
    """
    Encode a message as a complete NWD1 frame.

    Examples
    --------
    >>> encode_message(ResultMessage(rank=1, entries=[(0, -3)])).hex()
    '4e574431030000001c0000000100000000000000010000000000000000fffffffffffffffd'
    """
    try:
        if isinstance(message, Hello):
            if message.scheme is None:
                return _frame(HELLO, _U32.pack(message.rank))
            scheme = message.scheme
            payload = _HELLO_FULL.pack(message.rank, scheme.match_score, scheme.mismatch_score, scheme.gap_penalty,
                                       ENGINE_CODES[message.engine], message.workers, message.grain)
            return _frame(HELLO, payload)
        if isinstance(message, (WorkMessage, AlignWorkMessage)):
            frame_type = WORK if isinstance(message, WorkMessage) else ALIGN
            payload = _CHUNK.pack(message.rank, message.start, message.length, len(message.sequences))
            return _frame(frame_type, payload + _pack_sequences(message.sequences))
        if isinstance(message, ResultMessage):
            parts = [_COUNTED.pack(message.rank, len(message.entries))]
            parts.extend(_ENTRY.pack(index, score) for index, score in message.entries)
            return _frame(RESULT, b''.join(parts))
        if isinstance(message, AlignedMessage):
            parts = [_COUNTED.pack(message.rank, len(message.entries))]
            for entry in message.entries:
                parts.append(_ENTRY.pack(entry.task, entry.score))
                parts.append(_pack_gapped(entry.gapped_center))
                parts.append(_pack_gapped(entry.gapped_other))
            return _frame(ALIGNED, b''.join(parts))
        if isinstance(message, ShutdownMessage):
            return _frame(SHUTDOWN, b'')
        if isinstance(message, ErrorMessage):
            return _frame(ERROR, message.text.encode('utf-8'))
    except (struct.error, KeyError, UnicodeEncodeError) as e:
        raise ProtocolError(f'Cannot encode {type(message).__name__}: {e}') from e
    raise ProtocolError(f'Cannot encode object of type {type(message).__name__}')


class _Reader:
    """Sequential reader over a payload that reports truncation as ProtocolError."""
    def __init__(self, payload: bytes, frame_type: int):
        self.payload = payload
        self.offset = 0
        self.frame_type = frame_type

    def take(self, fmt: struct.Struct) -> tuple:
        if self.offset + fmt.size > len(self.payload):
            raise ProtocolError(f'Truncated payload for frame type 0x{self.frame_type:02X}')
        values = fmt.unpack_from(self.payload, self.offset)
        self.offset += fmt.size
        return values

    def take_bytes(self, size: int) -> bytes:
        if self.offset + size > len(self.payload):
            raise ProtocolError(f'Truncated payload for frame type 0x{self.frame_type:02X}')
        data = self.payload[self.offset:self.offset + size]
        self.offset += size
        return data

    def take_text(self, length_fmt: struct.Struct, encoding: str) -> str:
        size, = self.take(length_fmt)
        try:
            return self.take_bytes(size).decode(encoding)
        except UnicodeDecodeError as e:
            raise ProtocolError(f'Undecodable text in frame type 0x{self.frame_type:02X}: {e}') from e

    def finish(self) -> None:
        if self.offset != len(self.payload):
            raise ProtocolError(f'{len(self.payload) - self.offset} trailing bytes in frame type 0x{self.frame_type:02X}')


def _read_sequences(reader: _Reader, count: int) -> List[WireSequence]:
    sequences = []
    for _ in range(count):
        seq_id = reader.take_text(_U16, 'utf-8')
        residues = reader.take_text(_U64, 'ascii')
        sequences.append((seq_id, residues))
    return sequences


def decode_payload(frame_type: int, payload: bytes) -> Message:
    """Decode the payload of a frame whose header has already been read."""
    reader = _Reader(payload, frame_type)
    if frame_type == HELLO:
        if len(payload) == _U32.size:
            message = Hello(reader.take(_U32)[0])
        else:
            rank, match, mismatch, gap, engine_code, workers, grain = reader.take(_HELLO_FULL)
            if engine_code not in ENGINE_NAMES:
                raise ProtocolError(f'Unknown engine code {engine_code}')
            try:
                scheme = ScoringScheme(match_score=match, mismatch_score=mismatch, gap_penalty=gap)
            except ValueError as e:
                raise ProtocolError(f'Invalid scoring scheme in HELLO: {e}') from e
            message = Hello(rank, scheme, ENGINE_NAMES[engine_code], workers, grain)
    elif frame_type in (WORK, ALIGN):
        rank, start, length, count = reader.take(_CHUNK)
        sequences = _read_sequences(reader, count)
        cls = WorkMessage if frame_type == WORK else AlignWorkMessage
        message = cls(rank, start, length, sequences)
    elif frame_type == RESULT:
        rank, count = reader.take(_COUNTED)
        message = ResultMessage(rank, [reader.take(_ENTRY) for _ in range(count)])
    elif frame_type == ALIGNED:
        rank, count = reader.take(_COUNTED)
        entries = []
        for _ in range(count):
            task, score = reader.take(_ENTRY)
            entries.append(AlignedEntry(task, score, reader.take_text(_U64, 'ascii'), reader.take_text(_U64, 'ascii')))
        message = AlignedMessage(rank, entries)
    elif frame_type == SHUTDOWN:
        message = ShutdownMessage()
    elif frame_type == ERROR:
        try:
            message = ErrorMessage(payload.decode('utf-8'))
        except UnicodeDecodeError as e:
            raise ProtocolError(f'ERROR frame text is not UTF-8: {e}') from e
        reader.offset = len(payload)
    else:
        raise ProtocolError(f'Unknown frame type 0x{frame_type:02X}')
    reader.finish()
    return message


def _check_header(magic: bytes, frame_type: int) -> None:
    if magic != MAGIC:
        raise ProtocolError(f'Bad magic {magic!r}')
    if frame_type not in (HELLO, WORK, RESULT, SHUTDOWN, ALIGN, ALIGNED, ERROR):
        raise ProtocolError(f'Unknown frame type 0x{frame_type:02X}')


def decode_frame(data: bytes) -> Message:
    """Decode one complete frame held in ``data``."""
    if len(data) < HEADER.size:
        raise ProtocolError(f'Frame of {len(data)} bytes is shorter than the {HEADER.size} byte header')
    magic, frame_type, length = HEADER.unpack_from(data)
    _check_header(magic, frame_type)
    if len(data) != HEADER.size + length:
        raise ProtocolError(f'Frame declares {length} payload bytes but carries {len(data) - HEADER.size}')
    return decode_payload(frame_type, data[HEADER.size:])


def read_message(sock) -> Message:
    """Read and decode one frame from a connected socket."""
    magic, frame_type, length = HEADER.unpack(recv_exact(sock, HEADER.size))
    _check_header(magic, frame_type)
    return decode_payload(frame_type, recv_exact(sock, length))


def send_message(sock, message: Message) -> None:
    sock.sendall(encode_message(message))
