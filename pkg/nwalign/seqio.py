"""
Reading sequences and writing alignments, multiple alignments and benchmark records.
"""

import csv
import io
import logging
import os
from typing import IO, Iterable, List, NamedTuple, Union

from nwalign.core import GAP, Alignment, Sequence, alignment_identity

_log = logging.getLogger(__name__)

FASTA_WIDTH = 60
CENTER_MARKER = ' |center'
BENCH_CSV_HEADER = ('mode', 'engine', 'workers', 'm', 'n', 'run_index', 'elapsed_ns')
ALIGNMENT_FORMATS = ('pairwise-text', 'tsv')

FastaInput = Union[str, bytes, IO]


class FastaError(ValueError):
    """Exception raised for malformed FASTA input. ``line`` is 1-based, 0 for whole-input problems."""
    def __init__(self, message: str, line: int = 0):
        self.line = line
        if line:
            message = f'line {line}: {message}'
        super().__init__(message)


class FastaRecord(NamedTuple):
    header: str
    body: str

    @property
    def id(self) -> str:
        """The first whitespace-delimited word of the header."""
        return self.header.split()[0]


def _read_text(input: FastaInput) -> str:
    if hasattr(input, 'read'):
        input = input.read()
    if isinstance(input, bytes):
        # undecodable bytes become U+FFFD and are reported as invalid characters
        input = input.decode('utf-8', errors='replace')
    return input


def parse_fasta_records(input: FastaInput, aligned: bool = False) -> List[FastaRecord]:
    """
    Split FASTA text into records with normalized bodies.

    Sequence lines of a record are concatenated, all whitespace is removed
    and letters are uppercased. Blank lines are ignored.

    Parameters
    ----------
    input : str, bytes or file-like
    aligned : bool
        Accept the gap character ``-`` in bodies

    Returns
    -------
    List[FastaRecord]

    Raises
    ------
    FastaError
        For empty input, sequence lines before the first header, empty
        headers, records without residues and invalid characters.

    Examples
    --------
    >>> parse_fasta_records('>a first\\nac\\ngt\\n>b\\nTT\\n')
    [FastaRecord(header='a first', body='ACGT'), FastaRecord(header='b', body='TT')]
    """
    text = _read_text(input)
    records = []
    header = None
    header_line = 0
    body = []

    def finish():
        if header is None:
            return
        if not body:
            raise FastaError(f'record {header!r} has no sequence', line=header_line)
        records.append(FastaRecord(header, ''.join(body)))

    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith('>'):
            finish()
            header = line[1:].strip()
            header_line = lineno
            body = []
            if not header:
                raise FastaError('empty header', line=lineno)
            continue
        residues = ''.join(line.split())
        if not residues:
            continue
        if header is None:
            raise FastaError('sequence data before the first header', line=lineno)
        for column, char in enumerate(residues, start=1):
            if not ((char.isascii() and char.isalpha()) or (aligned and char == GAP)):
                raise FastaError(f'invalid character {char!r} at residue {column}', line=lineno)
        body.append(residues.upper())
    finish()
    if not records:
        raise FastaError('no FASTA records found')
    _log.debug('Parsed %d FASTA records', len(records))
    return records


def parse_fasta(input: FastaInput, aligned: bool = False):
    """
    Parse FASTA into sequences.

    Returns a list of ``Sequence`` (id is the first word of the header), or a
    list of ``FastaRecord`` with gapped bodies when ``aligned`` is set.

    >>> [(s.id, s.residues) for s in parse_fasta('>s1\\nacgt\\n')]
    [('s1', 'ACGT')]
    >>> parse_fasta('>x\\nAC1T\\n')
    Traceback (most recent call last):
    ...
    nwalign.seqio.FastaError: line 2: invalid character '1' at residue 3
    """
    records = parse_fasta_records(input, aligned=aligned)
    if aligned:
        return records
    return [Sequence(id=record.id, residues=record.body) for record in records]


def parse_aligned_fasta(input: FastaInput) -> List[FastaRecord]:
    """Parse gapped FASTA, such as the output of ``emit_msa``."""
    return parse_fasta_records(input, aligned=True)


def read_fasta(path: Union[str, os.PathLike], aligned: bool = False):
    """Parse a FASTA file. See ``parse_fasta``."""
    with open(path, 'rb') as fp:
        return parse_fasta(fp, aligned=aligned)


def midline(aln: Alignment) -> str:
    """
    Column markers: ``|`` match, ``.`` mismatch, a space where either row has a gap.

    >>> midline(Alignment('A-GT', 'ATCT', 0))
    '| .|'
    """
    marks = []
    for x, y in zip(aln.gapped_a, aln.gapped_b):
        if x == GAP or y == GAP:
            marks.append(' ')
        elif x == y:
            marks.append('|')
        else:
            marks.append('.')
    return ''.join(marks)


def emit_alignment(aln: Alignment, format: str = 'pairwise-text') -> str:
    """
    Serialize a pairwise alignment.

    Parameters
    ----------
    aln : Alignment
    format : str
        ``'pairwise-text'``: a ``# id_a vs id_b`` line, the first gapped row,
        the midline, the second gapped row, a ``score:`` line and an
        ``identity:`` line. ``'tsv'``: one tab-separated row of id_a, id_b,
        score, gapped_a, gapped_b.

    Returns
    -------
    str
        Newline-terminated text

    Examples
    --------
    >>> print(emit_alignment(Alignment('A-', 'AT', 0, 'x', 'y')), end='')  # doctest: +NORMALIZE_WHITESPACE
    # x vs y
    A-
    |
    AT
    score: 0
    identity: 50.00%
    >>> emit_alignment(Alignment('A-', 'AT', 0, 'x', 'y'), format='tsv')
    'x\\ty\\t0\\tA-\\tAT\\n'
    """
    if format == 'pairwise-text':
        lines = [
            f'# {aln.id_a} vs {aln.id_b}',
            aln.gapped_a,
            midline(aln),
            aln.gapped_b,
            f'score: {aln.score}',
            f'identity: {alignment_identity(aln):.2%}',
        ]
        return '\n'.join(lines) + '\n'
    if format == 'tsv':
        return '\t'.join([aln.id_a, aln.id_b, str(aln.score), aln.gapped_a, aln.gapped_b]) + '\n'
    raise ValueError(f'Unknown alignment format {format!r}. Choose one of {", ".join(ALIGNMENT_FORMATS)}.')


def parse_alignment_tsv(text: str) -> List[Alignment]:
    """Read alignments written by ``emit_alignment(..., format='tsv')``."""
    alignments = []
    for lineno, line in enumerate(text.split('\n'), start=1):
        if not line:
            continue
        fields = line.split('\t')
        if len(fields) != 5:
            raise ValueError(f'line {lineno}: expected 5 tab-separated fields, got {len(fields)}')
        id_a, id_b, score, gapped_a, gapped_b = fields
        alignments.append(Alignment(gapped_a, gapped_b, int(score), id_a, id_b))
    return alignments


def _wrap(body: str, width: int) -> List[str]:
    if not body:
        return ['']
    return [body[i:i + width] for i in range(0, len(body), width)]


def emit_fasta(records: Iterable[FastaRecord], width: int = FASTA_WIDTH) -> str:
    """Write records as FASTA with bodies wrapped at ``width`` columns."""
    lines = []
    for record in records:
        lines.append(f'>{record.header}')
        lines.extend(_wrap(record.body, width))
    return '\n'.join(lines) + '\n'


def emit_msa(result, width: int = FASTA_WIDTH) -> str:
    """
    Write an ``MsaResult`` as gapped FASTA in input order, marking the center header.

    >>> from nwalign.center_star import MsaResult
    >>> print(emit_msa(MsaResult(1, ['AC-T', 'ACGT'], ['s0', 's1'])), end='')
    >s0
    AC-T
    >s1 |center
    ACGT
    """
    records = []
    for index, (seq_id, row) in enumerate(zip(result.ids, result.rows)):
        header = seq_id + CENTER_MARKER if index == result.center_index else seq_id
        records.append(FastaRecord(header, row))
    return emit_fasta(records, width)


def emit_bench_csv(records, seed: int) -> str:
    """
    Write benchmark records as CSV, preceded by a ``# seed=<n>`` comment line.

    The header is exactly ``mode,engine,workers,m,n,run_index,elapsed_ns``.
    """
    out = io.StringIO()
    out.write(f'# seed={seed}\n')
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(BENCH_CSV_HEADER)
    for record in records:
        writer.writerow([getattr(record, field) for field in BENCH_CSV_HEADER])
    return out.getvalue()
