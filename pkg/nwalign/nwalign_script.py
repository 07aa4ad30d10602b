"""
Global sequence alignment from the command line.

Align two sequences, build a center star multiple alignment, serve as a
socket rank for a distributed run, time the engines, or check them against
brute force. Settings come from an optional ``--input`` YAML or JSON file;
command line flags override the file.
"""

import argparse
import json
import logging
import os
import sys
from typing import List, Optional

import dask
import distributed
import numba
import numpy as np
import yaml

import nwalign
from nwalign.analysis import summarize
from nwalign.bench import bench_strong, bench_weak, resolve_seed
from nwalign.center_star import MsaError, MsaJob, msa
from nwalign.core import AlignmentError, InvariantViolation, MatrixSizeError, ScoringScheme, check_alignment
from nwalign.distributor import DistributionError, WorkerServer, parse_address
from nwalign.engines import get_engine
from nwalign.oracle import run_selftest
from nwalign.seqio import FastaError, emit_alignment, emit_bench_csv, emit_msa, read_fasta
from nwalign.serial_nw import AlignmentProblem, traceback_all
from nwalign.validation import schema

_log = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with status 1 on usage errors."""
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f'{self.prog}: error: {message}\n')


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected comma-separated integers, got {text!r}')


def _scoring_arguments(parser):
    parser.add_argument('--match', type=int, default=None, help='Score of identical residues (default 1)')
    parser.add_argument('--mismatch', type=int, default=None, help='Score of different residues (default -1)')
    parser.add_argument('--gap', type=int, default=None, help='Score of a residue against a gap (default -1)')


def _engine_arguments(parser):
    parser.add_argument('--engine', choices=['serial', 'wavefront'], default=None)
    parser.add_argument('--workers', type=int, default=None, help='Wavefront worker threads')
    parser.add_argument('--grain', type=int, default=None, help='Wavefront cells per work unit')


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='nwalign', description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--input", "--in", default=None,
                        help="Settings file for the run. Should be either a `YAML` or `JSON` file.")
    parser.add_argument("--verbosity", type=int, choices=[0, 1, 2, 3], default=None,
                        help="0 warnings, 1 info, 2 trace, 3 debug")
    parser.add_argument("--logfile", default=None, help="Write the log to this file instead of stderr")
    parser.add_argument("--version", "-v", action='version', version='%(prog)s version ' + str(nwalign.__version__))
    commands = parser.add_subparsers(dest='command', metavar='COMMAND', parser_class=_Parser)
    commands.required = True

    align = commands.add_parser('align', help='Globally align the first two records of a FASTA file')
    align.add_argument('fasta')
    _engine_arguments(align)
    _scoring_arguments(align)
    align.add_argument('--all-paths', metavar='CAP', type=int, default=None,
                       help='Print up to CAP co-optimal alignments (0 for all of them)')
    align.add_argument('--format', choices=['pairwise-text', 'tsv'], default=None)
    align.add_argument('--out', default=None, help='Output file (default standard output)')

    msa_parser = commands.add_parser('msa', help='Center star multiple alignment of a FASTA file')
    msa_parser.add_argument('fasta')
    _engine_arguments(msa_parser)
    _scoring_arguments(msa_parser)
    msa_parser.add_argument('--ranks', type=int, default=None, help='Number of distributor ranks')
    msa_parser.add_argument('--transport', choices=['in-process', 'socket', 'dask'], default=None)
    msa_parser.add_argument('--timeout', type=float, default=None, help='Seconds to wait for each rank')
    msa_parser.add_argument('--address', action='append', default=None, metavar='HOST:PORT',
                            help='Running `nwalign worker` for the socket transport, once per rank')
    msa_parser.add_argument('--out', default=None, help='Output file (default standard output)')

    worker = commands.add_parser('worker', help='Serve as a socket rank')
    worker.add_argument('--listen', required=True, metavar='HOST:PORT')
    worker.add_argument('--once', action='store_true', help='Exit after one coordinator session')

    bench = commands.add_parser('bench', help='Strong or weak scaling runs, written as CSV')
    bench.add_argument('mode', choices=['strong', 'weak'])
    bench.add_argument('--sizes', type=_int_list, default=None, help='Comma-separated side lengths (strong)')
    bench.add_argument('--base-size', type=int, default=None, help='Side length at one worker (weak)')
    bench.add_argument('--workers-list', type=_int_list, default=None, help='Comma-separated worker counts')
    bench.add_argument('--reps', type=int, default=None)
    bench.add_argument('--warmup', type=int, default=None)
    bench.add_argument('--seed', type=int, default=None)
    bench.add_argument('--grain', type=int, default=None)
    bench.add_argument('--out', default=None, help='CSV file (default standard output)')

    selftest = commands.add_parser('selftest', help='Check the engines against brute force')
    selftest.add_argument('--max-length', type=int, default=7)
    selftest.add_argument('--random-pairs', type=int, default=100)
    selftest.add_argument('--seed', type=int, default=0)
    return parser


def log_version_info():
    """Print version info to the log"""
    _log.info('nwalign version     %s', nwalign.__version__)
    _log.info('numpy version       %s', np.__version__)
    _log.info('numba version       %s', numba.__version__)
    _log.info('dask version        %s', dask.__version__)
    _log.info('distributed version %s', distributed.__version__)


def get_run_settings(input_dict):
    """
    Validate settings from a dict of possible input.

    Performs the following actions:
    1. Normalize (apply defaults)
    2. Validate against the schema

    Parameters
    ----------
    input_dict : dict
        Dictionary of input settings

    Returns
    -------
    dict
        Validated run settings

    Raises
    ------
    ValueError
    """
    run_settings = schema.normalized(input_dict)
    if run_settings is None or not schema.validate(run_settings):
        raise ValueError(schema.errors)
    return run_settings


def load_input_file(input_file):
    """Read a YAML or JSON settings file into a dict."""
    ext = os.path.splitext(input_file)[-1]
    if ext == '.yml' or ext == '.yaml':
        with open(input_file) as f:
            input_settings = yaml.safe_load(f)
    elif ext == '.json':
        with open(input_file) as f:
            input_settings = json.load(f)
    else:
        raise ValueError(f'Unknown file type {ext} for input file {input_file}. YAML and JSON are supported')
    if input_settings is None:
        return {}
    if not isinstance(input_settings, dict):
        raise ValueError(f'Input file {input_file} must contain a mapping of settings')
    return input_settings


def _override(settings: dict, section: str, key: str, value) -> None:
    if value is not None:
        settings.setdefault(section, {})[key] = value


def merge_arguments(input_settings: dict, args: argparse.Namespace) -> dict:
    """Overlay the command line flags that were given onto the settings file contents."""
    settings = {section: dict(values) if isinstance(values, dict) else values for section, values in input_settings.items()}
    def get(name):
        return getattr(args, name, None)

    _override(settings, 'output', 'verbosity', get('verbosity'))
    _override(settings, 'output', 'logfile', get('logfile'))
    _override(settings, 'output', 'format', get('format'))
    _override(settings, 'output', 'out', get('out'))
    for key in ('match', 'mismatch', 'gap'):
        _override(settings, 'scoring', key, get(key))
    _override(settings, 'engine', 'name', get('engine'))
    _override(settings, 'engine', 'workers', get('workers'))
    _override(settings, 'engine', 'grain', get('grain'))
    all_paths = get('all_paths')
    if all_paths is not None:
        _override(settings, 'traceback', 'all_paths', True)
        settings['traceback']['cap'] = all_paths if all_paths > 0 else None
    _override(settings, 'distributor', 'ranks', get('ranks'))
    _override(settings, 'distributor', 'transport', get('transport'))
    _override(settings, 'distributor', 'timeout', get('timeout'))
    _override(settings, 'distributor', 'addresses', get('address'))
    _override(settings, 'bench', 'sizes', get('sizes'))
    _override(settings, 'bench', 'base_size', get('base_size'))
    _override(settings, 'bench', 'workers_list', get('workers_list'))
    _override(settings, 'bench', 'reps', get('reps'))
    _override(settings, 'bench', 'warmup', get('warmup'))
    if get('command') == 'bench':
        _override(settings, 'bench', 'seed', get('seed'))
    return settings


def _scheme(settings) -> ScoringScheme:
    scoring = settings['scoring']
    return ScoringScheme(match_score=scoring['match'], mismatch_score=scoring['mismatch'], gap_penalty=scoring['gap'])


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, 'w') as fp:
            fp.write(text)
        _log.info('Wrote %s', out)


def run_align(fasta, settings) -> int:
    sequences = read_fasta(fasta)
    if len(sequences) < 2:
        raise FastaError(f'align needs at least 2 records, {fasta} has {len(sequences)}')
    if len(sequences) > 2:
        _log.warning('%s has %d records; aligning the first two', fasta, len(sequences))
    a, b = sequences[:2]
    scheme = _scheme(settings)
    engine_settings = settings['engine']
    align = get_engine(engine_settings['name'], engine_settings['workers'], engine_settings['grain'])
    score, _, aln = align(AlignmentProblem(a=a, b=b, scheme=scheme))
    check_alignment(aln, a, b, scheme)
    if settings['traceback']['all_paths']:
        result = traceback_all(score, a, b, scheme, cap=settings['traceback']['cap'])
        if result.truncated:
            _log.warning('More than %d co-optimal alignments exist; output truncated', settings['traceback']['cap'])
        alignments = result.alignments
    else:
        alignments = [aln]
    fmt = settings['output']['format']
    _write(''.join(emit_alignment(x, format=fmt) for x in alignments), settings['output']['out'])
    return 0


def run_msa(fasta, settings) -> int:
    sequences = read_fasta(fasta)
    if len(sequences) < 2:
        raise MsaError(f'need at least 2 sequences, got {len(sequences)}')
    job = MsaJob(sequences=sequences, scheme=_scheme(settings))
    engine_settings = settings['engine']
    dist = settings['distributor']
    result = msa(job, engine_settings['name'], engine_settings['workers'], engine_settings['grain'],
                 ranks=dist['ranks'], transport=dist['transport'], timeout=dist['timeout'],
                 addresses=dist['addresses'] or None)
    _write(emit_msa(result), settings['output']['out'])
    return 0


def run_worker(listen, once=False) -> int:
    host, port = parse_address(listen)
    server = WorkerServer(host, port)
    try:
        server.serve(once=once)
    except KeyboardInterrupt:
        _log.info('Worker interrupted')
        server.close()
    return 0


def run_bench(mode, settings) -> int:
    bench = settings['bench']
    seed = resolve_seed(bench['seed'])
    grain = settings['engine']['grain']
    _log.info('Benchmark seed %d', seed)
    if mode == 'strong':
        records = bench_strong(bench['sizes'], bench['workers_list'], bench['reps'], seed=seed, grain=grain, warmup=bench['warmup'])
    else:
        records = bench_weak(bench['base_size'], bench['workers_list'], bench['reps'], seed=seed, grain=grain, warmup=bench['warmup'])
    for summary in summarize(records):
        _log.info('%s %s workers=%d %dx%d median %.3f ms speedup %s efficiency %s',
                  summary.mode, summary.engine, summary.workers, summary.m, summary.n, summary.median_ns / 1e6,
                  'n/a' if summary.speedup is None else f'{summary.speedup:.2f}',
                  'n/a' if summary.efficiency is None else f'{summary.efficiency:.2f}')
    _write(emit_bench_csv(records, seed), settings['output']['out'])
    return 0


def run_selftest_command(args, settings) -> int:
    report = run_selftest(max_length=args.max_length, random_pairs=args.random_pairs, seed=args.seed, scheme=_scheme(settings))
    for failure in report.failures:
        print(failure, file=sys.stderr)
    print(f'selftest: {report.checked} checks, {len(report.failures)} failures')
    return 0 if report.ok else EXIT_INTERNAL


def main(argv=None) -> int:
    """
    Handle starting nwalign from the command line.
    Parse command line arguments and input file.

    Returns the exit status: 0 success, 1 usage error, 2 input error,
    3 internal error.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        input_settings = load_input_file(args.input) if args.input is not None else {}
        settings = get_run_settings(merge_arguments(input_settings, args))
        output_settings = settings['output']
        nwalign.logger.config_logger(verbosity=output_settings['verbosity'], filename=output_settings['logfile'])
        log_version_info()
        if args.command == 'align':
            return run_align(args.fasta, settings)
        if args.command == 'msa':
            return run_msa(args.fasta, settings)
        if args.command == 'worker':
            return run_worker(args.listen, once=args.once)
        if args.command == 'bench':
            return run_bench(args.mode, settings)
        return run_selftest_command(args, settings)
    except MatrixSizeError as e:
        print(f'nwalign: error: {e}', file=sys.stderr)
        return EXIT_INPUT
    except (InvariantViolation, AlignmentError, DistributionError) as e:
        print(f'nwalign: internal error: {e}', file=sys.stderr)
        return EXIT_INTERNAL
    except (FastaError, MsaError, ValueError, OSError) as e:
        print(f'nwalign: error: {e}', file=sys.stderr)
        return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(main())
