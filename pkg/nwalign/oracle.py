"""
Brute-force reference answers for small global alignment problems.

Nothing here shares code with the dynamic programming engines: alignments are
enumerated column by column and scored directly, so these functions can be
used to check the engines.
"""

import itertools
import logging
from functools import lru_cache
from typing import List, NamedTuple, Set, Tuple

import numpy as np

from nwalign.core import GAP, ScoringScheme, Sequence
from nwalign.serial_nw import AlignmentProblem, align_serial, traceback_all
from nwalign.utils import random_residues
from nwalign.wavefront_nw import WavefrontConfig, align_wavefront

_log = logging.getLogger(__name__)


def _column_score(x: str, y: str, scheme: ScoringScheme) -> int:
    if x == GAP or y == GAP:
        return scheme.gap_penalty
    return scheme.match_score if x == y else scheme.mismatch_score


def brute_force_alignments(a: str, b: str, scheme: ScoringScheme) -> List[Tuple[str, str, int]]:
    """
    Enumerate every global alignment of ``a`` and ``b`` with its score.

    The count grows like the Delannoy numbers, so keep both lengths small.

    Examples
    --------
    >>> sorted(brute_force_alignments('A', 'C', ScoringScheme()))
    [('-A', 'C-', -2), ('A', 'C', -1), ('A-', '-C', -2)]
    """
    results = []

    def extend(i: int, j: int, cols_a: str, cols_b: str, total: int) -> None:
        if i == len(a) and j == len(b):
            results.append((cols_a, cols_b, total))
            return
        if i < len(a) and j < len(b):
            extend(i + 1, j + 1, cols_a + a[i], cols_b + b[j], total + _column_score(a[i], b[j], scheme))
        if i < len(a):
            extend(i + 1, j, cols_a + a[i], cols_b + GAP, total + scheme.gap_penalty)
        if j < len(b):
            extend(i, j + 1, cols_a + GAP, cols_b + b[j], total + scheme.gap_penalty)

    extend(0, 0, '', '', 0)
    return results


def optimal_alignments(a: str, b: str, scheme: ScoringScheme) -> Set[Tuple[str, str]]:
    """The set of (gapped_a, gapped_b) pairs reaching the maximum brute-force score."""
    candidates = brute_force_alignments(a, b, scheme)
    best = max(score for _, _, score in candidates)
    return {(x, y) for x, y, score in candidates if score == best}


def best_score_recursive(a: str, b: str, scheme: ScoringScheme) -> int:
    """
    Maximum alignment score by memoized recursion over the first column choice.

    Equal to ``max`` over ``brute_force_alignments`` but polynomial, for
    exhaustive checks at lengths where enumeration is too slow.

    >>> best_score_recursive('GATTACA', 'GCATGCU', ScoringScheme())
    0
    """
    @lru_cache(maxsize=None)
    def best(i: int, j: int) -> int:
        if i == len(a) and j == len(b):
            return 0
        options = []
        if i < len(a) and j < len(b):
            options.append(_column_score(a[i], b[j], scheme) + best(i + 1, j + 1))
        if i < len(a):
            options.append(scheme.gap_penalty + best(i + 1, j))
        if j < len(b):
            options.append(scheme.gap_penalty + best(i, j + 1))
        return max(options)

    return best(0, 0)


class SelftestReport(NamedTuple):
    checked: int
    failures: List[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def _words(alphabet: str, max_length: int):
    for length in range(max_length + 1):
        for letters in itertools.product(alphabet, repeat=length):
            yield ''.join(letters)


def run_selftest(max_length: int = 7, alphabet: str = 'AC', cooptimal_length: int = 4, random_pairs: int = 100,
                 random_max_length: int = 64, seed: int = 0, scheme: ScoringScheme = ScoringScheme()) -> SelftestReport:
    """
    Check the engines against the brute-force references.

    1. Every pair of words over ``alphabet`` up to ``max_length``: the serial
       score equals ``best_score_recursive``. That is the memoized recursion
       over the same three moves, not a full enumeration. The recursion itself is
       checked against ``brute_force_alignments`` by the test suite, over
       ``AC`` up to length 4, or 5 with ``NW_RUN_SLOW`` set.
    2. Every pair up to ``cooptimal_length``: uncapped ``traceback_all``
       returns exactly ``optimal_alignments``.
    3. ``random_pairs`` seeded ACGT pairs: the wavefront engine with 1, 2
       and 4 workers reproduces the serial grids and alignment.

    Returns
    -------
    SelftestReport
        Number of checks run and a description of every failure
    """
    failures = []
    checked = 0
    words = list(_words(alphabet, max_length))
    _log.info('Checking serial scores on %d exhaustive pairs', len(words) ** 2)
    for x in words:
        seq_x = Sequence(id='x', residues=x)
        for y in words:
            problem = AlignmentProblem(a=seq_x, b=Sequence(id='y', residues=y), scheme=scheme)
            score, _, aln = align_serial(problem)
            expected = best_score_recursive(x, y, scheme)
            checked += 1
            if int(score[-1, -1]) != expected or aln.score != expected:
                failures.append(f'serial score {int(score[-1, -1])} != brute force {expected} for ({x!r}, {y!r})')

    short = [w for w in words if len(w) <= cooptimal_length]
    _log.info('Checking co-optimal enumeration on %d pairs', len(short) ** 2)
    for x in short:
        for y in short:
            a, b = Sequence(id='x', residues=x), Sequence(id='y', residues=y)
            score, _, _ = align_serial(AlignmentProblem(a=a, b=b, scheme=scheme))
            found = {(aln.gapped_a, aln.gapped_b) for aln in traceback_all(score, a, b, scheme, cap=None).alignments}
            checked += 1
            if found != optimal_alignments(x, y, scheme):
                failures.append(f'co-optimal alignments differ from brute force for ({x!r}, {y!r})')

    _log.info('Checking wavefront equivalence on %d random pairs', random_pairs)
    rng = np.random.RandomState(seed)
    for _ in range(random_pairs):
        a = Sequence(id='a', residues=random_residues(rng.randint(0, random_max_length + 1), rng))
        b = Sequence(id='b', residues=random_residues(rng.randint(0, random_max_length + 1), rng))
        problem = AlignmentProblem(a=a, b=b, scheme=scheme)
        ref_score, ref_tb, ref_aln = align_serial(problem)
        for workers in (1, 2, 4):
            score, tb, aln = align_wavefront(problem, WavefrontConfig(workers=workers, grain=8))
            checked += 1
            if not (np.array_equal(score, ref_score) and np.array_equal(tb, ref_tb) and aln == ref_aln):
                failures.append(f'wavefront with {workers} workers differs from serial for ({a.residues!r}, {b.residues!r})')
    return SelftestReport(checked, failures)
