"""
Look up alignment engines by name.

Every engine maps an ``AlignmentProblem`` to ``(score grid, direction grid, Alignment)``
and every scorer maps it to the final score alone. Callers that are handed an
engine name (center star, the distributor ranks, the benchmark harness) go
through ``get_engine`` and ``get_scorer`` so serial and wavefront runs stay
interchangeable.
"""

from typing import Callable, Dict, Tuple

from nwalign.core import Alignment
from nwalign.serial_nw import AlignmentProblem, align_score_only, align_serial
from nwalign.typing import ScoreMatrix, TracebackMatrix
from nwalign.wavefront_nw import DEFAULT_GRAIN, WavefrontConfig, align_wavefront

EngineFunction = Callable[[AlignmentProblem], Tuple[ScoreMatrix, TracebackMatrix, Alignment]]
ScoreFunction = Callable[[AlignmentProblem], int]


def _wavefront_engine(workers: int, grain: int) -> EngineFunction:
    cfg = WavefrontConfig(workers=workers, grain=grain)

    def engine(problem: AlignmentProblem):
        return align_wavefront(problem, cfg)
    return engine


def _wavefront_scorer(workers: int, grain: int) -> ScoreFunction:
    engine = _wavefront_engine(workers, grain)

    def scorer(problem: AlignmentProblem) -> int:
        score, _, _ = engine(problem)
        return int(score[-1, -1])
    return scorer


# name -> factory(workers, grain)
ENGINES: Dict[str, Callable[[int, int], EngineFunction]] = {
    'serial': lambda workers, grain: align_serial,
    'wavefront': _wavefront_engine,
}
SCORERS: Dict[str, Callable[[int, int], ScoreFunction]] = {
    'serial': lambda workers, grain: align_score_only,
    'wavefront': _wavefront_scorer,
}
ENGINE_NAMES = tuple(ENGINES)


def _check_name(name: str) -> None:
    if name not in ENGINES:
        raise ValueError(f'Unknown engine {name!r}. Choose one of {", ".join(ENGINE_NAMES)}.')


def get_engine(name: str, workers: int = 1, grain: int = DEFAULT_GRAIN) -> EngineFunction:
    """
    Return the alignment function for an engine name.

    Parameters
    ----------
    name : str
        ``'serial'`` or ``'wavefront'``
    workers : int
        Wavefront worker threads. Ignored by the serial engine.
    grain : int
        Wavefront cells per work unit. Ignored by the serial engine.

    Returns
    -------
    Callable[[AlignmentProblem], Tuple[np.ndarray, np.ndarray, Alignment]]

    Examples
    --------
    >>> get_engine('serial') is align_serial
    True
    >>> get_engine('simd')
    Traceback (most recent call last):
    ...
    ValueError: Unknown engine 'simd'. Choose one of serial, wavefront.
    """
    _check_name(name)
    return ENGINES[name](workers, grain)


def get_scorer(name: str, workers: int = 1, grain: int = DEFAULT_GRAIN) -> ScoreFunction:
    """Return a function computing only the optimal score, for the pair-scoring stage."""
    _check_name(name)
    return SCORERS[name](workers, grain)
