"""
Utilities for nwalign
"""

import asyncio
from typing import List, Optional, Sequence as SequenceType

import numpy as np
from distributed import Client, wait

from nwalign.core import Sequence

DNA_ALPHABET = 'ACGT'


class MapTimeoutError(TimeoutError):
    """Raised by ``ImmediateClient.map`` when some tasks are still pending at the timeout."""
    def __init__(self, pending: List[int], timeout: float):
        self.pending = pending
        super().__init__(f'{len(pending)} tasks did not finish within {timeout} s (first pending: {pending[0]})')


class ImmediateClient(Client):
    """
    A subclass of distributed.Client that automatically unwraps the Futures
    returned by map.
    """
    def map(self, f, *iterators, timeout: Optional[float] = None, **kwargs):
        """Map a function on a sequence of arguments and gather the results in order.

        If ``timeout`` is given and some tasks are unfinished after that many
        seconds, they are cancelled and ``MapTimeoutError`` lists their
        positions. Any other keyword arguments are passed to
        distributed.Client.map
        """
        _client = super(ImmediateClient, self)
        futures = _client.map(f, *[list(it) for it in iterators], **kwargs)
        if timeout is not None:
            try:
                wait(futures, timeout=timeout)
            except (TimeoutError, asyncio.TimeoutError):
                pending = [i for i, future in enumerate(futures) if not future.done()]
                _client.cancel(futures)
                raise MapTimeoutError(pending, timeout)
        return _client.gather(futures)


def random_residues(length: int, rng: np.random.RandomState, alphabet: str = DNA_ALPHABET) -> str:
    """
    Draw ``length`` residues uniformly from ``alphabet``.

    >>> residues = random_residues(8, np.random.RandomState(0), 'AC')
    >>> len(residues), set(residues) <= {'A', 'C'}
    (8, True)
    """
    letters = np.frombuffer(alphabet.encode('ascii'), dtype=np.uint8)
    return letters[rng.randint(0, len(letters), size=length)].tobytes().decode('ascii')


def generate_sequences(lengths: SequenceType[int], seed: int, alphabet: str = DNA_ALPHABET, prefix: str = 'seq') -> List[Sequence]:
    """Return seeded random sequences named ``{prefix}{index}``, one per requested length."""
    rng = np.random.RandomState(seed)
    return [Sequence(id=f'{prefix}{i}', residues=random_residues(length, rng, alphabet)) for i, length in enumerate(lengths)]
