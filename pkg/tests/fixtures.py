"""Fixtures for use in tests"""

import threading

import pytest
from nwalign.core import ScoringScheme, Sequence
from nwalign.distributor import WorkerServer
from nwalign.serial_nw import AlignmentProblem


@pytest.fixture
def tmp_file(tmp_path):
    """Create a temporary file with content and return the file name"""
    counter = iter(range(1000))
    def _tmp_file(content, suffix='.fasta'):
        fname = tmp_path / f'tmp_file-{next(counter)}{suffix}'
        fname.write_text(content)
        return str(fname)
    yield _tmp_file


@pytest.fixture
def make_problem():
    """Build an AlignmentProblem from two residue strings"""
    def _make_problem(a, b, scheme=None):
        return AlignmentProblem(a=Sequence(id='a', residues=a), b=Sequence(id='b', residues=b),
                                scheme=scheme if scheme is not None else ScoringScheme())
    return _make_problem


@pytest.fixture
def worker_address():
    """Start a loopback socket rank serving one session and return its host:port"""
    server = WorkerServer('127.0.0.1', 0)
    thread = threading.Thread(target=server.serve, kwargs={'once': True}, daemon=True)
    thread.start()
    host, port = server.address
    yield f'{host}:{port}'
    server.close()
    thread.join(timeout=10)
