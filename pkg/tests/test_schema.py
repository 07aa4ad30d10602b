"""
Tests for input file validation
"""

import pytest
import yaml

from nwalign.nwalign_script import get_run_settings

from .testing_data import BAD_SCORING_YAML, SETTINGS_YAML


def test_empty_input_gets_defaults():
    """An empty settings dict is filled with the defaults of every section."""
    d = get_run_settings({})
    assert d['scoring'] == {'match': 1, 'mismatch': -1, 'gap': -1}
    assert d['engine'] == {'name': 'serial', 'workers': 1, 'grain': 64}
    assert d['traceback'] == {'all_paths': False, 'cap': 256}
    assert d['distributor']['ranks'] == 1
    assert d['distributor']['transport'] == 'in-process'
    assert d['distributor']['timeout'] == 60.0
    assert d['distributor']['addresses'] == []
    assert d['bench']['seed'] is None
    assert d['bench']['workers_list'] == [1, 2, 4]
    assert d['bench']['sizes'] == [1000]
    assert d['output']['verbosity'] == 0
    assert d['output']['format'] == 'pairwise-text'
    assert d['output']['out'] is None


def test_yaml_settings_are_kept():
    d = get_run_settings(yaml.safe_load(SETTINGS_YAML))
    assert d['scoring'] == {'match': 2, 'mismatch': -1, 'gap': -2}
    assert d['engine'] == {'name': 'wavefront', 'workers': 2, 'grain': 4}


def test_scoring_order_is_checked():
    """A match must outscore a mismatch and gaps must be penalized."""
    with pytest.raises(ValueError) as excinfo:
        get_run_settings(yaml.safe_load(BAD_SCORING_YAML))
    message = str(excinfo.value)
    assert 'match (-1) must be greater than mismatch (1)' in message
    assert 'gap (0) must be negative' in message


def test_partial_scoring_uses_defaults_in_order_check():
    with pytest.raises(ValueError, match='must be greater'):
        get_run_settings({'scoring': {'mismatch': 1}})
    assert get_run_settings({'scoring': {'match': 5}})['scoring']['match'] == 5


@pytest.mark.parametrize('settings', [
    {'engine': {'name': 'quantum'}},
    {'engine': {'workers': 0}},
    {'engine': {'grain': 0}},
    {'traceback': {'cap': 0}},
    {'distributor': {'transport': 'pigeon'}},
    {'distributor': {'timeout': 0}},
    {'distributor': {'addresses': ['no-port']}},
    {'bench': {'sizes': []}},
    {'bench': {'seed': -1}},
    {'output': {'verbosity': 4}},
    {'output': {'format': 'clustal'}},
    {'unknown_section': {}},
])
def test_invalid_settings_raise(settings):
    with pytest.raises(ValueError):
        get_run_settings(settings)


def test_uncapped_traceback_is_allowed():
    d = get_run_settings({'traceback': {'all_paths': True, 'cap': None}})
    assert d['traceback'] == {'all_paths': True, 'cap': None}
