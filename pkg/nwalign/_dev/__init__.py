"""
Only present in source checkouts; wheels and sdists leave it out.

``nwalign/__init__.py`` imports ``get_version`` from here to derive the version
from git tags during editable installs and falls back to the installed package
metadata when this subpackage is missing.
"""

from setuptools_scm import get_version
