"""
nwalign
"""

# Set the version of nwalign
try:
    from ._dev import get_version
    # We have a local (editable) installation and can get the version based on the
    # source control management system at the project root.
    __version__ = get_version(root='..', relative_to=__file__)
    del get_version
except (ImportError, LookupError):
    # Fall back on the metadata of the installed package
    from importlib.metadata import version
    __version__ = version("nwalign")
    del version


from .logger import _setup_logging
# Makes global logging changes; all new logger instances will be NWLogger objects
_setup_logging()

from nwalign.core import Alignment, ScoringScheme, Sequence, score_alignment
from nwalign.serial_nw import AlignmentProblem, align_serial, traceback_all
from nwalign.wavefront_nw import WavefrontConfig, align_wavefront
from nwalign.center_star import MsaJob, MsaResult, msa
