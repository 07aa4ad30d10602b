"""Logging for nwalign: a TRACE level between DEBUG and INFO and root logger setup"""

import logging

class NWLogger(logging.getLoggerClass()):
    TRACE = 15
    def trace(self, *args, **kwargs):
        if self.isEnabledFor(self.TRACE):
            self.log(self.TRACE, *args, **kwargs)


_VERBOSITY_LOG_LEVELS = {
    0: logging.WARNING,
    1: logging.INFO,
    2: NWLogger.TRACE,
    3: logging.DEBUG,
}

_FORMAT = "%(levelname)s:%(name)s - %(message)s"
# wavefront workers and distributor ranks log concurrently at these levels
_THREADED_FORMAT = "%(levelname)s:%(name)s [%(threadName)s] - %(message)s"


def _setup_logging():
    logging.addLevelName(NWLogger.TRACE, "TRACE")
    logging.setLoggerClass(NWLogger)


def config_logger(verbosity=0, filename=None, reset_handlers=True):
    """Send nwalign's log records to stderr or ``filename``.

    ``verbosity`` selects the level: 0 warning, 1 info, 2 trace, 3 debug.
    From trace on, records also name the thread that emitted them. Records
    from other libraries (dask, distributed, numba) are filtered out.

    Returns the handler that was added.
    """
    if verbosity not in _VERBOSITY_LOG_LEVELS:
        raise ValueError(f'Verbosity must be one of {sorted(_VERBOSITY_LOG_LEVELS)}, got {verbosity}')
    root_logger = logging.getLogger()
    root_logger.setLevel(_VERBOSITY_LOG_LEVELS[verbosity])
    if reset_handlers:
        root_logger.handlers.clear()

    handler = logging.StreamHandler() if filename is None else logging.FileHandler(filename)
    handler.setFormatter(logging.Formatter(_THREADED_FORMAT if verbosity >= 2 else _FORMAT))
    handler.addFilter(logging.Filter('nwalign'))
    root_logger.addHandler(handler)
    return handler
