"""
Exceptions raised by rvqite.
"""
import sys
import traceback
from warnings import warn


class RvqiteException(Exception):
    """Base class for rvqite exceptions."""
    pass


class DimensionError(RvqiteException):
    """Qubit counts, vector lengths or parameter counts do not agree."""
    pass


class NormalizationError(RvqiteException):
    """A state that must be normalized is not."""
    pass


class SizeCapError(RvqiteException):
    """A dense construction was requested above the qubit cap."""
    pass


class ParameterError(RvqiteException):
    """Invalid model, ansatz, solver or query parameters."""
    pass


class SectorError(RvqiteException):
    """A charge sector is empty for the requested system size."""
    pass


class ConfigException(RvqiteException):
    """Error parsing or validating a run configuration.  The source is
    the file name, if known."""
    def __init__(self, msg, source=None):
        self.source = source
        if source is not None:
            msg = "{}: {}".format(source, msg)
        super(ConfigException, self).__init__(msg)


class SolverException(RvqiteException):
    """Imaginary-time evolution could not continue.  `runDesc` describes the
    run, `iteration` is the step that failed, or None if it failed before
    stepping."""
    def __init__(self, runDesc, reason, iteration=None):
        self.runDesc = runDesc
        self.reason = reason
        self.iteration = iteration
        msg = "solver failed"
        if iteration is not None:
            msg += " at iteration " + str(iteration)
        msg += ": " + reason
        if runDesc is not None:
            msg += ": " + runDesc
        super(SolverException, self).__init__(msg)

    def __reduce__(self):
        # needed to get the same message back out of a worker process
        return (SolverException, (self.runDesc, self.reason, self.iteration))


class ErrorDuringErrorHandlingWarning(Warning):
    """An error occurred while handing another error"""
    pass


def _warn_error_during_error_handling(msg, exception):
    "called to issue warning on error during error handling"
    exi = sys.exc_info()
    stack = "" if exi is None else "".join(traceback.format_list(traceback.extract_tb(exi[2]))) + "\n"
    warn(msg + " " + str(exception) + "\n" + stack, ErrorDuringErrorHandlingWarning)
