"""
Phase boundaries between the charge-q and charge-(q+1) ground states,
as roots of

    f_q(mu, m, theta) = mu - (E_0^(q+1)(0, m, theta) - E_0^(q)(0, m, theta))

along one parameter axis with the other two held fixed.  Energies always
come from the exact oracle.  Axis values are mu/g, m/g and theta/2pi.
"""
import dataclasses
import enum
import logging
import math
import scipy.optimize
from rvqite.exceptions import ParameterError, SectorError, RvqiteException
from rvqite.loggers import getLoggerToUse, getLogLevelToUse
from rvqite.exact import sectorLowest

DEFAULT_TOL = 1e-6


class Axis(enum.Enum):
    MU = "mu"
    THETA = "theta"
    M = "m"


def axisValue(params, axis):
    "value of `axis` in params, in axis units"
    axis = Axis(axis)
    if axis is Axis.MU:
        return params.muOverG
    elif axis is Axis.M:
        return params.mOverG
    else:
        return params.thetaOverTwoPi


def setAxis(params, axis, value):
    "copy of params with `axis` set to `value`, in axis units"
    axis = Axis(axis)
    if axis is Axis.MU:
        return params.replace(muOverG=float(value))
    elif axis is Axis.M:
        return params.replace(mOverG=float(value))
    else:
        return params.replace(theta=2.0 * math.pi * float(value))


def _checkCapacity(numSites, q):
    if (2 * abs(q) > numSites) or (2 * abs(q + 1) > numSites):
        raise SectorError("boundary between q={} and q={} needs an empty sector for {} sites".format(q, q + 1, numSites))


def chargeGap(params, q):
    "E_0^(q+1) - E_0^(q) at mu = 0"
    _checkCapacity(params.numSites, q)
    zero = params.zeroMu()
    return sectorLowest(zero, q + 1).energy - sectorLowest(zero, q).energy


def fQ(params, q):
    """f_q at the point given by params; the gap term does not depend on
    mu, so f_q is affine in mu with unit slope."""
    return params.muOverG - chargeGap(params, q)


@dataclasses.dataclass(frozen=True)
class BoundaryQuery(object):
    """Root search for the q | q+1 boundary along `axis` in [lo, hi], with
    the other parameters taken from `base`.  With `forceBisection`, mu-axis
    queries bisect instead of using the closed form."""
    q: int
    axis: Axis
    base: object
    lo: float
    hi: float
    tol: float = DEFAULT_TOL
    forceBisection: bool = False

    def __post_init__(self):
        object.__setattr__(self, "axis", Axis(self.axis))
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and (self.lo < self.hi)):
            raise ParameterError("invalid bracket [{}, {}]".format(self.lo, self.hi))
        if not (self.tol > 0.0):
            raise ParameterError("tolerance must be positive: {}".format(self.tol))
        _checkCapacity(self.base.numSites, self.q)

    def f(self, value):
        return fQ(setAxis(self.base, self.axis, value), self.q)


@dataclasses.dataclass(frozen=True)
class BoundaryRoot(object):
    """Root of f_q along an axis.  fLo and fHi are the values at the
    bracket ends; evaluations counts oracle evaluations of f, steps the
    bisection steps among them."""
    q: int
    axis: Axis
    value: float
    residual: float
    fLo: float
    fHi: float
    evaluations: int
    steps: int = 0


@dataclasses.dataclass(frozen=True)
class NoRoot(object):
    "f_q has the same sign at both bracket ends"
    q: int
    axis: Axis
    fLo: float
    fHi: float


def _checkFinite(value, where):
    if not math.isfinite(value):
        raise RvqiteException("boundary function is not finite at {}".format(where))
    return value


def _closedFormMu(query):
    gap = chargeGap(query.base, query.q)
    fLo, fHi = query.lo - gap, query.hi - gap
    if (fLo < 0.0) == (fHi < 0.0) and (fLo != 0.0) and (fHi != 0.0):
        return NoRoot(query.q, query.axis, fLo, fHi)
    return BoundaryRoot(query.q, query.axis, gap, 0.0, fLo, fHi, 2)


def bisect(query):
    """Locate the root of f_q in the bracket to query.tol.  Along mu the
    root is the gap itself.  Returns NoRoot when the bracket ends have the
    same sign.  Each point is evaluated once: the two bracket ends, then at
    most ceil(log2((hi - lo)/tol)) bisection steps."""
    if (query.axis is Axis.MU) and not query.forceBisection:
        return _closedFormMu(query)
    seen = {}

    def f(value):
        if value not in seen:
            seen[value] = _checkFinite(query.f(value), "{}={}".format(query.axis.value, value))
        return seen[value]

    try:
        root = float(scipy.optimize.bisect(f, query.lo, query.hi, xtol=query.tol))
    except ValueError:
        # same sign at both ends
        if query.hi not in seen:
            raise
        return NoRoot(query.q, query.axis, seen[query.lo], seen[query.hi])
    return BoundaryRoot(query.q, query.axis, root, abs(seen[root]), seen[query.lo], seen[query.hi],
                        len(seen), len(seen) - 2)


@dataclasses.dataclass(frozen=True)
class TracePoint(object):
    "root along the second axis at one value of the first axis"
    q: int
    firstValue: float
    root: BoundaryRoot


def _firstBracket(base, q, axis, values):
    """first adjacent pair of grid values where f_q changes sign, or None"""
    prev = None
    for value in values:
        fval = fQ(setAxis(base, axis, value), q)
        if (prev is not None) and ((prev[1] < 0.0) != (fval < 0.0) or fval == 0.0):
            return prev[0], value
        prev = (value, fval)
    return None


def traceColumn(base, q, firstAxis, firstValue, secondAxis, secondValues, tol=DEFAULT_TOL):
    """Root along secondAxis at one value of firstAxis.  The second-axis
    grid is scanned for the first sign change, then bisected; None if f_q
    does not change sign on the grid."""
    at = setAxis(base, firstAxis, firstValue)
    secondAxis = Axis(secondAxis)
    if secondAxis is Axis.MU:
        lo, hi = min(secondValues), max(secondValues)
    else:
        bracket = _firstBracket(at, q, secondAxis, secondValues)
        if bracket is None:
            return None
        lo, hi = bracket
    if lo == hi:
        lo, hi = lo - tol, hi + tol
    root = bisect(BoundaryQuery(q, secondAxis, at, lo, hi, tol))
    if isinstance(root, NoRoot):
        return None
    return TracePoint(q, float(firstValue), root)


def _traceColumnArgs(args):
    return traceColumn(*args)


def traceBoundary(base, q, firstAxis, firstValues, secondAxis, secondValues, tol=DEFAULT_TOL,
                  mapper=map, logger=None, logLevel=None):
    """Boundary polyline for q | q+1: one TracePoint per first-axis value
    where a root exists.  Columns are independent; `mapper` may be a pool's
    ordered map.  Sectors beyond capacity give an empty polyline."""
    logger = getLoggerToUse(logger)
    try:
        _checkCapacity(base.numSites, q)
    except SectorError as ex:
        if logger is not None:
            logger.log(logging.WARNING, "boundary q={} not traced: {}".format(q, ex))
        return []
    if (logger is not None) and logger.isEnabledFor(getLogLevelToUse(logLevel)):
        logger.log(getLogLevelToUse(logLevel), "tracing boundary q={} in the {}-{} plane".format(q, Axis(firstAxis).value, Axis(secondAxis).value))
    argsList = [(base, q, firstAxis, value, secondAxis, list(secondValues), tol) for value in firstValues]
    return [point for point in mapper(_traceColumnArgs, argsList) if point is not None]
