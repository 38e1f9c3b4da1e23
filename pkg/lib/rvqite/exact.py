"""
Exact-diagonalization oracle: full spectra, charge-sector spectra, the Ratio
metric, level crossings between opposite charge sectors and the ordering
of sector ground energies.

Computational basis states are eigenstates of Q = 1/2 sum Z_j with
Q = N/2 - popcount(b), so a charge sector is a set of basis indices and
the sector Hamiltonian is a submatrix of the dense Hamiltonian.
"""
import collections
import dataclasses
import math
import threading
import numpy as np
import scipy.linalg
import scipy.optimize
from rvqite.exceptions import ParameterError, SectorError, RvqiteException
from rvqite.schwinger import buildHamiltonian

RATIO_SLACK = 1e-8
DEFAULT_CACHE_SIZE = 512


def sectorIndices(numSites, charge):
    """Basis indices with total charge `charge`, ascending."""
    if 2 * abs(charge) > numSites:
        raise SectorError("charge sector q={} is empty for {} sites".format(charge, numSites))
    idx = np.arange(1 << numSites, dtype=np.int64)
    popcount = np.zeros(len(idx), dtype=np.int64)
    for site in range(numSites):
        popcount += (idx >> site) & 1
    return idx[popcount == (numSites // 2 - charge)]


def sectorDimension(numSites, charge):
    if 2 * abs(charge) > numSites:
        return 0
    return math.comb(numSites, numSites // 2 + charge)


def sectorCharges(numSites):
    "all charges with a non-empty sector, ascending"
    return list(range(-(numSites // 2), numSites // 2 + 1))


class SpectrumCache(object):
    """Memoized eigenvalues keyed by SchwingerParams.  Lookups and inserts
    are serialized by a lock; computation runs outside it, so two threads
    may compute the same entry and the first insert wins."""

    def __init__(self, maxEntries=DEFAULT_CACHE_SIZE):
        self.maxEntries = maxEntries
        self.lock = threading.RLock()
        self._entries = collections.OrderedDict()
        self.hits = self.misses = 0

    def get(self, key, compute):
        with self.lock:
            if key in self._entries:
                self._entries.move_to_end(key)
                self.hits += 1
                return self._entries[key]
            self.misses += 1
        value = compute()
        with self.lock:
            if key not in self._entries:
                self._entries[key] = value
                while len(self._entries) > self.maxEntries:
                    self._entries.popitem(last=False)
            return self._entries[key]

    def clear(self):
        with self.lock:
            self._entries.clear()
            self.hits = self.misses = 0

    def __len__(self):
        with self.lock:
            return len(self._entries)


_cache = SpectrumCache()


def getSpectrumCache():
    return _cache


def _fullEigenvalues(params):
    eigvals = scipy.linalg.eigh(buildHamiltonian(params).toDense(), eigvals_only=True)
    eigvals.setflags(write=False)
    return eigvals


def _sectorEigenvalues(params):
    dense = buildHamiltonian(params).toDense()
    table = {}
    for q in sectorCharges(params.numSites):
        idx = sectorIndices(params.numSites, q)
        eigvals = scipy.linalg.eigh(dense[np.ix_(idx, idx)], eigvals_only=True)
        eigvals.setflags(write=False)
        table[q] = eigvals
    return table


def fullSpectrum(params, vectors=False):
    """All 2^N eigenvalues ascending, or (eigenvalues, eigenvectors) when
    `vectors` is set.  Raises SizeCapError above the dense qubit cap."""
    if vectors:
        return scipy.linalg.eigh(buildHamiltonian(params).toDense())
    return _cache.get(("full", params), lambda: _fullEigenvalues(params))


def _sectorTable(params):
    return _cache.get(("sectors", params), lambda: _sectorEigenvalues(params))


@dataclasses.dataclass(frozen=True)
class SectorEnergy(object):
    "level `n` (0 = lowest) of charge sector `q`, in units of g"
    q: int
    n: int
    energy: float
    params: object


def sectorSpectrum(params, charge):
    """All levels of the charge sector, ascending."""
    if 2 * abs(charge) > params.numSites:
        raise SectorError("charge sector q={} is empty for {} sites".format(charge, params.numSites))
    eigvals = _sectorTable(params)[charge]
    return [SectorEnergy(charge, n, float(e), params) for n, e in enumerate(eigvals)]


def sectorLowest(params, charge):
    """Lowest energy with Q = charge."""
    if 2 * abs(charge) > params.numSites:
        raise SectorError("charge sector q={} is empty for {} sites".format(charge, params.numSites))
    return SectorEnergy(charge, 0, float(_sectorTable(params)[charge][0]), params)


def groundCharge(params):
    "charge of the sector holding the overall ground state"
    table = _sectorTable(params)
    return min(table.keys(), key=lambda q: (table[q][0], abs(q)))


@dataclasses.dataclass(frozen=True)
class RatioResult(object):
    eMax: float
    eMin: float
    eQa: float
    ratio: float


def ratio(params, eQa):
    """Ratio = (E_max - E_QA) / (E_max - E_min); 1 is the exact ground
    state."""
    eigvals = fullSpectrum(params)
    eMin, eMax = float(eigvals[0]), float(eigvals[-1])
    return ratioFromBounds(eMin, eMax, eQa)


def ratioFromBounds(eMin, eMax, eQa):
    if not (eMax > eMin):
        raise ParameterError("degenerate spectrum, E_max = E_min = {}".format(eMax))
    if not math.isfinite(eQa):
        raise ParameterError("energy is not finite: {}".format(eQa))
    slack = RATIO_SLACK * max(1.0, eMax - eMin)
    if (eQa < eMin - slack) or (eQa > eMax + slack):
        raise RvqiteException("energy {} outside spectrum [{}, {}]".format(eQa, eMin, eMax))
    return RatioResult(eMax, eMin, eQa, (eMax - eQa) / (eMax - eMin))


def _crossingGap(params, charge, theta):
    at = params.replace(theta=theta)
    return sectorLowest(at, charge).energy - sectorLowest(at, -charge).energy


def levelCrossings(params, charge, thetas, tol=1e-8):
    """Values of theta (radians) in the scanned range where the lowest
    levels of sectors q and -q are equal.  Sign changes on the `thetas` grid
    are refined by bisection."""
    if charge == 0:
        raise ParameterError("level crossing requires a non-zero charge")
    thetas = np.asarray(thetas, dtype=np.float64)
    gaps = [_crossingGap(params, charge, t) for t in thetas]
    crossings = []
    for i in range(len(thetas)):
        if gaps[i] == 0.0:
            crossings.append(float(thetas[i]))
        elif (i > 0) and (gaps[i - 1] != 0.0) and ((gaps[i - 1] < 0.0) != (gaps[i] < 0.0)):
            crossings.append(float(scipy.optimize.bisect(lambda t: _crossingGap(params, charge, t),
                                                         thetas[i - 1], thetas[i], xtol=tol)))
    return crossings


@dataclasses.dataclass(frozen=True)
class HierarchyViolation(object):
    """E_0^(q) failed to lie below E_0^(outer), outer being the neighbor of q
    one unit further from zero."""
    theta: float
    q: int
    outer: int
    energy: float
    outerEnergy: float


def _hierarchyPairs(maxCharge):
    pairs = [(q, q + 1) for q in range(0, maxCharge)]
    pairs.extend((q, q - 1) for q in range(0, -maxCharge, -1))
    return pairs


def hierarchyViolations(params, thetas=None, maxCharge=None):
    """Check E_0^(q) < E_0^(q+1) for q >= 0 and E_0^(q) < E_0^(q-1) for
    q <= 0 at each theta (default: the theta of params), returning the
    places where it fails."""
    if maxCharge is None:
        maxCharge = params.numSites // 2
    if 2 * maxCharge > params.numSites:
        raise SectorError("charge {} exceeds capacity of {} sites".format(maxCharge, params.numSites))
    if thetas is None:
        thetas = [params.theta]
    violations = []
    for theta in thetas:
        at = params.replace(theta=float(theta))
        for q, outer in _hierarchyPairs(maxCharge):
            e = sectorLowest(at, q).energy
            eOuter = sectorLowest(at, outer).energy
            if not (e < eOuter):
                violations.append(HierarchyViolation(float(theta), q, outer, e, eOuter))
    return violations
