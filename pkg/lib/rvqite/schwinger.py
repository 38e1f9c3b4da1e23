"""
Lattice Schwinger model with a theta term and chemical potential, in the
spin representation, and its observables.  Units are g = 1: energies are in
units of g, the lattice spacing is given as a*g.

    H(mu, m, theta) = J sum_{j=0}^{N-2} [sum_{i<=j} Q_i + theta/2pi]^2
                      + w/2 sum_{j=0}^{N-2} (X_j X_j+1 + Y_j Y_j+1)
                      + m/2 sum_{j=0}^{N-1} (-1)^j Z_j
                      - mu Q
    Q_i = (Z_i + (-1)^i)/2,  Q = 1/2 sum Z_j,  J = a/2,  w = 1/(2a)
"""
import dataclasses
import math
import numpy as np
from rvqite.exceptions import DimensionError, NormalizationError, ParameterError
from rvqite.pauli import PauliSum, PauliTerm, NORM_TOL


@dataclasses.dataclass(frozen=True)
class SchwingerParams(object):
    """Model parameters.  `theta` is in radians.  With `lastLink`, the
    electric energy also includes the link to the right of the last site
    (N link terms instead of N-1)."""
    numSites: int
    mOverG: float = 1.0
    theta: float = 0.0
    muOverG: float = 0.0
    aG: float = 1.0
    lastLink: bool = False

    def __post_init__(self):
        if (self.numSites < 2) or (self.numSites % 2 != 0):
            raise ParameterError("number of sites must be even and positive: {}".format(self.numSites))
        if not (self.aG > 0.0):
            raise ParameterError("lattice spacing a*g must be positive: {}".format(self.aG))
        for name in ("mOverG", "theta", "muOverG", "aG"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError("{} must be finite".format(name))

    @classmethod
    def fromThetaOverTwoPi(cls, numSites, thetaOverTwoPi, **kwargs):
        return cls(numSites, theta=2.0 * math.pi * thetaOverTwoPi, **kwargs)

    @property
    def J(self):
        "electric coupling g^2 a / 2"
        return self.aG / 2.0

    @property
    def w(self):
        "hopping 1 / (2 a)"
        return 1.0 / (2.0 * self.aG)

    @property
    def thetaOverTwoPi(self):
        return self.theta / (2.0 * math.pi)

    @property
    def numLinks(self):
        return self.numSites if self.lastLink else self.numSites - 1

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def zeroMu(self):
        return self.replace(muOverG=0.0)

    def __str__(self):
        return "N={} m/g={:g} theta/2pi={:g} mu/g={:g} ag={:g}{}".format(
            self.numSites, self.mOverG, self.thetaOverTwoPi, self.muOverG, self.aG, " last-link" if self.lastLink else "")


def _stagger(i):
    return 1.0 if i % 2 == 0 else -1.0


def siteCharge(numSites, i):
    """Q_i = (Z_i + (-1)^i) / 2"""
    return PauliSum(numSites, [PauliTerm(0.5, [(i, "Z")]), PauliTerm(0.5 * _stagger(i))])


def chargeOperator(numSites):
    """Q = 1/2 sum_j Z_j"""
    if numSites < 1:
        raise ParameterError("number of sites must be positive: {}".format(numSites))
    return PauliSum(numSites, [PauliTerm(0.5, [(j, "Z")]) for j in range(numSites)])


def linkOperator(numSites, j, thetaOverTwoPi=0.0):
    """L_j + theta/2pi = sum_{i<=j} Q_i + theta/2pi"""
    link = PauliSum.identity(numSites, thetaOverTwoPi)
    for i in range(j + 1):
        link = link + siteCharge(numSites, i)
    return link.simplify()


def electricTerm(params):
    n = params.numSites
    total = PauliSum(n)
    for j in range(params.numLinks):
        link = linkOperator(n, j, params.thetaOverTwoPi)
        total = total + link * link
    return params.J * total


def hoppingTerm(params):
    n = params.numSites
    terms = []
    for j in range(n - 1):
        terms.append(PauliTerm(params.w / 2.0, [(j, "X"), (j + 1, "X")]))
        terms.append(PauliTerm(params.w / 2.0, [(j, "Y"), (j + 1, "Y")]))
    return PauliSum(n, terms)


def massTerm(params):
    n = params.numSites
    return PauliSum(n, [PauliTerm(params.mOverG / 2.0 * _stagger(j), [(j, "Z")]) for j in range(n)])


def buildHamiltonian(params):
    """H(mu, m, theta) as a simplified PauliSum.  The constant from
    expanding the squared links is kept as an identity term."""
    n = params.numSites
    ham = electricTerm(params) + hoppingTerm(params) + massTerm(params) - params.muOverG * chargeOperator(n)
    return ham.simplify()


@dataclasses.dataclass(frozen=True)
class Observables(object):
    "charge <Q>, chiral condensate chi and electric field E, in units of g"
    charge: float
    chiralCondensate: float
    electricField: float


def observables(psi, params):
    """<Q>, chi = (ag/2N) sum (-1)^i <Z_i> and
    E = (1/2N) sum_i sum_{k<=i} (<Z_k> + (-1)^k) + theta/2pi"""
    n = params.numSites
    if psi.qubitCount != n:
        raise DimensionError("state has {} qubits, model has {} sites".format(psi.qubitCount, n))
    norm = psi.norm()
    if abs(norm - 1.0) > NORM_TOL:
        raise NormalizationError("observables require a normalized state, norm is {}".format(norm))
    z = psi.zExpectations()
    stagger = np.array([_stagger(i) for i in range(n)])
    cumulative = np.cumsum(z + stagger)
    return Observables(charge=float(0.5 * np.sum(z)),
                       chiralCondensate=float(params.aG / (2.0 * n) * np.dot(stagger, z)),
                       electricField=float(np.sum(cumulative) / (2.0 * n) + params.thetaOverTwoPi))
