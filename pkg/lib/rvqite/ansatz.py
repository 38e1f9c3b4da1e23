"""
Hamiltonian Variational Ansatz for the Schwinger chain, its charge-sector
initial states and the trainable R_x layer used when the charge is not
fixed.

Parameter layout, layer l = 0..p-1 at offset l * (3N - 2):
    alpha[l, n]  n = 0..N-1     exp(i alpha Z_n)
    gamma[l, b]  b = 0..N-2     exp(i gamma Z_b Z_b+1)
    beta[l, b]   b = 0..N-2     exp(i beta (X_b X_b+1 + Y_b Y_b+1))
followed, for free charge, by tau[n], n = 0..N-1, exp(-i tau X_n).

Within a layer the gates run U_z, U_zz(odd bonds), U_xy(odd bonds),
U_zz(even bonds), U_xy(even bonds).
"""
import dataclasses
from typing import Optional
import numpy as np
from rvqite.exceptions import DimensionError, ParameterError
from rvqite.statevector import StateVector, Gate, GateKind


def _checkEven(numSites):
    if (numSites < 2) or (numSites % 2 != 0):
        raise ParameterError("number of sites must be even and positive: {}".format(numSites))


def vacuumBitstring(numSites):
    """Staggered configuration with zero charge on every site: even sites
    have Z = -1 (bit 1), odd sites Z = +1 (bit 0)."""
    _checkEven(numSites)
    return tuple(1 if i % 2 == 0 else 0 for i in range(numSites))


def chargedBitstring(numSites, charge):
    """First 2|q| sites all Z = +1 for q > 0 or all Z = -1 for q < 0, the
    rest in the vacuum pattern; total charge is exactly q."""
    _checkEven(numSites)
    if 2 * abs(charge) > numSites:
        raise ParameterError("charge {} exceeds capacity of {} sites".format(charge, numSites))
    bits = list(vacuumBitstring(numSites))
    for i in range(2 * abs(charge)):
        bits[i] = 0 if charge > 0 else 1
    return tuple(bits)


def bitstringCharge(bits):
    "total charge 1/2 sum Z_i of a computational basis configuration"
    return sum(1 - 2 * b for b in bits) // 2


@dataclasses.dataclass(frozen=True)
class AnsatzSpec(object):
    """HVA with `depth` layers on `numSites` sites.  `charge` selects a fixed
    charge-sector initial state; None selects free charge, adding N trainable
    R_x gates on |0...0>."""
    numSites: int
    depth: int
    charge: Optional[int] = 0

    def __post_init__(self):
        _checkEven(self.numSites)
        if self.depth < 1:
            raise ParameterError("ansatz depth must be at least 1: {}".format(self.depth))
        if (self.charge is not None) and (2 * abs(self.charge) > self.numSites):
            raise ParameterError("charge {} exceeds capacity of {} sites".format(self.charge, self.numSites))

    @property
    def freeCharge(self):
        return self.charge is None

    @property
    def layerParameterCount(self):
        return 3 * self.numSites - 2

    @property
    def parameterCount(self):
        return self.depth * self.layerParameterCount + (self.numSites if self.freeCharge else 0)

    def describe(self):
        init = "free" if self.freeCharge else "q={}".format(self.charge)
        return "N={} p={} {}".format(self.numSites, self.depth, init)


class Circuit(object):
    """Initial computational basis configuration followed by an ordered list
    of parameterized gates.  Immutable once built."""

    def __init__(self, initialBits, gates, parameterCount, description=""):
        self.initialBits = tuple(initialBits)
        self.qubitCount = len(self.initialBits)
        self.gates = tuple(gates)
        self.parameterCount = parameterCount
        self.description = description
        used = set()
        for gate in self.gates:
            gate.checkSites(self.qubitCount)
            if not (0 <= gate.paramIndex < parameterCount):
                raise ParameterError("gate {} parameter index out of range".format(gate))
            used.add(gate.paramIndex)
        if len(used) != parameterCount:
            raise ParameterError("circuit has parameters not bound to any gate")

    def __str__(self):
        return self.description if self.description else "Circuit({} qubits, {} gates)".format(self.qubitCount, len(self.gates))

    def gatesFor(self, paramIndex):
        return [g for g in self.gates if g.paramIndex == paramIndex]

    def checkParams(self, params):
        params = np.asarray(params, dtype=np.float64)
        if params.shape != (self.parameterCount,):
            raise DimensionError("expected {} parameters, got shape {}".format(self.parameterCount, params.shape))
        return params

    def initialState(self):
        return StateVector.basis(self.initialBits)

    def evaluateArray(self, params):
        params = self.checkParams(params)
        psi = self.initialState().amplitudes
        for gate in self.gates:
            psi = gate.applyArray(psi, params[gate.paramIndex], self.qubitCount)
        return psi

    def evaluate(self, params):
        """|psi(params)>, normalized"""
        return StateVector(self.qubitCount, self.evaluateArray(params))


def _bondGates(kind, bonds, offset):
    return [Gate(kind, (b, b + 1), offset + b) for b in bonds]


def buildCircuit(spec):
    """Build the circuit for an AnsatzSpec."""
    n = spec.numSites
    oddBonds = [b for b in range(n - 1) if b % 2 == 1]
    evenBonds = [b for b in range(n - 1) if b % 2 == 0]
    gates = []
    if spec.freeCharge:
        initialBits = (0,) * n
        tauOffset = spec.depth * spec.layerParameterCount
        gates.extend(Gate(GateKind.RX, (i,), tauOffset + i) for i in range(n))
    else:
        initialBits = chargedBitstring(n, spec.charge)
    for layer in range(spec.depth):
        alphaOff = layer * spec.layerParameterCount
        gammaOff = alphaOff + n
        betaOff = gammaOff + (n - 1)
        gates.extend(Gate(GateKind.RZ, (i,), alphaOff + i) for i in range(n))
        gates.extend(_bondGates(GateKind.RZZ, oddBonds, gammaOff))
        gates.extend(_bondGates(GateKind.RXXYY, oddBonds, betaOff))
        gates.extend(_bondGates(GateKind.RZZ, evenBonds, gammaOff))
        gates.extend(_bondGates(GateKind.RXXYY, evenBonds, betaOff))
    return Circuit(initialBits, gates, spec.parameterCount, "HVA " + spec.describe())


def evaluate(circuit, params):
    "normalized state of circuit at params"
    return circuit.evaluate(params)


def randomParameters(parameterCount, rng):
    """i.i.d. uniform on [-pi, pi] from a numpy Generator"""
    return rng.uniform(-np.pi, np.pi, size=parameterCount)
