"""
Dense statevector engine: gates, generator insertion for analytic
derivatives, inner products and the ancilla overlap construction.

Amplitudes are little-endian: bit `i` of the index is site `i`.
"""
import enum
import numpy as np
from rvqite.exceptions import DimensionError, NormalizationError, ParameterError
from rvqite.pauli import PauliTerm, PauliSum

NORM_TOL = 1e-10


class StateVector(object):
    """Complex amplitude vector over `qubitCount` qubits.  Physical states
    are normalized; derivative and operator-applied states are flagged with
    `normalized=False`.  Operations return new states, the amplitude array
    is never modified in place once wrapped."""

    def __init__(self, qubitCount, amplitudes, normalized=True):
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (1 << qubitCount,):
            raise DimensionError("amplitude vector of shape {} does not match {} qubits".format(amplitudes.shape, qubitCount))
        if normalized:
            norm = np.linalg.norm(amplitudes)
            if abs(norm - 1.0) > NORM_TOL:
                raise NormalizationError("state flagged normalized has norm {}".format(norm))
        self.qubitCount = qubitCount
        self.amplitudes = amplitudes
        self.normalized = normalized

    @classmethod
    def basis(cls, bits):
        """Computational basis state; bits[i] is the bit of site i."""
        index = sum(int(b) << i for i, b in enumerate(bits))
        amps = np.zeros(1 << len(bits), dtype=np.complex128)
        amps[index] = 1.0
        return cls(len(bits), amps)

    @classmethod
    def random(cls, qubitCount, rng):
        "Haar-random state from a numpy Generator"
        amps = rng.normal(size=1 << qubitCount) + 1j * rng.normal(size=1 << qubitCount)
        return cls(qubitCount, amps / np.linalg.norm(amps))

    def derived(self, amplitudes):
        "new unnormalized state of the same size"
        return StateVector(self.qubitCount, amplitudes, normalized=False)

    def __len__(self):
        return len(self.amplitudes)

    def __str__(self):
        return "StateVector({} qubits{})".format(self.qubitCount, "" if self.normalized else ", unnormalized")

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other):
        """<self|other>, conjugating self"""
        if self.qubitCount != other.qubitCount:
            raise DimensionError("qubit count mismatch: {} and {}".format(self.qubitCount, other.qubitCount))
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def zExpectations(self):
        """<Z_i> for every site, computed from basis probabilities"""
        probs = self.probabilities()
        idx = np.arange(len(probs))
        return np.array([np.dot(probs, 1.0 - 2.0 * ((idx >> i) & 1)) for i in range(self.qubitCount)])

    def fidelity(self, other):
        "|<self|other>|^2, insensitive to global phase"
        return abs(self.inner(other)) ** 2

    def dump(self, path):
        """Write amplitudes as little-endian float64 (re, im) pairs."""
        np.ascontiguousarray(self.amplitudes, dtype="<c16").tofile(path)

    @classmethod
    def load(cls, path, normalized=True):
        amps = np.fromfile(path, dtype="<c16")
        return cls(int(len(amps)).bit_length() - 1, amps, normalized=normalized)


def inner(a, b):
    "<a|b>"
    return a.inner(b)


class GateKind(enum.Enum):
    "Gates used by the ansatz; each is exp(i * value * sum(sign * P))."
    RX = "RX"
    RZ = "RZ"
    RZZ = "RZZ"
    RXXYY = "RXXYY"


class Gate(object):
    """Parameterized gate exp(+i * value * sum_k sign_k * P_k).  The
    generator terms are unit-coefficient Pauli strings that mutually
    commute.  RX is exp(-i * value * X), so its generator sign is -1."""

    def __init__(self, kind, sites, paramIndex):
        sites = tuple(int(s) for s in sites)
        self.kind = kind
        self.sites = sites
        self.paramIndex = int(paramIndex)
        self.generator = self._makeGenerator(kind, sites)

    @staticmethod
    def _makeGenerator(kind, sites):
        if kind is GateKind.RX:
            return ((PauliTerm(1.0, [(sites[0], "X")]), -1.0),)
        elif kind is GateKind.RZ:
            return ((PauliTerm(1.0, [(sites[0], "Z")]), 1.0),)
        if (len(sites) != 2) or (sites[0] == sites[1]):
            raise ParameterError("{} gate requires two distinct sites: {}".format(kind.value, sites))
        if kind is GateKind.RZZ:
            return ((PauliTerm(1.0, [(sites[0], "Z"), (sites[1], "Z")]), 1.0),)
        else:
            return ((PauliTerm(1.0, [(sites[0], "X"), (sites[1], "X")]), 1.0),
                    (PauliTerm(1.0, [(sites[0], "Y"), (sites[1], "Y")]), 1.0))

    def __str__(self):
        return "{}({})[{}]".format(self.kind.value, ",".join(str(s) for s in self.sites), self.paramIndex)

    def __repr__(self):
        return str(self)

    def generatorSum(self, qubitCount):
        "generator as a PauliSum"
        return PauliSum(qubitCount, [term.scaled(sign) for term, sign in self.generator])

    def checkSites(self, qubitCount):
        for site in self.sites:
            if not (0 <= site < qubitCount):
                raise DimensionError("gate {} site {} out of range for {} qubits".format(self, site, qubitCount))

    def applyArray(self, amplitudes, value, qubitCount):
        """Apply along the last axis.  Generator terms commute and square
        to the identity, so each factor is cos(v) + i sin(v) P."""
        for term, sign in self.generator:
            angle = sign * value
            amplitudes = np.cos(angle) * amplitudes + (1j * np.sin(angle)) * term.applyString(amplitudes, qubitCount)
        return amplitudes

    def insertionArrays(self, amplitudes, qubitCount):
        """d/dvalue of the gate, evaluated after the gate has been applied:
        one (i * sign * P) insertion per generator term, summed."""
        out = np.zeros(amplitudes.shape, dtype=np.complex128)
        for term, sign in self.generator:
            out += (1j * sign) * term.applyString(amplitudes, qubitCount)
        return out


def applyGate(psi, gate, value):
    """Apply a gate to a state, returning a new state."""
    gate.checkSites(psi.qubitCount)
    return StateVector(psi.qubitCount, gate.applyArray(psi.amplitudes, value, psi.qubitCount), normalized=psi.normalized)


def derivativeState(circuit, params, k):
    """d|psi(params)>/d params[k] by generator insertion: for every gate
    bound to parameter k and every term of its generator, run the circuit
    with (i * sign * P) inserted right after that gate, and sum."""
    params = circuit.checkParams(params)
    if not (0 <= k < circuit.parameterCount):
        raise ParameterError("parameter index {} out of range [0, {})".format(k, circuit.parameterCount))
    n = circuit.qubitCount
    psi = circuit.initialState().amplitudes
    total = np.zeros(len(psi), dtype=np.complex128)
    for pos, gate in enumerate(circuit.gates):
        psi = gate.applyArray(psi, params[gate.paramIndex], n)
        if gate.paramIndex == k:
            for term, sign in gate.generator:
                branch = (1j * sign) * term.applyString(psi, n)
                for later in circuit.gates[pos + 1:]:
                    branch = later.applyArray(branch, params[later.paramIndex], n)
                total += branch
    return StateVector(n, total, normalized=False)


def derivativeStates(circuit, params):
    """All derivative states at once as (state, m x 2^N array).  A single
    forward sweep carries every derivative row through the later gates."""
    params = circuit.checkParams(params)
    n = circuit.qubitCount
    psi = circuit.initialState().amplitudes
    rows = np.zeros((circuit.parameterCount, len(psi)), dtype=np.complex128)
    for gate in circuit.gates:
        value = params[gate.paramIndex]
        psi = gate.applyArray(psi, value, n)
        rows = gate.applyArray(rows, value, n)
        rows[gate.paramIndex] += gate.insertionArrays(psi, n)
    return StateVector(n, psi), rows


def withAncilla(a, b):
    """(|+>|a> + |->|b>)/sqrt(2) on qubitCount + 1 qubits, the ancilla being
    the most significant qubit.  <Z_ancilla> of the result is Re<a|b>."""
    if a.qubitCount != b.qubitCount:
        raise DimensionError("qubit count mismatch: {} and {}".format(a.qubitCount, b.qubitCount))
    for s in (a, b):
        if abs(s.norm() - 1.0) > NORM_TOL:
            raise NormalizationError("ancilla construction requires normalized branches, norm is {}".format(s.norm()))
    amps = np.concatenate(((a.amplitudes + b.amplitudes) / 2.0, (a.amplitudes - b.amplitudes) / 2.0))
    return StateVector(a.qubitCount + 1, amps)


def ancillaZ(qubitCount):
    "Z on the ancilla added by withAncilla to a qubitCount-qubit state"
    return PauliSum.single(qubitCount + 1, "Z", qubitCount)
