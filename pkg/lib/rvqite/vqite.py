"""
Variational imaginary-time evolution.

McLachlan's principle turns imaginary-time evolution of |psi(theta)> into
the linear system A theta_dot = -C with

    A_ij = Re <d_i psi|d_j psi>      C_i = Re <d_i psi|H|psi>

The regularized update eigendecomposes A and discards every eigendirection
with eigenvalue <= epsilon before solving.  Pseudo-inverse and plain
gradient-descent updates are provided for comparison.
"""
import dataclasses
import enum
import logging
import math
from threading import RLock
from typing import Optional
import numpy as np
import scipy.linalg
from rvqite.exceptions import RvqiteException, SolverException, ParameterError, DimensionError, _warn_error_during_error_handling
from rvqite.loggers import Loggable
from rvqite.statevector import StateVector, derivativeStates, withAncilla, ancillaZ
from rvqite.ansatz import randomParameters
from rvqite.schwinger import chargeOperator
from rvqite.exact import ratioFromBounds

VARIANCE_CLAMP = 1e-10
DELTA2_CLAMP = 1e-6
SYMMETRY_TOL = 1e-10


class UpdateRule(enum.Enum):
    REGULARIZED = "regularized"
    PSEUDO_INVERSE = "pseudo_inverse"
    GRADIENT = "gradient"


class DerivativeMode(enum.Enum):
    ANALYTIC = "analytic"
    PARAMETER_SHIFT = "parameter_shift"


def _nonNegative(name, value):
    if not (math.isfinite(value) and (value >= 0.0)):
        raise ParameterError("{} must be finite and non-negative: {}".format(name, value))


@dataclasses.dataclass(frozen=True)
class VqiteConfig(object):
    """Solver settings.  `learningRate` is the step size of the gradient
    update and defaults to dtau.  Enumerated fields also accept their
    string values."""
    dtau: float = 0.1
    epsilon: float = 1e-6
    maxIters: int = 500
    stopDelta2: float = 1e-10
    updateRule: UpdateRule = UpdateRule.REGULARIZED
    derivativeMode: DerivativeMode = DerivativeMode.ANALYTIC
    rcond: float = 1e-15
    learningRate: Optional[float] = None
    energySlack: float = 1e-6
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "updateRule", UpdateRule(self.updateRule))
        object.__setattr__(self, "derivativeMode", DerivativeMode(self.derivativeMode))
        if not (math.isfinite(self.dtau) and (self.dtau > 0.0)):
            raise ParameterError("dtau must be finite and positive: {}".format(self.dtau))
        for name in ("epsilon", "stopDelta2", "rcond", "energySlack"):
            _nonNegative(name, getattr(self, name))
        if self.learningRate is not None:
            _nonNegative("learningRate", self.learningRate)
        if self.maxIters < 0:
            raise ParameterError("maxIters must be non-negative: {}".format(self.maxIters))

    @property
    def stepSize(self):
        if (self.updateRule is UpdateRule.GRADIENT) and (self.learningRate is not None):
            return self.learningRate
        return self.dtau

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def describe(self):
        desc = "{} dtau={:g}".format(self.updateRule.value, self.dtau)
        if self.updateRule is UpdateRule.REGULARIZED:
            desc += " epsilon={:g}".format(self.epsilon)
        return desc


@dataclasses.dataclass
class McLachlanSystem(object):
    "A (m x m, symmetric), C (m), Var(H) and <H> at one parameter point"
    A: np.ndarray
    C: np.ndarray
    varH: float
    energy: float

    @property
    def parameterCount(self):
        return len(self.C)


@dataclasses.dataclass(frozen=True)
class UpdateResult(object):
    """theta_dot and the diagnostics of the metric used to get it.
    `truncatedCount` is the number of eigendirections the update dropped."""
    thetaDot: np.ndarray
    eigenvalues: np.ndarray
    truncatedCount: int
    stalled: bool = False


@dataclasses.dataclass(frozen=True)
class StepReport(object):
    """Diagnostics at the start of iteration `iteration`; energy, charge and
    ratio describe the state before the step is taken."""
    iteration: int
    energy: float
    delta2: float
    varH: float
    eigenvalues: np.ndarray
    conditionNumber: float
    truncatedCount: int
    charge: float
    ratio: Optional[float] = None

    @property
    def lambdaMin(self):
        return float(self.eigenvalues[0])

    @property
    def lambdaMax(self):
        return float(self.eigenvalues[-1])


def conditionNumber(eigenvalues):
    """max |lambda| / min |lambda|; infinite for a singular matrix"""
    mags = np.abs(np.asarray(eigenvalues, dtype=np.float64))
    smallest = float(np.min(mags))
    return math.inf if smallest == 0.0 else float(np.max(mags)) / smallest


def _energyAndVariance(psi, hpsi):
    energy = float(np.vdot(psi, hpsi).real)
    hnorm2 = float(np.vdot(hpsi, hpsi).real)
    varH = hnorm2 - energy * energy
    if varH < -VARIANCE_CLAMP * max(1.0, hnorm2):
        raise RvqiteException("negative energy variance {}".format(varH))
    return energy, max(varH, 0.0)


def _symmetrize(mat):
    return 0.5 * (mat + mat.T)


def assemble(circuit, params, hamiltonian, mode=DerivativeMode.ANALYTIC):
    """Build the McLachlan system at `params`.  In analytic mode all
    derivative states come from one forward sweep and A is the real part of
    their Gram matrix.  In parameter-shift mode C comes from energy shifts
    and A from ancilla overlaps."""
    mode = DerivativeMode(mode)
    if hamiltonian.qubitCount != circuit.qubitCount:
        raise DimensionError("Hamiltonian has {} qubits, circuit has {}".format(hamiltonian.qubitCount, circuit.qubitCount))
    if mode is DerivativeMode.ANALYTIC:
        psi, rows = derivativeStates(circuit, params)
        hpsi = hamiltonian.applyArray(psi.amplitudes)
        A = _symmetrize(np.real(np.conj(rows) @ rows.T))
        C = np.real(np.conj(rows) @ hpsi)
    else:
        psi = circuit.evaluate(params)
        hpsi = hamiltonian.applyArray(psi.amplitudes)
        A = ancillaA(circuit, params)
        C = shiftRuleC(circuit, params, hamiltonian)
    energy, varH = _energyAndVariance(psi.amplitudes, hpsi)
    return McLachlanSystem(A, C, varH, energy)


def regularizedUpdate(system, epsilon):
    """Solve A theta_dot = -C on the eigendirections of A with eigenvalue
    > epsilon, zeroing the rest.  Stalled when nothing survives."""
    eigvals, eigvecs = scipy.linalg.eigh(system.A)
    keep = eigvals > epsilon
    coeffs = eigvecs.T @ system.C
    g = np.zeros(len(eigvals))
    g[keep] = -coeffs[keep] / eigvals[keep]
    return UpdateResult(eigvecs @ g, eigvals, int(np.count_nonzero(~keep)), stalled=not np.any(keep))


def pseudoInverseUpdate(system, rcond=1e-15):
    "theta_dot = -pinv(A) C, singular values below rcond * sigma_max dropped"
    thetaDot = -(scipy.linalg.pinv(system.A, rtol=rcond) @ system.C)
    eigvals = scipy.linalg.eigh(system.A, eigvals_only=True)
    return UpdateResult(thetaDot, eigvals, 0)


def gradientUpdate(system):
    "theta_dot = -2 C, the negative energy gradient"
    eigvals = scipy.linalg.eigh(system.A, eigvals_only=True)
    return UpdateResult(-2.0 * system.C, eigvals, 0)


def computeUpdate(system, config):
    if config.updateRule is UpdateRule.REGULARIZED:
        return regularizedUpdate(system, config.epsilon)
    elif config.updateRule is UpdateRule.PSEUDO_INVERSE:
        return pseudoInverseUpdate(system, config.rcond)
    else:
        return gradientUpdate(system)


def mclachlanDelta2(system, thetaDot):
    """Squared McLachlan distance theta_dot A theta_dot + 2 theta_dot C +
    Var(H).  Small negative values are rounding and clamp to zero."""
    thetaDot = np.asarray(thetaDot, dtype=np.float64)
    if thetaDot.shape != system.C.shape:
        raise DimensionError("theta_dot shape {} does not match {} parameters".format(thetaDot.shape, len(system.C)))
    delta2 = float(thetaDot @ system.A @ thetaDot + 2.0 * (thetaDot @ system.C) + system.varH)
    if delta2 < -DELTA2_CLAMP:
        raise SolverException(None, "McLachlan distance is negative ({}); system assembly is inconsistent".format(delta2))
    return max(delta2, 0.0)


def _checkShiftable(circuit):
    for gate in circuit.gates:
        terms = [term for term, sign in gate.generator]
        for i in range(len(terms)):
            for j in range(i + 1, len(terms)):
                if not terms[i].commutesWith(terms[j]):
                    raise RvqiteException("gate {} generator terms do not commute, shift rules do not apply".format(gate))


def _evaluateTermShifted(circuit, params, position, termIndex, shift):
    """Circuit amplitudes with the angle of one generator term of the gate
    at `position` moved by `shift`."""
    n = circuit.qubitCount
    psi = circuit.initialState().amplitudes
    for pos, gate in enumerate(circuit.gates):
        value = params[gate.paramIndex]
        if pos != position:
            psi = gate.applyArray(psi, value, n)
        else:
            for t, (term, sign) in enumerate(gate.generator):
                angle = sign * (value + shift) if t == termIndex else sign * value
                psi = np.cos(angle) * psi + (1j * np.sin(angle)) * term.applyString(psi, n)
    return psi


def _termInsertions(circuit):
    "(paramIndex, position, termIndex) for every generator term in the circuit"
    return [(gate.paramIndex, pos, t) for pos, gate in enumerate(circuit.gates) for t in range(len(gate.generator))]


def shiftRuleC(circuit, params, hamiltonian):
    """C by the parameter-shift rule.  For a term exp(i s v P) the energy is
    sinusoidal in v with frequency 2, so E(v + pi/4) - E(v - pi/4) is the
    full derivative of that term's dependence.  C is half the energy
    gradient, summed over every term bound to a parameter."""
    params = circuit.checkParams(params)
    _checkShiftable(circuit)

    def energyOf(amps):
        return float(np.vdot(amps, hamiltonian.applyArray(amps)).real)

    grad = np.zeros(circuit.parameterCount)
    for paramIndex, pos, t in _termInsertions(circuit):
        plus = energyOf(_evaluateTermShifted(circuit, params, pos, t, math.pi / 4.0))
        minus = energyOf(_evaluateTermShifted(circuit, params, pos, t, -math.pi / 4.0))
        grad[paramIndex] += plus - minus
    return 0.5 * grad


def ancillaA(circuit, params):
    """A from ancilla overlaps of pi/2-shifted circuits.  A pi/2 shift of a
    term exp(i s v P) inserts i s P exactly, so each shifted state is one
    term of a derivative state and <Z_ancilla> of the pair gives the real
    part of their overlap."""
    params = circuit.checkParams(params)
    _checkShiftable(circuit)
    n = circuit.qubitCount
    insertions = _termInsertions(circuit)
    shifted = [StateVector(n, _evaluateTermShifted(circuit, params, pos, t, math.pi / 2.0))
               for _, pos, t in insertions]
    zAnc = ancillaZ(n)
    A = np.zeros((circuit.parameterCount, circuit.parameterCount))
    for a in range(len(insertions)):
        for b in range(a, len(insertions)):
            overlap = zAnc.expectation(withAncilla(shifted[a], shifted[b]))
            i, j = insertions[a][0], insertions[b][0]
            A[i, j] += overlap
            if a != b:
                A[j, i] += overlap
    return _symmetrize(A)


@dataclasses.dataclass(frozen=True)
class SpectrumStatistics(object):
    """Pooled eigenvalues of sampled metrics, split by sign, with histograms
    of log10 |lambda| and the condition number of each sample."""
    eigenvalues: np.ndarray
    negative: np.ndarray
    positive: np.ndarray
    conditionNumbers: list
    negativeHistogram: tuple
    positiveHistogram: tuple


def _logHistogram(values, bins):
    if len(values) == 0:
        return (np.zeros(0, dtype=np.int64), np.zeros(0))
    return np.histogram(np.log10(np.abs(values)), bins=bins)


def spectrumStatistics(samples, bins=30):
    """Statistics of the metric spectra of McLachlanSystems or plain
    matrices.  Exactly zero eigenvalues are counted in neither sign
    histogram."""
    if len(samples) == 0:
        raise ParameterError("spectrum statistics require at least one sample")
    spectra = []
    for sample in samples:
        mat = sample.A if isinstance(sample, McLachlanSystem) else np.asarray(sample, dtype=np.float64)
        if np.max(np.abs(mat - mat.T)) > SYMMETRY_TOL:
            raise ParameterError("metric sample is not symmetric")
        spectra.append(scipy.linalg.eigh(mat, eigvals_only=True))
    pooled = np.concatenate(spectra)
    negative = pooled[pooled < 0.0]
    positive = pooled[pooled > 0.0]
    return SpectrumStatistics(pooled, negative, positive,
                              [conditionNumber(s) for s in spectra],
                              _logHistogram(negative, bins), _logHistogram(positive, bins))


def sampleSystems(circuit, hamiltonian, count, rng):
    "McLachlan systems at `count` uniformly random parameter points"
    return [assemble(circuit, randomParameters(circuit.parameterCount, rng), hamiltonian)
            for _ in range(count)]


class State(enum.IntEnum):
    """Current state of an evolution"""
    PREINIT = 0
    RUNNING = 1
    FINISHED = 2


class StopReason(enum.Enum):
    MAX_ITERS = "max_iters"
    CONVERGED = "converged"
    STALLED = "stalled"


@dataclasses.dataclass
class EvolutionResult(object):
    """Outcome of a run: the per-iteration reports, final parameters, and
    the energy, charge and ratio of the final state."""
    reports: list
    params: np.ndarray
    energy: float
    charge: float
    ratio: Optional[float]
    stopReason: StopReason
    energyIncreases: int = 0

    @property
    def iterations(self):
        return len(self.reports)

    @property
    def finalDelta2(self):
        return self.reports[-1].delta2 if len(self.reports) > 0 else math.nan


class Evolution(Loggable):
    """Imaginary-time evolution of a circuit under a Hamiltonian.

    If initialParams is None, parameters are drawn uniformly on [-pi, pi]
    from config.seed.  If spectrumBounds (E_min, E_max) is given, each report
    carries the Ratio.  The charge reported is <1/2 sum Z_j>.

    The logger argument can be the name of a logger or a logger object.  If
    none, default is used.
    """

    def __init__(self, circuit, initialParams, hamiltonian, config=None, *,
                 spectrumBounds=None, description=None, logger=None, logLevel=None):
        self.lock = RLock()
        self.circuit = circuit
        self.hamiltonian = hamiltonian
        self.config = config if config is not None else VqiteConfig()
        self.spectrumBounds = spectrumBounds
        self.description = description
        self.chargeOp = chargeOperator(circuit.qubitCount)
        if initialParams is None:
            initialParams = randomParameters(circuit.parameterCount, np.random.default_rng(self.config.seed))
        self.params = circuit.checkParams(initialParams).copy()
        self.reports = []
        self.energyIncreases = 0
        self.stopReason = None
        self.state = State.PREINIT
        self._init_logging(logger, logLevel)

    def __str__(self):
        desc = self.description if self.description is not None else str(self.circuit)
        return "evolve {} {}".format(desc, self.config.describe())

    @property
    def iteration(self):
        return len(self.reports)

    @property
    def finished(self):
        return self.state is State.FINISHED

    def _ratio(self, energy):
        if self.spectrumBounds is None:
            return None
        return ratioFromBounds(self.spectrumBounds[0], self.spectrumBounds[1], energy).ratio

    def _charge(self):
        return self.chargeOp.expectation(self.circuit.evaluate(self.params))

    def _checkEnergy(self, report):
        if len(self.reports) == 0:
            return
        rise = report.energy - self.reports[-1].energy
        if rise > self.config.energySlack:
            self.energyIncreases += 1
            self._log(logging.WARNING, "energy increased by {:.3g} at iteration {}".format(rise, report.iteration))

    def _step_guts(self):
        iteration = len(self.reports)
        system = assemble(self.circuit, self.params, self.hamiltonian, self.config.derivativeMode)
        update = computeUpdate(system, self.config)
        try:
            delta2 = mclachlanDelta2(system, update.thetaDot)
        except SolverException as ex:
            raise SolverException(str(self), ex.reason, iteration)
        report = StepReport(iteration, system.energy, delta2, system.varH, update.eigenvalues,
                            conditionNumber(update.eigenvalues),
                            int(np.count_nonzero(update.eigenvalues <= self.config.epsilon)),
                            self._charge(), self._ratio(system.energy))
        self._checkEnergy(report)
        self.reports.append(report)
        newParams = self.params + self.config.stepSize * update.thetaDot
        if not np.all(np.isfinite(newParams)):
            raise SolverException(str(self), "non-finite parameters after update", iteration)
        self.params = newParams
        if update.stalled:
            return StopReason.STALLED
        if max(delta2, system.varH) < self.config.stopDelta2:
            return StopReason.CONVERGED
        return None

    def _log_failure(self, ex):
        self._log(logging.ERROR, "failure", ex)

    def step(self):
        """Take one step, returning the StepReport of the state it started
        from."""
        with self.lock:
            if self.state is State.FINISHED:
                raise RvqiteException("evolution has already finished")
            self.state = State.RUNNING
            try:
                reason = self._step_guts()
            except Exception as ex:
                self.state = State.FINISHED
                try:
                    self._log_failure(ex)
                except Exception as ex2:
                    _warn_error_during_error_handling("error logging evolution failure", ex2)
                raise
            if reason is not None:
                self.stopReason = reason
            return self.reports[-1]

    def _finish(self):
        self.state = State.FINISHED
        if self.stopReason is None:
            self.stopReason = StopReason.MAX_ITERS
        self._log(self.logLevel, "success")

    def result(self):
        "summary of the evolution so far"
        with self.lock:
            psi = self.circuit.evaluate(self.params)
            energy = self.hamiltonian.expectation(psi)
            return EvolutionResult(list(self.reports), self.params.copy(), energy,
                                   self.chargeOp.expectation(psi), self._ratio(energy),
                                   self.stopReason if self.stopReason is not None else StopReason.MAX_ITERS,
                                   self.energyIncreases)

    def run(self):
        """Step until maxIters, until both Delta^2 and Var(H) fall below
        stopDelta2, or until the update stalls."""
        with self.lock:
            if self.state is not State.PREINIT:
                raise RvqiteException("evolution has already been started")
            self._log(self.logLevel, "start")
            while (self.iteration < self.config.maxIters) and (self.stopReason is None):
                self.step()
            self._finish()
            return self.result()


def evolve(circuit, initialParams, hamiltonian, config=None, **kwargs):
    "run an Evolution to completion and return its EvolutionResult"
    return Evolution(circuit, initialParams, hamiltonian, config, **kwargs).run()
