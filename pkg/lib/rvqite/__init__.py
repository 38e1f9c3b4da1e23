"""
Regularized variational quantum imaginary-time evolution for the lattice
Schwinger model with a theta term and chemical potential.
"""
from rvqite.exceptions import (RvqiteException, DimensionError, NormalizationError, SizeCapError,
                               ParameterError, SectorError, SolverException, ConfigException)
from rvqite.loggers import setDefaultLogger, getDefaultLogger, setDefaultLogLevel, getDefaultLogLevel, setDefaultLogging
from rvqite.pauli import PauliTerm, PauliSum
from rvqite.statevector import StateVector, Gate, GateKind, derivativeState, derivativeStates
from rvqite.schwinger import SchwingerParams, Observables, buildHamiltonian, chargeOperator, observables
from rvqite.ansatz import AnsatzSpec, Circuit, buildCircuit, randomParameters
from rvqite.vqite import (VqiteConfig, UpdateRule, DerivativeMode, McLachlanSystem, StepReport,
                          Evolution, EvolutionResult, assemble, regularizedUpdate, pseudoInverseUpdate,
                          gradientUpdate, mclachlanDelta2, shiftRuleC, ancillaA, spectrumStatistics, evolve)
from rvqite.exact import (SectorEnergy, RatioResult, fullSpectrum, sectorLowest, sectorSpectrum, ratio,
                          levelCrossings, hierarchyViolations)
from rvqite.boundary import Axis, BoundaryQuery, BoundaryRoot, NoRoot, fQ, bisect, traceBoundary

__version__ = "1.0.0"


def groundState(params, depth=5, config=None, charge=None, logger=None, logLevel=None):
    """Evolve the Hamiltonian Variational Ansatz for `params` from seeded
    random parameters and return the EvolutionResult, with Ratio attached.
    `charge` selects a fixed-charge start instead of the free-charge one.

    The logger argument can be the name of a logger or a logger object.  If
    none, default is used.
    """
    circuit = buildCircuit(AnsatzSpec(params.numSites, depth, charge))
    eigvals = fullSpectrum(params)
    return Evolution(circuit, None, buildHamiltonian(params), config,
                     spectrumBounds=(float(eigvals[0]), float(eigvals[-1])),
                     logger=logger, logLevel=logLevel).run()


# n.b. all of the library API functions and classes need to be explicitly
# included in the docs/library.rst files
__all__ = (RvqiteException.__name__, DimensionError.__name__, NormalizationError.__name__,
           SizeCapError.__name__, ParameterError.__name__, SectorError.__name__,
           SolverException.__name__, ConfigException.__name__,
           setDefaultLogger.__name__, getDefaultLogger.__name__,
           setDefaultLogLevel.__name__, getDefaultLogLevel.__name__, setDefaultLogging.__name__,
           PauliTerm.__name__, PauliSum.__name__,
           StateVector.__name__, Gate.__name__, GateKind.__name__,
           derivativeState.__name__, derivativeStates.__name__,
           SchwingerParams.__name__, Observables.__name__, buildHamiltonian.__name__,
           chargeOperator.__name__, observables.__name__,
           AnsatzSpec.__name__, Circuit.__name__, buildCircuit.__name__, randomParameters.__name__,
           VqiteConfig.__name__, UpdateRule.__name__, DerivativeMode.__name__,
           McLachlanSystem.__name__, StepReport.__name__, Evolution.__name__, EvolutionResult.__name__,
           assemble.__name__, regularizedUpdate.__name__, pseudoInverseUpdate.__name__,
           gradientUpdate.__name__, mclachlanDelta2.__name__, shiftRuleC.__name__, ancillaA.__name__,
           spectrumStatistics.__name__, evolve.__name__,
           SectorEnergy.__name__, RatioResult.__name__, fullSpectrum.__name__, sectorLowest.__name__,
           sectorSpectrum.__name__, ratio.__name__, levelCrossings.__name__, hierarchyViolations.__name__,
           Axis.__name__, BoundaryQuery.__name__, BoundaryRoot.__name__, NoRoot.__name__,
           fQ.__name__, bisect.__name__, traceBoundary.__name__,
           groundState.__name__)
