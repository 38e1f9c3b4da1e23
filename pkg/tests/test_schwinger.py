import unittest
import sys
import os
import math
import itertools
import numpy as np
import scipy.linalg
if __name__ == '__main__':
    sys.path.insert(0, os.path.normpath(os.path.dirname(sys.argv[0])) + "/../lib")
    from testCaseBase import TestCaseBase
else:
    from .testCaseBase import TestCaseBase
from rvqite import SchwingerParams, StateVector, buildHamiltonian, chargeOperator, observables, ParameterError, DimensionError, NormalizationError
from rvqite.ansatz import vacuumBitstring, chargedBitstring

GOLDEN = math.sqrt(5.0)


class SchwingerParamsTests(TestCaseBase):
    def testCouplings(self):
        params = SchwingerParams(4, aG=0.5)
        self.assertEqual(params.J, 0.25)
        self.assertEqual(params.w, 1.0)
        self.assertEqual(params.numLinks, 3)
        self.assertEqual(params.replace(lastLink=True).numLinks, 4)

    def testThetaUnits(self):
        params = SchwingerParams.fromThetaOverTwoPi(4, -0.2)
        self.assertAlmostEqual(params.theta, -0.4 * math.pi)
        self.assertAlmostEqual(params.thetaOverTwoPi, -0.2)

    def testOddSites(self):
        with self.assertRaises(ParameterError):
            SchwingerParams(3)

    def testSpacing(self):
        with self.assertRaises(ParameterError):
            SchwingerParams(4, aG=0.0)

    def testNotFinite(self):
        with self.assertRaises(ParameterError):
            SchwingerParams(4, muOverG=math.inf)


class HamiltonianTests(TestCaseBase):
    def testTwoSiteDense(self):
        # m = 0: diagonal (0.5, 0, 0.5, 0), hopping couples |01> and |10>
        dense = buildHamiltonian(SchwingerParams(2, mOverG=0.0)).toDense()
        expect = np.zeros((4, 4))
        expect[0, 0] = expect[2, 2] = 0.5
        expect[1, 2] = expect[2, 1] = 0.5
        self.assertArrayNear(dense, expect, atol=1e-14)

    def testTwoSiteSpectrum(self):
        eigvals = scipy.linalg.eigvalsh(buildHamiltonian(SchwingerParams(2, mOverG=0.0)).toDense())
        self.assertArrayNear(eigvals, [(1.0 - GOLDEN) / 4.0, 0.0, 0.5, (1.0 + GOLDEN) / 4.0], atol=1e-12)

    def testConstantTerm(self):
        self.assertAlmostEqual(buildHamiltonian(SchwingerParams(2, mOverG=0.0)).constant(), 0.25)

    def testSimplified(self):
        self.assertTrue(buildHamiltonian(SchwingerParams(6, 0.7, 1.1, 0.3)).isSimplified())

    def testConservesCharge(self):
        for n, m, theta, mu, lastLink in itertools.product((2, 4, 8), (-1.0, 0.5), (0.0, -1.3),
                                                          (0.0, 0.8), (False, True)):
            ham = buildHamiltonian(SchwingerParams(n, m, theta, mu, lastLink=lastLink))
            self.assertLess(ham.commutatorNorm(chargeOperator(n)), 1e-12)

    def testChemicalPotential(self):
        base = SchwingerParams(4, 0.6, 0.9)
        diff = buildHamiltonian(base.replace(muOverG=0.3)).toDense() - buildHamiltonian(base).toDense()
        self.assertArrayNear(diff, -0.3 * chargeOperator(4).toDense(), atol=1e-12)

    def testLastLink(self):
        # the link after the last site carries the total charge
        base = SchwingerParams.fromThetaOverTwoPi(4, 0.15, mOverG=0.6, aG=0.8)
        diff = buildHamiltonian(base.replace(lastLink=True)).toDense() - buildHamiltonian(base).toDense()
        shifted = chargeOperator(4).toDense() + 0.15 * np.eye(16)
        self.assertArrayNear(diff, base.J * shifted @ shifted, atol=1e-12)

    def testHermitian(self):
        dense = buildHamiltonian(SchwingerParams(6, 0.4, 2.0, -0.5, 1.3)).toDense()
        self.assertArrayNear(dense, dense.conj().T, atol=1e-14)


class ObservablesTests(TestCaseBase):
    def testVacuum(self):
        obs = observables(StateVector.basis(vacuumBitstring(4)), SchwingerParams(4))
        self.assertEqual(obs.charge, 0.0)
        self.assertAlmostEqual(obs.chiralCondensate, -0.5)
        self.assertAlmostEqual(obs.electricField, 0.0)

    def testVacuumBackgroundField(self):
        obs = observables(StateVector.basis(vacuumBitstring(4)), SchwingerParams.fromThetaOverTwoPi(4, -0.2))
        self.assertAlmostEqual(obs.electricField, -0.2)

    def testCharged(self):
        obs = observables(StateVector.basis(chargedBitstring(4, 1)), SchwingerParams(4))
        self.assertAlmostEqual(obs.charge, 1.0)
        self.assertAlmostEqual(obs.electricField, 1.0)
        obs = observables(StateVector.basis(chargedBitstring(4, -1)), SchwingerParams(4))
        self.assertAlmostEqual(obs.charge, -1.0)

    def testChargeExpectation(self):
        psi = StateVector.basis(chargedBitstring(6, -2))
        self.assertAlmostEqual(chargeOperator(6).expectation(psi), -2.0)

    def testSizeMismatch(self):
        with self.assertRaises(DimensionError):
            observables(StateVector.basis((0, 0)), SchwingerParams(4))

    def testUnnormalized(self):
        psi = StateVector.basis(vacuumBitstring(4))
        with self.assertRaises(NormalizationError):
            observables(psi.derived(2.0 * psi.amplitudes), SchwingerParams(4))


def suite():
    ts = unittest.TestSuite()
    ts.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(SchwingerParamsTests))
    ts.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(HamiltonianTests))
    ts.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(ObservablesTests))
    return ts


if __name__ == '__main__':
    unittest.main()
