import unittest
import sys
import os
import numpy as np
if __name__ == '__main__':
    sys.path.insert(0, os.path.normpath(os.path.dirname(sys.argv[0])) + "/../lib")
    from testCaseBase import TestCaseBase
else:
    from .testCaseBase import TestCaseBase
from rvqite import PauliTerm, PauliSum, StateVector, RvqiteException, DimensionError, ParameterError, SizeCapError, NormalizationError
from rvqite.pauli import multiplySite

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


class SiteProductTests(TestCaseBase):
    def testCyclic(self):
        self.assertEqual(multiplySite("X", "Y"), (1j, "Z"))
        self.assertEqual(multiplySite("Y", "Z"), (1j, "X"))
        self.assertEqual(multiplySite("Z", "X"), (1j, "Y"))

    def testAntiCyclic(self):
        self.assertEqual(multiplySite("Y", "X"), (-1j, "Z"))
        self.assertEqual(multiplySite("X", "Z"), (-1j, "Y"))

    def testIdentity(self):
        self.assertEqual(multiplySite("I", "Y"), (1.0, "Y"))
        self.assertEqual(multiplySite("Z", "I"), (1.0, "Z"))
        self.assertEqual(multiplySite("X", "X"), (1.0, "I"))


class PauliTermTests(TestCaseBase):
    def testParse(self):
        term = PauliTerm.parse("Z7 X3 Y4", 0.5)
        self.assertEqual(term.factors, ((3, "X"), (4, "Y"), (7, "Z")))
        self.assertEqual(term.label(), "X3 Y4 Z7")
        self.assertEqual(term.maxSite, 7)

    def testIdentity(self):
        term = PauliTerm.parse("I", 2.0)
        self.assertTrue(term.isIdentity)
        self.assertEqual(term.label(), "I")
        self.assertEqual(term.maxSite, -1)

    def testDuplicateSite(self):
        with self.assertRaises(ParameterError):
            PauliTerm(1.0, [(0, "X"), (0, "Z")])

    def testBadAxis(self):
        with self.assertRaises(ParameterError):
            PauliTerm(1.0, [(0, "Q")])

    def testImmutable(self):
        term = PauliTerm(1.0, [(0, "X")])
        with self.assertRaises(AttributeError):
            term.coefficient = 2.0

    def testCommutes(self):
        xx = PauliTerm.parse("X0 X1")
        self.assertTrue(xx.commutesWith(PauliTerm.parse("Y0 Y1")))
        self.assertTrue(xx.commutesWith(PauliTerm.parse("Z0 Z1")))
        self.assertFalse(xx.commutesWith(PauliTerm.parse("Z0")))

    def testMultiply(self):
        phase, prod = PauliTerm.parse("X0 Z1", 2.0).multiply(PauliTerm.parse("Y0 Z1", 3.0))
        self.assertEqual(phase, 1j)
        self.assertEqual(prod.factors, ((0, "Z"),))
        self.assertEqual(prod.coefficient, 6.0)


class PauliSumTests(TestCaseBase):
    def testParseText(self):
        text = "# two-site\n0.5  X0 X1\n\n-1.25  Z1   # field\n3  I\n"
        s = PauliSum.parse(text, 2)
        self.assertEqual(len(s), 3)
        self.assertEqual(s.constant(), 3.0)
        self.assertEqual(PauliSum.parse(s.toText(), 2).toText(), s.toText())

    def testSiteOutOfRange(self):
        with self.assertRaises(DimensionError):
            PauliSum(2, [PauliTerm.parse("Z2")])

    def testQubitMismatch(self):
        with self.assertRaises(DimensionError):
            PauliSum.identity(2) + PauliSum.identity(3)

    def testSimplify(self):
        s = PauliSum.parse("1 X0\n2 X0\n1e-14 Z1\n-1 Y0 Y1\n1 Y0 Y1", 2).simplify()
        self.assertTrue(s.isSimplified())
        self.assertEqual(len(s), 1)
        self.assertEqual(s.terms[0].label(), "X0")
        self.assertEqual(s.terms[0].coefficient, 3.0)

    def testSquare(self):
        # (Z0 + 1)^2 = 2 + 2 Z0
        s = PauliSum.parse("1 Z0\n1 I", 2)
        sq = (s * s).simplify()
        self.assertArrayNear(sq.toDense(), 2.0 * np.eye(4) + 2.0 * np.kron(I2, Z))

    def testImaginaryProduct(self):
        with self.assertRaises(RvqiteException):
            PauliSum.single(1, "X", 0) * PauliSum.single(1, "Z", 0)

    def testDenseLittleEndian(self):
        s = PauliSum.parse("1 X0 Z1", 2)
        self.assertArrayNear(s.toDense(), np.kron(Z, X))
        s = PauliSum.parse("1 Y2", 3)
        self.assertArrayNear(s.toDense(), np.kron(Y, np.kron(I2, I2)))

    def testDenseCap(self):
        with self.assertRaises(SizeCapError):
            PauliSum.identity(15).toDense()
        with self.assertRaises(SizeCapError):
            PauliSum.identity(4).toDense(maxQubits=3)

    def testApplyMatchesDense(self):
        s = PauliSum.parse("0.3 X0 Y1\n-0.7 Z0 Z2\n0.2 Y0 Y1 X2\n1.5 I", 3)
        psi = StateVector.random(3, np.random.default_rng(3))
        self.assertArrayNear(s.apply(psi).amplitudes, s.toDense() @ psi.amplitudes, atol=1e-12)

    def testApplyBatched(self):
        s = PauliSum.parse("0.3 X0 Y1\n-0.7 Z1", 2)
        rows = np.random.default_rng(5).normal(size=(3, 4)) + 0j
        out = s.applyArray(rows)
        for r in range(3):
            self.assertArrayNear(out[r], s.toDense() @ rows[r], atol=1e-12)

    def testExpectation(self):
        psi = StateVector.basis((1, 0))
        self.assertEqual(PauliSum.single(2, "Z", 0).expectation(psi), -1.0)
        self.assertEqual(PauliSum.single(2, "Z", 1).expectation(psi), 1.0)
        self.assertEqual(PauliSum.single(2, "X", 0).expectation(psi), 0.0)

    def testExpectationUnnormalized(self):
        psi = StateVector.basis((0, 0))
        with self.assertRaises(NormalizationError):
            PauliSum.identity(2).expectation(psi.derived(2.0 * psi.amplitudes))

    def testCommutator(self):
        comm = PauliSum.single(1, "X", 0).commutator(PauliSum.single(1, "Z", 0))
        self.assertEqual(comm, {((0, "Y"),): -2j})
        self.assertAlmostEqual(PauliSum.single(1, "X", 0).commutatorNorm(PauliSum.single(1, "Z", 0)), 2.0)

    def testCommutatorMatchesDense(self):
        a = PauliSum.parse("0.5 X0 X1\n0.5 Y0 Y1\n0.3 Z0", 2)
        b = PauliSum.parse("1 Z0\n-0.2 X1", 2)
        da, db = a.toDense(), b.toDense()
        frob = np.linalg.norm(da @ db - db @ da)
        self.assertAlmostEqual(a.commutatorNorm(b), frob / 2.0, places=12)

    def testHoppingConservesZ(self):
        hop = PauliSum.parse("1 X0 X1\n1 Y0 Y1", 2)
        self.assertEqual(hop.commutatorNorm(PauliSum.parse("1 Z0\n1 Z1", 2)), 0.0)


def suite():
    ts = unittest.TestSuite()
    ts.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(SiteProductTests))
    ts.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(PauliTermTests))
    ts.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(PauliSumTests))
    return ts


if __name__ == '__main__':
    unittest.main()
