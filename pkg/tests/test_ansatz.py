import unittest
import sys
import os
import numpy as np
if __name__ == '__main__':
    sys.path.insert(0, os.path.normpath(os.path.dirname(sys.argv[0])) + "/../lib")
    from testCaseBase import TestCaseBase
else:
    from .testCaseBase import TestCaseBase
from rvqite import AnsatzSpec, Circuit, Gate, GateKind, StateVector, buildCircuit, randomParameters, chargeOperator
from rvqite import ParameterError, DimensionError
from rvqite.ansatz import vacuumBitstring, chargedBitstring, bitstringCharge
from rvqite.exact import sectorIndices
from rvqite.statevector import applyGate


class BitstringTests(TestCaseBase):
    def testVacuum(self):
        self.assertEqual(vacuumBitstring(4), (1, 0, 1, 0))
        self.assertEqual(bitstringCharge(vacuumBitstring(10)), 0)

    def testCharged(self):
        self.assertEqual(chargedBitstring(4, 1), (0, 0, 1, 0))
        self.assertEqual(chargedBitstring(4, -1), (1, 1, 1, 0))
        self.assertEqual(chargedBitstring(4, 2), (0, 0, 0, 0))
        for q in range(-5, 6):
            self.assertEqual(bitstringCharge(chargedBitstring(10, q)), q)

    def testOverCapacity(self):
        with self.assertRaises(ParameterError):
            chargedBitstring(4, 3)

    def testOddSites(self):
        with self.assertRaises(ParameterError):
            vacuumBitstring(5)


class AnsatzSpecTests(TestCaseBase):
    def testParameterCounts(self):
        self.assertEqual(AnsatzSpec(10, 5, None).parameterCount, 150)
        self.assertEqual(AnsatzSpec(10, 5, 0).parameterCount, 140)
        self.assertEqual(AnsatzSpec(2, 1, 0).parameterCount, 4)
        self.assertEqual(buildCircuit(AnsatzSpec(6, 3, None)).parameterCount, 3 * 16 + 6)

    def testInvalid(self):
        with self.assertRaises(ParameterError):
            AnsatzSpec(3, 1)
        with self.assertRaises(ParameterError):
            AnsatzSpec(4, 0)
        with self.assertRaises(ParameterError):
            AnsatzSpec(4, 1, 3)

    def testDescribe(self):
        self.assertEqual(AnsatzSpec(4, 2, None).describe(), "N=4 p=2 free")
        self.assertEqual(AnsatzSpec(4, 2, -1).describe(), "N=4 p=2 q=-1")


class CircuitTests(TestCaseBase):
    def testLayerOrder(self):
        circuit = buildCircuit(AnsatzSpec(4, 1, 0))
        self.assertEqual([str(g) for g in circuit.gates],
                         ["RZ(0)[0]", "RZ(1)[1]", "RZ(2)[2]", "RZ(3)[3]",
                          "RZZ(1,2)[5]", "RXXYY(1,2)[8]",
                          "RZZ(0,1)[4]", "RZZ(2,3)[6]", "RXXYY(0,1)[7]", "RXXYY(2,3)[9]"])
        self.assertEqual(circuit.initialBits, (1, 0, 1, 0))
        self.assertEqual([str(g) for g in circuit.gatesFor(5)], ["RZZ(1,2)[5]"])

    def testFreeChargeStart(self):
        circuit = buildCircuit(AnsatzSpec(4, 2, None))
        self.assertEqual(circuit.initialBits, (0, 0, 0, 0))
        rx = circuit.gates[:4]
        self.assertTrue(all(g.kind is GateKind.RX for g in rx))
        self.assertEqual([g.paramIndex for g in rx], [20, 21, 22, 23])

    def testChargePreserved(self):
        rng = np.random.default_rng(9)
        for q in (-2, -1, 0, 1, 2):
            circuit = buildCircuit(AnsatzSpec(6, 2, q))
            psi = circuit.evaluate(randomParameters(circuit.parameterCount, rng))
            self.assertAlmostEqual(chargeOperator(6).expectation(psi), q, places=12)
            inside = np.sum(psi.probabilities()[sectorIndices(6, q)])
            self.assertAlmostEqual(inside, 1.0, places=12)

    def testFreeChargeMixesSectors(self):
        circuit = buildCircuit(AnsatzSpec(4, 1, None))
        params = np.zeros(circuit.parameterCount)
        params[-4:] = np.pi / 4.0
        psi = circuit.evaluate(params)
        self.assertAlmostEqual(chargeOperator(4).expectation(psi), 0.0, places=12)
        self.assertLess(np.sum(psi.probabilities()[sectorIndices(4, 0)]), 0.5)

    def testZeroParamsIsInitialState(self):
        circuit = buildCircuit(AnsatzSpec(4, 2, 1))
        psi = circuit.evaluate(np.zeros(circuit.parameterCount))
        self.assertAlmostEqual(psi.fidelity(circuit.initialState()), 1.0, places=14)

    def testWrongParameterCount(self):
        circuit = buildCircuit(AnsatzSpec(4, 1, 0))
        with self.assertRaises(DimensionError):
            circuit.evaluate(np.zeros(circuit.parameterCount + 1))

    def testUnboundParameter(self):
        with self.assertRaises(ParameterError):
            Circuit((0, 0), [Gate(GateKind.RZ, (0,), 0)], 2)

    def testRandomParameters(self):
        values = randomParameters(1000, np.random.default_rng(0))
        self.assertEqual(values.shape, (1000,))
        self.assertTrue(np.all(np.abs(values) <= np.pi))
        self.assertArrayNear(values, randomParameters(1000, np.random.default_rng(0)), atol=0.0)


class PeriodicityTests(TestCaseBase):
    "random-parameter properties of the layer gates"

    def _layerIndices(self, spec):
        n, lpc = spec.numSites, spec.layerParameterCount
        alpha = [layer * lpc + i for layer in range(spec.depth) for i in range(n)]
        gamma = [layer * lpc + n + j for layer in range(spec.depth) for j in range(n - 1)]
        beta = [layer * lpc + 2 * n - 1 + j for layer in range(spec.depth) for j in range(n - 1)]
        return alpha, gamma, beta

    def _shifted(self, params, index, shift):
        params = params.copy()
        params[index] += shift
        return params

    def testAlphaGammaPeriod(self):
        spec = AnsatzSpec(4, 2, None)
        circuit = buildCircuit(spec)
        rng = np.random.default_rng(21)
        alpha, gamma, _ = self._layerIndices(spec)
        for _ in range(3):
            params = randomParameters(circuit.parameterCount, rng)
            psi = circuit.evaluate(params)
            for index in alpha + gamma:
                shifted = circuit.evaluate(self._shifted(params, index, 2.0 * np.pi))
                self.assertArrayNear(shifted.amplitudes, psi.amplitudes, atol=1e-10)
                # a half period is a global sign
                half = circuit.evaluate(self._shifted(params, index, np.pi))
                self.assertAlmostEqual(half.fidelity(psi), 1.0, places=12)

    def testBetaPeriod(self):
        spec = AnsatzSpec(4, 2, 0)
        circuit = buildCircuit(spec)
        rng = np.random.default_rng(22)
        _, _, beta = self._layerIndices(spec)
        for _ in range(3):
            params = randomParameters(circuit.parameterCount, rng)
            psi = circuit.evaluate(params)
            for index in beta:
                shifted = circuit.evaluate(self._shifted(params, index, np.pi))
                self.assertArrayNear(shifted.amplitudes, psi.amplitudes, atol=1e-10)
                self.assertAlmostEqual(shifted.fidelity(psi), 1.0, places=12)

    def testFreeChargeFlipsAll(self):
        circuit = buildCircuit(AnsatzSpec(4, 2, None))
        params = np.zeros(circuit.parameterCount)
        params[-4:] = np.pi / 2.0
        psi = circuit.evaluate(params)
        self.assertAlmostEqual(psi.fidelity(StateVector.basis((1, 1, 1, 1))), 1.0, places=14)
        self.assertAlmostEqual(chargeOperator(4).expectation(psi), -2.0, places=12)

    def testGatesPreserveNorm(self):
        rng = np.random.default_rng(23)
        gates = [Gate(GateKind.RX, (1,), 0), Gate(GateKind.RZ, (2,), 0),
                 Gate(GateKind.RZZ, (0, 1), 0), Gate(GateKind.RXXYY, (1, 2), 0)]
        self.assertEqual({g.kind for g in gates}, set(GateKind))
        for gate in gates:
            for value in rng.uniform(-2.0 * np.pi, 2.0 * np.pi, size=5):
                psi = StateVector.random(3, rng)
                out = applyGate(psi, gate, value)
                self.assertAlmostEqual(out.norm(), 1.0, places=12, msg=str(gate))


def suite():
    ts = unittest.TestSuite()
    ts.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(BitstringTests))
    ts.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(AnsatzSpecTests))
    ts.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(CircuitTests))
    ts.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(PeriodicityTests))
    return ts


if __name__ == '__main__':
    unittest.main()
