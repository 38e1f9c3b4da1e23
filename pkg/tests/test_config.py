import unittest
import sys
import os
import glob
import math
import numpy as np
if __name__ == '__main__':
    sys.path.insert(0, os.path.normpath(os.path.dirname(sys.argv[0])) + "/../lib")
    from testCaseBase import TestCaseBase
else:
    from .testCaseBase import TestCaseBase
from rvqite import ConfigException, UpdateRule
from rvqite.config import RunConfig, loadConfig, DEFAULTS


class DefaultsTests(TestCaseBase):
    def testDefaults(self):
        cfg = loadConfig()
        params = cfg.modelParams()
        self.assertEqual(params.numSites, 10)
        self.assertEqual(params.mOverG, 1.0)
        self.assertEqual(params.theta, 0.0)
        self.assertFalse(params.lastLink)
        spec = cfg.ansatzSpec()
        self.assertEqual(spec.depth, 5)
        self.assertTrue(spec.freeCharge)
        solver = cfg.solverConfig()
        self.assertEqual(solver.epsilon, 1e-6)
        self.assertEqual(solver.seed, 0)
        self.assertEqual(str(cfg), "<defaults>")

    def testSweepGrid(self):
        cfg = RunConfig()
        self.assertEqual(len(cfg.axisValues("theta_over_2pi")), 41)
        self.assertEqual(len(cfg.axisValues("mu_over_g")), 31)
        self.assertEqual(cfg.axisValues("m_over_g")[0], -1.0)
        self.assertEqual(cfg.planeAxes(), ("theta_over_2pi", "mu_over_g"))
        self.assertEqual(len(cfg.spectraThetas()), 401)

    def testFlat(self):
        flat = dict(RunConfig().flat())
        self.assertEqual(flat["model.N"], 10)
        self.assertEqual(flat["solver.update_rule"], "regularized")
        self.assertEqual(len(flat), len(RunConfig().flat()))
        self.assertEqual([k for k, _ in RunConfig().flat()], sorted(flat.keys()))

    def testDefaultsNotShared(self):
        cfg = RunConfig()
        cfg.override("model.N", 4)
        self.assertEqual(DEFAULTS["model"]["N"], 10)
        self.assertEqual(RunConfig().modelParams().numSites, 10)


class OverrideTests(TestCaseBase):
    def testPartialTree(self):
        cfg = RunConfig({"model": {"N": 6, "theta_over_2pi": -0.2}, "solver": {"update_rule": "gradient"}})
        self.assertEqual(cfg.modelParams().numSites, 6)
        self.assertAlmostEqual(cfg.modelParams().theta, -0.4 * math.pi)
        self.assertEqual(cfg.modelParams().mOverG, 1.0)
        self.assertIs(cfg.solverConfig().updateRule, UpdateRule.GRADIENT)
        self.assertIs(cfg.solverConfig(updateRule="pseudo_inverse").updateRule, UpdateRule.PSEUDO_INVERSE)

    def testFixedCharge(self):
        cfg = RunConfig({"model": {"N": 4}, "ansatz": {"init": "fixed", "q": -1}})
        self.assertEqual(cfg.ansatzSpec().charge, -1)
        self.assertEqual(cfg.ansatzSpec(depth=2, charge=1).charge, 1)
        self.assertEqual(cfg.ansatzSpec(depth=2).depth, 2)

    def testOverride(self):
        cfg = RunConfig().override("solver.epsilon", 1e-4).override("seed", None)
        self.assertEqual(cfg.solverConfig().epsilon, 1e-4)
        self.assertEqual(cfg["seed"], 0)

    def testUnknownKey(self):
        with self.assertRaises(ConfigException):
            RunConfig({"model": {"L": 4}})
        with self.assertRaises(ConfigException):
            RunConfig({"plots": True})
        with self.assertRaises(ConfigException):
            RunConfig().override("solver.eps", 1.0)

    def testInvalidValues(self):
        for tree in ({"model": {"N": 5}},
                     {"solver": {"dtau": -0.1}},
                     {"solver": {"update_rule": "newton"}},
                     {"sweep": {"plane": "mu_m"}},
                     {"sweep": {"mu_over_g": {"min": 1.0, "max": -1.0, "points": 5}}},
                     {"sweep": {"theta_over_2pi": {"min": -1.0, "max": 1.0, "points": 1}}},
                     {"ansatz": {"init": "mixed"}},
                     {"ansatz": {"init": "fixed", "q": 6}},
                     {"methods": ["regularized", "adam"]},
                     {"samples": 0},
                     {"model": "N=4"}):
            with self.assertRaises(ConfigException, msg=str(tree)):
                RunConfig(tree)

    def testOverrideValidated(self):
        with self.assertRaises(ConfigException):
            RunConfig().override("model.N", 7)


class FileTests(TestCaseBase):
    def _write(self, text):
        path = self.getOutputFile(".yaml")
        with open(path, "w") as fh:
            fh.write(text)
        return path

    def testLoad(self):
        path = self._write("model:\n  N: 4\n  m_over_g: 0.5\nsolver:\n  epsilon: 1.0e-8\n")
        cfg = loadConfig(path)
        self.assertEqual(cfg.modelParams().mOverG, 0.5)
        self.assertEqual(cfg.solverConfig().epsilon, 1e-8)
        self.assertEqual(str(cfg), path)

    def testScientificWithoutDot(self):
        # YAML 1.1 reads 1e-6 as a string
        cfg = loadConfig(self._write("solver:\n  epsilon: 1e-6\n"))
        self.assertEqual(cfg.solverConfig().epsilon, 1e-6)

    def testEmptyFile(self):
        self.assertEqual(loadConfig(self._write("")).modelParams().numSites, 10)

    def testBadYaml(self):
        path = self._write("model: [N: 4\n")
        with self.assertRaises(ConfigException) as cm:
            loadConfig(path)
        self.assertEqual(cm.exception.source, path)
        self.assertTrue(str(cm.exception).startswith(path + ": invalid YAML"))

    def testMissingFile(self):
        with self.assertRaises(ConfigException):
            loadConfig(self.getOutputFile(".missing.yaml"))

    def testDumpReload(self):
        cfg = RunConfig({"model": {"N": 4}, "depths": [1, 3]})
        path = self._write(cfg.dump())
        self.assertEqual(loadConfig(path).flat(), cfg.flat())

    def testCheckedInConfigs(self):
        paths = sorted(glob.glob(self.getConfigFile("*.yaml")))
        self.assertGreaterEqual(len(paths), 8)
        for path in paths:
            cfg = loadConfig(path)
            self.assertTrue(np.all(np.isfinite(cfg.axisValues("theta_over_2pi"))), path)

    def testSpectraConfig(self):
        cfg = loadConfig(self.getConfigFile("sector_spectra.yaml"))
        self.assertTrue(cfg.modelParams().lastLink)
        thetas = cfg.spectraThetas()
        self.assertAlmostEqual((thetas[1] - thetas[0]) * 2.0, 0.01)


def suite():
    ts = unittest.TestSuite()
    ts.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(DefaultsTests))
    ts.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(OverrideTests))
    ts.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(FileTests))
    return ts


if __name__ == '__main__':
    unittest.main()
