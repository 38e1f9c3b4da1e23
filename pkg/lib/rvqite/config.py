"""
Run configuration: a YAML tree with a default for every key.  Files give
only the keys they change; unknown keys are errors.  theta is given as
theta/2pi throughout.
"""
import copy
import numpy as np
import yaml
from rvqite.exceptions import ConfigException, RvqiteException
from rvqite.schwinger import SchwingerParams
from rvqite.ansatz import AnsatzSpec
from rvqite.vqite import VqiteConfig

DEFAULTS = {
    "model": {
        "N": 10,
        "a_g": 1.0,
        "m_over_g": 1.0,
        "theta_over_2pi": 0.0,
        "mu_over_g": 0.0,
        "last_link": False,
    },
    "ansatz": {
        "depth": 5,
        "init": "free",
        "q": 0,
    },
    "solver": {
        "dtau": 0.1,
        "epsilon": 1e-6,
        "max_iters": 500,
        "stop_delta2": 1e-10,
        "update_rule": "regularized",
        "derivative_mode": "analytic",
        "rcond": 1e-15,
        "learning_rate": None,
        "energy_slack": 1e-6,
    },
    "seed": 0,
    "samples": 20,
    "methods": ["regularized", "pseudo_inverse", "gradient"],
    "depths": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
    "epsilons": [1e-10, 1e-8, 1e-6, 1e-4, 1e-2],
    "sweep": {
        "plane": "theta_mu",
        "theta_over_2pi": {"min": -1.0, "max": 1.0, "points": 41},
        "mu_over_g": {"min": -1.5, "max": 1.5, "points": 31},
        "m_over_g": {"min": -1.0, "max": 1.0, "points": 31},
        "warm_start": True,
        "overlay": True,
    },
    "boundary": {
        "q": [-2, -1, 0, 1, 2],
        "tol": 1e-6,
        "plane": "theta_mu",
    },
    "spectrum": {
        "samples": 10,
        "bins": 30,
    },
    "spectra": {
        "q": [-3, -2, -1, 0, 1, 2, 3],
        "theta_over_2pi": {"min": -1.0, "max": 1.0, "points": 401},
        "levels": 1,
        "vqite": False,
        "vqite_points": 10,
    },
    "output": {
        "gnuplot": False,
    },
}

PLANES = {
    "theta_mu": ("theta_over_2pi", "mu_over_g"),
    "theta_m": ("theta_over_2pi", "m_over_g"),
}


def _merge(defaults, given, path, source):
    """recursively overlay `given` onto a copy of `defaults`, rejecting
    keys not present in the defaults"""
    if not isinstance(given, dict):
        raise ConfigException("{} must be a mapping".format(path if path else "configuration"), source)
    merged = copy.deepcopy(defaults)
    for key, value in given.items():
        keyPath = "{}.{}".format(path, key) if path else str(key)
        if key not in defaults:
            raise ConfigException("unknown key '{}'".format(keyPath), source)
        if isinstance(defaults[key], dict):
            merged[key] = _merge(defaults[key], value, keyPath, source)
        else:
            merged[key] = value
    return merged


def _flatten(tree, prefix=""):
    items = []
    for key in sorted(tree.keys()):
        name = prefix + str(key)
        if isinstance(tree[key], dict):
            items.extend(_flatten(tree[key], name + "."))
        else:
            items.append((name, tree[key]))
    return items


class RunConfig(object):
    """Resolved configuration.  `tree` holds every key, defaults included;
    `source` is the file it came from, or None."""

    def __init__(self, tree=None, source=None):
        self.source = source
        self.tree = _merge(DEFAULTS, tree if tree is not None else {}, "", source)
        self._validate()

    @classmethod
    def load(cls, path):
        try:
            with open(path) as fh:
                tree = yaml.safe_load(fh)
        except yaml.YAMLError as ex:
            raise ConfigException("invalid YAML: {}".format(ex), path) from ex
        except OSError as ex:
            raise ConfigException("can't read configuration: {}".format(ex.strerror), path) from ex
        return cls(tree if tree is not None else {}, path)

    def __getitem__(self, key):
        return self.tree[key]

    def __str__(self):
        return self.source if self.source is not None else "<defaults>"

    def override(self, path, value):
        """Set a dotted key such as "solver.epsilon"; None leaves it
        unchanged.  Returns self."""
        if value is None:
            return self
        keys = path.split(".")
        node = self.tree
        for key in keys[:-1]:
            node = node[key]
        if keys[-1] not in node:
            raise ConfigException("unknown key '{}'".format(path), self.source)
        node[keys[-1]] = value
        self._validate()
        return self

    def flat(self):
        "(dotted key, value) pairs of the whole tree, sorted"
        return _flatten(self.tree)

    def dump(self):
        return yaml.safe_dump(self.tree, default_flow_style=False, sort_keys=True)

    def _validate(self):
        try:
            self.modelParams()
            self.ansatzSpec()
            self.solverConfig()
            for axis in ("theta_over_2pi", "mu_over_g", "m_over_g"):
                self.axisValues(axis)
            self.spectraThetas()
        except (RvqiteException, TypeError, ValueError) as ex:
            raise ConfigException(str(ex), self.source) from ex
        if self.tree["sweep"]["plane"] not in PLANES:
            raise ConfigException("sweep.plane must be one of {}".format(", ".join(PLANES)), self.source)
        if self.tree["boundary"]["plane"] not in PLANES:
            raise ConfigException("boundary.plane must be one of {}".format(", ".join(PLANES)), self.source)
        if self.tree["ansatz"]["init"] not in ("free", "fixed"):
            raise ConfigException("ansatz.init must be 'free' or 'fixed'", self.source)
        if int(self.tree["samples"]) < 1:
            raise ConfigException("samples must be at least 1", self.source)
        for method in self.tree["methods"]:
            if method not in ("regularized", "pseudo_inverse", "gradient"):
                raise ConfigException("unknown method '{}'".format(method), self.source)

    def modelParams(self):
        model = self.tree["model"]
        return SchwingerParams.fromThetaOverTwoPi(int(model["N"]), float(model["theta_over_2pi"]),
                                                  mOverG=float(model["m_over_g"]),
                                                  muOverG=float(model["mu_over_g"]),
                                                  aG=float(model["a_g"]),
                                                  lastLink=bool(model["last_link"]))

    def ansatzSpec(self, depth=None, charge=None):
        "AnsatzSpec from the config; `charge` forces a fixed-charge ansatz"
        ansatz = self.tree["ansatz"]
        if charge is None:
            charge = int(ansatz["q"]) if ansatz["init"] == "fixed" else None
        return AnsatzSpec(int(self.tree["model"]["N"]),
                          int(depth if depth is not None else ansatz["depth"]), charge)

    def solverConfig(self, updateRule=None):
        solver = self.tree["solver"]
        rate = solver["learning_rate"]
        return VqiteConfig(dtau=float(solver["dtau"]),
                           epsilon=float(solver["epsilon"]),
                           maxIters=int(solver["max_iters"]),
                           stopDelta2=float(solver["stop_delta2"]),
                           updateRule=updateRule if updateRule is not None else solver["update_rule"],
                           derivativeMode=solver["derivative_mode"],
                           rcond=float(solver["rcond"]),
                           learningRate=float(rate) if rate is not None else None,
                           energySlack=float(solver["energy_slack"]),
                           seed=int(self.tree["seed"]))

    def axisValues(self, axis):
        """grid points along a sweep axis"""
        spec = self.tree["sweep"][axis]
        return _gridValues(spec, "sweep." + axis, minPoints=2)

    def spectraThetas(self):
        "theta/2pi grid of the spectra scan"
        return _gridValues(self.tree["spectra"]["theta_over_2pi"], "spectra.theta_over_2pi")

    def planeAxes(self, section="sweep"):
        return PLANES[self.tree[section]["plane"]]


def _gridValues(spec, name, minPoints=1):
    points = int(spec["points"])
    lo, hi = float(spec["min"]), float(spec["max"])
    if points < minPoints:
        raise ValueError("{}.points must be at least {}".format(name, minPoints))
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise ValueError("{} range must be finite".format(name))
    if (points > 1) and not (lo < hi):
        raise ValueError("{} range must have min < max".format(name))
    return np.linspace(lo, hi, points) if points > 1 else np.array([lo])


def loadConfig(path=None):
    """load a configuration file, or the defaults if path is None"""
    return RunConfig.load(path) if path is not None else RunConfig()
