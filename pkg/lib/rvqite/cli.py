"""
rvqite-lab command line: ground-state runs, method benchmarks, the depth
study, metric spectrum diagnostics, exact sector spectra, phase-boundary
tracing and phase-diagram sweeps.  Every output is a CSV file with the
resolved configuration recorded as `# key=value` comments.
"""
import argparse
import contextlib
import logging
import math
import os
import sys
from multiprocessing import Pool
import numpy as np
import pandas as pd
from rvqite.exceptions import ConfigException, SolverException, RvqiteException
from rvqite.loggers import setDefaultLogging, getLoggerToUse
from rvqite.config import loadConfig
from rvqite.schwinger import buildHamiltonian, observables
from rvqite.ansatz import buildCircuit
from rvqite.vqite import Evolution, sampleSystems, spectrumStatistics
from rvqite.exact import fullSpectrum, sectorSpectrum, levelCrossings, hierarchyViolations
from rvqite.boundary import Axis, setAxis, traceBoundary
from rvqite import tables

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3

_AXIS_OF_COLUMN = {
    "theta_over_2pi": Axis.THETA,
    "mu_over_g": Axis.MU,
    "m_over_g": Axis.M,
}

TRAJECTORY_COLUMNS = ["iter", "energy", "ratio", "delta2", "kappa", "truncated_count",
                      "charge", "lambda_min", "lambda_max"]
GRID_COLUMNS = ["theta_over_2pi", "mu_over_g", "m_over_g", "energy", "ratio", "charge",
                "chiral_condensate", "electric_field", "delta2", "iterations", "seed", "error"]


@contextlib.contextmanager
def workerMap(jobs):
    """Ordered map over a worker pool of `jobs` processes, or the builtin
    map when jobs <= 1."""
    if jobs <= 1:
        yield lambda func, items: list(map(func, items))
    else:
        with Pool(jobs) as pool:
            yield pool.map


def _metadata(cfg, command):
    return [("command", command)] + cfg.flat()


def _writeCsv(outDir, name, frame, cfg, command):
    return tables.writeCsv(os.path.join(outDir, name), frame, _metadata(cfg, command))


def _spectrumBounds(params):
    eigvals = fullSpectrum(params)
    return (float(eigvals[0]), float(eigvals[-1]))


class RunTask(object):
    """One evolution, described with picklable values so it can be sent
    to a worker: model parameters, ansatz spec, solver config, and either
    initial parameters or a seed to draw them from."""

    def __init__(self, params, ansatzSpec, solverConfig, seed, initialParams=None, label=None):
        self.params = params
        self.ansatzSpec = ansatzSpec
        self.solverConfig = solverConfig.replace(seed=seed)
        self.seed = seed
        self.initialParams = initialParams
        self.label = label

    def __str__(self):
        desc = "{} {} seed={}".format(self.params, self.ansatzSpec.describe(), self.seed)
        return desc if self.label is None else "{} {}".format(self.label, desc)

    def run(self, withRatio=True):
        circuit = buildCircuit(self.ansatzSpec)
        hamiltonian = buildHamiltonian(self.params)
        bounds = _spectrumBounds(self.params) if withRatio else None
        evolution = Evolution(circuit, self.initialParams, hamiltonian, self.solverConfig,
                              spectrumBounds=bounds, description=str(self))
        return evolution.run()


def _runTask(task):
    return task.run()


def _trajectoryFrame(result):
    rows = []
    for r in result.reports:
        rows.append({"iter": r.iteration, "energy": r.energy, "ratio": r.ratio, "delta2": r.delta2,
                     "kappa": r.conditionNumber, "truncated_count": r.truncatedCount, "charge": r.charge,
                     "lambda_min": r.lambdaMin, "lambda_max": r.lambdaMax})
    return pd.DataFrame(rows, columns=TRAJECTORY_COLUMNS)


def _ratioTrajectory(result, maxIters):
    """Ratio after 0..maxIters steps; runs that stopped early hold their
    final value"""
    ratios = [r.ratio for r in result.reports] + [result.ratio]
    return ratios + [result.ratio] * (maxIters + 1 - len(ratios))


def _finalObservables(task, result):
    circuit = buildCircuit(task.ansatzSpec)
    psi = circuit.evaluate(result.params)
    return psi, observables(psi, task.params)


def runGroundState(cfg, outDir, jobs=1, dumpHamiltonian=False, dumpState=False, epsilonScan=False):
    """Evolve from a seeded random start; write the trajectory and a
    summary with the final energy, Ratio and observables."""
    params = cfg.modelParams()
    task = RunTask(params, cfg.ansatzSpec(), cfg.solverConfig(), int(cfg["seed"]), label="ground")
    written = []
    if dumpHamiltonian:
        written.append(tables.writeScript(os.path.join(outDir, "hamiltonian.txt"), buildHamiltonian(params).toText()))
    result = task.run()
    trajectoryPath = _writeCsv(outDir, "ground_trajectory.csv", _trajectoryFrame(result), cfg, "ground")
    written.append(trajectoryPath)
    psi, obs = _finalObservables(task, result)
    eMin, eMax = _spectrumBounds(params)
    summary = pd.DataFrame([{"energy": result.energy, "ratio": result.ratio, "e_min": eMin,
                             "e_max": eMax, "charge": obs.charge,
                             "chiral_condensate": obs.chiralCondensate, "electric_field": obs.electricField,
                             "delta2": result.finalDelta2, "iterations": result.iterations,
                             "stop_reason": result.stopReason.value, "energy_increases": result.energyIncreases}])
    written.append(_writeCsv(outDir, "ground_summary.csv", summary, cfg, "ground"))
    if dumpState:
        path = os.path.join(outDir, "ground_state.bin")
        psi.dump(path)
        written.append(path)
    if epsilonScan:
        written.append(_runEpsilonScan(cfg, outDir, jobs, params))
    if cfg["output"]["gnuplot"]:
        written.append(tables.writeScript(os.path.join(outDir, "ground_trajectory.gp"),
                                          tables.curvesScript(trajectoryPath, "iter", "energy", "ground_trajectory.png")))
    return written


def _runEpsilonScan(cfg, outDir, jobs, params):
    solver = cfg.solverConfig()
    epsilons = [float(e) for e in cfg["epsilons"]]
    tasks = [RunTask(params, cfg.ansatzSpec(), solver.replace(epsilon=eps), int(cfg["seed"]),
                     label="epsilon={:g}".format(eps)) for eps in epsilons]
    with workerMap(jobs) as mapper:
        results = mapper(_runTask, tasks)
    rows = []
    for eps, result in zip(epsilons, results):
        truncated = [r.truncatedCount for r in result.reports]
        rows.append({"epsilon": eps, "energy": result.energy, "ratio": result.ratio,
                     "delta2": result.finalDelta2, "iterations": result.iterations,
                     "truncated_mean": float(np.mean(truncated)) if len(truncated) > 0 else 0.0,
                     "truncated_final": truncated[-1] if len(truncated) > 0 else 0})
    return _writeCsv(outDir, "epsilon_scan.csv", pd.DataFrame(rows), cfg, "ground --epsilon-scan")


def _sampleTasks(cfg, params, ansatzSpec, updateRule, label):
    """one task per sample; sample s uses seed + s for every method, so
    methods start from the same parameters"""
    solver = cfg.solverConfig(updateRule=updateRule)
    base = int(cfg["seed"])
    return [RunTask(params, ansatzSpec, solver, base + s, label=label) for s in range(int(cfg["samples"]))]


def runBenchmark(cfg, outDir, jobs=1):
    """Ratio mean and standard deviation per iteration for each update
    rule over paired seeded samples."""
    params = cfg.modelParams()
    methods = list(cfg["methods"])
    tasks = []
    for method in methods:
        tasks.extend(_sampleTasks(cfg, params, cfg.ansatzSpec(), method, method))
    with workerMap(jobs) as mapper:
        results = mapper(_runTask, tasks)
    maxIters = int(cfg["solver"]["max_iters"])
    rows = []
    finals = []
    for task, result in zip(tasks, results):
        for it, value in enumerate(_ratioTrajectory(result, maxIters)):
            rows.append({"method": task.label, "seed": task.seed, "iter": it, "ratio": value})
        finals.append({"method": task.label, "seed": task.seed, "ratio": result.ratio,
                       "energy": result.energy, "delta2": result.finalDelta2, "iterations": result.iterations})
    frame = pd.DataFrame(rows)
    stats = frame.groupby(["method", "iter"], sort=False)["ratio"].agg(
        ratio_mean="mean", ratio_std=lambda x: float(np.std(x, ddof=0)), samples="count").reset_index()
    written = [_writeCsv(outDir, "benchmark.csv", stats, cfg, "benchmark"),
               _writeCsv(outDir, "benchmark_final.csv", pd.DataFrame(finals), cfg, "benchmark")]
    if cfg["output"]["gnuplot"]:
        written.append(tables.writeScript(os.path.join(outDir, "benchmark.gp"),
                                          tables.curvesScript(written[0], "iter", "ratio_mean", "benchmark.png",
                                                              groupCol="method", groups=methods)))
    return written


def runDepthStudy(cfg, outDir, jobs=1):
    """Final Ratio and Delta^2 mean and standard deviation against ansatz
    depth."""
    params = cfg.modelParams()
    depths = [int(d) for d in cfg["depths"]]
    tasks = []
    for depth in depths:
        tasks.extend(_sampleTasks(cfg, params, cfg.ansatzSpec(depth=depth), None, str(depth)))
    with workerMap(jobs) as mapper:
        results = mapper(_runTask, tasks)
    frame = pd.DataFrame([{"depth": task.ansatzSpec.depth, "seed": task.seed, "ratio": result.ratio,
                           "delta2": result.finalDelta2} for task, result in zip(tasks, results)])
    stats = frame.groupby("depth", sort=True).agg(
        ratio_mean=("ratio", "mean"), ratio_std=("ratio", lambda x: float(np.std(x, ddof=0))),
        delta2_mean=("delta2", "mean"), delta2_std=("delta2", lambda x: float(np.std(x, ddof=0))),
        samples=("ratio", "count")).reset_index()
    written = [_writeCsv(outDir, "depth.csv", stats, cfg, "depth")]
    if cfg["output"]["gnuplot"]:
        written.append(tables.writeScript(os.path.join(outDir, "depth.gp"),
                                          tables.curvesScript(written[0], "depth", "ratio_mean", "depth.png")))
    return written


def _assembleSample(args):
    params, ansatzSpec, seed, count = args
    rng = np.random.default_rng(seed)
    return [s.A for s in sampleSystems(buildCircuit(ansatzSpec), buildHamiltonian(params), count, rng)]


def runSpectrumDiag(cfg, outDir, jobs=1, samples=None):
    """Eigenvalues of A at random parameter points, sign-split histograms
    of log10 |lambda| and condition numbers.  `samples` replaces the sampled
    matrices."""
    if samples is None:
        params = cfg.modelParams()
        count = int(cfg["spectrum"]["samples"])
        base = int(cfg["seed"])
        with workerMap(jobs) as mapper:
            samples = [m for batch in mapper(_assembleSample, [(params, cfg.ansatzSpec(), base + s, 1) for s in range(count)])
                       for m in batch]
    stats = spectrumStatistics(samples, bins=int(cfg["spectrum"]["bins"]))
    eigRows = []
    size = len(stats.eigenvalues) // len(samples)
    for i, value in enumerate(stats.eigenvalues):
        eigRows.append({"sample": i // size, "index": i % size, "eigenvalue": float(value)})
    histRows = []
    for sign, (counts, edges) in (("negative", stats.negativeHistogram), ("positive", stats.positiveHistogram)):
        for k in range(len(counts)):
            histRows.append({"sign": sign, "log10_abs_lo": float(edges[k]), "log10_abs_hi": float(edges[k + 1]),
                             "count": int(counts[k])})
    kappaRows = [{"sample": i, "kappa": k} for i, k in enumerate(stats.conditionNumbers)]
    return [_writeCsv(outDir, "spectrum_eigenvalues.csv", pd.DataFrame(eigRows), cfg, "spectrum"),
            _writeCsv(outDir, "spectrum_histogram.csv",
                      pd.DataFrame(histRows, columns=["sign", "log10_abs_lo", "log10_abs_hi", "count"]), cfg, "spectrum"),
            _writeCsv(outDir, "spectrum_kappa.csv", pd.DataFrame(kappaRows), cfg, "spectrum")]


def _sectorCurve(args):
    params, charges, levels, t = args
    at = params.replace(theta=2.0 * math.pi * t)
    rows = []
    for q in charges:
        for level in sectorSpectrum(at, q)[:levels]:
            rows.append({"q": q, "n": level.n, "energy": level.energy, "theta_over_2pi": float(t),
                         "m_over_g": params.mOverG, "mu_over_g": params.muOverG})
    return rows


def _vqiteSectorPoint(task):
    result = task.run(withRatio=False)
    exact = sectorSpectrum(task.params, task.ansatzSpec.charge)[0].energy
    return {"q": task.ansatzSpec.charge, "theta_over_2pi": task.params.thetaOverTwoPi,
            "energy_vqite": result.energy, "energy_exact": exact, "abs_error": abs(result.energy - exact)}


def _chargesWithinCapacity(charges, numSites):
    kept = [q for q in charges if 2 * abs(q) <= numSites]
    logger = getLoggerToUse(None)
    if (len(kept) < len(charges)) and (logger is not None):
        logger.warning("charges {} exceed the capacity of {} sites and are skipped".format(
            sorted(set(charges) - set(kept)), numSites))
    return kept


def runSpectra(cfg, outDir, jobs=1, withVqite=False):
    """Exact lowest levels per charge sector against theta, crossings of
    opposite sectors, ordering violations, and optionally rVQITE sector
    energies from fixed-charge starts."""
    params = cfg.modelParams()
    charges = _chargesWithinCapacity([int(q) for q in cfg["spectra"]["q"]], params.numSites)
    levels = int(cfg["spectra"]["levels"])
    thetas = cfg.spectraThetas()
    with workerMap(jobs) as mapper:
        rows = [row for chunk in mapper(_sectorCurve, [(params, charges, levels, t) for t in thetas]) for row in chunk]
    written = [_writeCsv(outDir, "spectra.csv",
                         pd.DataFrame(rows, columns=["q", "n", "energy", "theta_over_2pi", "m_over_g", "mu_over_g"]),
                         cfg, "spectra")]
    radians = 2.0 * math.pi * thetas
    crossRows = []
    for q in sorted(set(abs(q) for q in charges if (q != 0) and (-q in charges))):
        for theta in levelCrossings(params, q, radians):
            crossRows.append({"q": q, "theta_over_2pi": theta / (2.0 * math.pi), "theta_over_pi": theta / math.pi})
    written.append(_writeCsv(outDir, "crossings.csv",
                             pd.DataFrame(crossRows, columns=["q", "theta_over_2pi", "theta_over_pi"]), cfg, "spectra"))
    maxCharge = min(max([abs(q) for q in charges], default=0), params.numSites // 2)
    violations = hierarchyViolations(params, radians, maxCharge) if maxCharge > 0 else []
    written.append(_writeCsv(outDir, "hierarchy_violations.csv",
                             pd.DataFrame([{"theta_over_2pi": v.theta / (2.0 * math.pi), "q": v.q, "outer": v.outer,
                                            "energy": v.energy, "outer_energy": v.outerEnergy} for v in violations],
                                          columns=["theta_over_2pi", "q", "outer", "energy", "outer_energy"]),
                             cfg, "spectra"))
    if withVqite or cfg["spectra"]["vqite"]:
        points = np.linspace(thetas[0], thetas[-1], int(cfg["spectra"]["vqite_points"]))
        tasks = [RunTask(params.replace(theta=2.0 * math.pi * t), cfg.ansatzSpec(charge=q), cfg.solverConfig(),
                         int(cfg["seed"]) + i, label="sector") for i, (q, t) in enumerate((q, t) for q in charges for t in points)]
        with workerMap(jobs) as mapper:
            vrows = mapper(_vqiteSectorPoint, tasks)
        written.append(_writeCsv(outDir, "spectra_vqite.csv", pd.DataFrame(vrows), cfg, "spectra --vqite"))
    if cfg["output"]["gnuplot"]:
        overlay = written[-1] if (withVqite or cfg["spectra"]["vqite"]) else None
        written.append(tables.writeScript(os.path.join(outDir, "spectra.gp"),
                                          tables.curvesScript(written[0], "theta_over_2pi", "energy", "spectra.png",
                                                              groupCol="q", groups=charges, overlayCsv=overlay,
                                                              overlayX="theta_over_2pi", overlayY="energy_vqite")))
    return written


def _planeGrid(cfg, section):
    firstCol, secondCol = cfg.planeAxes(section)
    return firstCol, cfg.axisValues(firstCol), secondCol, cfg.axisValues(secondCol)


def _traceFrame(points, firstCol, secondCol):
    rows = [{"q": p.q, "axis1": firstCol, "axis1_value": p.firstValue, "axis2": secondCol,
             "axis2_root": p.root.value, "residual": p.root.residual} for p in points]
    return pd.DataFrame(rows, columns=["q", "axis1", "axis1_value", "axis2", "axis2_root", "residual"])


def _traceAll(cfg, section, jobs):
    params = cfg.modelParams()
    firstCol, firstValues, secondCol, secondValues = _planeGrid(cfg, section)
    points = []
    with workerMap(jobs) as mapper:
        for q in cfg["boundary"]["q"]:
            points.extend(traceBoundary(params, int(q), _AXIS_OF_COLUMN[firstCol], firstValues,
                                        _AXIS_OF_COLUMN[secondCol], secondValues,
                                        tol=float(cfg["boundary"]["tol"]), mapper=mapper))
    return _traceFrame(points, firstCol, secondCol)


def runBoundary(cfg, outDir, jobs=1):
    """Exact-oracle phase boundaries over the configured plane."""
    return [_writeCsv(outDir, "boundary.csv", _traceAll(cfg, "boundary", jobs), cfg, "boundary")]


def _cellParams(base, firstCol, firstValue, secondCol, secondValue):
    return setAxis(setAxis(base, _AXIS_OF_COLUMN[firstCol], firstValue), _AXIS_OF_COLUMN[secondCol], secondValue)


def _sweepColumn(args):
    """Cells of one first-axis column, in order along the second axis.  With
    warm start each cell starts from the previous converged cell."""
    cfg, column, firstCol, firstValue, secondCol, secondValues, warmStart = args
    base = cfg.modelParams()
    spec = cfg.ansatzSpec()
    solver = cfg.solverConfig()
    logger = getLoggerToUse(None)
    rows = []
    previous = None
    for row, secondValue in enumerate(secondValues):
        seed = int(cfg["seed"]) + column * len(secondValues) + row
        params = _cellParams(base, firstCol, firstValue, secondCol, secondValue)
        cell = {"theta_over_2pi": params.thetaOverTwoPi, "mu_over_g": params.muOverG, "m_over_g": params.mOverG,
                "seed": seed, "error": ""}
        task = RunTask(params, spec, solver, seed, initialParams=previous if warmStart else None, label="sweep")
        try:
            result = task.run()
            _, obs = _finalObservables(task, result)
            cell.update({"energy": result.energy, "ratio": result.ratio, "charge": obs.charge,
                         "chiral_condensate": obs.chiralCondensate, "electric_field": obs.electricField,
                         "delta2": result.finalDelta2, "iterations": result.iterations})
            previous = result.params
        except (RvqiteException, np.linalg.LinAlgError) as ex:
            if logger is not None:
                logger.warning("sweep cell failed: {}: {}".format(task, ex))
            cell.update({"energy": math.nan, "ratio": math.nan, "charge": math.nan, "chiral_condensate": math.nan,
                         "electric_field": math.nan, "delta2": math.nan, "iterations": 0, "error": str(ex)})
            previous = None
        rows.append(cell)
    return rows


def _mirrorReport(frame, firstCol, secondCol, mirror, label):
    """max |X(p) + X(p')| and max |X(p) - X(p')| over grid points whose
    mirror image p' is also on the grid"""
    key = {(round(a, 9), round(b, 9)): i for i, (a, b) in enumerate(zip(frame[firstCol], frame[secondCol]))}
    rows = []
    for obs in ("charge", "chiral_condensate", "electric_field"):
        sums, diffs = [], []
        for i, (a, b) in enumerate(zip(frame[firstCol], frame[secondCol])):
            ma, mb = mirror(a, b)
            j = key.get((round(ma, 9), round(mb, 9)))
            if j is not None:
                sums.append(abs(frame[obs].iloc[i] + frame[obs].iloc[j]))
                diffs.append(abs(frame[obs].iloc[i] - frame[obs].iloc[j]))
        rows.append({"symmetry": label, "observable": obs, "pairs": len(sums),
                     "max_abs_sum": float(np.nanmax(sums)) if len(sums) > 0 else math.nan,
                     "max_abs_diff": float(np.nanmax(diffs)) if len(diffs) > 0 else math.nan})
    return rows


def symmetryReport(frame, plane):
    """Quasi-symmetry (mu, theta) -> (-mu, -theta) for the theta-mu plane,
    central symmetry about theta/2pi = -0.2, m = 0 for the theta-m plane.
    Reported, not asserted."""
    if plane == "theta_mu":
        return pd.DataFrame(_mirrorReport(frame, "theta_over_2pi", "mu_over_g",
                                          lambda t, mu: (-t, -mu), "mu,theta->-mu,-theta"))
    return pd.DataFrame(_mirrorReport(frame, "theta_over_2pi", "m_over_g",
                                      lambda t, m: (-0.4 - t, -m), "central(-0.2,0)"))


CONSISTENCY_COLUMNS = ["q", "axis1_value", "axis2_root", "cell_index", "step_found"]


def _roundedCharge(value):
    return math.nan if math.isnan(value) else float(round(value))


def boundaryConsistency(grid, boundary, firstCol, secondCol):
    """For each traced root, whether the heat-map cell it falls in, or a
    neighbour along the second axis, shows a unit step of round(<Q>).
    Grid columns are matched on the first-axis value of the root."""
    rows = []
    for _, point in boundary.iterrows():
        column = grid[np.isclose(grid[firstCol], point["axis1_value"])].sort_values(secondCol)
        secondValues = column[secondCol].to_numpy()
        charges = [_roundedCharge(c) for c in column["charge"]]
        cell = int(np.argmin(np.abs(secondValues - point["axis2_root"]))) if len(secondValues) > 0 else -1
        pairs = [(i, i + 1) for i in (cell - 1, cell) if (i >= 0) and (i + 1 < len(charges))]
        rows.append({"q": int(point["q"]), "axis1_value": point["axis1_value"], "axis2_root": point["axis2_root"],
                     "cell_index": cell,
                     "step_found": any(abs(charges[j] - charges[i]) == 1.0 for i, j in pairs)})
    return pd.DataFrame(rows, columns=CONSISTENCY_COLUMNS)


def runSweep(cfg, outDir, jobs=1, warmStart=None):
    """rVQITE over the configured plane: one row per grid cell in
    first-axis-major order, with the exact boundary overlay and symmetry
    report.  Columns run in parallel; cells within a column run in order."""
    if warmStart is None:
        warmStart = bool(cfg["sweep"]["warm_start"])
    firstCol, firstValues, secondCol, secondValues = _planeGrid(cfg, "sweep")
    args = [(cfg, c, firstCol, v, secondCol, list(secondValues), warmStart) for c, v in enumerate(firstValues)]
    with workerMap(jobs) as mapper:
        rows = [row for column in mapper(_sweepColumn, args) for row in column]
    frame = pd.DataFrame(rows, columns=GRID_COLUMNS)
    written = [_writeCsv(outDir, "sweep.csv", frame, cfg, "sweep")]
    written.append(_writeCsv(outDir, "sweep_symmetry.csv", symmetryReport(frame, cfg["sweep"]["plane"]), cfg, "sweep"))
    if cfg["sweep"]["overlay"]:
        boundary = _traceAll(cfg, "sweep", jobs)
        written.append(_writeCsv(outDir, "sweep_boundary.csv", boundary, cfg, "sweep"))
        consistency = boundaryConsistency(frame, boundary, firstCol, secondCol)
        written.append(_writeCsv(outDir, "sweep_consistency.csv", consistency, cfg, "sweep"))
        missing = sum(1 for found in consistency["step_found"] if not found)
        if missing > 0:
            logger = getLoggerToUse(None)
            if logger is not None:
                logger.warning("{} of {} boundary points have no charge step in the sweep".format(missing, len(consistency)))
    if cfg["output"]["gnuplot"]:
        for obs in ("charge", "chiral_condensate", "electric_field"):
            written.append(tables.writeScript(os.path.join(outDir, "sweep_{}.gp".format(obs)),
                                              tables.heatmapScript(written[0], firstCol, secondCol, obs,
                                                                   "sweep_{}.png".format(obs))))
    return written


def _buildParser():
    parser = argparse.ArgumentParser(prog="rvqite-lab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="logging level")
    common.add_argument("--config", help="YAML run configuration; defaults are used for missing keys")
    common.add_argument("--seed", type=int, help="base random seed")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--out-dir", default=".", help="directory for output files")
    common.add_argument("--dump-hamiltonian", action="store_true", help="write the Pauli-term Hamiltonian")
    common.add_argument("--dump-state", action="store_true", help="write final amplitudes as little-endian complex128")
    common.add_argument("--no-warm-start", action="store_true", help="fresh random start for every sweep cell")
    common.add_argument("--epsilon", type=float, help="eigenvalue truncation threshold")
    common.add_argument("--dtau", type=float, help="imaginary-time step")
    common.add_argument("--depth", type=int, help="ansatz depth")
    common.add_argument("--N", type=int, dest="numSites", help="number of lattice sites")
    common.add_argument("--gnuplot", action="store_true", help="also write gnuplot scripts")
    sub = parser.add_subparsers(dest="command", required=True)
    ground = sub.add_parser("ground", parents=[common], help="ground-state run with trajectory")
    ground.add_argument("--epsilon-scan", action="store_true", help="repeat the run for each configured epsilon")
    sub.add_parser("benchmark", parents=[common], help="compare update rules over seeded samples")
    sub.add_parser("depth", parents=[common], help="final Ratio against ansatz depth")
    sub.add_parser("sweep", parents=[common], help="phase-diagram sweep with boundary overlay")
    sub.add_parser("spectrum", parents=[common], help="eigenvalue statistics of the metric A")
    spectra = sub.add_parser("spectra", parents=[common], help="exact charge-sector spectra against theta")
    spectra.add_argument("--vqite", action="store_true", help="add rVQITE sector energies")
    sub.add_parser("boundary", parents=[common], help="exact phase boundaries")
    return parser


def _resolveConfig(args):
    cfg = loadConfig(args.config)
    cfg.override("seed", args.seed)
    cfg.override("solver.epsilon", args.epsilon)
    cfg.override("solver.dtau", args.dtau)
    cfg.override("ansatz.depth", args.depth)
    cfg.override("model.N", args.numSites)
    if args.no_warm_start:
        cfg.override("sweep.warm_start", False)
    if args.gnuplot:
        cfg.override("output.gnuplot", True)
    return cfg


def _dispatch(args, cfg):
    outDir = args.out_dir
    os.makedirs(outDir, exist_ok=True)
    if args.command == "ground":
        return runGroundState(cfg, outDir, args.jobs, args.dump_hamiltonian, args.dump_state, args.epsilon_scan)
    written = []
    if args.dump_hamiltonian:
        written.append(tables.writeScript(os.path.join(outDir, "hamiltonian.txt"),
                                          buildHamiltonian(cfg.modelParams()).toText()))
    if args.command == "benchmark":
        written += runBenchmark(cfg, outDir, args.jobs)
    elif args.command == "depth":
        written += runDepthStudy(cfg, outDir, args.jobs)
    elif args.command == "sweep":
        written += runSweep(cfg, outDir, args.jobs)
    elif args.command == "spectrum":
        written += runSpectrumDiag(cfg, outDir, args.jobs)
    elif args.command == "spectra":
        written += runSpectra(cfg, outDir, args.jobs, args.vqite)
    elif args.command == "boundary":
        written += runBoundary(cfg, outDir, args.jobs)
    return written


def main(argv=None):
    """Entry point; returns the exit code: 0 ok, 2 configuration error,
    3 solver failure."""
    args = _buildParser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format="%(levelname)s: %(message)s")
    setDefaultLogging("rvqite", logging.INFO)
    try:
        cfg = _resolveConfig(args)
    except ConfigException as ex:
        print("rvqite-lab: configuration error: {}".format(ex), file=sys.stderr)
        return EXIT_CONFIG
    try:
        for path in _dispatch(args, cfg):
            logging.getLogger("rvqite").info("wrote {}".format(path))
    except SolverException as ex:
        print("rvqite-lab: {}".format(ex), file=sys.stderr)
        return EXIT_SOLVER
    except RvqiteException as ex:
        # invalid parameters that only show up once a run is set up
        print("rvqite-lab: invalid parameters: {}".format(ex), file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
