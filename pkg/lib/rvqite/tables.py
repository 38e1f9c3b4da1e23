"""
Tabular output: CSV files with a `# key=value` metadata block ahead of the
header row, and gnuplot scripts that plot them.
"""
import os
import pandas as pd

GNUPLOT_TERMINAL = "pngcairo size 900,700"


def _formatValue(value):
    if isinstance(value, (list, tuple)):
        return ",".join(_formatValue(v) for v in value)
    return str(value)


def writeCsv(path, frame, metadata=()):
    """Write a DataFrame preceded by one `# key=value` comment line per
    metadata pair.  Output is byte-for-byte reproducible for equal input."""
    dirname = os.path.dirname(path)
    if dirname != "":
        os.makedirs(dirname, exist_ok=True)
    with open(path, "w", newline="") as fh:
        for key, value in metadata:
            fh.write("# {}={}\n".format(key, _formatValue(value)))
        frame.to_csv(fh, index=False)
    return path


def readCsv(path):
    """Read a file written by writeCsv, returning (metadata dict, DataFrame).
    Metadata values are strings."""
    metadata = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition("=")
            metadata[key] = value
    return metadata, pd.read_csv(path, comment="#")


def _column(name):
    return '(column("{}"))'.format(name)


def _groupTest(groupCol, value):
    if isinstance(value, str):
        return 'strcol("{}") eq "{}"'.format(groupCol, value)
    return 'column("{}") == {}'.format(groupCol, value)


def _preamble(outPath, title):
    return ["set datafile separator ','",
            "set datafile columnheaders",
            "set terminal {}".format(GNUPLOT_TERMINAL),
            "set output '{}'".format(outPath),
            "set title '{}'".format(title)]


def heatmapScript(csvPath, xCol, yCol, zCol, outPath, title=None):
    "gnuplot script drawing zCol over the (xCol, yCol) grid"
    lines = _preamble(outPath, title if title is not None else zCol)
    lines += ["set view map",
              "set xlabel '{}'".format(xCol),
              "set ylabel '{}'".format(yCol),
              "plot '{}' using {}:{}:{} with image notitle".format(
                  os.path.basename(csvPath), _column(xCol), _column(yCol), _column(zCol))]
    return "\n".join(lines) + "\n"


def curvesScript(csvPath, xCol, yCol, outPath, groupCol=None, groups=(), title=None,
                 overlayCsv=None, overlayX=None, overlayY=None):
    """gnuplot script drawing yCol against xCol, one curve per value of
    groupCol if given, optionally overlaid with points from another CSV"""
    lines = _preamble(outPath, title if title is not None else yCol)
    lines += ["set xlabel '{}'".format(xCol),
              "set ylabel '{}'".format(yCol)]
    name = os.path.basename(csvPath)
    if groupCol is None:
        clauses = ["'{}' using {}:{} with lines notitle".format(name, _column(xCol), _column(yCol))]
    else:
        clauses = ["'{}' using {}:({} ? column(\"{}\") : NaN) with lines title '{}={}'".format(
            name, _column(xCol), _groupTest(groupCol, g), yCol, groupCol, g) for g in groups]
    if overlayCsv is not None:
        clauses.append("'{}' using {}:{} with points pt 7 notitle".format(
            os.path.basename(overlayCsv), _column(overlayX), _column(overlayY)))
    lines.append("plot " + ", \\\n     ".join(clauses))
    return "\n".join(lines) + "\n"


def writeScript(path, text):
    with open(path, "w") as fh:
        fh.write(text)
    return path
