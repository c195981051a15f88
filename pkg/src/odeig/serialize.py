"""JSON / CSV formats for decompositions and reports (schema version 1)."""

import csv
import io
import json

import numpy as np

from .odt import OrthoDiagDecomp, validate

SCHEMA_VERSION = 1


class FormatError(ValueError):
    """A file does not follow the expected schema; names the offending field."""


def _floats(a):
    return [float(x) for x in np.asarray(a, dtype=float).reshape(-1)]


def decomp_to_dict(d):
    return {
        "schema": SCHEMA_VERSION,
        "order": d.order,
        "dim": d.dim,
        "rank": d.rank,
        "lambdas": _floats(d.lambdas),
        "u_columns": [_floats(d.u_matrix[:, j]) for j in range(d.rank)],
    }


def _require(obj, key, kind):
    if key not in obj:
        raise FormatError(f"missing field '{key}'")
    val = obj[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise FormatError(f"field '{key}': expected an integer, got {val!r}")
    if kind is list and not isinstance(val, list):
        raise FormatError(f"field '{key}': expected a list")
    return val


def _number_list(vals, where):
    out = []
    for i, x in enumerate(vals):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise FormatError(f"field '{where}[{i}]': expected a number, got {x!r}")
        out.append(float(x))
    return out


def decomp_from_dict(obj, check=True):
    """Parse (and by default validate) a decomposition dict."""
    if not isinstance(obj, dict):
        raise FormatError("top level must be a JSON object")
    schema = obj.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise FormatError(f"field 'schema': unsupported version {schema!r}")
    m = _require(obj, "order", int)
    n = _require(obj, "dim", int)
    r = _require(obj, "rank", int)
    lambdas = _number_list(_require(obj, "lambdas", list), "lambdas")
    cols = _require(obj, "u_columns", list)
    if len(lambdas) != r:
        raise FormatError(f"field 'lambdas': {len(lambdas)} values for rank {r}")
    if len(cols) != r:
        raise FormatError(f"field 'u_columns': {len(cols)} columns for rank {r}")
    parsed = []
    for j, col in enumerate(cols):
        if not isinstance(col, list):
            raise FormatError(f"field 'u_columns[{j}]': expected a list")
        if len(col) != n:
            raise FormatError(f"field 'u_columns[{j}]': length {len(col)}, expected dim {n}")
        parsed.append(_number_list(col, f"u_columns[{j}]"))
    if r == 0:
        raise FormatError("field 'rank': must be >= 1")
    d = OrthoDiagDecomp(order=m, u_matrix=np.array(parsed).T, lambdas=np.array(lambdas))
    if check:
        problems = validate(d)
        if problems:
            raise FormatError("invalid decomposition: " + "; ".join(problems))
    return d


def dumps(obj):
    # repr-based float output is shortest round-trip exact
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def load_decomp(path):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    return decomp_from_dict(obj)


def pair_row(pair, stability=None):
    row = {
        "k": pair.k,
        "indices": list(pair.selection.labels),
        "signs": list(pair.signs),
        "lambda": float(pair.eigenvalue),
        "u": _floats(pair.eigenvector),
        "residual": float(pair.residual),
    }
    if stability is not None:
        row.update({
            "classification": stability.classification,
            "spectrum_predicted": _floats(stability.predicted.values()),
            "spectrum_computed": _floats(stability.computed_spectrum.eigenvalues),
            "spectrum_error": float(stability.spectrum_match_error),
            "issues": list(stability.issues),
        })
    return row


def enumeration_to_dict(report, stabilities=None):
    rows = [pair_row(p, stabilities[i] if stabilities else None)
            for i, p in enumerate(report.pairs)]
    out = {
        "schema": SCHEMA_VERSION,
        "kind": "classification" if stabilities else "enumeration",
        "order": report.order,
        "dim": report.dim,
        "rank": report.rank,
        "real_class_count": report.real_class_count,
        "complex_class_count": report.complex_class_count,
        "bound": report.bound,
        "max_residual": report.max_residual,
    }
    if stabilities:
        counts = {}
        for s in stabilities:
            counts[s.classification] = counts.get(s.classification, 0) + 1
        out["label_counts"] = counts
        out["integrity_failures"] = sum(not s.ok for s in stabilities)
    out["pairs"] = rows
    return out


class PairRecord:
    """Eigenpair as read back from a report file (enough for matching)."""

    def __init__(self, row):
        self.k = int(row["k"])
        self.eigenvalue = float(row["lambda"])
        self.eigenvector = np.array(row["u"], dtype=float)
        self.indices = tuple(row.get("indices", ()))


def pairs_from_report(obj):
    if not isinstance(obj, dict) or not isinstance(obj.get("pairs"), list):
        raise FormatError("field 'pairs': expected a list of eigenpair rows")
    out = []
    for i, row in enumerate(obj["pairs"]):
        try:
            out.append(PairRecord(row))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"field 'pairs[{i}]': {exc}") from exc
    return out


def match_to_dict(report):
    return {
        "schema": SCHEMA_VERSION,
        "kind": "verification",
        "restarts": report.restarts,
        "shift": report.shift,
        "converged_runs": report.converged_runs,
        "coverage": report.coverage,
        "ok": report.ok,
        "discovered": [{"lambda": float(l), "u": _floats(u)} for l, u in report.discovered],
        "matched": [{"discovered": mt.discovered, "enumerated": mt.enumerated,
                     "distance": mt.distance} for mt in report.matched],
        "unmatched_discovered": [{"lambda": float(l), "u": _floats(u)}
                                 for l, u in report.unmatched_discovered],
    }


def _fmt(x):
    return format(float(x), ".17g")


def rows_to_csv(rows, dim):
    buf = io.StringIO()
    header = ["k", "indices", "signs", "lambda"] + [f"u{i + 1}" for i in range(dim)] + ["residual"]
    extra = rows and "classification" in rows[0]
    if extra:
        header += ["classification", "spectrum_error", "spectrum_predicted", "spectrum_computed"]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        line = [row["k"], ";".join(map(str, row["indices"])), ";".join(map(str, row["signs"])),
                _fmt(row["lambda"])] + [_fmt(x) for x in row["u"]] + [_fmt(row["residual"])]
        if extra:
            line += [row["classification"], _fmt(row["spectrum_error"]),
                     ";".join(_fmt(x) for x in row["spectrum_predicted"]),
                     ";".join(_fmt(x) for x in row["spectrum_computed"])]
        writer.writerow(line)
    return buf.getvalue()


def traces_to_csv(traces):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    n = len(traces[0].start_vector) if traces else 0
    writer.writerow(["run", "converged", "iterates", "residual", "lambda"]
                    + [f"start{i + 1}" for i in range(n)] + [f"u{i + 1}" for i in range(n)])
    for i, tr in enumerate(traces):
        writer.writerow([i, int(tr.converged), tr.iterates, _fmt(tr.residual), _fmt(tr.eigenvalue)]
                        + [_fmt(x) for x in tr.start_vector] + [_fmt(x) for x in tr.eigenvector])
    return buf.getvalue()
