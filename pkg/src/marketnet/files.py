"""Reading and writing the pipeline's interchange files.

Floats are written with ``repr`` so a file round-trips exactly; JSON documents
use sorted keys and ``null`` for NaN. Identical inputs therefore give
byte-identical files.
"""

import csv
import datetime as dt
import io
import json
import math
from collections import OrderedDict
from pathlib import Path

import numpy as np

from .errors import InputFileError, ParseError
from .ingest import Panel, split_label
from .permval import (FLAG_DEGENERATE, FLAG_FLAT_NULL, FLAG_OK, FLAG_SHORT, SYMMETRIC_KINDS,
                      EdgeMatrix)

EDGE_HEADER = ("src", "dst", "kind", "stat", "null_mean", "null_std", "z", "n_obs", "valid")
EDGE_LIST_HEADER = ("src", "dst", "stat", "weight", "z")


def _read_text(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputFileError(f"no such file: {path}") from None
    except OSError as exc:
        raise InputFileError(f"cannot read {path}: {exc}") from None


def _write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="")


def fmt(x):
    x = float(x)
    return "nan" if math.isnan(x) else repr(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, (float, np.floating)):
        return None if not math.isfinite(obj) else float(obj)
    return obj


def write_json(doc, path):
    _write_text(path, json.dumps(_jsonable(doc), sort_keys=True, indent=1) + "\n")


def read_json(path):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg})", exc.lineno) from None


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def write_csv(path, header, rows):
    _write_text(path, _csv_text(header, rows))


# panel -----------------------------------------------------------------------

def write_panel(panel, path):
    write_json({
        "calendar": [d.isoformat() for d in panel.calendar],
        "series_ids": [[a, k.value] for a, k in panel.series_ids],
        "data": [[v if m else None for v, m in zip(row, mrow)]
                 for row, mrow in zip(panel.data.tolist(), panel.mask.tolist())],
    }, path)


def read_panel(path):
    doc = read_json(path)
    try:
        calendar = [dt.date.fromisoformat(d) for d in doc["calendar"]]
        rows = doc["data"]
        data = np.array([[np.nan if v is None else float(v) for v in row] for row in rows],
                        dtype=float).reshape(len(rows), len(calendar))
        return Panel(calendar, [tuple(s) for s in doc["series_ids"]], data, ~np.isnan(data))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed panel document ({exc})") from None


# edge results ----------------------------------------------------------------

def edge_rows(m):
    valid = m.valid(m.meta.get("z_star", 3.0))
    for a, b in zip(*np.nonzero(m.pair_mask())):
        yield (m.row_labels[a], m.col_labels[b], m.kind, fmt(m.stat[a, b]),
               fmt(m.null_mean[a, b]), fmt(m.null_std[a, b]), fmt(m.z[a, b]),
               int(m.n_obs[a, b]), "true" if valid[a, b] else "false")


def write_edges(matrices, path):
    """One line per evaluated pair; a symmetric block lists each pair once."""
    if isinstance(matrices, EdgeMatrix):
        matrices = [matrices]
    write_csv(path, EDGE_HEADER, [r for m in matrices for r in edge_rows(m)])


def _parse_float(text, line):
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"bad number {text!r}", line) from None


def read_edges(path, min_obs=0, z_star=3.0):
    """Edge blocks keyed by ``(kind, src signal, dst signal)``, in file order.

    Row and column labels are sorted. The file does not record the
    observation threshold; pairs below it carry NaN Z-scores, so validity at
    any z is unaffected by ``min_obs``.
    """
    reader = csv.reader(io.StringIO(_read_text(path)))
    header = next(reader, None)
    if header is None or tuple(header) != EDGE_HEADER:
        raise ParseError(f"{path}: expected header {','.join(EDGE_HEADER)}", 1)
    blocks = OrderedDict()
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(EDGE_HEADER):
            raise ParseError(f"expected {len(EDGE_HEADER)} fields, got {len(row)}", line)
        src, dst, kind = row[:3]
        try:
            key = (kind, split_label(src)[1].value, split_label(dst)[1].value)
            n_obs = int(row[7])
        except ValueError:
            raise ParseError(f"bad label or count in {row!r}", line) from None
        values = [_parse_float(t, line) for t in row[3:7]]
        blocks.setdefault(key, []).append((src, dst, values, n_obs))

    out = OrderedDict()
    for (kind, s_sig, d_sig), lines in blocks.items():
        symmetric = kind in SYMMETRIC_KINDS and s_sig == d_sig
        if symmetric:
            rows = cols = sorted({x for src, dst, _, _ in lines for x in (src, dst)})
        else:
            rows = sorted({src for src, _, _, _ in lines})
            cols = sorted({dst for _, dst, _, _ in lines})
        m = EdgeMatrix.empty(kind, rows, cols, min_obs, symmetric)
        m.meta["z_star"] = z_star
        ri = {r: k for k, r in enumerate(rows)}
        ci = {c: k for k, c in enumerate(cols)}
        for src, dst, (stat, mean, std, z), n_obs in lines:
            if math.isfinite(z):
                flag = FLAG_OK
            elif std == 0:
                flag = FLAG_FLAT_NULL
            elif n_obs <= min_obs:
                flag = FLAG_SHORT
            else:
                flag = FLAG_DEGENERATE
            a, b = ri[src], ci[dst]
            if symmetric and a > b:
                a, b = b, a
            m._set(a, b, stat, mean, std, z, n_obs, flag, 0)
        out[(kind, s_sig, d_sig)] = m
    return out


# network outputs ---------------------------------------------------------------

def write_edge_list(net, path):
    rows = [(net.nodes[i], net.nodes[j], fmt(net.stat[i, j]), fmt(net.weights[i, j]),
             fmt(net.z[i, j])) for i, j in net.edge_list()]
    write_csv(path, EDGE_LIST_HEADER, rows)


def write_ccdf(x, p, path):
    write_csv(path, ("x", "ccdf"), [(fmt(a), fmt(b)) for a, b in zip(x, p)])


def metrics_document(net, report):
    return {
        "network": {
            "kind": net.kind,
            "directed": net.directed,
            "bipartite": net.bipartite,
            "z_star": net.z_star,
            "n_nodes": net.n_nodes,
            "n_edges": report.n_edges,
            "evaluated_pairs": net.evaluated_pairs,
            "density": report.density,
            "avg_degree": report.avg_degree,
            "avg_stat": report.avg_stat,
            "giant_size": report.giant_size,
            "n_components": int(report.component_id.max()) + 1 if net.n_nodes else 0,
        },
        "nodes": {
            node: {
                "degree": report.degree[k],
                "impacting": report.impacting[k],
                "impacted": report.impacted[k],
                "component": report.component_id[k],
                "closeness": report.closeness[k],
                "betweenness": report.betweenness[k],
            }
            for k, node in enumerate(net.nodes)
        },
    }
