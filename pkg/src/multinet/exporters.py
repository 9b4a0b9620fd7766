"""Deterministic serialization of results: CSV, JSON, GraphML, DOT, SVG.

All floats are written with 12 significant digits; undefined (NaN) values
serialize as the literal token NA, never as 0. Identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

import numpy as np


def format_value(v):
    if v is None:
        return "NA"
    v = float(v)
    if math.isnan(v):
        return "NA"
    return f"{v:.12g}"


def write_matrix_csv(path, values, row_labels, col_labels, corner=""):
    """Matrix CSV with header row/column labels; NaN serializes as NA."""
    values = np.asarray(values, dtype=float)
    lines = [",".join([corner] + list(col_labels))]
    for label, row in zip(row_labels, values):
        lines.append(",".join([label] + [format_value(v) for v in row]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_table_csv(path, header, rows):
    """Generic CSV table; numeric cells go through format_value."""
    def cell(v):
        if isinstance(v, str):
            return v
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        return format_value(v)

    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return None if math.isnan(v) else v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def write_json(path, obj):
    text = json.dumps(_jsonify(obj), indent=2, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="utf-8")


def write_graphml(path, backbone):
    """GraphML 1.0 serialization of a backbone.

    Nodes carry an `in_component` attribute marking membership in the
    largest connected component; edges are the retained directed links.
    """
    members = set(backbone.component_members)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="d0" for="node" attr.name="in_component" attr.type="boolean"/>',
        '  <graph id="backbone" edgedefault="directed">',
    ]
    for node in backbone.node_ids:
        flag = "true" if node in members else "false"
        out.append(f"    <node id={quoteattr(node)}>")
        out.append(f'      <data key="d0">{flag}</data>')
        out.append("    </node>")
    for src, dst in backbone.directed_edges:
        out.append(f"    <edge source={quoteattr(src)} target={quoteattr(dst)}/>")
    out += ["  </graph>", "</graphml>"]
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def write_dot(path, backbone):
    members = set(backbone.component_members)
    out = ["digraph backbone {"]
    for node in backbone.node_ids:
        attrs = ' [style=filled, fillcolor="lightyellow"]' if node in members else ""
        out.append(f'  "{node}"{attrs};')
    for src, dst in backbone.directed_edges:
        out.append(f'  "{src}" -> "{dst}";')
    out.append("}")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def _diverging_color(value, vmax):
    """Blue (negative) - white (zero) - warm (positive) diverging scale."""
    if value is None or math.isnan(value):
        return "#d9d9d9"
    t = max(-1.0, min(1.0, value / vmax)) if vmax > 0 else 0.0
    if t >= 0:
        # white -> orange-red
        r = 255
        g = round(255 - 160 * t)
        b = round(255 - 220 * t)
    else:
        r = round(255 + 200 * t)
        g = round(255 + 120 * t)
        b = 255
    return f"#{r:02x}{g:02x}{b:02x}"


def svg_heatmap(path, values, row_labels, col_labels, title=""):
    """Standalone SVG heatmap with a fixed diverging scale.

    The scale is symmetric about zero with the data's max absolute value;
    min and max are annotated explicitly. NaN cells render gray.
    """
    values = np.asarray(values, dtype=float)
    nrow, ncol = values.shape
    finite = values[np.isfinite(values)]
    vmax = float(np.abs(finite).max()) if finite.size else 1.0
    vmin_data = float(finite.min()) if finite.size else float("nan")
    vmax_data = float(finite.max()) if finite.size else float("nan")
    cell = 22
    left, top = 90, 50
    width = left + ncol * cell + 20
    height = top + nrow * cell + 45
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left}" y="20" font-family="sans-serif" font-size="14">'
        f"{escape(title)}</text>",
    ]
    for j, label in enumerate(col_labels):
        x = left + j * cell + cell // 2
        out.append(
            f'<text x="{x}" y="{top - 6}" font-family="sans-serif" font-size="9" '
            f'text-anchor="middle">{escape(str(label))}</text>')
    for i, label in enumerate(row_labels):
        y = top + i * cell + cell // 2 + 3
        out.append(
            f'<text x="{left - 6}" y="{y}" font-family="sans-serif" font-size="9" '
            f'text-anchor="end">{escape(str(label))}</text>')
    for i in range(nrow):
        for j in range(ncol):
            color = _diverging_color(values[i, j], vmax)
            x = left + j * cell
            y = top + i * cell
            out.append(
                f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" '
                f'fill="{color}" stroke="#cccccc"/>')
    legend_y = top + nrow * cell + 25
    out.append(
        f'<text x="{left}" y="{legend_y}" font-family="sans-serif" font-size="10">'
        f"min = {format_value(vmin_data)}, max = {format_value(vmax_data)}, "
        f"scale symmetric at |{format_value(vmax)}| "
        f"(warm = positive, blue = negative, gray = NA)</text>")
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")
