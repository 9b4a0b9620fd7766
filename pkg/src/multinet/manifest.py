"""Manifest-driven ingestion of multiplex data from CSV matrices.

A manifest is a JSON file:

    {
      "nodes_file": "nodes.csv",
      "ordering": "financialisation",        # or "alphabetical", "file-order"
      "layers": [
        {"layer_id": "FDI", "name": "...", "kind": "financial",
         "units": "USD", "files": {"2002": "fdi_2002.csv", ...}},
        ...
      ],
      "solver": {"tol": 1e-8, "max_iter": 100000,
                 "damping": 0.5, "rescale_target": 10},
      "groups": {"financial": [...], "environmental": [...]}
    }

Paths are relative to the manifest's directory. The nodes file is a CSV
with columns node_id, name, financialisation. Each matrix file is a CSV
whose first row and first column carry node ids; cell (i, j) is the flow
from i to j. Missing dyads are zeros; negative weights are rejected;
nonzero diagonals are dropped with a warning count.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import LayerKind, LayerSpec, MultiplexTensor, NodeEntry, NodeTable
from .errors import IngestError
from .nullmodel import SolverConfig

ORDERINGS = ("financialisation", "alphabetical", "file-order")


@dataclass
class LayerFiles:
    layer_id: str
    name: str
    kind: LayerKind
    units: str
    files: dict  # period label -> Path


@dataclass
class ManifestConfig:
    nodes_file: Path
    layers: list
    ordering: str = "financialisation"
    solver: SolverConfig = field(default_factory=SolverConfig)
    groups: dict = field(default_factory=dict)
    base_dir: Path = Path(".")

    @property
    def periods(self):
        return sorted(self.layers[0].files)


def load_manifest(path):
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise IngestError(f"{path}: cannot read manifest: {exc}") from exc
    base = path.parent
    if "nodes_file" not in raw or "layers" not in raw or not raw["layers"]:
        raise IngestError(f"{path}: manifest needs 'nodes_file' and nonempty 'layers'")
    ordering = raw.get("ordering", "financialisation")
    if ordering not in ORDERINGS:
        raise IngestError(f"{path}: unknown ordering {ordering!r}, expected one of {ORDERINGS}")
    layers = []
    for entry in raw["layers"]:
        try:
            kind = LayerKind(entry.get("kind", "other"))
        except ValueError:
            raise IngestError(
                f"{path}: layer {entry.get('layer_id')!r} has unknown kind "
                f"{entry.get('kind')!r}") from None
        layers.append(LayerFiles(
            layer_id=entry["layer_id"],
            name=entry.get("name", entry["layer_id"]),
            kind=kind,
            units=entry.get("units", ""),
            files={p: base / f for p, f in entry["files"].items()},
        ))
    ids = [l.layer_id for l in layers]
    if len(set(ids)) != len(ids):
        raise IngestError(f"{path}: duplicate layer ids")
    periods = sorted(layers[0].files)
    for l in layers:
        if sorted(l.files) != periods:
            raise IngestError(
                f"{path}: layer {l.layer_id!r} periods {sorted(l.files)} "
                f"differ from {periods}")
    solver = SolverConfig(**raw.get("solver", {}))
    return ManifestConfig(
        nodes_file=base / raw["nodes_file"],
        layers=layers,
        ordering=ordering,
        solver=solver,
        groups=raw.get("groups", {}),
        base_dir=base,
    )


def read_node_table(path):
    path = Path(path)
    entries = []
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            for lineno, row in enumerate(reader, start=2):
                try:
                    entries.append(NodeEntry(
                        node_id=row["node_id"].strip(),
                        name=(row.get("name") or "").strip(),
                        financialisation=float(row["financialisation"]),
                    ))
                except (KeyError, TypeError, ValueError) as exc:
                    raise IngestError(f"{path}, line {lineno}: bad node row: {exc}") from exc
    except OSError as exc:
        raise IngestError(f"{path}: cannot read nodes file: {exc}") from exc
    if not entries:
        raise IngestError(f"{path}: nodes file is empty")
    return NodeTable(entries)


def read_matrix_csv(path, node_ids):
    """Read one adjacency CSV and realign rows/columns to node_ids."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IngestError(f"{path}: cannot read matrix file: {exc}") from exc
    if not rows:
        raise IngestError(f"{path}: matrix file is empty")
    header = [h.strip() for h in rows[0][1:]]
    known = set(node_ids)
    for col, h in enumerate(header, start=2):
        if h not in known:
            raise IngestError(f"{path}, header column {col}: unknown node {h!r}")
    if len(set(header)) != len(header) or len(header) != len(node_ids):
        raise IngestError(
            f"{path}: header has {len(header)} columns, expected the "
            f"{len(node_ids)} node ids exactly once")
    n = len(node_ids)
    row_ids = []
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        rid = row[0].strip()
        if rid not in known:
            raise IngestError(f"{path}, line {lineno}: unknown node {rid!r}")
        if rid in row_ids:
            raise IngestError(f"{path}, line {lineno}: duplicate row for {rid!r}")
        if len(row) - 1 != n:
            raise IngestError(
                f"{path}, line {lineno}: {len(row) - 1} values for {n} columns")
        values = []
        for col, cell in enumerate(row[1:]):
            cell = cell.strip()
            value = 0.0
            if cell and cell != "NA":
                try:
                    value = float(cell)
                except ValueError:
                    raise IngestError(
                        f"{path}, line {lineno}, column {header[col]!r}: "
                        f"not a number: {cell!r}") from None
            if value < 0:
                raise IngestError(
                    f"{path}, line {lineno}, column {header[col]!r}: "
                    f"negative weight {value}")
            values.append(value)
        row_ids.append(rid)
        data.append(values)
    if len(row_ids) != n:
        missing = sorted(known - set(row_ids))
        raise IngestError(f"{path}: missing rows for nodes {missing}")
    # realign from file order to the requested node order
    raw = np.asarray(data)
    ridx = [row_ids.index(i) for i in node_ids]
    cidx = [header.index(i) for i in node_ids]
    return raw[np.ix_(ridx, cidx)]


def ingest(manifest):
    """Build the canonical MultiplexTensor from a manifest.

    Returns (tensor, diagonal_warnings) where diagonal_warnings counts the
    self-flow entries that were dropped.
    """
    nodes = read_node_table(manifest.nodes_file)
    node_ids = nodes.ids
    periods = manifest.periods
    k = len(manifest.layers)
    n = len(node_ids)
    weights = np.zeros((len(periods), k, n, n))
    dropped = 0
    for ki, layer in enumerate(manifest.layers):
        for ti, period in enumerate(periods):
            m = read_matrix_csv(layer.files[period], node_ids)
            diag = np.diagonal(m)
            dropped += int((diag != 0).sum())
            np.fill_diagonal(m, 0.0)
            weights[ti, ki] = m
    specs = [LayerSpec(l.layer_id, l.name, l.kind, l.units) for l in manifest.layers]
    tensor = MultiplexTensor(weights, periods, specs, nodes)
    if manifest.ordering == "financialisation":
        tensor = tensor.canonical()
    elif manifest.ordering == "alphabetical":
        order = sorted(range(n), key=lambda i: node_ids[i])
        tensor = tensor.reorder_nodes(order)
    return tensor, dropped
