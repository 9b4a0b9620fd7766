"""Deterministic synthetic multiplex generator.

Produces a 33-node, 10-layer, 9-period dataset in the CSV/manifest layout
read by `multinet.manifest.ingest`: five sparse "financial" layers and five
complete "environmental" layers built as noisy transposes of the financial
flows, so the reciprocity analysis has a planted signal to find.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .exporters import write_table_csv

FINANCIAL = ["FDI", "Equity", "SD", "LD", "TD"]
ENVIRONMENTAL = ["NOx", "PM10", "SO2", "CO2", "Water"]
PERIODS = [str(y) for y in range(2002, 2011)]


def synthetic_pair(n, rng, alpha=1.0, noise_ratio=1.0 / 3.0, density=0.5,
                   reverse=True):
    """One sparse layer A and a planted partner B = alpha*A.T + noise.

    With reverse=False the partner tracks A itself (aligned, multiplexity
    signal) instead of its transpose. The noise layer carries `noise_ratio`
    of the signal's total weight.
    """
    # mild size heterogeneity, heavy dyad-specific factors: the planted
    # dyad structure must not be explained away by strength constraints
    size = rng.lognormal(0.0, 0.3, size=n)
    base = np.outer(size, size) * rng.lognormal(0.0, 2.0, size=(n, n))
    keep = rng.random((n, n)) < density
    a = np.where(keep, base, 0.0)
    np.fill_diagonal(a, 0.0)
    noise = np.outer(size, size) * rng.lognormal(0.0, 2.0, size=(n, n))
    noise *= rng.random((n, n)) < density
    np.fill_diagonal(noise, 0.0)
    signal = alpha * (a.T if reverse else a)
    if noise.sum() > 0:
        noise *= noise_ratio * signal.sum() / noise.sum()
    return a, signal + noise


def _gravity(size, rng, sigma):
    n = len(size)
    w = np.outer(size, size) * rng.lognormal(0.0, sigma, size=(n, n))
    np.fill_diagonal(w, 0.0)
    return w


def generate_demo(outdir, n_nodes=33, seed=20020, periods=PERIODS):
    """Write the demo dataset; returns the manifest path.

    Financial layers are sparse (about half the dyads present);
    environmental layers are complete and partially reciprocate the
    financial flows (environmental flow j->i tracks financial flow i->j).
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    n = n_nodes

    fin_score = np.sort(np.round(rng.uniform(15.0, 32.0, size=n), 1))
    node_ids = [f"C{i + 1:02d}" for i in range(n)]
    write_table_csv(
        outdir / "nodes.csv",
        ["node_id", "name", "financialisation"],
        [[node_ids[i], f"Country {i + 1:02d}", float(fin_score[i])] for i in range(n)],
    )

    size = rng.lognormal(0.0, 0.8, size=n) * (0.5 + fin_score / fin_score.max())
    layers = []
    for t in periods:
        year_scale = rng.lognormal(0.0, 0.1)
        fin_mats = {}
        for layer_id in FINANCIAL:
            w = _gravity(size, rng, 0.6) * year_scale
            w *= rng.random((n, n)) < 0.55
            np.fill_diagonal(w, 0.0)
            fin_mats[layer_id] = w
        env_mats = {}
        for i, layer_id in enumerate(ENVIRONMENTAL):
            partner = fin_mats[FINANCIAL[i]]
            signal = 0.8 * partner.T / max(partner.sum(), 1.0)
            background = _gravity(size, rng, 0.4)
            background /= background.sum()
            w = (3.0 * signal + background) * 1e4 * year_scale
            w += 1e-3  # complete layer: every dyad carries some flow
            np.fill_diagonal(w, 0.0)
            env_mats[layer_id] = w
        layers.append((t, fin_mats, env_mats))

    manifest_layers = []
    for kind, ids, mats_idx in (("financial", FINANCIAL, 1), ("environmental", ENVIRONMENTAL, 2)):
        for layer_id in ids:
            files = {}
            for entry in layers:
                t = entry[0]
                w = entry[mats_idx][layer_id]
                fname = f"{layer_id.lower()}_{t}.csv"
                write_table_csv(
                    outdir / fname,
                    [""] + node_ids,
                    [[node_ids[i]] + [float(v) for v in w[i]] for i in range(n)],
                )
                files[t] = fname
            manifest_layers.append({
                "layer_id": layer_id,
                "name": layer_id,
                "kind": kind,
                "units": "USD" if kind == "financial" else "Gg",
                "files": files,
            })

    manifest = {
        "nodes_file": "nodes.csv",
        "ordering": "financialisation",
        "layers": manifest_layers,
        "solver": {"tol": 1e-8, "max_iter": 100000, "damping": 0.5,
                   "rescale_target": 10},
        "groups": {"financial": ["FDI", "Equity", "SD", "LD"],
                   "environmental": ENVIRONMENTAL},
    }
    path = outdir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return path
