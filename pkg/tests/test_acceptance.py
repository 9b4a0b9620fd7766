"""Acceptance suite: one test per criterion, at the stated tolerances.

Each test is self-contained and uses independently computed reference
values (hand computations, closed forms, or brute-force enumeration),
never the library's own output as its oracle.
"""

import filecmp
import itertools
import json
import time

import numpy as np
import pytest

from multinet import (
    drg_expectation,
    extract_backbone,
    fit_wrcm,
    jackknife,
    null_enhanced_global,
    binary_reciprocity,
    cross_product_stats,
    pearson_pair,
    pearson_binary_pair,
    wrcm_self_rho,
)
from multinet.cli import main as cli_main
from multinet.demo import generate_demo, synthetic_pair


def random_binary(rng, n, density):
    a = (rng.random((n, n)) < density).astype(float)
    np.fill_diagonal(a, 0)
    return a


def test_criterion_01_reciprocity_extremes():
    """Symmetric layer: r_b = rho_b = 1; strictly triangular:
    r_b = 0 and rho_b = -c/(1-c), to 1e-12. Runtime < 1 s."""
    start = time.perf_counter()
    rng = np.random.default_rng(0)
    sym = random_binary(rng, 10, 0.4)
    sym = np.maximum(sym, sym.T)
    r_b, _, rho_b = binary_reciprocity(sym)
    assert r_b == 1.0
    assert abs(rho_b - 1.0) < 1e-12

    tri = np.triu(rng.random((10, 10)), 1) * (rng.random((10, 10)) < 0.5)
    links = (tri > 0).sum()
    r_b, c, rho_b = binary_reciprocity(tri)
    assert r_b == 0.0
    assert c == links / 90
    assert abs(rho_b - (-c / (1 - c))) < 1e-12
    assert time.perf_counter() - start < 1.0


def test_criterion_02_drg_identity():
    """<r_b>_DRG equals the connectance exactly on 100 random binary
    graphs with N <= 20."""
    rng = np.random.default_rng(1)
    for _ in range(100):
        n = int(rng.integers(3, 21))
        a = random_binary(rng, n, rng.uniform(0.1, 0.9))
        if a.sum() == 0:
            continue
        connectance = float((a > 0).sum()) / (n * (n - 1))
        assert drg_expectation(a) == connectance


def test_criterion_03_wrcm_constraint_reproduction():
    """50 random 10-node integer layers: fitted strengths within relative
    1e-6; |self rho| < 1e-5 under the layer's own fit. Runtime < 30 s."""
    start = time.perf_counter()
    rng = np.random.default_rng(2)
    for trial in range(50):
        w = rng.integers(1, 30, size=(10, 10)) * (rng.random((10, 10)) < 0.5)
        np.fill_diagonal(w, 0)
        w = w.astype(float)
        if w.sum() == 0:
            continue
        fit = fit_wrcm(w)
        mutual = np.minimum(w, w.T)
        right = w - mutual
        for observed, expected in (
            (right.sum(axis=1), fit.expected_right.sum(axis=1)),
            (right.sum(axis=0), fit.expected_right.sum(axis=0)),
            (mutual.sum(axis=1), fit.expected_mutual.sum(axis=1)),
        ):
            active = observed > 0
            rel = np.abs(expected[active] - observed[active]) / observed[active]
            assert rel.max(initial=0.0) < 1e-6
        assert abs(wrcm_self_rho(w, fit)) < 1e-5
    assert time.perf_counter() - start < 30.0


def enumerate_dyad(xi, yj, xj, yi, zi, zj):
    """Expected (w_ij, w_ji) of one dyad by truncated ensemble enumeration.

    Each weight pair decomposes uniquely into (right, left, mutual) parts
    with statistical weight (x_i y_j)^a (x_j y_i)^b (z_i z_j)^m. The
    truncation is chosen so the geometric tail is below 1e-10.
    """
    q = max(xi * yj, xj * yi, zi * zj)
    cutoff = 20 if q <= 0 else max(50, int(np.ceil(np.log(1e-12) / np.log(q))))
    wij = np.arange(cutoff + 1)[:, None]
    wji = np.arange(cutoff + 1)[None, :]
    m = np.minimum(wij, wji)
    logs = ((wij - m) * np.log(max(xi * yj, 1e-300))
            + (wji - m) * np.log(max(xj * yi, 1e-300))
            + m * np.log(max(zi * zj, 1e-300)))
    weight = np.exp(logs)
    total = weight.sum()
    return float((wij * weight).sum() / total), float((wji * weight).sum() / total)


def test_criterion_04_wrcm_oracle_equivalence():
    """All 3-node integer layers with total weight <= 6: fitted expected
    dyad weights match brute-force ensemble enumeration within 1e-6."""
    checked = 0
    for cells in itertools.product(range(7), repeat=6):
        if sum(cells) == 0 or sum(cells) > 6:
            continue
        w = np.zeros((3, 3))
        w[0, 1], w[0, 2], w[1, 0], w[1, 2], w[2, 0], w[2, 1] = cells
        fit = fit_wrcm(w)
        for i in range(3):
            for j in range(i + 1, 3):
                e_ij, e_ji = enumerate_dyad(fit.x[i], fit.y[j],
                                            fit.x[j], fit.y[i],
                                            fit.z[i], fit.z[j])
                assert abs(fit.expected_total[i, j] - e_ij) < 1e-6
                assert abs(fit.expected_total[j, i] - e_ji) < 1e-6
        checked += 1
    assert checked == 923  # all nonzero 6-cell layers with total <= 6


def test_criterion_05_scale_invariance():
    """r and m invariant under independent positive layer rescalings to
    relative 1e-12, over 100 random pairs."""
    rng = np.random.default_rng(3)
    for _ in range(100):
        n = int(rng.integers(3, 12))
        a = rng.random((n, n)) * (rng.random((n, n)) < 0.6)
        b = rng.random((n, n)) * (rng.random((n, n)) < 0.6)
        np.fill_diagonal(a, 0)
        np.fill_diagonal(b, 0)
        if a.sum() == 0 or b.sum() == 0:
            continue
        sa, sb = rng.uniform(1e-3, 1e3, size=2)
        plain = cross_product_stats(a, b)
        scaled = cross_product_stats(sa * a, sb * b)
        assert abs(scaled.r - plain.r) <= 1e-12 * abs(plain.r)
        assert abs(scaled.m - plain.m) <= 1e-12 * abs(plain.m)


def test_criterion_06_planted_signal_detection():
    """20-node planted pairs at signal-to-noise 3:1, 100 seeded trials:
    reverse plant gives rho > 0 and rev Pearson > syn Pearson; aligned
    plant gives mu > 0 and syn > rev."""
    for seed in range(100):
        rng = np.random.default_rng(1000 + seed)
        a, b = synthetic_pair(20, rng, noise_ratio=1 / 3, reverse=True)
        fa, fb = fit_wrcm(a), fit_wrcm(b)
        assert null_enhanced_global(a, b, fa, fb).rho > 0.0
        assert pearson_pair(a, b, "rev") > pearson_pair(a, b, "syn")

        rng = np.random.default_rng(5000 + seed)
        a, b = synthetic_pair(20, rng, noise_ratio=1 / 3, reverse=False)
        fa, fb = fit_wrcm(a), fit_wrcm(b)
        assert null_enhanced_global(a, b, fa, fb).mu > 0.0
        assert pearson_pair(a, b, "syn") > pearson_pair(a, b, "rev")


def test_criterion_07_backbone_correctness():
    """Planted mutual cliques are recovered exactly; one-way edges never
    survive the mutualization."""
    rng = np.random.default_rng(4)
    for _ in range(20):
        n = 15
        mask = np.zeros((n, n), dtype=bool)
        clique = rng.choice(n, size=6, replace=False)
        for i in clique:
            for j in clique:
                if i != j:
                    mask[i, j] = True
        small = [k for k in range(n) if k not in clique][:3]
        for i in small:
            for j in small:
                if i != j:
                    mask[i, j] = True
        # one-way noise edges (never both directions)
        for _ in range(15):
            i, j = rng.choice(n, size=2, replace=False)
            if not mask[j, i]:
                mask[i, j] = True
        backbone = extract_backbone(mask)
        assert backbone.component_members == [str(i) for i in sorted(clique)]
        one_way = mask & ~mask.T
        assert not (backbone.mutual_adj & one_way).any()


def test_criterion_08_jackknife(tmp_path):
    """Hand value 1/3 on (1, 2, 3) to 1e-12; zero on a constant series;
    the exclude-period mode reproduces the T-1-period pipeline."""
    from multinet import LayerSpec, MultiplexTensor, NodeEntry, NodeTable

    def tensor_from(values):
        w = np.zeros((len(values), 1, 2, 2))
        w[:, 0, 0, 1] = values
        return MultiplexTensor(w, [str(2000 + i) for i in range(len(values))],
                               [LayerSpec("A")],
                               NodeTable([NodeEntry("a"), NodeEntry("b")]))

    def stat(t):
        return float(t.weights[:, 0, 0, 1].mean())

    estimate = jackknife(stat, tensor_from([1.0, 2.0, 3.0]))
    assert abs(estimate.variance - 1 / 3) < 1e-12
    assert jackknife(stat, tensor_from([3.0, 3.0, 3.0])).variance == 0.0

    # exclude-period mode == running on a manifest without that period
    demo = tmp_path / "demo"
    generate_demo(demo, n_nodes=6, seed=11)
    manifest = json.loads((demo / "manifest.json").read_text())
    for layer in manifest["layers"]:
        layer["files"].pop("2008")
    (demo / "manifest_no2008.json").write_text(json.dumps(manifest))
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert cli_main(["recip", "--manifest", str(demo / "manifest.json"),
                     "--out", str(out_a), "--exclude-period", "2008",
                     "--per-year"]) == 0
    assert cli_main(["recip", "--manifest", str(demo / "manifest_no2008.json"),
                     "--out", str(out_b), "--per-year"]) == 0
    assert (out_a / "reciprocity.csv").read_bytes() == \
        (out_b / "reciprocity.csv").read_bytes()


def test_criterion_09_pearson_identities():
    """Synergic diagonal = 1; rev(A, B) = syn(A, B.T) to 1e-12; rho_b
    equals the binary reverse self-Pearson to 1e-12."""
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(4, 12))
        a = rng.random((n, n)) * (rng.random((n, n)) < 0.6)
        b = rng.random((n, n)) * (rng.random((n, n)) < 0.6)
        np.fill_diagonal(a, 0)
        np.fill_diagonal(b, 0)
        if a.sum() == 0 or b.sum() == 0:
            continue
        assert abs(pearson_pair(a, a, "syn") - 1.0) < 1e-12
        assert abs(pearson_pair(a, b, "rev")
                   - pearson_pair(a, b.T, "syn")) < 1e-12
        links = (a > 0).sum()
        if links in (0, n * (n - 1)):
            continue
        _, _, rho_b = binary_reciprocity(a)
        assert abs(rho_b - pearson_binary_pair(a, a, "rev")) < 1e-12


def test_criterion_10_end_to_end_demo(tmp_path):
    """The bundled 33-node, 10-layer, 9-period demo runs the full pipeline
    in under 60 s with byte-identical artifacts across two runs."""
    demo = tmp_path / "demo"
    generate_demo(demo, n_nodes=33, seed=20020)
    manifest = str(demo / "manifest.json")

    def pipeline(out):
        commands = [
            ["pearson", "--manifest", manifest, "--out", out],
            ["wrcm-fit", "--manifest", manifest, "--out", out],
            ["rho", "--manifest", manifest, "--out", out, "--pair", "FDI:NOx"],
            ["backbone", "--manifest", manifest, "--out", out,
             "--pair", "FDI:NOx"],
            ["links", "--manifest", manifest, "--out", out],
            ["imbalance", "--manifest", manifest, "--out", out],
            ["jackknife", "--manifest", manifest, "--out", out,
             "--statistic", "cross_r", "--pair", "FDI:NOx"],
        ]
        for argv in commands:
            assert cli_main(argv) == 0

    out_a, out_b = tmp_path / "run_a", tmp_path / "run_b"
    start = time.perf_counter()
    pipeline(str(out_a))
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"pipeline took {elapsed:.1f}s"
    pipeline(str(out_b))

    names = sorted(p.name for p in out_a.iterdir())
    assert names == sorted(p.name for p in out_b.iterdir())
    match, mismatch, errors = filecmp.cmpfiles(out_a, out_b, names, shallow=False)
    assert not mismatch and not errors
    assert len(match) > 20
