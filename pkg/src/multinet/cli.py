"""Command-line workflow: `multinet <subcommand> --manifest <path> ...`.

Exit codes: 0 success, 1 validation/input error, 2 solver non-convergence,
3 I/O error. All outputs are deterministic: rerunning a command with the
same inputs produces byte-identical files.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import demo as demo_mod
from .analysis import extract_backbone, jackknife, link_counts
from .core import imbalance_series
from .errors import (
    ConvergenceError,
    InsufficientSampleError,
    MultinetError,
    UndefinedStatisticError,
    ValidationError,
)
from .exporters import (
    format_value,
    svg_heatmap,
    write_dot,
    write_graphml,
    write_json,
    write_matrix_csv,
    write_table_csv,
)
from .manifest import ingest, load_manifest
from .metrics import (
    binary_reciprocity,
    cross_product_stats,
    pearson_binary_pair,
    pearson_pair,
    weighted_reciprocity_min,
    weighted_reciprocity_pearson,
)
from .nullmodel import (
    expected_cross_stats,
    fit_wrcm,
    null_enhanced_local,
    wrcm_self_rho,
)


def _add_common(parser):
    parser.add_argument("--manifest", required=True, help="path to manifest.json")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--exclude-period", default=None, metavar="LABEL",
                        help="drop one period before the analysis")
    parser.add_argument("--tol", type=float, default=None,
                        help="solver tolerance override")
    parser.add_argument("--max-iter", type=int, default=None,
                        help="solver iteration cap override")
    parser.add_argument("--rescale-target", type=int, default=None,
                        help="integer rescaling target override")


def _add_mode(parser):
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--average", dest="per_year", action="store_false",
                      help="aggregate over the whole period (default)")
    mode.add_argument("--per-year", dest="per_year", action="store_true",
                      help="emit one result per period")
    parser.set_defaults(per_year=False)


def _load(args):
    manifest = load_manifest(args.manifest)
    if args.tol is not None:
        manifest.solver.tol = args.tol
    if args.max_iter is not None:
        manifest.solver.max_iter = args.max_iter
    if args.rescale_target is not None:
        manifest.solver.rescale_target = args.rescale_target
    tensor, dropped = ingest(manifest)
    if dropped:
        print(f"warning: dropped {dropped} nonzero diagonal entries", file=sys.stderr)
    if args.exclude_period is not None:
        tensor = tensor.drop_period(args.exclude_period)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    return manifest, tensor, outdir


def _parse_pair(tensor, pair):
    try:
        a, b = pair.split(":")
    except ValueError:
        raise ValidationError(f"--pair must be LAYER:LAYER, got {pair!r}") from None
    tensor.layer_index(a)
    tensor.layer_index(b)
    return a, b


def _pair_matrix(tensor, stat, report):
    """K x K matrix of a pairwise statistic; failures become NA + report line."""
    ids = tensor.layer_ids
    k = len(ids)
    values = np.full((k, k), np.nan)
    for i, la in enumerate(ids):
        for j, lb in enumerate(ids):
            try:
                values[i, j] = stat(la, lb)
            except (UndefinedStatisticError, ConvergenceError) as exc:
                report.append(f"{la}:{lb}: {exc}")
    return values


def _write_report(path, lines):
    text = "\n".join(lines) + "\n" if lines else "no failures\n"
    Path(path).write_text(text, encoding="utf-8")


# --- subcommands -----------------------------------------------------------

def cmd_pearson(args):
    _, tensor, outdir = _load(args)
    ids = tensor.layer_ids
    direction = args.direction
    fn = pearson_binary_pair if args.binary else pearson_pair
    suffix = f"{direction}_binary" if args.binary else direction
    report = []

    def per_year_matrix(t):
        def stat(la, lb):
            return fn(tensor.matrix(t, la), tensor.matrix(t, lb), direction)
        return _pair_matrix(tensor, stat, report)

    if args.per_year:
        for t in tensor.times:
            values = per_year_matrix(t)
            write_matrix_csv(outdir / f"pearson_{suffix}_{t}.csv", values, ids, ids)
            svg_heatmap(outdir / f"pearson_{suffix}_{t}.svg", values, ids, ids,
                        title=f"Pearson {suffix} {t}")
    elif args.averaged_weights:
        def stat(la, lb):
            return fn(tensor.layer_mean(la), tensor.layer_mean(lb), direction)
        values = _pair_matrix(tensor, stat, report)
        write_matrix_csv(outdir / f"pearson_{suffix}.csv", values, ids, ids)
        svg_heatmap(outdir / f"pearson_{suffix}.svg", values, ids, ids,
                    title=f"Pearson {suffix} (correlation of time-averaged weights)")
    else:
        stack = np.stack([per_year_matrix(t) for t in tensor.times])
        counts = (~np.isnan(stack)).sum(axis=0)
        with np.errstate(invalid="ignore"):
            values = np.where(counts > 0,
                              np.nansum(stack, axis=0) / np.maximum(counts, 1),
                              np.nan)
        write_matrix_csv(outdir / f"pearson_{suffix}.csv", values, ids, ids)
        svg_heatmap(outdir / f"pearson_{suffix}.svg", values, ids, ids,
                    title=f"Pearson {suffix} (mean over {len(tensor.times)} periods)")
    _write_report(outdir / f"pearson_{suffix}_report.txt", sorted(set(report)))
    return 0


def _recip_row(layer_id, period, w):
    def guard(fn):
        try:
            return fn()
        except UndefinedStatisticError:
            return float("nan")

    r_b = c = rho_b = float("nan")
    try:
        r_b, c, rho_b = binary_reciprocity(w)
    except UndefinedStatisticError:
        pass
    r_w = c_w = rho_w = float("nan")
    try:
        r_w, c_w, rho_w = weighted_reciprocity_pearson(w)
    except UndefinedStatisticError:
        pass
    r_min = guard(lambda: weighted_reciprocity_min(w))
    return [layer_id, period, r_b, c, rho_b, r_w, c_w, rho_w, r_min]


def cmd_recip(args):
    _, tensor, outdir = _load(args)
    header = ["layer", "period", "r_binary", "connectance", "rho_binary",
              "r_weighted", "c_weighted", "rho_weighted", "r_min"]
    rows = []
    for layer_id in tensor.layer_ids:
        if args.per_year:
            for t in tensor.times:
                rows.append(_recip_row(layer_id, t, tensor.matrix(t, layer_id)))
        else:
            rows.append(_recip_row(layer_id, "averaged", tensor.layer_mean(layer_id)))
    write_table_csv(outdir / "reciprocity.csv", header, rows)
    return 0


def cmd_cross(args):
    _, tensor, outdir = _load(args)
    ids = tensor.layer_ids
    report = []

    def matrices(get):
        def stat_r(la, lb):
            return cross_product_stats(get(la), get(lb), la, lb).r

        def stat_m(la, lb):
            return cross_product_stats(get(la), get(lb), la, lb).m

        return (_pair_matrix(tensor, stat_r, report),
                _pair_matrix(tensor, stat_m, report))

    if args.per_year:
        for t in tensor.times:
            r, m = matrices(lambda lid: tensor.matrix(t, lid))
            write_matrix_csv(outdir / f"cross_r_{t}.csv", r, ids, ids)
            write_matrix_csv(outdir / f"cross_m_{t}.csv", m, ids, ids)
    else:
        r, m = matrices(tensor.layer_mean)
        write_matrix_csv(outdir / "cross_r.csv", r, ids, ids)
        write_matrix_csv(outdir / "cross_m.csv", m, ids, ids)
    _write_report(outdir / "cross_report.txt", sorted(set(report)))
    return 0


def _fit_layer(tensor, layer_id, solver, period=None):
    w = tensor.layer_mean(layer_id) if period is None else tensor.matrix(period, layer_id)
    return w, fit_wrcm(w, solver)


def _fit_summary(layer_id, period, w, fit):
    return {
        "layer": layer_id,
        "period": period or "averaged",
        "converged": fit.converged,
        "iterations": fit.iterations,
        "log_likelihood": fit.log_likelihood,
        "max_residual": float(fit.residuals.max(initial=0.0)),
        "scale": fit.scale,
        "self_rho": wrcm_self_rho(w, fit) if w.sum() > 0 else None,
        "x": fit.x,
        "y": fit.y,
        "z": fit.z,
    }


def cmd_wrcm_fit(args):
    manifest, tensor, outdir = _load(args)
    node_ids = tensor.nodes.ids
    periods = tensor.times if args.per_year else [None]
    for layer_id in tensor.layer_ids:
        for period in periods:
            w, fit = _fit_layer(tensor, layer_id, manifest.solver, period)
            tag = f"{layer_id}_{period}" if period else layer_id
            write_json(outdir / f"wrcm_{tag}.json",
                       _fit_summary(layer_id, period, w, fit))
            expected = fit.expected_total
            s_out = w.sum(axis=1)
            rows = []
            for i in range(len(node_ids)):
                for j in range(len(node_ids)):
                    if i == j:
                        continue
                    rows.append([node_ids[i], node_ids[j], s_out[i],
                                 w[i, j], expected[i, j]])
            write_table_csv(outdir / f"wrcm_{tag}_scatter.csv",
                            ["source", "target", "source_out_strength",
                             "observed", "expected"], rows)
    return 0


def _all_fits(tensor, solver, period=None):
    fits = {}
    failures = []
    for layer_id in tensor.layer_ids:
        try:
            fits[layer_id] = _fit_layer(tensor, layer_id, solver, period)
        except (ConvergenceError, UndefinedStatisticError, ValidationError) as exc:
            failures.append(f"{layer_id}: {exc}")
    return fits, failures


def _rho_mu_matrices(tensor, fits, report, per_year=False, solver=None):
    """Global rho and mu over all layer pairs.

    Averaged mode divides time-averaged observed and expected cross stats;
    per-year mode averages observed and expected separately over periods
    before forming the corrected values.
    """
    ids = tensor.layer_ids
    k = len(ids)
    rho = np.full((k, k), np.nan)
    mu = np.full((k, k), np.nan)
    if per_year:
        year_fits = {}
        for t in tensor.times:
            f, fails = _all_fits(tensor, solver, t)
            year_fits[t] = f
            report.extend(f"{t}: {line}" for line in fails)
    for i, la in enumerate(ids):
        for j, lb in enumerate(ids):
            try:
                if per_year:
                    obs_r, obs_m, exp_r, exp_m = [], [], [], []
                    for t in tensor.times:
                        if la not in year_fits[t] or lb not in year_fits[t]:
                            continue
                        wa, fa = year_fits[t][la]
                        wb, fb = year_fits[t][lb]
                        stats = cross_product_stats(wa, wb, la, lb)
                        er, em = expected_cross_stats(fa, fb)
                        obs_r.append(stats.r)
                        obs_m.append(stats.m)
                        exp_r.append(er)
                        exp_m.append(em)
                    if not obs_r:
                        raise UndefinedStatisticError("no period could be fitted")
                    r, m = np.mean(obs_r), np.mean(obs_m)
                    er, em = np.mean(exp_r), np.mean(exp_m)
                else:
                    if la not in fits or lb not in fits:
                        raise UndefinedStatisticError("layer fit unavailable")
                    wa, fa = fits[la]
                    wb, fb = fits[lb]
                    stats = cross_product_stats(wa, wb, la, lb)
                    er, em = expected_cross_stats(fa, fb)
                    r, m = stats.r, stats.m
                rho[i, j] = (r - er) / (1.0 - er) if er < 1.0 else np.nan
                mu[i, j] = (m - em) / (1.0 - em) if em < 1.0 else np.nan
            except (UndefinedStatisticError, ConvergenceError) as exc:
                report.append(f"{la}:{lb}: {exc}")
    return rho, mu


def cmd_rho(args):
    manifest, tensor, outdir = _load(args)
    ids = tensor.layer_ids
    node_ids = tensor.nodes.ids
    report = []
    fits = {}
    if not args.per_year:
        fits, failures = _all_fits(tensor, manifest.solver)
        report.extend(failures)
    rho, mu = _rho_mu_matrices(tensor, fits, report,
                               per_year=args.per_year, solver=manifest.solver)
    write_matrix_csv(outdir / "rho_global.csv", rho, ids, ids)
    write_matrix_csv(outdir / "mu_global.csv", mu, ids, ids)
    svg_heatmap(outdir / "rho_global.svg", rho, ids, ids, title="null-corrected rho")
    svg_heatmap(outdir / "mu_global.svg", mu, ids, ids, title="null-corrected mu")
    if args.pair:
        la, lb = _parse_pair(tensor, args.pair)
        if args.per_year:
            raise ValidationError("--pair local output requires --average mode")
        wa, fa = fits[la]
        wb, fb = fits[lb]
        local = null_enhanced_local(wa, wb, fa, fb, la, lb)
        for name, values in (("rho", local.local_rho), ("mu", local.local_mu)):
            stem = f"local_{name}_{la}_{lb}"
            write_matrix_csv(outdir / f"{stem}.csv", values, node_ids, node_ids)
            svg_heatmap(outdir / f"{stem}.svg", values, node_ids, node_ids,
                        title=f"local {name} {la}:{lb}")
    _write_report(outdir / "rho_report.txt", sorted(set(report)))
    return 0


def cmd_backbone(args):
    manifest, tensor, outdir = _load(args)
    la, lb = _parse_pair(tensor, args.pair)
    period = args.period
    wa, fa = _fit_layer(tensor, la, manifest.solver, period)
    wb, fb = _fit_layer(tensor, lb, manifest.solver, period)
    local = null_enhanced_local(wa, wb, fa, fb, la, lb)
    mask = local.rho_significant if args.measure == "rho" else local.mu_significant
    backbone = extract_backbone(mask, tensor.nodes.ids)
    tag = f"{la}_{lb}_{args.measure}" + (f"_{period}" if period else "")
    write_graphml(outdir / f"backbone_{tag}.graphml", backbone)
    write_dot(outdir / f"backbone_{tag}.dot", backbone)
    lines = [f"pair: {la}:{lb}", f"measure: {args.measure}",
             f"period: {period or 'averaged'}",
             f"directed edges: {len(backbone.directed_edges)}",
             f"mutual edges: {int(backbone.mutual_adj.sum()) // 2}",
             f"empty: {backbone.empty}",
             "component members: " + " ".join(backbone.component_members)]
    (outdir / f"backbone_{tag}_members.txt").write_text(
        "\n".join(lines) + "\n", encoding="utf-8")
    return 0


def cmd_links(args):
    manifest, tensor, outdir = _load(args)
    node_ids = tensor.nodes.ids
    groups = manifest.groups
    if args.pair:
        pairs = [_parse_pair(tensor, args.pair)]
    elif groups.get("financial") and groups.get("environmental"):
        pairs = [(a, b) for a in groups["financial"] for b in groups["environmental"]]
    else:
        raise ValidationError(
            "links needs --pair or manifest groups 'financial'/'environmental'")
    fits = {}
    skipped = []
    for t in tensor.times:
        layer_ids = {lid for pair in pairs for lid in pair}
        for lid in sorted(layer_ids):
            try:
                fits[(lid, t)] = _fit_layer(tensor, lid, manifest.solver, t)
            except (ConvergenceError, UndefinedStatisticError) as exc:
                skipped.append(f"{lid} {t}: {exc}")
    n = len(node_ids)
    for measure in ("rho", "mu"):
        masks = []
        for la, lb in pairs:
            per_time = []
            for t in tensor.times:
                if (la, t) not in fits or (lb, t) not in fits:
                    per_time.append(np.zeros((n, n), dtype=bool))
                    continue
                wa, fa = fits[(la, t)]
                wb, fb = fits[(lb, t)]
                local = null_enhanced_local(wa, wb, fa, fb, la, lb)
                per_time.append(local.rho_significant if measure == "rho"
                                else local.mu_significant)
            masks.append(per_time)
        in_counts, out_counts = link_counts(np.asarray(masks))
        for name, counts in (("in", in_counts), ("out", out_counts)):
            rows = [[t] + [int(v) for v in counts[ti]]
                    for ti, t in enumerate(tensor.times)]
            write_table_csv(outdir / f"links_{name}_{measure}.csv",
                            ["period"] + node_ids, rows)
    _write_report(outdir / "links_report.txt", skipped)
    return 0


def cmd_imbalance(args):
    _, tensor, outdir = _load(args)
    node_ids = tensor.nodes.ids
    for layer_id in tensor.layer_ids:
        series = imbalance_series(tensor, layer_id)
        rows = [[t] + [float(v) for v in series[ti]]
                for ti, t in enumerate(tensor.times)]
        write_table_csv(outdir / f"imbalance_{layer_id}.csv",
                        ["period"] + node_ids, rows)
    return 0


def _jackknife_statistic(args, tensor):
    name = args.statistic
    if name == "pearson":
        la, lb = _parse_pair(tensor, args.pair)
        direction = args.direction

        def stat(t):
            vals = [pearson_pair(t.matrix(p, la), t.matrix(p, lb), direction)
                    for p in t.times]
            return float(np.mean(vals))
        label = f"pearson_{direction}_{la}_{lb}"
    elif name in ("cross_r", "cross_m"):
        la, lb = _parse_pair(tensor, args.pair)

        def stat(t):
            s = cross_product_stats(t.layer_mean(la), t.layer_mean(lb), la, lb)
            return s.r if name == "cross_r" else s.m
        label = f"{name}_{la}_{lb}"
    elif name == "recip_min":
        layer_id = args.pair
        if layer_id is None or ":" in layer_id:
            raise ValidationError("recip_min takes --pair LAYER (a single layer id)")
        tensor.layer_index(layer_id)

        def stat(t):
            return weighted_reciprocity_min(t.layer_mean(layer_id))
        label = f"recip_min_{layer_id}"
    else:
        raise ValidationError(f"unknown statistic {name!r}")
    return stat, label


def cmd_jackknife(args):
    _, tensor, outdir = _load(args)
    stat, label = _jackknife_statistic(args, tensor)
    estimate = jackknife(stat, tensor, name=label)
    write_json(outdir / f"jackknife_{label}.json", {
        "statistic": estimate.statistic_name,
        "point": estimate.point,
        "periods": estimate.periods,
        "leave_one_out": estimate.leave_one_out,
        "variance": estimate.variance,
        "std_error": estimate.std_error,
    })
    return 0


def cmd_demo(args):
    path = demo_mod.generate_demo(args.out, seed=args.seed)
    print(path)
    return 0


# --- entry point -----------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="multinet",
        description="multiplex correlation / reciprocity / null-model toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pearson", help="pairwise layer Pearson correlations")
    _add_common(p)
    _add_mode(p)
    p.add_argument("--direction", choices=["syn", "rev"], default="syn")
    p.add_argument("--binary", action="store_true",
                   help="correlate binary projections")
    p.add_argument("--averaged-weights", action="store_true",
                   help="correlate time-averaged weight matrices instead of "
                        "averaging per-period correlations")
    p.set_defaults(func=cmd_pearson)

    p = sub.add_parser("recip", help="single-layer reciprocity table")
    _add_common(p)
    _add_mode(p)
    p.set_defaults(func=cmd_recip)

    p = sub.add_parser("cross", help="cross-product reciprocity / multiplexity")
    _add_common(p)
    _add_mode(p)
    p.set_defaults(func=cmd_cross)

    p = sub.add_parser("wrcm-fit", help="fit the weighted reciprocated "
                                        "configuration model per layer")
    _add_common(p)
    _add_mode(p)
    p.set_defaults(func=cmd_wrcm_fit)

    p = sub.add_parser("rho", help="null-corrected global (and local) rho / mu")
    _add_common(p)
    _add_mode(p)
    p.add_argument("--pair", default=None, metavar="A:B",
                   help="also emit local matrices for this layer pair")
    p.set_defaults(func=cmd_rho)

    p = sub.add_parser("backbone", help="significance backbone for a layer pair")
    _add_common(p)
    p.add_argument("--pair", required=True, metavar="A:B")
    p.add_argument("--measure", choices=["rho", "mu"], default="rho")
    p.add_argument("--period", default=None,
                   help="single period instead of the time average")
    p.set_defaults(func=cmd_backbone)

    p = sub.add_parser("links", help="per-node significant-link counts over time")
    _add_common(p)
    p.add_argument("--pair", default=None, metavar="A:B",
                   help="restrict to one layer pair (default: manifest groups)")
    p.set_defaults(func=cmd_links)

    p = sub.add_parser("imbalance", help="per-node export-import series per layer")
    _add_common(p)
    p.set_defaults(func=cmd_imbalance)

    p = sub.add_parser("jackknife", help="leave-one-period-out error estimate")
    _add_common(p)
    p.add_argument("--statistic", required=True,
                   choices=["pearson", "cross_r", "cross_m", "recip_min"])
    p.add_argument("--pair", default=None, metavar="A:B",
                   help="layer pair (or single layer for recip_min)")
    p.add_argument("--direction", choices=["syn", "rev"], default="syn")
    p.set_defaults(func=cmd_jackknife)

    p = sub.add_parser("demo", help="generate the bundled synthetic dataset")
    p.add_argument("--out", default="demo_data")
    p.add_argument("--seed", type=int, default=20020)
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (MultinetError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
