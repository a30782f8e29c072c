"""Command-line pipeline: ingest, correlate, causality, metrics, compare, quartiles, synth.

Every command writes plain files; failures print a one-line JSON object with
an error category to stderr and exit nonzero.
"""

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import _backend, files, synth
from .causality import TEConfig
from .errors import ConfigError, InputFileError, MarketnetError
from .ingest import SignalKind, panel_from_records, parse_records, split_label
from .network import build_network, ccdf, components, degrees, metrics, weighted_betweenness
from .permval import PermutationConfig, validate_all_pairs
from .similarity import SWEEP_COLUMNS, threshold_sweep

log = logging.getLogger("marketnet")

CCDF_MEASURES = ("degree", "impacting", "impacted", "closeness", "betweenness")


def _block_name(m):
    src = split_label(m.row_labels[0])[1].value
    dst = split_label(m.col_labels[0])[1].value
    return f"{m.kind}_{src}_{dst}"


def _perm_config(args, min_obs):
    return PermutationConfig(n_permutations=args.permutations, z_star=args.z_star,
                             min_obs=min_obs, global_seed=args.seed)


def _block_summary(m, z_star):
    net = build_network(m, z_star)
    degree, _, _ = degrees(net)
    _, giant = components(net)
    links = [net.stat[i, j] for i, j in net.edge_list()]
    return {
        "block": _block_name(m),
        "kind": m.kind,
        "rows": split_label(m.row_labels[0])[1].value,
        "cols": split_label(m.col_labels[0])[1].value,
        "n_nodes": net.n_nodes,
        "evaluated_pairs": m.n_pairs,
        "short_pairs": int(((m.flags == 1) & m.pair_mask()).sum()),
        "valid_edges": len(links),
        "density": len(links) / m.n_pairs if m.n_pairs else 0.0,
        "avg_degree": float(degree.mean()),
        "avg_stat": float(np.mean(links)) if links else None,
        "giant_size": giant,
    }


def _sweep_summary(args, matrices, extra_config):
    return {
        "config": {"z_star": args.z_star, "n_permutations": args.permutations,
                   "seed": args.seed, **extra_config},
        "blocks": [_block_summary(m, args.z_star) for m in matrices],
    }


def cmd_ingest(args):
    try:
        with open(args.input, "rb") as fh:
            records = parse_records(fh)
    except FileNotFoundError:
        raise InputFileError(f"no such file: {args.input}") from None
    panel = panel_from_records(records, zero_volume=args.sentiment_transform)
    files.write_panel(panel, args.output)
    log.info("panel: %d series x %d days", panel.n_series, panel.n_days)


def cmd_synth(args):
    spec = synth.SynthSpec(
        n_assets=args.assets, n_days=args.days, factor_loading=args.factor_loading,
        couple_fraction=args.couple_fraction, coupling=args.coupling,
        missing_rate=args.missing_rate, seed=args.seed,
        sentiment_loading=args.sentiment_loading, loading_spread=args.loading_spread,
        couple_by_loading=args.couple_by_loading)
    panel, truth = synth.generate(spec)
    files.write_panel(panel, args.output)
    if args.truth:
        files.write_json({"spec": asdict(spec), "coupled_assets": truth.coupled_assets,
                          "couplings": truth.couplings,
                          "price_loadings": dict(zip(truth.asset_ids, truth.price_loadings)),
                          "sentiment_loadings": dict(zip(truth.asset_ids, truth.sentiment_loadings))},
                         args.truth)


def _need_rows(panel, kind):
    rows = panel.rows(kind)
    if not rows:
        raise ConfigError(f"panel has no {SignalKind(kind).value} series")
    return rows


def cmd_correlate(args):
    panel = files.read_panel(args.panel)
    cfg = _perm_config(args, args.min_obs_corr)
    if args.kind == "cross":
        rows = _need_rows(panel, args.sentiment)
        cols = _need_rows(panel, SignalKind.PRICE)
    else:
        rows = cols = _need_rows(panel, args.kind)
    m = validate_all_pairs(panel, rows, cols, args.method, cfg, n_threads=args.threads)
    files.write_edges(m, args.output)
    if args.summary:
        extra = {"kind": args.kind, "method": args.method, "min_obs": cfg.min_obs}
        files.write_json(_sweep_summary(args, [m], extra), args.summary)


def cmd_causality(args):
    panel = files.read_panel(args.panel)
    cfg = _perm_config(args, args.min_obs_te)
    te_cfg = TEConfig(n_bins=args.bins)
    sent = _need_rows(panel, args.sentiment)
    price = _need_rows(panel, SignalKind.PRICE)
    plan = {"s2p": [(sent, price)], "p2s": [(price, sent)],
            "both": [(sent, price), (price, sent)]}[args.direction]
    matrices = [validate_all_pairs(panel, r, c, args.method, cfg, te_cfg, n_threads=args.threads)
                for r, c in plan]
    extra = {"direction": args.direction, "method": args.method, "min_obs": cfg.min_obs,
             "n_bins": args.bins}
    files.write_edges(matrices, args.output)
    summary = _sweep_summary(args, matrices, extra)
    if args.truth:
        truth = files.read_json(args.truth)
        planted = {tuple(p) for p in truth["couplings"]}
        found = {(m.row_labels[a], m.col_labels[b])
                 for m in matrices for a, b in zip(*np.nonzero(m.valid(args.z_star)))}
        hit = len(planted & found)
        summary["truth"] = {"planted": len(planted), "recovered": hit,
                            "recall": hit / len(planted) if planted else None,
                            "precision": hit / len(found) if found else None}
    if args.summary:
        files.write_json(summary, args.summary)


def cmd_metrics(args):
    blocks = files.read_edges(args.edges, z_star=args.z_star)
    docs = {}
    for m in blocks.values():
        name = _block_name(m)
        net = build_network(m, args.z_star)
        report = metrics(net, n_threads=args.threads)
        docs[name] = files.metrics_document(net, report)
        if args.ccdf_dir:
            for measure in CCDF_MEASURES:
                values = getattr(report, measure)
                if len(values):
                    x, p = ccdf(values)
                    files.write_ccdf(x, p, Path(args.ccdf_dir) / f"{name}_{measure}_ccdf.csv")
        if args.edge_list_dir:
            files.write_edge_list(net, Path(args.edge_list_dir) / f"{name}_edges.csv")
    files.write_json(docs, args.output)


def _single_block(path, z_star, want_kind=None):
    blocks = list(files.read_edges(path, z_star=z_star).values())
    if want_kind:
        blocks = [m for m in blocks if m.kind == want_kind]
    if len(blocks) != 1:
        raise ConfigError(f"{path}: expected one {want_kind or ''} edge block, found {len(blocks)}")
    return blocks[0]


def _te_blocks(path, z_star):
    blocks = files.read_edges(path, z_star=z_star)
    s2p = [m for (k, s, d), m in blocks.items() if k == "te" and d == "price" and s != "price"]
    p2s = [m for (k, s, d), m in blocks.items() if k == "te" and s == "price" and d != "price"]
    if len(s2p) != 1 or len(p2s) != 1:
        raise ConfigError(f"{path}: needs one sentiment->price and one price->sentiment TE block")
    return s2p[0], p2s[0]


def cmd_compare(args):
    z_min = min(args.z)
    edges = {"P": _single_block(args.price, z_min), "pS": _single_block(args.pos, z_min),
             "nS": _single_block(args.neg, z_min)}
    edges["TE_s2p"], edges["TE_p2s"] = _te_blocks(args.te, z_min)
    rows = threshold_sweep(edges, sorted(args.z), exclude_zero=args.exclude_zero)
    files.write_csv(args.output, ("z",) + SWEEP_COLUMNS,
                    [[files.fmt(r["z"])] + [files.fmt(r[c][0]) for c in SWEEP_COLUMNS] for r in rows])
    if args.p_values:
        files.write_csv(args.p_values, ("z",) + SWEEP_COLUMNS,
                        [[files.fmt(r["z"])] + [files.fmt(r[c][1]) for c in SWEEP_COLUMNS]
                         for r in rows])


def _asset_link_counts(net):
    counts = {}
    _, out_deg, in_deg = degrees(net)
    for label, v in zip(net.nodes, out_deg + in_deg):
        asset = split_label(label)[0]
        counts[asset] = counts.get(asset, 0) + int(v)
    return counts


def centrality_quartiles(price_edges, te_s2p, te_p2s, z_star, n_threads=1):
    """Causality links held by the most and least betweenness-central assets.

    Assets are ranked by price-network betweenness, highest first, ties broken
    by ascending asset id. A link counts once for each endpoint asset.
    """
    price_net = build_network(price_edges, z_star)
    bc = weighted_betweenness(price_net, n_threads)
    by_asset = {split_label(label)[0]: b for label, b in zip(price_net.nodes, bc)}
    nets = {"s2p": build_network(te_s2p, z_star), "p2s": build_network(te_p2s, z_star)}
    links = {k: _asset_link_counts(n) for k, n in nets.items()}
    assets = sorted(set(by_asset).intersection(*(set(c) for c in links.values())))
    if len(assets) < 8:
        raise ConfigError(f"quartile report needs at least 8 shared assets, got {len(assets)}")
    ranked = sorted(assets, key=lambda a: (-by_asset[a], a))
    q = len(ranked) // 4
    top20 = ranked[:max(1, len(ranked) // 5)]
    report = {"n_assets": len(ranked), "quartile_size": q, "z_star": z_star,
              "top_quartile": ranked[:q], "bottom_quartile": ranked[-q:]}
    for name, counts in list(links.items()) + [("total", None)]:
        c = ({a: links["s2p"][a] + links["p2s"][a] for a in ranked} if counts is None else counts)
        total = sum(c[a] for a in ranked)
        report[name] = {
            "top_quartile_links": sum(c[a] for a in ranked[:q]),
            "bottom_quartile_links": sum(c[a] for a in ranked[-q:]),
            "top20_share": sum(c[a] for a in top20) / total if total else None,
        }
    return report


def cmd_quartiles(args):
    price = _single_block(args.price, args.z_star, "kendall")
    s2p, p2s = _te_blocks(args.te, args.z_star)
    files.write_json(centrality_quartiles(price, s2p, p2s, args.z_star, args.threads), args.output)


def _add_sweep_flags(p, min_obs_flag):
    p.add_argument("panel", help="panel document (JSON) from ingest or synth")
    p.add_argument("-o", "--output", required=True, help="edge results CSV")
    p.add_argument("--summary", help="summary JSON")
    p.add_argument("--z-star", type=float, default=3.0)
    p.add_argument("--permutations", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    if min_obs_flag == "corr":
        p.add_argument("--min-obs-corr", type=int, default=20)
    else:
        p.add_argument("--min-obs-te", type=int, default=40)
        p.add_argument("--bins", type=int, default=4)


def build_parser():
    parser = argparse.ArgumentParser(prog="marketnet", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="hourly records CSV -> daily log-variation panel")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--sentiment-transform", choices=("missing", "shifted"), default="missing",
                   help="zero sentiment volume: treat as missing, or use log(1+v)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("synth", help="synthetic panel with planted structure")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--truth", help="write the planted structure here (JSON)")
    p.add_argument("--assets", type=int, default=50)
    p.add_argument("--days", type=int, default=150)
    p.add_argument("--factor-loading", type=float, default=0.0)
    p.add_argument("--sentiment-loading", type=float, default=0.0)
    p.add_argument("--loading-spread", type=float, default=0.0)
    p.add_argument("--couple-fraction", type=float, default=0.0)
    p.add_argument("--coupling", type=float, default=0.0)
    p.add_argument("--couple-by-loading", action="store_true",
                   help="couple the most factor-heavy assets rather than a random subset")
    p.add_argument("--missing-rate", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("correlate", help="permutation-validated correlation network")
    _add_sweep_flags(p, "corr")
    p.add_argument("--kind", choices=("price", "pos", "neg", "cross"), default="price")
    p.add_argument("--sentiment", choices=("pos", "neg"), default="pos",
                   help="sentiment side of --kind cross")
    p.add_argument("--method", choices=("kendall", "spearman", "pearson"), default="kendall")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("causality", help="permutation-validated sentiment/price causality")
    _add_sweep_flags(p, "te")
    p.add_argument("--direction", choices=("s2p", "p2s", "both"), default="both")
    p.add_argument("--sentiment", choices=("pos", "neg"), default="pos")
    p.add_argument("--method", choices=("te", "granger"), default="te")
    p.add_argument("--truth", help="synth truth JSON; adds recall/precision to the summary")
    p.set_defaults(func=cmd_causality)

    p = sub.add_parser("metrics", help="network metrics from an edge results file")
    p.add_argument("edges")
    p.add_argument("-o", "--output", required=True, help="metrics JSON")
    p.add_argument("--z-star", type=float, default=3.0)
    p.add_argument("--ccdf-dir", help="write x,ccdf files here")
    p.add_argument("--edge-list-dir", help="write src,dst,stat,weight,z files of valid edges here")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("compare", help="degree-centrality similarity sweep over z thresholds")
    p.add_argument("--price", required=True, help="price Kendall edges")
    p.add_argument("--pos", required=True, help="positive-sentiment Kendall edges")
    p.add_argument("--neg", required=True, help="negative-sentiment Kendall edges")
    p.add_argument("--te", required=True, help="TE edges with both directions")
    p.add_argument("--z", type=float, nargs="+", default=[3.0, 4.0, 5.0, 6.0])
    p.add_argument("--exclude-zero", action="store_true",
                   help="drop nodes with zero degree in either network")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--p-values", help="also write the t-test p-values here")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("quartiles", help="causality links of central vs peripheral assets")
    p.add_argument("--price", required=True)
    p.add_argument("--te", required=True)
    p.add_argument("--z-star", type=float, default=3.0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_quartiles)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    log.debug("kernel backend: %s", _backend.BACKEND)
    try:
        args.func(args)
    except MarketnetError as exc:
        print(json.dumps({"error": exc.category, "message": str(exc)}), file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(json.dumps({"error": "file", "message": str(exc)}), file=sys.stderr)
        return InputFileError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
