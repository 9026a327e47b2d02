"""Command-line harness: graph analysis, simulation, metrics, chain sets.

Every command takes ``--config`` (a JSON experiment document) and writes
machine-readable results whose provenance header embeds the resolved
configuration.  Exit codes: 0 success, 2 validation failure, 3 numeric
failure, 4 resource guard.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .chains import (
    SizingError,
    build_chain_graph,
    build_grid,
    chain_components,
    hausdorff_distance,
)
from .config import ExperimentConfig
from .flow import HybridState, IntegrationError, product_metric, switched_flow
from .graph import ValidationError, morse_order, scc, validate_n_graph
from .literals import format_signal, parse_sequence, parse_signal
from .sequences import ChaosCertificate, chaos_certificate, metric_omega
from .signals import metric_delta, shift, sigma_embed, stitch_signals

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_RESOURCE = 4


def _write_json(path: Path, payload: dict, cfg: ExperimentConfig) -> None:
    payload = {"config": cfg.resolved(), **payload}
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _write_csv(path: Path, header: list[str], rows: list[list], cfg: ExperimentConfig) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# config={cfg.provenance_json()}", ",".join(header)]
    for row in rows:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def cmd_analyze_graph(cfg: ExperimentConfig, out_dir: Path) -> int:
    g = cfg.graph
    report = validate_n_graph(g)
    if not report.ok:
        print(f"graph validation failed: {report.message()}", file=sys.stderr)
        return EXIT_VALIDATION
    decomp = scc(g)
    order = morse_order(decomp)
    certificates = []
    for cid, comp in enumerate(decomp.components):
        try:
            cert = chaos_certificate(g, comp)
        except ValidationError:
            cert = ChaosCertificate("empty_lift")
        entry = {"component": cid, "kind": cert.kind}
        if cert.orbit is not None:
            entry["orbit"] = [g.label_of(v) for v in cert.orbit]
        if cert.witness is not None:
            entry["witness"] = g.label_of(cert.witness)
        certificates.append(entry)
    payload = {
        "validation": "ok",
        "components": [[g.label_of(v) for v in sorted(c)] for c in decomp.components],
        "condensation_edges": sorted([list(e) for e in decomp.condensation_edges]),
        "order_pairs": sorted([list(p) for p in order]),
        "certificates": certificates,
    }
    _write_json(out_dir / "graph_analysis.json", payload, cfg)
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def cmd_simulate(cfg: ExperimentConfig, out_dir: Path, x0_text: str,
                 signal_text: str, t_end: float, sample_dt: float) -> int:
    sys_ = cfg.system
    x = np.array([float(v) for v in x0_text.split(",")])
    if len(x) != sys_.dimension:
        raise ValidationError(f"x0 needs {sys_.dimension} components")
    if not sys_.contains(x):
        raise ValidationError("x0 lies outside the box")
    f = parse_signal(cfg.graph, signal_text, default_h=sys_.step)
    if sample_dt <= 0 or t_end <= 0:
        raise ValidationError("t_end and sample_dt must be positive")
    rows: list[list] = []
    t = 0.0
    rows.append([0.0, *[float(v) for v in x], cfg.graph.label_of(f.value_at(0.0))])
    try:
        while t < t_end - 1e-12:
            dt = min(sample_dt, t_end - t)
            x = switched_flow(sys_, dt, x, shift(f, t))
            t += dt
            rows.append([t, *[float(v) for v in x],
                         cfg.graph.label_of(f.value_at(t))])
    except IntegrationError as exc:
        _write_csv(out_dir / "trajectory_partial.csv",
                   ["t", *[f"x{i+1}" for i in range(sys_.dimension)], "active_vertex"],
                   rows, cfg)
        print(f"integration failed: {exc} (partial output written)", file=sys.stderr)
        return EXIT_NUMERIC
    header = ["t", *[f"x{i+1}" for i in range(sys_.dimension)], "active_vertex"]
    _write_csv(out_dir / "trajectory.csv", header, rows, cfg)
    print(f"wrote {out_dir / 'trajectory.csv'} ({len(rows)} rows)")
    return EXIT_OK


def cmd_metric(cfg: ExperimentConfig, kind: str, a_text: str, b_text: str,
               tol: float, check_isometry: bool,
               x_text: str | None, y_text: str | None) -> int:
    g = cfg.graph
    h = cfg.system.step
    if kind == "omega":
        x = parse_sequence(g, a_text)
        y = parse_sequence(g, b_text)
        value = metric_omega(x, y, tol)
        result = {"kind": kind, "value": value, "tol": tol}
        if check_isometry:
            d_sig = metric_delta(sigma_embed(x, h), sigma_embed(y, h), tol)
            result["embedded_value"] = d_sig
            result["isometry_gap"] = abs(value - d_sig)
            result["isometry_ok"] = abs(value - d_sig) <= 2 * tol
    elif kind == "delta":
        fa = parse_signal(g, a_text, default_h=h)
        fb = parse_signal(g, b_text, default_h=h)
        value = metric_delta(fa, fb, tol)
        result = {"kind": kind, "value": value, "tol": tol}
    elif kind == "product":
        if x_text is None or y_text is None:
            raise ValidationError("product metric needs --x and --y state points")
        fa = parse_signal(g, a_text, default_h=h)
        fb = parse_signal(g, b_text, default_h=h)
        pa = HybridState(tuple(float(v) for v in x_text.split(",")), fa)
        pb = HybridState(tuple(float(v) for v in y_text.split(",")), fb)
        value = product_metric(pa, pb, tol)
        result = {"kind": kind, "value": value, "tol": tol}
    else:
        raise ValidationError(f"unknown metric kind {kind!r}")
    print(json.dumps(result, sort_keys=True))
    return EXIT_OK


def _component_summary(comp_cells: list[int], grid, references) -> dict:
    centers = sorted(float(grid.center(c)[0]) if grid.dimension == 1
                     else tuple(grid.center(c)) for c in comp_cells)
    cells = sorted(comp_cells)
    runs = []
    start = prev = cells[0]
    for c in cells[1:]:
        if c == prev + 1:
            prev = c
            continue
        runs.append([start, prev])
        start = prev = c
    runs.append([start, prev])
    entry = {
        "cell_count": len(cells),
        "cell_runs": runs,
    }
    if grid.dimension == 1:
        entry["center_min"] = centers[0]
        entry["center_max"] = centers[-1]
        entry["hausdorff_to_references"] = [
            hausdorff_distance(centers, interval=ref) for ref in references]
    return entry


def cmd_chain_sets(cfg: ExperimentConfig, out_dir: Path, threads: int) -> int:
    if cfg.analysis is None:
        raise ValidationError("config has no 'analysis' block")
    a = cfg.analysis
    grid = build_grid(cfg.system.box, a.cells)
    try:
        cg = build_chain_graph(cfg.system, cfg.graph, grid, a.eps, a.m,
                               mode=a.mode, q=a.q, max_work=a.max_work,
                               threads=threads)
    except SizingError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    comps = chain_components(cg)
    rows: list[list] = []
    for cid, comp in enumerate(comps):
        for cell in sorted(comp.cells):
            center = grid.center(cell)
            rows.append([cid, cell, *[float(v) for v in center]])
    header = ["component_id", "cell_index",
              *[f"center_x{i+1}" for i in range(grid.dimension)]]
    _write_csv(out_dir / "components.csv", header, rows, cfg)
    summary = {
        "parameters": {"eps": a.eps, "m": a.m, "mode": a.mode, "q": a.q,
                       "link_time": cg.link_time, "cells": list(a.cells),
                       "cell_radius": grid.radius},
        "component_count": len(comps),
        "components": [_component_summary(sorted(c.cells), grid, a.references)
                       for c in comps],
    }
    _write_json(out_dir / "chain_summary.json", summary, cfg)
    print(json.dumps({"component_count": len(comps)}, sort_keys=True))
    return EXIT_OK


def cmd_stitch_demo(cfg: ExperimentConfig, out_dir: Path, links: int,
                    window: int, tol: float) -> int:
    g = cfg.graph
    if not g.is_complete():
        raise ValidationError("stitch-demo needs a complete switching graph")
    h = cfg.system.step
    rng = np.random.default_rng(cfg.run.seed)

    def random_signal():
        from .sequences import SymbolicSequence
        def rand_word(k):
            word = [int(rng.integers(g.n))]
            for _ in range(k - 1):
                word.append(int(rng.integers(g.n)))
            return tuple(word)
        return sigma_embed(SymbolicSequence(
            g, rand_word(int(rng.integers(1, 4))),
            rand_word(int(rng.integers(0, 5))),
            rand_word(int(rng.integers(1, 4)))), h)

    chain = [(random_signal(), float((window + 1 + int(rng.integers(0, 3))) * h))
             for _ in range(links)]
    f_head, g_tail = random_signal(), random_signal()
    result = stitch_signals(chain, f_head, g_tail, window)
    gaps = []
    for sig, t, nxt in zip(result.signals, result.link_times, result.signals[1:]):
        gaps.append(metric_delta(shift(sig, t), nxt, tol))
    tail_gap = metric_delta(shift(result.signals[-1], result.tail_time), g_tail, tol)
    bound = 2.0 * 4.0 ** (-window) / 3.0
    payload = {
        "links": links,
        "window": window,
        "gap_bound": bound,
        "gaps": gaps,
        "tail_gap": tail_gap,
        "all_below_bound": bool(all(gap < bound for gap in gaps) and tail_gap < bound),
        "signals": [format_signal(s) for s in result.signals],
    }
    _write_json(out_dir / "stitch_demo.json", payload, cfg)
    print(json.dumps({"gaps": gaps, "bound": bound}, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="switchflow",
        description="Graph-constrained switching signals, switched flows, "
                    "and numerical chain analysis")
    parser.add_argument("--config", required=True, help="experiment JSON document")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--tol", type=float, default=None,
                        help="override run.tol for metric evaluations")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for edge construction")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("analyze-graph", help="SCCs, order, per-component certificates")

    p_sim = sub.add_parser("simulate", help="sample one switched trajectory")
    p_sim.add_argument("--x0", required=True, help="comma-separated initial state")
    p_sim.add_argument("--signal", required=True, help="signal literal")
    p_sim.add_argument("--t-end", type=float, required=True)
    p_sim.add_argument("--sample-dt", type=float, required=True)

    p_met = sub.add_parser("metric", help="evaluate a metric on two literals")
    p_met.add_argument("--kind", choices=["omega", "delta", "product"], required=True)
    p_met.add_argument("--a", required=True)
    p_met.add_argument("--b", required=True)
    p_met.add_argument("--x", default=None, help="state point for --kind product")
    p_met.add_argument("--y", default=None, help="state point for --kind product")
    p_met.add_argument("--check-isometry", action="store_true")

    sub.add_parser("chain-sets", help="build the chain graph and its components")

    p_st = sub.add_parser("stitch-demo", help="run the chain-bridging construction")
    p_st.add_argument("--links", type=int, default=3)
    p_st.add_argument("--window", type=int, default=5)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = ExperimentConfig.from_file(args.config)
        out_dir = Path(args.out if args.out is not None else cfg.run.out)
        tol = args.tol if args.tol is not None else cfg.run.tol
        if args.command == "analyze-graph":
            return cmd_analyze_graph(cfg, out_dir)
        if args.command == "simulate":
            return cmd_simulate(cfg, out_dir, args.x0, args.signal,
                                args.t_end, args.sample_dt)
        if args.command == "metric":
            return cmd_metric(cfg, args.kind, args.a, args.b, tol,
                              args.check_isometry, args.x, args.y)
        if args.command == "chain-sets":
            return cmd_chain_sets(cfg, out_dir, args.threads)
        if args.command == "stitch-demo":
            return cmd_stitch_demo(cfg, out_dir, args.links, args.window, tol)
        raise ValidationError(f"unknown command {args.command!r}")
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SizingError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (IntegrationError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
