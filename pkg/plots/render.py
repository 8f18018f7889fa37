#!/usr/bin/env python3
"""Render the figure set from the CLI's CSV/JSON artifacts.

Reads only the documented delimited schemas (complexity/lanczos/density/
analytic/peakscan CSVs plus run manifests) and writes one image per figure:

    python plots/render.py --figure fig3 --in runs/fig3 --out figs/

Inputs are never modified; series order and legend labels are fixed by the
figure definitions below, with class labels carrying their (beta, alpha)
tags.  Missing or misnamed columns fail loudly with a column diff.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

FIGURES = ("fig1", "fig2a", "fig2b", "fig3", "fig4", "fig5")

# expected columns per artifact kind
SCHEMAS = {
    "complexity": ["t", "ks_mean", "ks_stderr", "n_realizations"],
    "lanczos": ["n", "a_mean", "a_stderr", "b_mean", "b_stderr",
                "a_theory", "b_theory"],
    "density": ["sigma", "rho_hist", "rho_theory"],
    "peakscan": ["beta", "t_max", "k_max", "has_peak"],
}


class SchemaError(RuntimeError):
    pass


@dataclass
class FigureSpec:
    """One figure render request."""

    figure: str
    input_dir: Path
    output_dir: Path
    log_time: bool = False
    image_format: str = "png"
    style: dict = field(default_factory=dict)


def read_table(path: Path, expected: list[str] | None = None) -> dict:
    """CSV -> dict of float arrays (empty fields become NaN)."""
    if not path.exists():
        raise SchemaError(f"missing input file: {path}")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    if expected is not None:
        missing = [c for c in expected if c not in header]
        extra = [c for c in header if c not in expected]
        if missing:
            raise SchemaError(
                f"{path}: column mismatch; missing {missing}, unexpected {extra}, "
                f"found {header}")
    cols = {}
    for i, name in enumerate(header):
        cols[name] = np.array(
            [float(r[i]) if r[i] not in ("", "true", "false") else
             (np.nan if r[i] == "" else float(r[i] == "true"))
             for r in rows[1:]])
    return cols


def load_manifest(run_dir: Path) -> dict:
    path = run_dir / "manifest.json"
    return json.loads(path.read_text()) if path.exists() else {}


def _band(ax, x, mean, stderr, label, color=None):
    (line,) = ax.plot(x, mean, label=label, color=color, lw=1.4)
    if np.any(np.nan_to_num(stderr) > 0):
        ax.fill_between(x, mean - stderr, mean + stderr,
                        color=line.get_color(), alpha=0.25, lw=0)
    return line


def _complexity_file(run_dir: Path, beta=None) -> Path:
    if beta is not None:
        tagged = run_dir / f"complexity_beta{beta:g}.csv"
        if tagged.exists():
            return tagged
    return run_dir / "complexity.csv"


def render_fig1(spec: FigureSpec):
    lz = read_table(spec.input_dir / "lanczos" / "lanczos.csv", SCHEMAS["lanczos"])
    fig, (ax_a, ax_b) = plt.subplots(2, 1, figsize=(6.0, 7.0), sharex=True)
    n = lz["n"]
    labels = []
    for ax, key, theory_key in ((ax_a, "a_mean", "a_theory"),
                                (ax_b, "b_mean", "b_theory")):
        sel = ~np.isnan(lz[key])
        label = "mean " + key[0] + "_n"
        _band(ax, n[sel], lz[key][sel], lz[key.replace("mean", "stderr")][sel], label)
        labels.append(label)
        th = lz[theory_key]
        sel_t = ~np.isnan(th)
        if sel_t.any():
            tl = key[0] + "(x) semianalytic"
            ax.plot(n[sel_t], th[sel_t], "--", color="k", lw=1.0, label=tl)
            labels.append(tl)
        ax.set_ylabel(key[0] + "_n")
        ax.legend(frameon=False, fontsize=8)
        # edge inset: moment-method regime
        inset = ax.inset_axes([0.55, 0.45, 0.42, 0.5])
        m = min(14, int(n[sel].max()))
        head = sel & (n <= m)
        inset.plot(n[head], lz[key][head], "o", ms=3)
        if sel_t.any():
            head_t = sel_t & (n <= m)
            inset.plot(n[head_t], th[head_t], "--", color="k", lw=0.8)
        inset.tick_params(labelsize=6)
    ax_b.set_xlabel("n")
    return fig, labels


def render_fig2a(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    labels = []
    for name, label in (("nu0", "nu = 0 (uncorrelated)"),
                        ("nu1", "nu = 1 (GinUE)")):
        tab = read_table(_complexity_file(spec.input_dir / name),
                         SCHEMAS["complexity"])
        _band(ax, tab["t"], tab["ks_mean"], tab["ks_stderr"], label)
        labels.append(label)
    if spec.log_time:
        ax.set_xscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("K/d")
    ax.legend(frameon=False)
    # early-time inset: quadratic ramp
    inset = ax.inset_axes([0.55, 0.15, 0.4, 0.35])
    for name in ("nu0", "nu1"):
        tab = read_table(_complexity_file(spec.input_dir / name),
                         SCHEMAS["complexity"])
        head = tab["t"] <= tab["t"][0] + 0.05 * (tab["t"][-1] - tab["t"][0])
        inset.plot(tab["t"][head], tab["ks_mean"][head], lw=1.0)
    inset.tick_params(labelsize=6)
    inset.set_title("early time", fontsize=7)
    return fig, labels


def _render_multi_complexity(spec: FigureSpec, series):
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    labels = []
    for run_name, beta, label in series:
        tab = read_table(_complexity_file(spec.input_dir / run_name, beta),
                         SCHEMAS["complexity"])
        _band(ax, tab["t"], tab["ks_mean"], tab["ks_stderr"], label)
        labels.append(label)
    if spec.log_time:
        ax.set_xscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("K/d")
    ax.legend(frameon=False)
    return fig, labels


def render_fig2b(spec: FigureSpec):
    manifest = load_manifest(spec.input_dir / "syk22")
    betas = manifest.get("config", {}).get("options", {}).get("betas", [0.0, 1.0, 5.0])
    series = [("syk22", b, f"beta = {b:g}") for b in betas]
    return _render_multi_complexity(spec, series)


def render_fig3(spec: FigureSpec):
    run_dir = spec.input_dir / "classes"
    manifest = load_manifest(run_dir)
    indices = manifest.get("class_indices", {})
    tab = read_table(run_dir / "analytic.csv")
    if "t" not in tab or "ks_poisson" not in tab:
        raise SchemaError(f"{run_dir / 'analytic.csv'}: missing t/ks_poisson columns")
    tags = [c[len("ks_mc_"):] for c in tab if c.startswith("ks_mc_")]
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    labels = []
    for tag in tags:  # column order of the artifact, never re-sorted
        for col in (f"ks_stderr_{tag}", f"ks_theory_{tag}"):
            if col not in tab:
                raise SchemaError(f"analytic.csv: missing column {col}")
        beta, alpha = indices.get(tag, ("?", "?"))
        label = f"{tag} ({beta},{alpha})"
        line = _band(ax, tab["t"], tab[f"ks_mc_{tag}"], tab[f"ks_stderr_{tag}"], label)
        ax.plot(tab["t"], tab[f"ks_theory_{tag}"], "--", lw=1.0,
                color=line.get_color())
        labels.append(label)
    ax.plot(tab["t"], tab["ks_poisson"], ":", color="k", label="Poisson (beta = 0)")
    labels.append("Poisson (beta = 0)")
    ax.set_xlabel("t")
    ax.set_ylabel("K/d")
    ax.legend(frameon=False, fontsize=8)
    return fig, labels


def render_fig4(spec: FigureSpec):
    tab = read_table(spec.input_dir / "scan" / "peakscan.csv", SCHEMAS["peakscan"])
    peaked = tab["has_peak"] > 0.5
    fig, (ax_t, ax_k) = plt.subplots(1, 2, figsize=(8.0, 3.6))
    ax_t.plot(tab["beta"][peaked], tab["t_max"][peaked], lw=1.4, label="t_max")
    ax_t.axhline(np.pi / 2, ls="--", color="k", lw=0.9, label="rigid limit")
    ax_k.plot(tab["beta"][peaked], tab["k_max"][peaked], lw=1.4, label="k_max")
    ax_k.axhline(0.5, ls="--", color="k", lw=0.9, label="rigid limit")
    for ax, col in ((ax_t, "t_max"), (ax_k, "k_max")):
        marks = peaked & np.isin(tab["beta"], (1.0, 2.0, 4.0))
        ax.plot(tab["beta"][marks], tab[col][marks], "x", color="C3", ms=7,
                label="beta = 1, 2, 4")
        ax.set_xlabel("beta")
        ax.set_ylabel(col)
        ax.legend(frameon=False, fontsize=8)
    return fig, ["t_max", "k_max"]


def render_fig5(spec: FigureSpec):
    series = []
    for run_name in ("syk20", "syk22", "syk24"):
        manifest = load_manifest(spec.input_dir / run_name)
        n = manifest.get("config", {}).get("ensemble", {}).get("params", {}).get("N")
        cls = manifest.get("syk_class", "?")
        series.append((run_name, 0.0, f"N = {n} ({cls})"))
    return _render_multi_complexity(spec, series)


RENDERERS = {
    "fig1": render_fig1,
    "fig2a": render_fig2a,
    "fig2b": render_fig2b,
    "fig3": render_fig3,
    "fig4": render_fig4,
    "fig5": render_fig5,
}


def render(spec: FigureSpec):
    """Render one figure; returns (output path, legend labels)."""
    if spec.figure not in RENDERERS:
        raise SchemaError(f"unknown figure {spec.figure!r}")
    fig, labels = RENDERERS[spec.figure](spec)
    spec.output_dir.mkdir(parents=True, exist_ok=True)
    out = spec.output_dir / f"{spec.figure}.{spec.image_format}"
    fig.savefig(out, dpi=150, metadata=None)
    plt.close(fig)
    return out, labels


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--figure", required=True, choices=FIGURES)
    parser.add_argument("--in", dest="input_dir", required=True)
    parser.add_argument("--out", dest="output_dir", required=True)
    parser.add_argument("--log-time", action="store_true",
                        help="logarithmic time axis for complexity panels")
    parser.add_argument("--format", default="png", choices=["png", "svg", "pdf"])
    args = parser.parse_args(argv)
    spec = FigureSpec(figure=args.figure, input_dir=Path(args.input_dir),
                      output_dir=Path(args.output_dir), log_time=args.log_time,
                      image_format=args.format)
    try:
        out, labels = render(spec)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"{out} [{len(labels)} series: {', '.join(labels)}]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
