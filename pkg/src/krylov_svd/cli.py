"""Experiment orchestration: run configs, parallel averaging, serialization.

Every run writes a ``manifest.json`` holding the full configuration, package
version, and master seed; re-running a manifest reproduces the outputs
bit-identically.  Realizations are distributed over a process pool, each
worker owning its realizations end-to-end; the reduction is a fixed-order
fold over the realization index, so results are independent of the worker
count.

Exit codes: 0 success, 2 usage, 3 numeric failure, 4 partial results.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import metadata, resources
from pathlib import Path

import numpy as np

from . import analytic, decomp, hermitization, krylov, spectral
from .ensembles import (
    CLASS_INDICES,
    CLASS_TAGS,
    EnsembleSpec,
    has_kramers,
    nhsyk_class,
    realization_rng,
    realize,
    sub_seed,
)
from .errors import InvalidParameterError, KrylovSvdError, PartialResultError

EXPERIMENTS = ("density", "lanczos", "complexity", "spacing", "analytic2x2",
               "peakscan", "syk", "hermitize")

OUTDIR_ENV = "KRYLOV_SVD_OUTDIR"

_ENSEMBLE_NAMES = {
    "ginoe": "GinOE", "ginue": "GinUE", "ginse": "GinSE",
    "diagpoisson": "DiagPoisson", "interpolating": "Interpolating",
    "nhsyk": "NHSYK",
}

#: Ensembles whose singular density follows the quadrant law at large d.
_QUADRANT_KINDS = {"GinOE", "GinUE", "GinSE"}


def _version() -> str:
    try:
        return metadata.version("krylov-svd")
    except metadata.PackageNotFoundError:
        return "0.0.0+local"


@dataclass
class TimeGridSpec:
    t_min: float = 0.1
    t_max: float = 5000.0
    points: int = 320
    mode: str = "hybrid"

    def build(self) -> np.ndarray:
        return krylov.time_grid(self.t_min, self.t_max, self.points, self.mode)

    def to_dict(self):
        return {"t_min": self.t_min, "t_max": self.t_max,
                "points": self.points, "mode": self.mode}

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


@dataclass
class RunConfig:
    """Declarative description of one experiment run."""

    experiment: str
    ensemble: EnsembleSpec | None = None
    beta_temperature: float = 0.0
    time_grid: TimeGridSpec = field(default_factory=TimeGridSpec)
    output_dir: str = "."
    workers: int = 1
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise InvalidParameterError(f"unknown experiment {self.experiment!r}")
        if self.beta_temperature < 0:
            raise InvalidParameterError("beta_temperature must be >= 0")
        if self.workers < 1:
            raise InvalidParameterError("workers must be >= 1")

    def to_dict(self):
        return {
            "experiment": self.experiment,
            "ensemble": self.ensemble.to_dict() if self.ensemble else None,
            "beta_temperature": self.beta_temperature,
            "time_grid": self.time_grid.to_dict(),
            "output_dir": str(self.output_dir),
            "workers": self.workers,
            "options": self.options,
        }

    @classmethod
    def from_dict(cls, d):
        ens = EnsembleSpec.from_dict(d["ensemble"]) if d.get("ensemble") else None
        return cls(
            experiment=d["experiment"],
            ensemble=ens,
            beta_temperature=d.get("beta_temperature", 0.0),
            time_grid=TimeGridSpec.from_dict(d.get("time_grid", {})),
            output_dir=d.get("output_dir", "."),
            workers=d.get("workers", 1),
            options=d.get("options", {}),
        )


def seed_plan(master_seed: int, realization_count: int) -> list[int]:
    """Injective, stable sub-seed for each realization index.

    ``sub_seed(master, i)`` is the first 64-bit word of
    ``numpy.random.SeedSequence(master, spawn_key=(i,))``, so any single
    realization can be reproduced externally.
    """
    return [sub_seed(master_seed, i) for i in range(realization_count)]


# ---------------------------------------------------------------------------
# Per-realization work (module level so process pools can pickle the tasks)
# ---------------------------------------------------------------------------


def _singulars_one(spec_dict: dict, index: int) -> np.ndarray:
    spec = EnsembleSpec.from_dict(spec_dict)
    vals = decomp.singular_values(realize(spec, index))
    if has_kramers(spec):
        vals = spectral.dedup_kramers(vals)
    return vals


def _lanczos_one(spec_dict: dict, index: int):
    spec = EnsembleSpec.from_dict(spec_dict)
    tri = decomp.tridiagonalize_svd(realize(spec, index))
    return tri.diag, tri.offdiag


def _complexity_one(spec_dict: dict, index: int, grid_spec: dict, betas: tuple):
    """Normalized complexity curves of one realization at several temperatures."""
    spec = EnsembleSpec.from_dict(spec_dict)
    h = realize(spec, index)
    times = TimeGridSpec.from_dict(grid_spec).build()
    u, s, vh = np.linalg.svd(h)
    a = (vh.conj().T * s) @ vh
    a = (a + a.conj().T) / 2
    out = {}
    for beta in betas:
        w = np.exp(-beta * (s - s.min()) / 2.0)
        w /= np.linalg.norm(w)
        psi0 = vh.conj().T @ w
        coeffs = decomp.lanczos(a, psi0)
        curve = krylov.complexity_of(coeffs, times)
        out[beta] = curve.ks_normalized
    return out


def _hermitize_one(spec_dict: dict, index: int, grid_spec: dict):
    spec = EnsembleSpec.from_dict(spec_dict)
    h = realize(spec, index)
    times = TimeGridSpec.from_dict(grid_spec).build()
    coeffs = hermitization.hermitized_lanczos(h)
    curve = krylov.complexity(krylov.evolve(coeffs, times), times)
    d2 = 2 * spec.dim
    a = np.full(d2, np.nan)
    b = np.full(d2 - 1, np.nan)
    a[: coeffs.dim] = coeffs.a
    b[: coeffs.dim - 1] = coeffs.b
    return a, b, curve.ks_normalized, coeffs.dim


_TASKS = {
    "singulars": _singulars_one,
    "lanczos": _lanczos_one,
    "complexity": _complexity_one,
    "hermitize": _hermitize_one,
}


def _run_task(name, args):
    return _TASKS[name](*args)


def _parallel_map(task_name: str, arg_list, workers: int):
    """Run per-realization tasks; results returned in index order.

    Any worker failure raises ``PartialResultError`` listing which
    realizations completed.
    """
    results = {}
    failures = {}
    if workers <= 1:
        for i, args in enumerate(arg_list):
            try:
                results[i] = _run_task(task_name, args)
            except Exception as exc:  # noqa: BLE001 - reported via PartialResultError
                failures[i] = exc
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {i: pool.submit(_run_task, task_name, args)
                       for i, args in enumerate(arg_list)}
            for i, fut in futures.items():
                try:
                    results[i] = fut.result()
                except Exception as exc:  # noqa: BLE001
                    failures[i] = exc
    if failures:
        first = failures[min(failures)]
        raise PartialResultError(
            f"{len(failures)} of {len(arg_list)} realizations failed "
            f"(first error: {first})", completed=results, failed=failures)
    return [results[i] for i in range(len(arg_list))]


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and np.isnan(x)):
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_csv(path: Path, header: list[str], columns: list) -> Path:
    """Write columns with fixed 17-significant-digit float formatting."""
    rows = zip(*columns)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def _write_manifest(outdir: Path, config: RunConfig, outputs: dict, extra=None) -> Path:
    manifest = {
        "config": config.to_dict(),
        "version": _version(),
        "master_seed": int(config.ensemble.seed) if config.ensemble else None,
        "outputs": {k: str(Path(v).name) for k, v in outputs.items()},
    }
    if extra:
        manifest.update(extra)
    path = outdir / "manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


def _quadrant_theory(spec: EnsembleSpec) -> bool:
    if spec.kind in _QUADRANT_KINDS:
        return True
    return spec.kind == "Interpolating" and spec.params.get("nu") == 1


def _run_density(config: RunConfig, outdir: Path) -> dict:
    spec = config.ensemble
    args = [(spec.to_dict(), i) for i in range(spec.realizations)]
    pooled = np.concatenate(_parallel_map("singulars", args, config.workers))
    prof = spectral.histogram_density(pooled, bins=config.options.get("bins", "fd"))
    theory = spectral.quadrant_law(prof.grid) if _quadrant_theory(spec) \
        else np.full_like(prof.grid, np.nan)
    path = write_csv(outdir / "density.csv", ["sigma", "rho_hist", "rho_theory"],
                     [prof.grid, prof.rho, theory])
    return {"density": path}


def _semianalytic_profiles(d: int, n_edge: int = 10):
    """Quadrant-law theory curves: moment-method edge padded onto the
    integral-equation bulk.

    The default edge length keeps within the documented precision range of
    the moment recurrence (first ~11 quadrant coefficients).
    """
    grid = np.linspace(0.0, 2.0, 201)
    target = spectral.DensityProfile(grid, spectral.quadrant_law(grid))
    fit = spectral.bulk_from_density(target, refine=False)
    n_edge = min(n_edge, max(d // 32, 2))  # edge regime must stay at n << d
    k_run = min(n_edge + 2, 14)
    edge = spectral.moments_to_lanczos(spectral.quadrant_moments(2 * k_run))
    edge = decomp.LanczosCoefficients(edge.a[:n_edge], edge.b[: n_edge - 1])
    return spectral.pad_coefficients(edge, fit.profile, d)


def _run_lanczos(config: RunConfig, outdir: Path) -> dict:
    spec = config.ensemble
    args = [(spec.to_dict(), i) for i in range(spec.realizations)]
    res = _parallel_map("lanczos", args, config.workers)
    a_stack = np.array([r[0] for r in res])
    b_stack = np.array([r[1] for r in res])
    a_mean, a_stderr = krylov.mean_curve(a_stack)
    b_mean, b_stderr = krylov.mean_curve(b_stack)
    d = spec.dim * (2 if spec.kind == "GinSE" else 1)
    if _quadrant_theory(spec):
        theory = _semianalytic_profiles(d, config.options.get("n_edge", 12))
        a_theory = theory.a
        b_theory = theory.b
    else:
        a_theory = np.full(d, np.nan)
        b_theory = np.full(d - 1, np.nan)
    n = np.arange(d)
    path = write_csv(
        outdir / "lanczos.csv",
        ["n", "a_mean", "a_stderr", "b_mean", "b_stderr", "a_theory", "b_theory"],
        [n, a_mean, a_stderr,
         np.concatenate([[np.nan], b_mean]), np.concatenate([[np.nan], b_stderr]),
         a_theory, np.concatenate([[np.nan], b_theory])])
    return {"lanczos": path}


def _curve_csv(path: Path, times, stack) -> Path:
    mean, stderr = krylov.mean_curve(stack)
    return write_csv(path, ["t", "ks_mean", "ks_stderr", "n_realizations"],
                     [times, mean, stderr, np.full(len(times), stack.shape[0])])


def _run_complexity(config: RunConfig, outdir: Path, betas=None) -> dict:
    spec = config.ensemble
    betas = tuple(betas if betas is not None else [config.beta_temperature])
    grid_d = config.time_grid.to_dict()
    args = [(spec.to_dict(), i, grid_d, betas) for i in range(spec.realizations)]
    res = _parallel_map("complexity", args, config.workers)
    times = config.time_grid.build()
    outputs = {}
    for beta in betas:
        stack = np.array([r[beta] for r in res])
        name = "complexity.csv" if len(betas) == 1 else f"complexity_beta{_fmt(beta)}.csv"
        key = "complexity" if len(betas) == 1 else f"complexity_beta{_fmt(beta)}"
        outputs[key] = _curve_csv(outdir / name, times, stack)
    return outputs


def _run_spacing(config: RunConfig, outdir: Path) -> dict:
    spec = config.ensemble
    args = [(spec.to_dict(), i) for i in range(spec.realizations)]
    ratios = []
    dropped = 0
    for vals in _parallel_map("singulars", args, config.workers):
        r = spectral.spacing_ratios(vals)
        ratios.append(r.ratios)
        dropped += r.n_dropped
    pooled = np.concatenate(ratios)
    record = {"mean_r": float(pooled.mean()), "n_ratios": int(len(pooled)),
              "n_dropped_degenerate": int(dropped)}
    path = outdir / "spacing.json"
    with open(path, "w") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return {"spacing": path}


def class_spacings(tag: str, samples: int, rng: np.random.Generator) -> np.ndarray:
    """Singular spacings of a 2x2 class ensemble, normalized to unit mean."""
    from .ensembles import sample_class_2x2
    h = sample_class_2x2(tag, rng, size=samples)
    s = np.linalg.svd(h, compute_uv=False)  # descending
    lam = (s[:, 0] - s[:, 2]) if s.shape[1] == 4 else (s[:, 0] - s[:, 1])
    return lam / lam.mean()


def monte_carlo_curve(lam: np.ndarray, times: np.ndarray, chunk: int = 20000):
    """Mean and standard error of sin^2(lambda t / 2) over the draws."""
    n = len(lam)
    total = np.zeros(len(times))
    total_sq = np.zeros(len(times))
    for start in range(0, n, chunk):
        s2 = np.sin(np.outer(lam[start:start + chunk], times) / 2.0) ** 2
        total += s2.sum(axis=0)
        total_sq += (s2 ** 2).sum(axis=0)
    mean = total / n
    var = np.maximum(total_sq / n - mean ** 2, 0.0) * n / max(n - 1, 1)
    return mean, np.sqrt(var / n)


def _run_analytic2x2(config: RunConfig, outdir: Path) -> dict:
    classes = config.options.get("classes", list(CLASS_TAGS))
    samples = int(config.options.get("samples", 100000))
    seed = int(config.options.get("seed", 0))
    times = config.time_grid.build()
    header = ["t"]
    columns = [times]
    for j, tag in enumerate(classes):
        if tag not in CLASS_TAGS:
            raise InvalidParameterError(f"unknown symmetry-class tag {tag!r}")
        lam = class_spacings(tag, samples, realization_rng(seed, j))
        mean, stderr = monte_carlo_curve(lam, times)
        beta = CLASS_INDICES[tag][0]
        header += [f"ks_mc_{tag}", f"ks_stderr_{tag}", f"ks_theory_{tag}"]
        columns += [mean / 2, stderr / 2, analytic.ks_2x2(times, beta) / 2]
    header.append("ks_poisson")
    columns.append(analytic.ks_poisson(times) / 2)
    path = write_csv(outdir / "analytic.csv", header, columns)
    return {"analytic": path}


def _run_peakscan(config: RunConfig, outdir: Path) -> dict:
    betas = config.options.get("betas")
    if betas is None:
        betas = np.concatenate([[0.0], np.linspace(0.1, 8.0, 80),
                                [12.0, 20.0, 50.0, 100.0]])
    rows = [analytic.peak_scan(float(b)) for b in betas]
    path = write_csv(outdir / "peakscan.csv", ["beta", "t_max", "k_max", "has_peak"],
                     [[r.beta for r in rows], [r.t_max for r in rows],
                      [r.k_max for r in rows], [r.has_peak for r in rows]])
    return {"peakscan": path}


def _run_syk(config: RunConfig, outdir: Path) -> dict:
    betas = config.options.get("betas", [config.beta_temperature])
    return _run_complexity(config, outdir, betas=betas)


def _run_hermitize(config: RunConfig, outdir: Path) -> dict:
    spec = config.ensemble
    grid_d = config.time_grid.to_dict()
    args = [(spec.to_dict(), i, grid_d) for i in range(spec.realizations)]
    res = _parallel_map("hermitize", args, config.workers)
    times = config.time_grid.build()
    d2 = 2 * spec.dim * (2 if spec.kind == "GinSE" else 1)
    a_stack = np.array([r[0] for r in res])
    b_stack = np.array([r[1] for r in res])
    ks_stack = np.array([r[2] for r in res])
    a_mean, a_stderr = krylov.mean_curve(a_stack)
    b_mean, b_stderr = krylov.mean_curve(b_stack)
    n = np.arange(d2)
    b_theory = np.sqrt(1.0 - np.arange(1, d2) / d2)
    lpath = write_csv(
        outdir / "lanczos.csv",
        ["n", "a_mean", "a_stderr", "b_mean", "b_stderr", "a_theory", "b_theory"],
        [n, a_mean, a_stderr,
         np.concatenate([[np.nan], b_mean]), np.concatenate([[np.nan], b_stderr]),
         np.zeros(d2), np.concatenate([[np.nan], b_theory])])
    cpath = _curve_csv(outdir / "complexity.csv", times, ks_stack)
    return {"lanczos": lpath, "complexity": cpath}


_RUNNERS = {
    "density": _run_density,
    "lanczos": _run_lanczos,
    "complexity": _run_complexity,
    "spacing": _run_spacing,
    "analytic2x2": _run_analytic2x2,
    "peakscan": _run_peakscan,
    "syk": _run_syk,
    "hermitize": _run_hermitize,
}


def run(config: RunConfig) -> dict:
    """Execute a run config; returns the mapping of written artifact paths."""
    outdir = Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    outputs = _RUNNERS[config.experiment](config, outdir)
    extra = {}
    if config.experiment == "analytic2x2":
        extra["class_indices"] = {t: CLASS_INDICES[t]
                                  for t in config.options.get("classes", CLASS_TAGS)}
    if config.experiment == "peakscan":
        extra["beta_min"] = analytic.find_beta_min()
    if config.experiment == "syk":
        extra["syk_class"] = nhsyk_class(config.ensemble.params["N"])
    outputs["manifest"] = _write_manifest(outdir, config, outputs, extra)
    return outputs


def rerun(manifest_path: str | Path, output_dir: str | None = None) -> dict:
    """Re-execute the run described by a manifest (bit-identical outputs)."""
    with open(manifest_path) as fh:
        manifest = json.load(fh)
    config = RunConfig.from_dict(manifest["config"])
    if output_dir is not None:
        config.output_dir = output_dir
    return run(config)


# ---------------------------------------------------------------------------
# Command line front end
# ---------------------------------------------------------------------------


def _add_common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--realizations", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, help="output directory "
                   f"(default: ${OUTDIR_ENV} or cwd)")


def _add_grid(p):
    p.add_argument("--tmin", type=float, default=None)
    p.add_argument("--tmax", type=float, default=None)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--grid-mode", choices=["linear", "log", "hybrid"], default=None)


def _add_ensemble(p):
    p.add_argument("--ensemble", choices=sorted(_ENSEMBLE_NAMES), default="ginue")
    p.add_argument("--dim", type=int, default=128)
    p.add_argument("--nu", type=float, default=None, help="interpolation parameter")
    p.add_argument("--N", type=int, default=None, help="Majorana count (nhsyk)")


def _ensemble_from_args(args) -> EnsembleSpec:
    kind = _ENSEMBLE_NAMES[args.ensemble]
    params = {}
    if kind == "Interpolating":
        params["nu"] = args.nu if args.nu is not None else 1.0
    if kind == "NHSYK":
        if args.N is None:
            raise InvalidParameterError("nhsyk requires --N")
        params["N"] = args.N
    return EnsembleSpec(kind=kind, dim=args.dim, params=params, seed=args.seed,
                        realizations=args.realizations)


def _grid_from_args(args, default: TimeGridSpec) -> TimeGridSpec:
    return TimeGridSpec(
        t_min=args.tmin if args.tmin is not None else default.t_min,
        t_max=args.tmax if args.tmax is not None else default.t_max,
        points=args.points if args.points is not None else default.points,
        mode=args.grid_mode if args.grid_mode is not None else default.mode)


def _outdir(args) -> str:
    return args.out or os.environ.get(OUTDIR_ENV, ".")


def _parse_floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="krylov-svd",
        description="Singular-value tridiagonalization and Krylov spread "
                    "complexity experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("density", "lanczos", "spacing"):
        p = sub.add_parser(name)
        _add_common(p)
        _add_ensemble(p)
        if name == "density":
            p.add_argument("--bins", default="fd")

    p = sub.add_parser("complexity")
    _add_common(p)
    _add_ensemble(p)
    _add_grid(p)
    p.add_argument("--beta", type=float, default=0.0, help="thermal-state beta")

    p = sub.add_parser("syk")
    _add_common(p)
    _add_grid(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--betas", type=str, default=None, help="comma list")

    p = sub.add_parser("analytic2x2")
    _add_common(p)
    _add_grid(p)
    p.add_argument("--classes", default=",".join(CLASS_TAGS))
    p.add_argument("--betas", default=None,
                   help="comma list mapping to Ginibre classes (1->AI, 2->A, 4->AII)")
    p.add_argument("--samples", type=int, default=100000)

    p = sub.add_parser("peakscan")
    _add_common(p)
    p.add_argument("--betas", default=None, help="comma list of Dyson indices")

    p = sub.add_parser("hermitize")
    _add_common(p)
    _add_ensemble(p)
    _add_grid(p)

    p = sub.add_parser("rerun")
    p.add_argument("manifest")
    p.add_argument("--out", default=None)

    p = sub.add_parser("preset")
    p.add_argument("figure", choices=["fig1", "fig2a", "fig2b", "fig3", "fig4", "fig5"])
    p.add_argument("--out", default=None)
    p.add_argument("--realizations", type=int, default=None,
                   help="override for desk-scale runs")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    return parser


def config_from_args(args) -> RunConfig:
    cmd = args.command
    outdir = _outdir(args)
    if cmd in ("density", "lanczos", "spacing"):
        cfg = RunConfig(experiment=cmd, ensemble=_ensemble_from_args(args),
                        output_dir=outdir, workers=args.workers)
        if cmd == "density":
            cfg.options["bins"] = args.bins
        return cfg
    if cmd == "complexity":
        return RunConfig(experiment=cmd, ensemble=_ensemble_from_args(args),
                         beta_temperature=args.beta,
                         time_grid=_grid_from_args(args, TimeGridSpec()),
                         output_dir=outdir, workers=args.workers)
    if cmd == "syk":
        spec = EnsembleSpec(kind="NHSYK", dim=1, params={"N": args.N},
                            seed=args.seed, realizations=args.realizations)
        betas = _parse_floats(args.betas) if args.betas else [args.beta or 0.0]
        return RunConfig(experiment="syk", ensemble=spec,
                         time_grid=_grid_from_args(args, TimeGridSpec()),
                         output_dir=outdir, workers=args.workers,
                         options={"betas": betas})
    if cmd == "analytic2x2":
        if args.betas:
            by_beta = {1.0: "AI", 2.0: "A", 4.0: "AII"}
            classes = []
            for b in _parse_floats(args.betas):
                if b not in by_beta:
                    raise InvalidParameterError(
                        f"no Ginibre class with beta = {b}; use --classes")
                classes.append(by_beta[b])
        else:
            classes = [c for c in args.classes.split(",") if c]
        grid = _grid_from_args(args, TimeGridSpec(0.05, 12.0, 120, "linear"))
        return RunConfig(experiment="analytic2x2", time_grid=grid,
                         output_dir=outdir, workers=args.workers,
                         options={"classes": classes, "samples": args.samples,
                                  "seed": args.seed})
    if cmd == "peakscan":
        options = {}
        if args.betas:
            options["betas"] = _parse_floats(args.betas)
        return RunConfig(experiment="peakscan", output_dir=outdir,
                         workers=args.workers, options=options)
    if cmd == "hermitize":
        return RunConfig(experiment="hermitize", ensemble=_ensemble_from_args(args),
                         time_grid=_grid_from_args(args, TimeGridSpec()),
                         output_dir=outdir, workers=args.workers)
    raise InvalidParameterError(f"unknown command {cmd!r}")


def load_preset(figure: str) -> dict:
    ref = resources.files("krylov_svd").joinpath(f"presets/{figure}.json")
    return json.loads(ref.read_text())


def _run_preset(args) -> int:
    preset = load_preset(args.figure)
    base = Path(args.out or os.environ.get(OUTDIR_ENV, ".")) / preset["figure"]
    for i, cfg_dict in enumerate(preset["runs"]):
        config = RunConfig.from_dict(cfg_dict)
        if args.realizations is not None and config.ensemble is not None:
            spec = config.ensemble.to_dict()
            spec["realizations"] = args.realizations
            config.ensemble = EnsembleSpec.from_dict(spec)
        if args.dim is not None and config.ensemble is not None \
                and config.ensemble.kind != "NHSYK":
            spec = config.ensemble.to_dict()
            spec["dim"] = args.dim
            config.ensemble = EnsembleSpec.from_dict(spec)
        if args.samples is not None and config.experiment == "analytic2x2":
            config.options["samples"] = args.samples
        if args.workers is not None:
            config.workers = args.workers
        config.output_dir = str(base / cfg_dict.get("name", f"run{i}"))
        run(config)
        print(f"wrote {config.output_dir}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "rerun":
            outputs = rerun(args.manifest, args.out)
        elif args.command == "preset":
            return _run_preset(args)
        else:
            outputs = run(config_from_args(args))
        for key, path in outputs.items():
            print(f"{key}: {path}")
        return 0
    except PartialResultError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"completed realizations: {exc.completed}", file=sys.stderr)
        return 4
    except KrylovSvdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
