"""Command line interface: analyses and figure-reproduction experiments.

Every subcommand is deterministic given --seed and writes byte-identical
CSV/JSON at any --threads setting.  Input data files carry one number per
line.  --check turns each experiment's documented expectations into
pass/fail assertions with a nonzero exit on failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .critical import critical_bandwidth
from .density import DensityEstimate, Sample
from .distributions import BetaDensity, two_cluster_density
from .kernels import GaussianKernel, Kernel, biweight, epanechnikov, parse_kernel, triweight
from .modecount import CountMethod, Exact, Grid, count_modes, count_profile
from .modetree import build_mode_tree, mode_space
from .output import ensure_dir, write_csv, write_json
from .parallel import parallel_map, resolve_threads
from .rng import RandomState
from .silverman import BootstrapConfig, level_curve, log_ratio_experiment, silverman_test
from .svgplot import heatmap_svg, mode_tree_svg, polyline_chart_svg

_FIG1_KERNELS = (
    ("epanechnikov", epanechnikov()),
    ("biweight", biweight()),
    ("triweight", triweight()),
    ("gaussian", GaussianKernel(1.0 / 3.0)),
)

_FIG1_SEQUENCES = {
    "epanechnikov": (3, 5, 3, 1),
    "biweight": (3, 5, 2, 3, 1),
    "triweight": (3, 4, 2, 1),
}


class CheckFailure(RuntimeError):
    pass


def _add_common(p: argparse.ArgumentParser, with_kernel: bool = True) -> None:
    if with_kernel:
        p.add_argument("--kernel", default="biweight",
                       help="epan|biweight|triweight|multiweight:<theta>|gaussian:<scale>")
    p.add_argument("--method", choices=("exact", "grid"), default="grid",
                   help="mode counting method (exact needs an integer-exponent kernel)")
    p.add_argument("--points-per-h", type=int, default=1024,
                   help="grid method resolution per bandwidth length")
    p.add_argument("--grid-density", type=int, default=64,
                   help="bandwidth-scan points per decade for critical-bandwidth searches")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", default="1", help="worker count or 'auto'")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--format", default="csv,json,svg",
                   help="comma-separated subset of csv,json,svg")
    p.add_argument("--check", action="store_true",
                   help="assert the documented expectations; nonzero exit on failure")


def _data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", help="input file, one number per line")
    p.add_argument("--points", help="inline comma-separated values, e.g. '-1,0,1'")


def _load_sample(args, default=(-1.0, 0.0, 1.0)) -> Sample:
    if getattr(args, "data", None):
        values = []
        with open(args.data, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    values.append(float(line))
        return Sample(values)
    if getattr(args, "points", None):
        return Sample([float(v) for v in args.points.split(",")])
    return Sample(list(default))


def _resolve_method(args) -> CountMethod:
    if args.method == "exact":
        return Exact()
    return Grid(args.points_per_h)


def _formats(args) -> set[str]:
    return {f.strip() for f in args.format.split(",") if f.strip()}


def _check(ok: bool, message: str, failures: list) -> None:
    status = "pass" if ok else "FAIL"
    print(f"check [{status}] {message}")
    if not ok:
        failures.append(message)


def _finish_checks(failures: list) -> None:
    if failures:
        raise CheckFailure(f"{len(failures)} check(s) failed")


# ---------------------------------------------------------------------------
# plain analysis subcommands
# ---------------------------------------------------------------------------


def cmd_modes(args) -> None:
    sample = _load_sample(args)
    kernel = parse_kernel(args.kernel)
    ms = count_modes(DensityEstimate(sample, kernel, args.bandwidth), _resolve_method(args))
    out = ensure_dir(args.out)
    fmts = _formats(args)
    if "csv" in fmts:
        write_csv(os.path.join(out, "modes.csv"), ["location", "height"], ms.modes)
    if "json" in fmts:
        write_json(os.path.join(out, "modes.json"), {
            "count": ms.count,
            "degenerate": ms.degenerate,
            "modes": [{"location": l, "height": h} for l, h in ms.modes],
        })
    print(f"{ms.count} mode(s)" + (" [degenerate]" if ms.degenerate else ""))


def cmd_profile(args) -> None:
    sample = _load_sample(args)
    kernel = parse_kernel(args.kernel)
    grid = np.geomspace(args.h_min, args.h_max, args.h_count)
    profile = count_profile(sample, kernel, grid, _resolve_method(args),
                            threads=resolve_threads(args.threads))
    out = ensure_dir(args.out)
    fmts = _formats(args)
    if "csv" in fmts:
        write_csv(os.path.join(out, "profile.csv"), ["bandwidth", "count"],
                  zip(profile.bandwidths.tolist(), profile.counts.tolist()))
        write_csv(os.path.join(out, "transitions.csv"),
                  ["bandwidth", "count_below", "count_above"],
                  [(t.bandwidth, t.count_below, t.count_above) for t in profile.transitions])
    if "json" in fmts:
        write_json(os.path.join(out, "profile.json"), {
            "compressed": list(profile.compressed),
            "segments": [list(s) for s in profile.segments()],
        })
    print("compressed profile:", list(profile.compressed))


def cmd_tree(args) -> None:
    sample = _load_sample(args)
    kernel = parse_kernel(args.kernel)
    grid = np.geomspace(args.h_max, args.h_min, args.h_count)
    tree = build_mode_tree(sample, kernel, grid, _resolve_method(args),
                           threads=resolve_threads(args.threads))
    _emit_tree(args, tree, prefix="tree", title=f"mode tree ({kernel})")
    print(f"{len(tree.tracks)} track(s)")


def _emit_tree(args, tree, prefix: str, title: str) -> None:
    out = ensure_dir(args.out)
    fmts = _formats(args)
    if "csv" in fmts:
        write_csv(os.path.join(out, f"{prefix}_edges.csv"),
                  ["track_id", "parent_id", "h_birth", "h_death"], tree.edge_rows())
        write_csv(os.path.join(out, f"{prefix}_paths.csv"),
                  ["track_id", "bandwidth", "location"], tree.path_rows())
    if "svg" in fmts:
        with open(os.path.join(out, f"{prefix}.svg"), "w", encoding="utf-8") as fh:
            fh.write(mode_tree_svg(tree, title))


def cmd_modespace(args) -> None:
    sample = _load_sample(args)
    thetas = np.linspace(args.theta_min, args.theta_max, args.theta_count)
    hs = np.linspace(args.h_min, args.h_max, args.h_count)
    matrix = mode_space(sample, thetas, hs, Grid(args.points_per_h),
                        threads=resolve_threads(args.threads))
    _emit_modespace(args, matrix)
    print(f"matrix {matrix.counts.shape[0]}x{matrix.counts.shape[1]}, "
          f"max count {int(matrix.counts.max())}")


def _emit_modespace(args, matrix) -> None:
    out = ensure_dir(args.out)
    fmts = _formats(args)
    if "csv" in fmts:
        header = ["h"] + [f"{t:.17g}" for t in matrix.theta_grid]
        rows = []
        for i in range(len(matrix.h_grid) - 1, -1, -1):
            rows.append([float(matrix.h_grid[i])] + [int(c) for c in matrix.counts[i]])
        write_csv(os.path.join(out, "modespace.csv"), header, rows)
    if "svg" in fmts:
        svg = heatmap_svg(matrix.theta_grid, matrix.h_grid, matrix.counts,
                          "kernel exponent", "bandwidth", "mode counts")
        with open(os.path.join(out, "modespace.svg"), "w", encoding="utf-8") as fh:
            fh.write(svg)


def cmd_critical(args) -> None:
    sample = _load_sample(args)
    kernel = parse_kernel(args.kernel)
    result = critical_bandwidth(sample, kernel, _resolve_method(args), args.grid_density,
                                full_profile=True)
    out = ensure_dir(args.out)
    fmts = _formats(args)
    if "json" in fmts:
        write_json(os.path.join(out, "critical.json"), result.to_json_dict())
    if "csv" in fmts:
        write_csv(os.path.join(out, "critical_profile.csv"), ["bandwidth", "count"],
                  zip(result.profile.bandwidths.tolist(), result.profile.counts.tolist()))
    print(f"h_crit={result.h_crit:.6g} h_nonm="
          f"{result.h_nonm if result.h_nonm is None else format(result.h_nonm, '.6g')} "
          f"ratio={result.ratio if result.ratio is None else format(result.ratio, '.6g')}")


def cmd_test(args) -> None:
    sample = _load_sample(args)
    kernel = parse_kernel(args.kernel)
    config = BootstrapConfig(n_resamples=args.B, alpha=args.alpha, seed=args.seed,
                             method=_resolve_method(args), grid_density=args.grid_density)
    result = silverman_test(sample, kernel, config, threads=resolve_threads(args.threads))
    out = ensure_dir(args.out)
    if "json" in _formats(args):
        write_json(os.path.join(out, "test.json"), result.to_json_dict())
    print(f"h_crit={result.h_crit:.6g} exceedance={result.exceedance:.4f} "
          f"reject={str(result.reject).lower()} (alpha={args.alpha})")


# ---------------------------------------------------------------------------
# figure experiments
# ---------------------------------------------------------------------------


def cmd_fig1(args) -> None:
    sample = _load_sample(args)
    failures: list = []
    grid_desc = np.geomspace(args.h_max, args.h_min, args.h_count)
    profile_grid = np.geomspace(args.h_min, args.h_max, args.h_count)
    for name, kernel in _FIG1_KERNELS:
        method: CountMethod = Exact() if getattr(kernel, "is_polynomial", False) else Grid(512)
        tree = build_mode_tree(sample, kernel, grid_desc, method,
                               threads=resolve_threads(args.threads))
        _emit_tree(args, tree, prefix=f"fig1_{name}", title=f"mode tree ({name})")
        profile = count_profile(sample, kernel, profile_grid, method,
                                threads=resolve_threads(args.threads))
        print(f"{name}: compressed profile {list(profile.compressed)}")
        if args.check:
            if name in _FIG1_SEQUENCES:
                _check(profile.compressed == _FIG1_SEQUENCES[name],
                       f"fig1 {name} count sequence {profile.compressed} == "
                       f"{_FIG1_SEQUENCES[name]}", failures)
            else:
                _check(profile.is_nonincreasing(),
                       f"fig1 {name} profile nonincreasing {profile.compressed}", failures)
    _finish_checks(failures)


def cmd_fig2(args) -> None:
    sample = _load_sample(args)
    thetas = np.linspace(args.theta_min, args.theta_max, args.theta_count)
    hs = np.linspace(args.h_min, args.h_max, args.h_count)
    matrix = mode_space(sample, thetas, hs, Grid(args.points_per_h),
                        threads=resolve_threads(args.threads))
    _emit_modespace(args, matrix)
    print(f"matrix {matrix.counts.shape[0]}x{matrix.counts.shape[1]}")
    if args.check:
        failures: list = []
        window = (
            (matrix.theta_grid >= 2.3) & (matrix.theta_grid <= 2.7),
            (matrix.h_grid >= 0.95) & (matrix.h_grid <= 1.10),
        )
        pocket = matrix.counts[np.ix_(window[1], window[0])]
        _check(bool((pocket >= 6).any()),
               "six-mode cell present for exponent in [2.3, 2.7], h in [0.95, 1.10]", failures)
        j12 = int(np.argmin(np.abs(matrix.theta_grid - 12.0)))
        col = matrix.column_compressed(j12, descending=False)
        _check(all(b <= a for a, b in zip(col, col[1:])),
               f"exponent-12 column nonincreasing in h: {col}", failures)
        j1 = int(np.argmin(np.abs(matrix.theta_grid - 1.0)))
        topdown = matrix.column_compressed(j1, descending=True)
        _check(topdown == (1, 3, 5, 3),
               f"exponent-1 column compresses to (1, 3, 5, 3) top-down: {topdown}", failures)
        _finish_checks(failures)


def cmd_fig3(args) -> None:
    sample = _load_sample(args)
    kernel = parse_kernel(f"multiweight:{args.theta}")
    grid_desc = np.geomspace(args.h_max, args.h_min, args.h_count)
    tree = build_mode_tree(sample, kernel, grid_desc, Grid(2048),
                           threads=resolve_threads(args.threads))
    _emit_tree(args, tree, prefix="fig3_tree", title=f"mode tree (multiweight {args.theta})")
    est = DensityEstimate(sample, kernel, args.bandwidth)
    ms = count_modes(est, Grid(8192, 1e-12))
    lo, hi = est.support
    xs = np.linspace(lo, hi, 2001)
    ys = est.evaluate(xs)
    out = ensure_dir(args.out)
    fmts = _formats(args)
    if "csv" in fmts:
        write_csv(os.path.join(out, "fig3_curve.csv"), ["x", "density"], zip(xs, ys))
        write_csv(os.path.join(out, "fig3_modes.csv"), ["location", "height"], ms.modes)
    if "svg" in fmts:
        svg = polyline_chart_svg([("estimate", xs, ys)], "x", "density",
                                 f"estimate at h={args.bandwidth} (6-mode pocket)")
        with open(os.path.join(out, "fig3_curve.svg"), "w", encoding="utf-8") as fh:
            fh.write(svg)
    print(f"count at (theta={args.theta}, h={args.bandwidth}): {ms.count}")
    if args.check:
        failures: list = []
        _check(ms.count == 6, f"six modes at (theta={args.theta}, h={args.bandwidth}), got {ms.count}",
               failures)
        _check(bool(np.all(ys >= 0)), "estimate nonnegative along the curve", failures)
        prominences = _mode_prominences(est, ms)
        span = max(prominences) / max(min(prominences), 1e-300)
        tiny = min(prominences) / max(ms.heights)
        _check(span >= 30.0 and tiny <= 1e-3,
               f"mode sizes range from small to extremely small "
               f"(span {span:.3g}, smallest relative {tiny:.2e})", failures)
        _finish_checks(failures)


def _mode_prominences(est: DensityEstimate, ms) -> list[float]:
    locs = ms.locations
    proms = []
    for i, (loc, height) in enumerate(ms.modes):
        saddles = []
        if i > 0:
            xs = np.linspace(locs[i - 1], loc, 257)
            saddles.append(float(np.min(est.evaluate(xs))))
        if i + 1 < len(locs):
            xs = np.linspace(loc, locs[i + 1], 257)
            saddles.append(float(np.min(est.evaluate(xs))))
        base = max(saddles) if saddles else 0.0
        proms.append(max(height - base, 0.0))
    return proms


def cmd_fig4(args) -> None:
    sizes = [int(v) for v in args.sizes.split(",")]
    kernels = [(k, parse_kernel(k)) for k in args.kernels.split(",")]
    config = BootstrapConfig(seed=args.seed, method=Grid(args.points_per_h),
                             grid_density=args.grid_density)
    out = ensure_dir(args.out)
    fmts = _formats(args)
    failures: list = []
    threads = resolve_threads(args.threads)
    for kname, kernel in kernels:
        for n in sizes:
            values = log_ratio_experiment(n, kernel, args.replicates, config, threads=threads)
            rows = [(rep, v) for rep, v in enumerate(values)]
            present = [v for v in values if v is not None]
            if "csv" in fmts:
                write_csv(os.path.join(out, f"fig4_{kname}_n{n}.csv"),
                          ["replicate", "log_ratio"], rows)
            if "svg" in fmts and len(present) >= 5:
                xs, ys = _reference_density_curve(np.array(present))
                svg = polyline_chart_svg([(f"n={n}", xs, ys)], "log ratio", "density",
                                         f"log(h_crit/h_nonm), {kname}")
                with open(os.path.join(out, f"fig4_{kname}_n{n}.svg"), "w", encoding="utf-8") as fh:
                    fh.write(svg)
            frac = len(present) / max(len(values), 1)
            med = float(np.median(present)) if present else math.nan
            print(f"fig4 {kname} n={n}: {len(present)}/{len(values)} nonmonotone, "
                  f"median log ratio {med:.4f}")
            if args.check:
                _check(all(v >= -1e-9 for v in present),
                       f"fig4 {kname} n={n}: log ratios nonnegative", failures)
                if kname in ("epan", "epanechnikov"):
                    _check(bool(present) and med <= 0.35,
                           f"fig4 {kname} n={n}: ratios cluster near zero (median {med:.3f})",
                           failures)
    if args.check:
        gvals = log_ratio_experiment(10, GaussianKernel(1.0), 5,
                                     BootstrapConfig(seed=args.seed), threads=threads)
        _check(all(v is None for v in gvals),
               "gaussian kernel run emits no nonmonotonicity", failures)
        _finish_checks(failures)


def _reference_density_curve(values: np.ndarray):
    """Normal-reference bandwidth display smoothing of a sample."""
    sd = float(np.std(values))
    n = len(values)
    bw = max(1.06 * sd * n ** (-0.2), 1e-6)
    est = DensityEstimate(Sample(values), GaussianKernel(1.0), bw)
    xs = np.linspace(values.min() - 3 * bw, values.max() + 3 * bw, 513)
    return xs, est.evaluate(xs)


def cmd_fig5(args) -> None:
    kernels = [(k, parse_kernel(k)) for k in args.kernels.split(",")]
    alphas = [round(a, 10) for a in np.linspace(0.05, 0.95, 19)] + [1.0]
    density = BetaDensity(3.0, 4.0)
    config = BootstrapConfig(n_resamples=args.B, seed=args.seed,
                             method=Grid(args.points_per_h), grid_density=args.grid_density)
    out = ensure_dir(args.out)
    fmts = _formats(args)
    threads = resolve_threads(args.threads)
    failures: list = []
    series = []
    for kname, kernel in kernels:
        curve = level_curve(density, args.n, kernel, alphas, args.replicates, config,
                            threads=threads, smooth_window=args.smooth_window)
        if "csv" in fmts:
            write_csv(os.path.join(out, f"fig5_{kname}.csv"),
                      ["alpha", "pi_hat", "std_err"], curve)
        series.append((kname, [c[0] for c in curve], [c[1] for c in curve]))
        print(f"fig5 {kname}: " + " ".join(f"pi({a:.2f})={p:.3f}" for a, p, _ in curve[:4]))
        if args.check:
            for a, p, se in curve:
                if a >= 1.0:
                    _check(p == 1.0, f"fig5 {kname}: rejection rate 1 at alpha=1", failures)
                else:
                    _check(p <= a + 2.0 * se + 1e-12,
                           f"fig5 {kname}: pi({a:.2f})={p:.3f} below diagonal within 2 SE",
                           failures)
    if "svg" in fmts:
        svg = polyline_chart_svg(series, "nominal level", "rejection frequency",
                                 f"level accuracy, Beta(3,4), n={args.n}",
                                 diagonal=True, y_range=(0.0, 1.0))
        with open(os.path.join(out, "fig5.svg"), "w", encoding="utf-8") as fh:
            fh.write(svg)
    _finish_checks(failures)


def cmd_scaling(args) -> None:
    sizes = sorted({int(v) for v in args.sizes.split(",")})
    if len(sizes) < 2:
        print("error: scaling needs at least two distinct sample sizes", file=sys.stderr)
        raise SystemExit(2)
    kernel = parse_kernel(args.kernel)
    density = BetaDensity(3.0, 4.0)
    threads = resolve_threads(args.threads)
    config = BootstrapConfig(seed=args.seed, method=Grid(args.points_per_h),
                             grid_density=args.grid_density)
    rows = []
    medians = []
    for n in sizes:
        tasks = [(density, n, kernel, config, rep) for rep in range(args.replicates)]
        h_values = parallel_map(_scaling_replicate, tasks, threads)
        rows.extend((n, rep, h) for rep, h in enumerate(h_values))
        medians.append(float(np.median(h_values)))
    slope = _ls_slope(np.log(np.array(sizes, dtype=float)), np.log(np.array(medians)))
    out = ensure_dir(args.out)
    fmts = _formats(args)
    if "csv" in fmts:
        write_csv(os.path.join(out, "scaling.csv"), ["n", "replicate", "h_crit"], rows)
    if "json" in fmts:
        write_json(os.path.join(out, "scaling.json"), {
            "sizes": sizes,
            "median_h_crit": medians,
            "slope": slope,
        })
    print(f"slope of log median h_crit vs log n: {slope:.4f}")
    if args.check:
        failures: list = []
        _check(-0.30 <= slope <= -0.10, f"scaling slope {slope:.4f} within [-0.30, -0.10]",
               failures)
        _finish_checks(failures)


def _scaling_replicate(task) -> float:
    density, n, kernel, config, rep = task
    rng = RandomState(config.seed).child(rep, n)
    sample = Sample(density.sample(rng, n))
    return critical_bandwidth(sample, kernel, config.method, config.grid_density,
                              full_profile=False,
                              transition_rtol=config.transition_rtol).h_crit


def _ls_slope(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    return float(np.sum(xc * (y - y.mean())) / np.sum(xc * xc))


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kdemodes",
        description="Mode counting, critical bandwidths and the bootstrap "
                    "unimodality test for kernel density estimates.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("modes", help="count and locate modes at one bandwidth")
    _data_args(p)
    p.add_argument("--bandwidth", type=float, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("profile", help="mode counts over a bandwidth grid")
    _data_args(p)
    p.add_argument("--h-min", type=float, default=0.05)
    p.add_argument("--h-max", type=float, default=3.0)
    p.add_argument("--h-count", type=int, default=200)
    _add_common(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("tree", help="mode tree over a descending bandwidth grid")
    _data_args(p)
    p.add_argument("--h-min", type=float, default=0.05)
    p.add_argument("--h-max", type=float, default=3.0)
    p.add_argument("--h-count", type=int, default=200)
    _add_common(p)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("modespace", help="mode counts over an exponent/bandwidth grid")
    _data_args(p)
    p.add_argument("--theta-min", type=float, default=0.025)
    p.add_argument("--theta-max", type=float, default=12.0)
    p.add_argument("--theta-count", type=int, default=48)
    p.add_argument("--h-min", type=float, default=0.02)
    p.add_argument("--h-max", type=float, default=3.0)
    p.add_argument("--h-count", type=int, default=50)
    _add_common(p, with_kernel=False)
    p.set_defaults(func=cmd_modespace)

    p = sub.add_parser("critical", help="critical and nonmonotonicity bandwidths")
    _data_args(p)
    _add_common(p)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("test", help="bootstrap unimodality test")
    _data_args(p)
    p.add_argument("--B", type=int, default=200, help="bootstrap resamples")
    p.add_argument("--alpha", type=float, default=0.05)
    _add_common(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("fig1", help="mode trees for the three-point sample, four kernels")
    _data_args(p)
    p.add_argument("--h-min", type=float, default=0.05)
    p.add_argument("--h-max", type=float, default=3.0)
    p.add_argument("--h-count", type=int, default=400)
    _add_common(p, with_kernel=False)
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("fig2", help="mode-space matrix for the three-point sample")
    _data_args(p)
    p.add_argument("--theta-min", type=float, default=0.025)
    p.add_argument("--theta-max", type=float, default=12.0)
    p.add_argument("--theta-count", type=int, default=480)
    p.add_argument("--h-min", type=float, default=0.02)
    p.add_argument("--h-max", type=float, default=3.0)
    p.add_argument("--h-count", type=int, default=500)
    _add_common(p, with_kernel=False)
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("fig3", help="six-mode pocket close-up")
    _data_args(p)
    p.add_argument("--theta", type=float, default=2.5)
    p.add_argument("--bandwidth", type=float, default=1.02)
    p.add_argument("--h-min", type=float, default=0.6)
    p.add_argument("--h-max", type=float, default=1.6)
    p.add_argument("--h-count", type=int, default=200)
    _add_common(p, with_kernel=False)
    p.set_defaults(func=cmd_fig3)

    p = sub.add_parser("fig4", help="log critical/nonmonotonicity bandwidth ratios")
    p.add_argument("--sizes", default="10,100",
                   help="comma-separated sample sizes (paper set: 10,100,1000)")
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--kernels", default="epan,biweight,triweight")
    _add_common(p, with_kernel=False)
    p.set_defaults(func=cmd_fig4)

    p = sub.add_parser("fig5", help="level accuracy of the unimodality test")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--B", type=int, default=200, help="bootstrap resamples per replicate")
    p.add_argument("--kernels", default="epan,biweight,triweight,gaussian:1")
    p.add_argument("--smooth-window", type=int, default=0,
                   help="moving-average window over alphas (0 = raw values)")
    _add_common(p, with_kernel=False)
    p.set_defaults(func=cmd_fig5)

    p = sub.add_parser("scaling", help="critical bandwidth size against sample size")
    p.add_argument("--sizes", default="100,400,1600")
    p.add_argument("--replicates", type=int, default=50)
    _add_common(p)
    p.set_defaults(func=cmd_scaling)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # desk-scale defaults for the statistical experiments
    if args.command in ("fig4", "fig5", "scaling") and args.points_per_h == 1024:
        args.points_per_h = 128
    if args.command == "fig2" and args.points_per_h == 1024:
        args.points_per_h = 128
    try:
        args.func(args)
    except CheckFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
