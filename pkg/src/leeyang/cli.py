"""Command-line front end: zeros / evolve / correlate / reproduce.

All numeric output is serialized with 17 significant digits so that emitted
CSV re-parses to the in-memory values exactly.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, load_config
from .probe import correlate, expectation_series
from .zeros import RootConvergenceError, find_zeros

_EPS = np.finfo(float).eps


def _fmt(x):
    return format(float(x), ".17g")


FIGURE_PRESETS = {
    "fig2": {
        "model": {"kind": "exact", "n_spins": 2, "two_s": 5, "J": 1.0},
        "probe": {"two_s0": 5, "delta": 1},
        "panels": [("a", "inf"), ("b", 32), ("c", 8), ("d", 1)],
    },
    "fig4": {
        "model": {"kind": "long_range", "n_spins": 4, "two_s": 1, "J": 1.0},
        "probe": {"two_s0": 1, "delta": 1},
        "panels": [("a", "inf"), ("b", 8), ("c", 0.5), ("d", 0.0625)],
    },
    "fig6": {
        "model": {"kind": "ring", "n_spins": 10, "two_s": 2, "J": 1.0},
        "probe": {"two_s0": 1, "delta": 1},
        "panels": [("a", "inf"), ("b", 8), ("c", 2), ("d", 0.25)],
    },
}


def matching_window(max_multiplicity, base=1e-6):
    """Widen the match window for degenerate zeros.

    A touching zero of multiplicity m flattens the signal to |t - t_n|^m, so
    its time cannot be localized from signal values better than roughly
    eps^(1/m); simple and double zeros still resolve to well below 1e-6.
    """
    if max_multiplicity <= 2:
        return base
    return max(base, 20 * _EPS ** (1.0 / max_multiplicity))


def _multiplicity_of(zeros, root):
    for angle, mult in zeros.clusters:
        if abs(np.angle(root) - angle) < 1e-9 or (
            abs(abs(np.angle(root)) - np.pi) < 1e-9 and abs(abs(angle) - np.pi) < 1e-9
        ):
            return mult
    return 1


def write_zeros_csv(path, zeros, lam, delta, tag):
    lines = [f"# model={json.dumps(tag)}"]
    lines.append(f"# lambda={_fmt(lam)} delta={delta}")
    lines.append(f"# circle_deviation={_fmt(zeros.circle_deviation)}")
    lines.append("index,re,im,theta,abs_minus_1,multiplicity,predicted_time")
    for i, (z, theta) in enumerate(zip(zeros.roots, zeros.angles)):
        t = float(np.mod(-theta, 2 * np.pi)) / (lam * delta)
        lines.append(
            ",".join(
                [
                    str(i),
                    _fmt(z.real),
                    _fmt(z.imag),
                    _fmt(theta),
                    _fmt(abs(z) - 1.0),
                    str(_multiplicity_of(zeros, z)),
                    _fmt(t),
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_series_csv(path, series, tag):
    lines = [f"# model={json.dumps(tag)}"]
    lines.append(
        f"# beta={_fmt(series.poly.beta)} lambda={_fmt(series.lam)} "
        f"delta={series.delta} h0={_fmt(series.h0)}"
    )
    lines.append("t,re,im,abs")
    for t, v in zip(series.times, series.values):
        lines.append(
            ",".join([_fmt(t), _fmt(v.real), _fmt(v.imag), _fmt(abs(v))])
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_report_json(path, report, circle_dev):
    doc = {
        "predicted": [float(t) for t in report.predicted],
        "detected": [{"t": float(t), "residual": float(r)} for t, r in report.detected],
        "matches": [
            {"predicted": float(p), "detected": float(d), "deviation": float(v)}
            for p, d, v in report.matches
        ],
        "max_deviation": float(report.max_deviation),
        "circle_deviation": float(circle_dev),
        "window": float(report.window),
        "unmatched_predicted": [float(t) for t in report.unmatched_predicted],
        "unmatched_detected": [float(t) for t, _ in report.unmatched_detected],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def _apply_overrides(cfg, args):
    if getattr(args, "steps", None) is not None:
        if args.steps < 2:
            raise ConfigError("--steps must be at least 2")
        cfg.steps = args.steps
    if getattr(args, "t_max", None) is not None:
        if args.t_max <= 0:
            raise ConfigError("--t-max must be positive")
        cfg.t_max = args.t_max


def cmd_zeros(args):
    cfg = load_config(args.config)
    _apply_overrides(cfg, args)
    poly = cfg.build_polynomial()
    zeros = find_zeros(poly)
    write_zeros_csv(args.out, zeros, cfg.lam, cfg.delta, poly.model_tag)
    print(f"circle_deviation={_fmt(zeros.circle_deviation)}")
    return 0


def cmd_evolve(args):
    cfg = load_config(args.config)
    _apply_overrides(cfg, args)
    poly = cfg.build_polynomial()
    series = expectation_series(
        poly, cfg.probe_state(), cfg.lam, cfg.delta, cfg.h0, cfg.t_max, cfg.steps
    )
    write_series_csv(args.out, series, poly.model_tag)
    return 0


def _run_correlation(cfg, window=None):
    if cfg.h0 != 0:
        raise ConfigError("probe.h0: correlation requires h0 = 0")
    poly = cfg.build_polynomial()
    zeros = find_zeros(poly)
    series = expectation_series(
        poly, cfg.probe_state(), cfg.lam, cfg.delta, 0.0, cfg.t_max, cfg.steps
    )
    if window is None:
        max_mult = max(m for _, m in zeros.clusters)
        window = matching_window(max_mult, cfg.match_window)
    report = correlate(
        zeros, series, window=window, magnitude_tol=cfg.magnitude_tol,
        lam=cfg.lam, delta=cfg.delta,
    )
    return poly, zeros, series, report


def cmd_correlate(args):
    cfg = load_config(args.config)
    _apply_overrides(cfg, args)
    _, zeros, _, report = _run_correlation(cfg)
    write_report_json(args.out, report, zeros.circle_deviation)
    if not report.all_matched:
        print(
            f"{len(report.unmatched_predicted)} predicted zero time(s) unmatched",
            file=sys.stderr,
        )
        return 1
    print(f"max_deviation={_fmt(report.max_deviation)}")
    return 0


def cmd_reproduce(args):
    preset = FIGURE_PRESETS[args.figure]
    out_root = Path(args.out_dir)
    status = 0
    for label, t_over_j in preset["panels"]:
        cfg = RunConfig(
            {
                "model": dict(preset["model"]),
                "temperature": {"T_over_J": t_over_j},
                "probe": dict(preset["probe"]),
                "lambda": 1.0,
            }
        )
        _apply_overrides(cfg, args)
        poly, zeros, series, report = _run_correlation(cfg)
        panel_dir = out_root / args.figure / label
        panel_dir.mkdir(parents=True, exist_ok=True)
        write_zeros_csv(panel_dir / "zeros.csv", zeros, cfg.lam, cfg.delta, poly.model_tag)
        write_series_csv(panel_dir / "series.csv", series, poly.model_tag)
        write_report_json(panel_dir / "report.json", report, zeros.circle_deviation)
        ok = report.all_matched
        print(
            f"{args.figure}{label}: T_over_J={t_over_j} "
            f"circle_deviation={_fmt(zeros.circle_deviation)} "
            f"matched={len(report.matches)}/{len(report.predicted)}"
        )
        if not ok:
            status = 1
    return status


def build_parser():
    parser = argparse.ArgumentParser(
        prog="leeyang",
        description="Partition-function zeros of ferromagnetic Ising baths and "
        "the probe-spin signal that reveals them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_default):
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=out_default, help="output file path")
        p.add_argument("--steps", type=int, help="override grid.steps")
        p.add_argument("--t-max", dest="t_max", type=float, help="override grid.t_max")

    p = sub.add_parser("zeros", help="locate Lee-Yang zeros, write zeros.csv")
    common(p, "zeros.csv")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("evolve", help="sample the probe signal, write series.csv")
    common(p, "series.csv")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser(
        "correlate", help="match detected and predicted zero times, write report.json"
    )
    common(p, "report.json")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("reproduce", help="emit the data files for a figure preset")
    p.add_argument("figure", choices=sorted(FIGURE_PRESETS))
    p.add_argument("--out-dir", default=".", help="output directory root")
    p.add_argument("--steps", type=int, help="override grid.steps")
    p.set_defaults(func=cmd_reproduce, t_max=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RootConvergenceError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
