"""Command-line front end: capacities, split-factor searches, reproductions.

Every command writes one CSV (fixed schema, 6-decimal floats, LF endings) and
a JSON manifest next to it holding the resolved parameters, so any output is
regenerable from its manifest.  Reruns with the same manifest are
byte-identical for any --workers value; workers is an execution detail and is
deliberately kept out of the manifest.

Exit codes: 0 ok, 1 usage or input parse failure, 2 numeric failure (NaN in
computed results).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__, kernels
from .capacity import ChannelSpec, CpaConfig, McConfig, cc_sum_capacity_phase, cpa_sum_capacity
from .constellations import Constellation, by_name, load_constellation, rotate
from .optimizer import (
    GridSpec,
    SweepRow,
    SweepSpec,
    alpha_opt,
    alpha_star,
    alpha_theta_star,
    sweep,
    theta_star,
    _plain_capacity,
)

CSV_HEADER = "scheme,constellation,snr_db,p2_ratio,alpha,theta_deg,capacity_bits,stderr_bits,objective,samples,seed"

CONSTELLATION_NAMES = ("bpsk", "qpsk", "8psk", "16psk", "8qam", "16qam")
REPRODUCE_TARGETS = (
    "table1", "table2", "table3",
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7",
)

TABLE1_SNRS = tuple(range(0, 31, 2))
TABLE2_SNRS = (0, 4, 8, 12, 16, 20, 24)
TABLE3_SNRS = (0, 5, 10, 15, 20, 25, 30)
FIG_SNRS = tuple(range(0, 31, 2))
FIG4_RATIOS = (0.3, 0.5, 0.75, 0.9)
FIG7_RATIOS = (0.5, 0.75, 0.9)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_snr_list(spec: str) -> list[float]:
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"SNR range must be START:STEP:STOP, got {spec!r}")
        start, step, stop = (float(p) for p in parts)
        return [float(v) for v in GridSpec(start, stop, step).values()]
    return [float(p) for p in spec.split(",") if p.strip()]


def _parse_grid(spec: str) -> GridSpec:
    parts = spec.strip().split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be START:STEP:STOP, got {spec!r}")
    start, step, stop = (float(p) for p in parts)
    return GridSpec(start, stop, step)


def _add_common(p: _Parser):
    p.add_argument("--constellation", choices=CONSTELLATION_NAMES)
    p.add_argument("--constellation-file", metavar="PATH")
    p.add_argument("--no-normalize", action="store_true",
                   help="keep file constellations at their stored power")
    p.add_argument("--snr-db", default="0:2:30", metavar="LIST|START:STEP:STOP")
    p.add_argument("--p2-ratio", type=float, default=1.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--phase", choices=("none", "random"), default="none")
    p.add_argument("--theta1", type=float, help="fixed channel offset, degrees")
    p.add_argument("--theta2", type=float, help="fixed channel offset, degrees")
    p.add_argument("--alpha", type=float)
    p.add_argument("--alpha-grid", default="0.01:0.01:1.00", metavar="START:STEP:STOP")
    p.add_argument("--theta-grid", default="1:1:90", metavar="START:STEP:STOP")
    p.add_argument("--samples", type=int, default=20_000)
    p.add_argument("--phase-draws", type=int, default=1_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--workers", type=int, default=1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="cpamac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_cap = sub.add_parser("capacity", help="Monte-Carlo scheme capacities per SNR")
    p_cap.add_argument("--scheme", choices=("baseline", "cpa", "cr", "cpa_cr"), default="baseline")
    _add_common(p_cap)
    p_cap.set_defaults(func=cmd_capacity, default_out="capacity.csv")

    p_ast = sub.add_parser("alpha-star", help="deterministic split-factor search per SNR")
    _add_common(p_ast)
    p_ast.set_defaults(func=cmd_alpha_star, default_out="alpha_star.csv")

    p_rep = sub.add_parser("reproduce", help="regenerate a reference table or figure data grid")
    p_rep.add_argument("target", choices=REPRODUCE_TARGETS)
    _add_common(p_rep)
    p_rep.set_defaults(func=cmd_reproduce, default_out=None)

    return parser


def _resolve_constellation(args) -> Constellation:
    if args.constellation_file:
        return load_constellation(args.constellation_file, normalize=not args.no_normalize)
    if args.constellation:
        return by_name(args.constellation)
    raise ValueError("one of --constellation or --constellation-file is required")


def _mc(args) -> McConfig:
    return McConfig(noise_samples=args.samples, phase_draws=args.phase_draws, seed=args.seed)


def _row(scheme, label, snr, ratio, alpha=None, theta_deg=None, bits=None, se=None,
         objective=None) -> SweepRow:
    return SweepRow(scheme, label, snr, ratio, alpha, theta_deg,
                    capacity_bits=bits, stderr_bits=se, objective=objective)


def cmd_capacity(args) -> list[SweepRow]:
    s = _resolve_constellation(args)
    mc = _mc(args)
    snrs = _parse_snr_list(args.snr_db)
    alpha_grid = _parse_grid(args.alpha_grid)
    theta_grid = _parse_grid(args.theta_grid)
    fixed = args.theta1 is not None or args.theta2 is not None
    if fixed and args.phase == "random":
        raise ValueError("--theta1/--theta2 fix the offsets; do not combine with --phase random")
    th1 = math.radians(args.theta1 or 0.0)
    th2 = math.radians(args.theta2 or 0.0)
    rows = []
    for snr in snrs:
        P1 = args.sigma2 * 10.0 ** (snr / 10.0)
        P2 = args.p2_ratio * P1
        ch = ChannelSpec(sigma2=args.sigma2, phase="fixed" if fixed else args.phase,
                         theta1=th1, theta2=th2)
        alpha = theta_deg = objective = None
        if args.scheme == "baseline":
            if fixed:
                est = cc_sum_capacity_phase(s, s, math.sqrt(P1), math.sqrt(P2), th1, th2,
                                            ch, mc, workers=args.workers)
            else:
                est = _plain_capacity(s, s, math.sqrt(P1), math.sqrt(P2), ch, mc, args.workers)
        elif args.scheme == "cpa":
            if args.alpha is not None:
                alpha = args.alpha
            else:
                alpha, objective = alpha_star(s, s, P1, P2, args.sigma2, alpha_grid,
                                              phase=args.phase, phase_draws=args.phase_draws,
                                              seed=args.seed, workers=args.workers)
            est = cpa_sum_capacity(s, s, CpaConfig(P1, P2, alpha), ch, mc, workers=args.workers)
        elif args.scheme == "cr":
            theta_rad, objective = theta_star(s, s, P1, P2, args.sigma2, theta_grid)
            theta_deg = math.degrees(theta_rad)
            s2 = rotate(s, theta_rad)
            if fixed:
                est = cc_sum_capacity_phase(s, s2, math.sqrt(P1), math.sqrt(P2), th1, th2,
                                            ch, mc, workers=args.workers)
            else:
                est = _plain_capacity(s, s2, math.sqrt(P1), math.sqrt(P2), ch, mc, args.workers)
        else:  # cpa_cr
            alpha, theta_rad, objective = alpha_theta_star(s, s, P1, P2, args.sigma2,
                                                           alpha_grid, theta_grid, args.workers)
            theta_deg = math.degrees(theta_rad)
            est = cpa_sum_capacity(s, rotate(s, theta_rad), CpaConfig(P1, P2, alpha),
                                   ch, mc, workers=args.workers)
        rows.append(_row(args.scheme, s.label, snr, args.p2_ratio, alpha, theta_deg,
                         est.bits, est.stderr, objective))
    return rows


def cmd_alpha_star(args) -> list[SweepRow]:
    s = _resolve_constellation(args)
    snrs = _parse_snr_list(args.snr_db)
    alpha_grid = _parse_grid(args.alpha_grid)
    rows = []
    for snr in snrs:
        P1 = args.sigma2 * 10.0 ** (snr / 10.0)
        P2 = args.p2_ratio * P1
        a, obj = alpha_star(s, s, P1, P2, args.sigma2, alpha_grid, phase=args.phase,
                            phase_draws=args.phase_draws, seed=args.seed, workers=args.workers)
        rows.append(_row("cpa", s.label, snr, args.p2_ratio, alpha=a, objective=obj))
    return rows


def cmd_reproduce(args) -> list[SweepRow]:
    mc = _mc(args)
    target = args.target
    w = args.workers
    if target == "table1":
        rows = []
        for name in ("qpsk", "8psk", "16psk", "16qam"):
            s = by_name(name)
            for snr in TABLE1_SNRS:
                P = 10.0 ** (snr / 10.0)
                a, obj = alpha_star(s, s, P, P, 1.0, workers=w)
                rows.append(_row("cpa", s.label, snr, 1.0, alpha=a, objective=obj))
        return rows
    if target == "table2":
        return _dual_alpha_rows(("qpsk", "8psk"), TABLE2_SNRS, mc, w)
    if target == "table3":
        rows = []
        for name in ("qpsk", "8qam", "8psk"):
            s = by_name(name)
            for snr in TABLE3_SNRS:
                P = 10.0 ** (snr / 10.0)
                a, obj = alpha_star(s, s, P, P, 1.0, phase="random",
                                    phase_draws=mc.phase_draws, seed=mc.seed, workers=w)
                rows.append(_row("cpa", s.label, snr, 1.0, alpha=a, objective=obj))
        return rows
    if target in ("fig1", "fig2"):
        name = "qpsk" if target == "fig1" else "8psk"
        specs = [SweepSpec(sch, name, FIG_SNRS) for sch in ("baseline", "cpa", "cr", "cpa_cr")]
        return sweep(specs, mc, workers=w)
    if target == "fig3":
        return _dual_alpha_rows(("qpsk", "8psk"), FIG_SNRS, mc, w)
    if target == "fig4":
        specs = [SweepSpec(sch, "qpsk", FIG_SNRS, p2_ratio=r)
                 for r in FIG4_RATIOS for sch in ("baseline", "cpa", "cr")]
        return sweep(specs, mc, workers=w)
    if target in ("fig5", "fig6"):
        name = "qpsk" if target == "fig5" else "8psk"
        specs = [SweepSpec(sch, name, FIG_SNRS, phase="random") for sch in ("cpa", "cr")]
        return sweep(specs, mc, workers=w)
    if target == "fig7":
        specs = [SweepSpec(sch, "qpsk", FIG_SNRS, p2_ratio=r, phase="random")
                 for r in FIG7_RATIOS for sch in ("cpa", "cr")]
        return sweep(specs, mc, workers=w)
    raise ValueError(f"unknown reproduce target {target!r}")


def _dual_alpha_rows(names, snrs, mc, workers) -> list[SweepRow]:
    """Two rows per point: the surrogate minimiser (objective filled) and the
    Monte-Carlo maximiser (capacity only), both with their capacities."""
    rows = []
    ch = ChannelSpec(sigma2=1.0)
    for name in names:
        s = by_name(name)
        for snr in snrs:
            P = 10.0 ** (snr / 10.0)
            a_star, obj = alpha_star(s, s, P, P, 1.0, workers=workers)
            est_star = cpa_sum_capacity(s, s, CpaConfig(P, P, a_star), ch, mc, workers=workers)
            rows.append(_row("cpa", s.label, snr, 1.0, alpha=a_star,
                             bits=est_star.bits, se=est_star.stderr, objective=obj))
            a_opt, est_opt = alpha_opt(s, s, P, P, 1.0, mc=mc, workers=workers)
            rows.append(_row("cpa", s.label, snr, 1.0, alpha=a_opt,
                             bits=est_opt.bits, se=est_opt.stderr))
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def _write_csv(path: Path, rows: list[SweepRow], samples: int, seed: int):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fields = [
                r.scheme,
                r.constellation,
                _fmt(float(r.snr_db)),
                _fmt(float(r.p2_ratio)),
                _fmt(r.alpha if r.alpha is None else float(r.alpha)),
                _fmt(r.theta_deg if r.theta_deg is None else float(r.theta_deg)),
                _fmt(r.capacity_bits if r.capacity_bits is None else float(r.capacity_bits)),
                _fmt(r.stderr_bits if r.stderr_bits is None else float(r.stderr_bits)),
                _fmt(r.objective if r.objective is None else float(r.objective)),
                str(samples),
                str(seed),
            ]
            fh.write(",".join(fields) + "\n")


def _manifest(args):
    # resolved science parameters only: the output path and worker count are
    # execution details and deliberately stay out, so manifests from runs that
    # only differ in those are byte-identical
    resolved = {
        "command": args.command,
        "target": getattr(args, "target", None),
        "scheme": getattr(args, "scheme", None),
        "constellation": args.constellation,
        "constellation_file": args.constellation_file,
        "normalize": not args.no_normalize,
        "snr_db": args.snr_db,
        "p2_ratio": args.p2_ratio,
        "sigma2": args.sigma2,
        "phase": args.phase,
        "theta1_deg": args.theta1,
        "theta2_deg": args.theta2,
        "alpha": args.alpha,
        "alpha_grid": args.alpha_grid,
        "theta_grid": args.theta_grid,
        "samples": args.samples,
        "phase_draws": args.phase_draws,
        "seed": args.seed,
        "version": __version__,
        "backend": kernels.backend_name(),
    }
    return json.dumps(resolved, indent=2, sort_keys=True) + "\n"


def _has_nan(rows) -> bool:
    for r in rows:
        for v in (r.capacity_bits, r.stderr_bits, r.objective, r.alpha, r.theta_deg):
            if v is not None and not math.isfinite(float(v)):
                return True
    return False


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:  # --help
        return int(e.code or 0)

    try:
        rows = args.func(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    if _has_nan(rows):
        print("numeric failure: NaN in computed results", file=sys.stderr)
        return 2

    default_out = args.default_out or f"{getattr(args, 'target', 'out')}.csv"
    out_path = Path(args.out) if args.out else Path(default_out)
    _write_csv(out_path, rows, args.samples, args.seed)
    manifest_path = out_path.with_name(out_path.name + ".manifest.json")
    manifest_path.write_text(_manifest(args), encoding="utf-8")
    print(f"wrote {out_path} and {manifest_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
