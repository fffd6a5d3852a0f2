"""Command-line driver: every computation as a subcommand emitting CSV/JSON.

Usage:  jcm <subcommand> [--nbar R] [--mode exact|quadratic] [--cutoff N]
        [--tau EXPR] [--out DIR] [--config FILE] ...

Symbolic times like ``pi/8-pi/24000`` are parsed to exact rationals of pi
before any floating evaluation, because the special-time identities of the
quadratic model are destroyed by decimal rounding of tau.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import catlab, dynamics, observables
from .dynamics import ModelParams, RabiMode
from .errors import JcmError, ParseError

SCHEMA_VERSION = 1

_TERM_RE = re.compile(
    r"^(?:(?P<coef>\d+(?:\.\d+)?)\s*\*?\s*)?pi(?:\s*/\s*(?P<den>\d+(?:\.\d+)?))?$"
    r"|^(?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)$"
)


def parse_tau(expr: str) -> float:
    """Parse a symbolic time expression (sums of p*pi/q terms and reals).

    The pi-multiples are accumulated as an exact Fraction and multiplied by
    pi once at the end; plain numeric terms are summed separately.
    """
    text = expr.strip().lower().replace(" ", "")
    if not text:
        raise ParseError("empty tau expression")
    # split into signed terms
    pieces = re.findall(r"[+-]?[^+-]+", text)
    if "".join(pieces) != text:
        raise ParseError(f"malformed tau expression: {expr!r}")
    pi_part = Fraction(0)
    real_part = 0.0
    for piece in pieces:
        sign = -1 if piece.startswith("-") else 1
        body = piece.lstrip("+-")
        m = _TERM_RE.match(body)
        if not m:
            raise ParseError(f"malformed tau term: {piece!r} in {expr!r}")
        if m.group("num") is not None:
            real_part += sign * float(m.group("num"))
        else:
            coef = Fraction(m.group("coef") or "1")
            den = Fraction(m.group("den") or "1")
            pi_part += sign * coef / den
    return math.pi * pi_part.numerator / pi_part.denominator + real_part


def tau_label(expr: str) -> str:
    """Filesystem-safe label for a tau expression."""
    return (
        expr.strip().lower().replace(" ", "")
        .replace("/", "_").replace("+", "p").replace("-", "m")
        .replace("*", "").replace(".", "d")
    )


@dataclass(frozen=True)
class RunConfig:
    """Resolved run configuration (flags > config file > defaults)."""

    nbar: float = 50.0
    alpha_phase: float = 0.0
    k: int = 4
    cutoff: int = 256
    mode: str = "quadratic"
    output_dir: str = "."
    tail_tol: float = 1e-9

    def params(self) -> ModelParams:
        alpha = math.sqrt(self.nbar) * complex(
            math.cos(self.alpha_phase), math.sin(self.alpha_phase)
        )
        return ModelParams(
            k=self.k,
            alpha=alpha,
            cutoff=self.cutoff,
            mode=RabiMode(self.mode),
            tail_tol=self.tail_tol,
        )

    def outdir(self) -> Path:
        path = Path(self.output_dir)
        path.mkdir(parents=True, exist_ok=True)
        return path


def _fmt(x: float) -> str:
    """17 significant digits: round-trip exact for doubles."""
    return format(float(x), ".17g")


def _write_csv(path: Path, header: str, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path: Path, payload: dict) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        known = {k: v for k, v in data.items() if k in RunConfig.__dataclass_fields__}
        unknown = set(data) - set(known)
        if unknown:
            raise JcmError(f"unknown config keys: {sorted(unknown)}")
        cfg = replace(cfg, **known)
    overrides = {
        name: value
        for name, value in (
            ("nbar", args.nbar),
            ("alpha_phase", args.alpha_phase),
            ("k", args.k),
            ("cutoff", args.cutoff),
            ("mode", args.mode),
            ("output_dir", args.out),
            ("tail_tol", args.tail_tol),
        )
        if value is not None
    }
    return replace(cfg, **overrides)


def cmd_pnd(cfg: RunConfig, args) -> int:
    specs: list[str] = []
    for chunk in args.tau:
        specs.extend(s for s in chunk.split(",") if s)
    if not specs:
        raise ParseError("at least one --tau is required")
    params = cfg.params()
    outdir = cfg.outdir()
    for spec in specs:
        tau = parse_tau(spec)
        dist = observables.pnd(dynamics.evolve(params, tau))
        path = outdir / f"pnd_{tau_label(spec)}.csv"
        _write_csv(path, "n,p", ((n, p) for n, p in enumerate(dist.probabilities)))
        print(path)
    return 0


def cmd_entropy(cfg: RunConfig, args) -> int:
    params = cfg.params()
    outdir = cfg.outdir()
    if args.dip_window:
        delta1 = catlab.dip_offset(1, cfg.nbar).delta
        center, halfwidth = math.pi / 4.0, 6.0 * delta1
        steps = args.steps if args.steps is not None else 1201
        scan = catlab.entropy_dip_scan(params, center, halfwidth, steps)
        path = outdir / "entropy_dip.csv"
        _write_csv(path, "tau,entropy", zip(scan.taus, scan.entropies))
        sidecar = outdir / "entropy_dip.json"
        _write_json(sidecar, {
            "center": center,
            "halfwidth": halfwidth,
            "steps": steps,
            "delta1": delta1,
            "gridlines": {str(r): center + r * delta1 for r in (-5, -3, -1, 1, 3, 5)},
            "minima_tau": [float(scan.taus[i]) for i in scan.minima],
            "minima_entropy": [float(scan.entropies[i]) for i in scan.minima],
        })
        print(path)
        print(sidecar)
        return 0
    tau_min = parse_tau(args.tau_min) if args.tau_min else 0.0
    tau_max = parse_tau(args.tau_max) if args.tau_max else math.pi
    steps = args.steps if args.steps is not None else 801
    if steps < 2:
        raise JcmError("steps must be >= 2")
    taus = np.linspace(tau_min, tau_max, steps)
    values = [
        observables.entropy(dynamics.atom_density(dynamics.evolve(params, float(t))))
        for t in taus
    ]
    path = outdir / "entropy.csv"
    _write_csv(path, "tau,entropy", zip(taus, values))
    print(path)
    return 0


def _parse_window(spec: str | None) -> tuple[float, float, float, float]:
    if spec is None:
        return (-12.0, 12.0, -12.0, 12.0)
    parts = [float(p) for p in spec.split(",")]
    if len(parts) == 1:
        half = abs(parts[0])
        return (-half, half, -half, half)
    if len(parts) == 4:
        return (parts[0], parts[1], parts[2], parts[3])
    raise ParseError("window must be a half-width L or re_min,re_max,im_min,im_max")


def cmd_qfunc(cfg: RunConfig, args) -> int:
    params = cfg.params()
    outdir = cfg.outdir()
    tau = parse_tau(args.tau)
    window = _parse_window(args.window)
    res = args.resolution if args.resolution is not None else 241
    field = dynamics.field_rank2(dynamics.evolve(params, tau))
    grid = observables.q_grid(field, window, res, res)
    report = catlab.count_components(grid, args.threshold)
    label = tau_label(args.tau)
    path = outdir / f"qfunc_{label}.csv"
    rows = (
        (grid.res[i], grid.ims[j], grid.values[i, j])
        for i in range(grid.nx)
        for j in range(grid.ny)
    )
    _write_csv(path, "re,im,q", rows)
    sidecar = outdir / f"qfunc_{label}.json"
    _write_json(sidecar, {
        "tau": tau,
        "window": list(window),
        "nx": grid.nx,
        "ny": grid.ny,
        "riemann_sum": grid.riemann_sum(),
        "threshold_fraction": report.threshold_fraction,
        "component_count": report.count,
        "component_masses": list(report.component_masses),
    })
    print(path)
    print(sidecar)
    return 0


def cmd_inversion(cfg: RunConfig, args) -> int:
    params = cfg.params()
    outdir = cfg.outdir()
    tau_min = parse_tau(args.tau_min) if args.tau_min else 0.0
    tau_max = parse_tau(args.tau_max) if args.tau_max else math.pi
    steps = args.steps if args.steps is not None else 2001
    if steps < 2:
        raise JcmError("steps must be >= 2")
    taus = np.linspace(tau_min, tau_max, steps)
    values = [observables.atomic_inversion(params, float(t)) for t in taus]
    path = outdir / "inversion.csv"
    _write_csv(path, "tau,w", zip(taus, values))
    print(path)
    return 0


def cmd_catcheck(cfg: RunConfig, args) -> int:
    params = cfg.params()
    outdir = cfg.outdir()
    offset = catlab.dip_offset(args.r, cfg.nbar)
    tau_dip = math.pi / 4.0 + offset.delta

    kerr_f = catlab.kerr_fidelity_at_half_period(params)
    match = catlab.cat_match(params, offset)

    rho_quarter = dynamics.atom_density(dynamics.evolve(params, math.pi / 4.0))
    rho_dip = dynamics.atom_density(dynamics.evolve(params, tau_dip))
    phase = cfg.alpha_phase
    rho12_target = -0.5 * complex(math.cos(4 * phase), math.sin(4 * phase))

    payload = {
        "nbar": cfg.nbar,
        "r": offset.r,
        "delta": offset.delta,
        "tau_dip": tau_dip,
        "kerr_fidelity_half_period": kerr_f,
        "cat_fidelity": match["fidelity"],
        "cat_nominal_fidelity": match["nominal_fidelity"],
        "cat_pre_norm": match["pre_norm"],
        "entropy_quarter": observables.entropy(rho_quarter),
        "entropy_dip": observables.entropy(rho_dip),
        "rho11_dip": rho_dip.rho11,
        "rho12_dip": [rho_dip.rho12.real, rho_dip.rho12.imag],
        "rho12_target_deviation": abs(rho_dip.rho12 - rho12_target),
    }
    path = outdir / f"catcheck_r{args.r}.json"
    _write_json(path, payload)
    print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jcm",
        description="Four-photon Jaynes-Cummings model: figure data as CSV/JSON.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--nbar", type=float, help="mean photon number (default 50)")
        p.add_argument("--alpha-phase", type=float, dest="alpha_phase",
                       help="phase of the coherent amplitude in radians (default 0)")
        p.add_argument("--k", type=int, help="photon multiplicity (default 4)")
        p.add_argument("--cutoff", type=int, help="Fock truncation (default 256)")
        p.add_argument("--mode", choices=["exact", "quadratic"],
                       help="Rabi-frequency mode (default quadratic)")
        p.add_argument("--tail-tol", type=float, dest="tail_tol",
                       help="max truncated probability mass (default 1e-9)")
        p.add_argument("--out", help="output directory (default .)")
        p.add_argument("--config", help="JSON config file (flags take precedence)")

    p = sub.add_parser("pnd", help="photon number distribution at given times")
    add_common(p)
    p.add_argument("--tau", action="append", required=True,
                   help="symbolic time, e.g. pi/8-pi/24000 (repeatable, comma-separable)")
    p.set_defaults(run=cmd_pnd)

    p = sub.add_parser("entropy", help="field entropy over a time range")
    add_common(p)
    p.add_argument("--tau-min", dest="tau_min", help="range start (default 0)")
    p.add_argument("--tau-max", dest="tau_max", help="range end (default pi)")
    p.add_argument("--steps", type=int, help="number of samples")
    p.add_argument("--dip-window", action="store_true", dest="dip_window",
                   help="scan pi/4 +/- 6*delta_1 with r-gridline JSON sidecar")
    p.set_defaults(run=cmd_entropy)

    p = sub.add_parser("qfunc", help="Husimi Q-function grid plus component count")
    add_common(p)
    p.add_argument("--tau", required=True, help="symbolic time")
    p.add_argument("--window", help="half-width L or re_min,re_max,im_min,im_max "
                                    "(default 12)")
    p.add_argument("--resolution", type=int, help="grid points per axis (default 241)")
    p.add_argument("--threshold", type=float, default=0.1,
                   help="component threshold as fraction of peak (default 0.1)")
    p.set_defaults(run=cmd_qfunc)

    p = sub.add_parser("inversion", help="atomic population inversion over time")
    add_common(p)
    p.add_argument("--tau-min", dest="tau_min", help="range start (default 0)")
    p.add_argument("--tau-max", dest="tau_max", help="range end (default pi)")
    p.add_argument("--steps", type=int, help="number of samples")
    p.set_defaults(run=cmd_inversion)

    p = sub.add_parser("catcheck", help="Kerr/cat fidelity and coherence dossier")
    add_common(p)
    p.add_argument("--r", type=int, default=1, help="odd dip index (default 1)")
    p.set_defaults(run=cmd_catcheck)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        return args.run(cfg, args)
    except (JcmError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
