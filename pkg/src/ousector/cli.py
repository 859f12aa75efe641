"""Command-line front end.

Exit codes: 0 pass, 1 usage or configuration error, 2 verification failure.
Reports go to ``--output`` (default ``$OUSECTOR_OUTPUT_DIR/<command>.<format>``,
falling back to the working directory).
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _backend, checks, defaults
from .domination import check_domination, sample_E_eps_delta, sup_integral_bound
from .errors import OUSectorError
from .grid import GridSpec
from .operator_norms import blowup_scan, contraction_check
from .sector_geometry import DomainSpec, compute_params, domain_map_raster, verify_sector_containment

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2
OUTPUT_ENV = "OUSECTOR_OUTPUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_complex(text: str) -> complex:
    """Parse ``re+imi`` literals such as ``1+0i``, ``0.5-0.3i``, ``2``, ``0.3i``."""
    t = text.strip().replace(" ", "")
    if t.endswith("i"):
        t = t[:-1] + "j"
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}") from None


def parse_complex_list(text: str):
    return [parse_complex(t) for t in text.split(",") if t]


def parse_float_list(text: str):
    try:
        return [float(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def parse_window(text: str):
    vals = parse_float_list(text)
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("window needs four numbers re_min,re_max,im_min,im_max")
    return tuple(vals)


def parse_resolution(text: str):
    vals = [int(v) for v in text.split(",")]
    if len(vals) == 1:
        vals = vals * 2
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("resolution is N or NX,NY")
    return tuple(vals)


def parse_pairs(text: str):
    out = []
    for chunk in text.split(";"):
        t, s = parse_float_list(chunk)
        out.append((t, s))
    return out


@dataclass
class RunConfig:
    command: str
    p: float | None = None
    d: int = 1
    z: list = field(default_factory=list)
    grid: GridSpec | None = None
    domain: DomainSpec | None = None
    tolerances: dict = field(default_factory=dict)
    seed: int = defaults.SEED
    output: Path | None = None
    format: str = "json"
    extra: dict = field(default_factory=dict)

    @property
    def params(self):
        return compute_params(self.p, self.d)


def _tolerances(entries, primary: str):
    tol = dict(defaults.TOLERANCES)
    for entry in entries or []:
        if "=" in entry:
            name, value = entry.split("=", 1)
            if name not in tol:
                raise UsageError(f"unknown tolerance {name!r}; see --show-defaults")
        else:
            name, value = primary, entry
        try:
            tol[name] = float(value)
        except ValueError:
            raise UsageError(f"tolerance {name!r} must be a number, got {value!r}") from None
        if not tol[name] > 0:
            raise UsageError(f"tolerance {name!r} must be positive")
    return tol


def _to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return _to_jsonable(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def _output_path(cfg: RunConfig) -> Path:
    if cfg.output is not None:
        return cfg.output
    base = Path(os.environ.get(OUTPUT_ENV, "."))
    return base / f"{cfg.command}.{cfg.format}"


def _write_report(cfg: RunConfig, report: dict) -> Path:
    path = _output_path(cfg)
    path.parent.mkdir(parents=True, exist_ok=True)
    report = _to_jsonable(report)
    if cfg.format == "json":
        path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        return path
    rows = report.get("rows") or [{k: v for k, v in report.items() if not isinstance(v, (dict, list))}]
    keys = sorted({k for r in rows for k in r})
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=keys)
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return path


# --- commands -----------------------------------------------------------------

def cmd_verify_kernel_identity(cfg: RunConfig):
    rep = checks.kernel_identity_sweep(
        samples=cfg.extra["samples"], d=cfg.d, seed=cfg.seed, tol=cfg.tolerances["kernel_identity"]
    )
    if not rep["pass"]:
        w = rep["worst"]
        print(f"worst case: z={w['z']}, x={w['x']}, y={w['y']}, rel error {rep['max_rel_error']:.3e}",
              file=sys.stderr)
    return rep


def cmd_verify_semigroup(cfg: RunConfig):
    return checks.semigroup_check(
        cfg.params, pairs=cfg.extra["pairs"], max_degree=cfg.extra["max_degree"], spec=cfg.grid,
        tol=cfg.tolerances["semigroup"],
    )


def cmd_verify_spectral(cfg: RunConfig):
    return checks.spectral_check(
        cfg.params, zs=cfg.z or [1.0, 0.5 + 0.3j], max_degree=cfg.extra["max_degree"], spec=cfg.grid,
        tol=cfg.tolerances["spectral"],
    )


def cmd_domination(cfg: RunConfig):
    params = cfg.params
    spec = cfg.grid or GridSpec(defaults.DOMINATION_RADIUS, defaults.DOMINATION_STEP, cfg.d)
    zs = list(cfg.z)
    if cfg.extra.get("samples"):
        zs += list(sample_E_eps_delta(params, cfg.domain, cfg.extra["samples"], cfg.seed))
    if not zs:
        raise UsageError("give --z or --samples")
    tol = cfg.tolerances["domination"]
    rows = [check_domination(z, params, spec).to_dict() for z in zs]
    worst = min(r["min_margin"] for r in rows)
    return {"check": "domination", "p": params.p, "d": params.d, "rows": rows, "min_margin": worst,
            "tolerance": tol, "pass": bool(worst >= -tol)}


def cmd_domain_map(cfg: RunConfig):
    raster = domain_map_raster(cfg.params, cfg.domain, cfg.extra["window"], cfg.extra["resolution"])
    path = _output_path(cfg)
    path.parent.mkdir(parents=True, exist_ok=True)
    if cfg.format == "csv":
        raster.write_csv(path)
    else:
        out = raster.sidecar()
        out["labels"] = raster.labels.tolist()
        path.write_text(json.dumps(_to_jsonable(out), indent=2, sort_keys=True) + "\n")
    counts = {str(k): int(np.sum(raster.labels == k)) for k in (0, 1, 2)}
    return {"check": "domain_map", "counts": counts, "pass": True, "_written": True}


def cmd_norm_scan(cfg: RunConfig):
    params = cfg.params
    slack = cfg.tolerances["contraction"]
    rows = []
    for t in cfg.extra["t"]:
        est = contraction_check(t, params, cfg.grid, seed=cfg.seed)
        est.slack = slack
        row = est.to_dict()
        row["t"] = t
        rows.append(row)
    return {"check": "norm_scan", "p": params.p, "rows": rows,
            "max_upper": max(r["upper"] for r in rows), "tolerance": slack,
            "pass": all(r["certified"] for r in rows)}


def cmd_sup_bound(cfg: RunConfig):
    rep = sup_integral_bound(cfg.params, cfg.domain, cfg.extra["samples"], cfg.seed).to_dict()
    rep["check"] = "sup_bound"
    rep["pass"] = rep["all_hold"]
    return rep


def cmd_containment(cfg: RunConfig):
    spec, rep = verify_sector_containment(
        cfg.params, cfg.extra["eps_prime"], cfg.extra["samples"], cfg.extra["radius_cap"], cfg.seed
    )
    out = rep.to_dict()
    out["check"] = "containment"
    out["pass"] = rep.all_inside
    return out


def cmd_blowup_probe(cfg: RunConfig):
    rep = blowup_scan(
        cfg.params, math.radians(cfg.extra["target_deg"]), s_moduli=cfg.extra["moduli"],
        evidence_factor=cfg.tolerances["blowup_factor"],
    ).to_dict()
    rep["check"] = "blowup_probe"
    if rep["applicable"]:
        rep["pass"] = bool(all(m < 0 for m in rep["margins"]) and rep["contrast_bounded"])
    else:
        rep["pass"] = True
    return rep


COMMANDS = {
    "verify-kernel-identity": (cmd_verify_kernel_identity, "kernel_identity"),
    "verify-semigroup": (cmd_verify_semigroup, "semigroup"),
    "verify-spectral": (cmd_verify_spectral, "spectral"),
    "domination": (cmd_domination, "domination"),
    "domain-map": (cmd_domain_map, "domination"),
    "norm-scan": (cmd_norm_scan, "contraction"),
    "sup-bound": (cmd_sup_bound, "chain"),
    "containment": (cmd_containment, "chain"),
    "blowup-probe": (cmd_blowup_probe, "blowup_factor"),
}


# --- argument parsing ---------------------------------------------------------

def _common(sp, fmt="json"):
    sp.add_argument("-o", "--output", type=Path, help="report path")
    sp.add_argument("--format", choices=("json", "csv"), default=fmt)
    sp.add_argument("--seed", type=int, default=defaults.SEED)
    sp.add_argument("--tol", action="append", metavar="[NAME=]VALUE",
                    help="override a tolerance; a bare value sets the command's primary one")


def _with_p(sp, d=True, default=None):
    sp.add_argument("--p", type=float, required=default is None, default=default,
                    help="exponent 1 < p < inf")
    if d:
        sp.add_argument("--d", type=int, default=1)


def _with_grid(sp):
    sp.add_argument("--radius", type=float, help="grid half-width R")
    sp.add_argument("--step", type=float, help="grid spacing h")


def _with_domain(sp):
    sp.add_argument("--eps", type=float, default=defaults.DOMAIN_EPSILON)
    sp.add_argument("--delta", type=float, default=defaults.DOMAIN_DELTA)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ousector", description=__doc__.splitlines()[0])
    parser.add_argument("--show-defaults", action="store_true", help="print default tolerances and exit")
    parser.add_argument("--backend", action="store_true", help="print the active kernel backend and exit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("verify-kernel-identity", help="defining vs reparametrized Mehler kernel")
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--d", type=int, default=1)
    _common(sp)

    sp = sub.add_parser("verify-semigroup", help="T_t T_s = T_{t+s} on Hermite data")
    _with_p(sp, d=False, default=2.0)
    sp.add_argument("--pairs", type=parse_pairs, default=[(0.3, 0.7), (1.0, 1.0)], help="'t,s;t,s'")
    sp.add_argument("--max-degree", type=int, default=4)
    _with_grid(sp)
    _common(sp)

    sp = sub.add_parser("verify-spectral", help="quadrature semigroup vs Hermite multiplier")
    _with_p(sp, d=False, default=2.0)
    sp.add_argument("--z", type=parse_complex_list, help="comma list of complex times")
    sp.add_argument("--max-degree", type=int, default=8)
    _with_grid(sp)
    _common(sp)

    sp = sub.add_parser("domination", help="|k_z(x,y)| <= g_z(x-y) on a grid")
    _with_p(sp)
    sp.add_argument("--z", type=parse_complex_list, help="comma list of complex times in E")
    sp.add_argument("--samples", type=int, default=0, help="also sample this many z in E(eps, delta)")
    _with_domain(sp)
    _with_grid(sp)
    _common(sp)

    sp = sub.add_parser("domain-map", help="raster of E and E(eps, delta)")
    _with_p(sp)
    _with_domain(sp)
    sp.add_argument("--window", type=parse_window, required=True, help="re_min,re_max,im_min,im_max")
    sp.add_argument("--res", type=parse_resolution, default=(200, 200), help="N or NX,NY")
    _common(sp, fmt="csv")

    sp = sub.add_parser("norm-scan", help="discretized L^p(mu) norm of T_t")
    _with_p(sp)
    sp.add_argument("--t", type=parse_float_list, default=[0.1, 1.0, 10.0], help="comma list of times")
    _with_grid(sp)
    _common(sp)

    sp = sub.add_parser("sup-bound", help="uniform L^1 bound over E(eps, delta)")
    _with_p(sp)
    _with_domain(sp)
    sp.add_argument("--samples", type=int, default=defaults.SUP_BOUND_SAMPLES)
    _common(sp)

    sp = sub.add_parser("containment", help="sector inside E(eps, delta) for some eps, delta")
    _with_p(sp)
    sp.add_argument("--eps-prime", type=float, default=defaults.CONTAINMENT_EPS_PRIME)
    sp.add_argument("--samples", type=int, default=defaults.CONTAINMENT_SAMPLES)
    sp.add_argument("--radius", dest="radius_cap", type=float, default=defaults.CONTAINMENT_RADIUS,
                    help="truncate the sector at |z| <= radius")
    _common(sp)

    sp = sub.add_parser("blowup-probe", help="Gaussian trials beyond the critical angle")
    _with_p(sp)
    sp.add_argument("--target-deg", type=float, default=defaults.BLOWUP_TARGET_DEG)
    sp.add_argument("--moduli", type=parse_float_list, default=list(defaults.BLOWUP_MODULI))
    _common(sp)
    return parser


def _config(args) -> RunConfig:
    _, primary = COMMANDS[args.command]
    cfg = RunConfig(
        command=args.command,
        p=getattr(args, "p", None),
        d=getattr(args, "d", 1),
        z=list(getattr(args, "z", None) or []),
        tolerances=_tolerances(args.tol, primary),
        seed=args.seed,
        output=args.output,
        format=args.format,
    )
    if cfg.p is not None:
        cfg.params  # validates p and d
    radius, step = getattr(args, "radius", None), getattr(args, "step", None)
    if radius is not None or step is not None:
        base = GridSpec.default(cfg.d)
        cfg.grid = GridSpec(radius if radius is not None else base.radius,
                            step if step is not None else base.step, cfg.d)
    if hasattr(args, "eps"):
        cfg.domain = DomainSpec(args.eps, args.delta).validate(cfg.params)
    for key in ("samples", "pairs", "max_degree", "window", "t", "eps_prime", "radius_cap",
                "target_deg", "moduli"):
        if hasattr(args, key):
            cfg.extra[key] = getattr(args, key)
    if hasattr(args, "res"):
        cfg.extra["resolution"] = args.res
    if cfg.extra.get("samples") is not None and cfg.extra["samples"] < 0:
        raise UsageError("--samples must be non-negative")
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.show_defaults:
        for k, v in defaults.table().items():
            print(f"{k} = {v}")
        return EXIT_OK
    if args.backend:
        print(_backend.BACKEND)
        return EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        cfg = _config(args)
        fn, _ = COMMANDS[cfg.command]
        report = fn(cfg)
    except (UsageError, OUSectorError, ValueError) as exc:
        print(f"ousector {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not report.pop("_written", False):
        path = _write_report(cfg, report)
    else:
        path = _output_path(cfg)
    status = "PASS" if report["pass"] else "FAIL"
    print(f"{cfg.command}: {status} -> {path}")
    return EXIT_OK if report["pass"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
