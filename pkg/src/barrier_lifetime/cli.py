"""Command line entry point: ``barrier-lifetime {lifetime,sweep,oracle,validate}``.

Exit codes: 0 success, 1 numerical failure or failed check, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict

from .errors import LifetimeError
from .moments import derived_times, lifetime
from .quadcore import FDConfig, QuadratureConfig
from .regularized import AlphaSchedule, alpha_path
from .spectral import PotentialSpec
from .sweep import RunManifest, run_sweep, sweep_grid, to_csv, to_json, to_svg
from .timedomain import TimeGrid, moments_time_domain

DEN_TOL = 1e-3
NUM_TOL = 1e-2


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}") from exc


def _common(p: argparse.ArgumentParser, need_v0: bool = False) -> None:
    p.add_argument("--a", type=float, default=1.0, help="well width (default 1)")
    if need_v0:
        p.add_argument("--v0", type=float, required=True, help="well depth, <= 0")
    p.add_argument("--kmax", type=float, default=40 * math.pi, help="truncation of k*a (default 40 pi)")
    p.add_argument("--rel-tol", type=float, default=1e-9, help="relative quadrature tolerance")
    p.add_argument("--fd-h0", type=float, default=1e-3, help="initial mixed-derivative step")
    p.add_argument("--out", help="write the report to this path instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="json", help="report format (json; csv for sweep)")
    p.add_argument("--threads", type=int, default=1, help="worker processes for independent points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="barrier-lifetime", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lifetime", help="lifetime moments at one well depth")
    _common(p, need_v0=True)

    p = sub.add_parser("sweep", help="tau_bar against mean energy over a range of v0*a^2")
    _common(p)
    p.add_argument("--v0a2-min", type=float, default=-12.0, help="deepest well (default -12)")
    p.add_argument("--v0a2-max", type=float, default=0.0, help="shallowest well (default 0)")
    p.add_argument("--step", type=float, default=0.25, help="grid spacing in v0*a^2 (default 0.25)")
    p.add_argument("--svg", help="also write an SVG chart here")
    p.set_defaults(format="csv")

    p = sub.add_parser("oracle", help="compare with brute-force time-domain moments")
    _common(p, need_v0=True)
    p.add_argument("--tmax", type=float, default=50.0, help="time cutoff in units of t0 (default 50)")
    p.add_argument("--nt", type=int, default=4096, help="number of time samples")
    p.add_argument("--oracle-kmax", type=float, default=30.0, help="k*a cap of the oracle's mode sum")
    p.add_argument("--tolerance", type=float, default=0.02, help="allowed relative disagreement (default 0.02)")
    p.epilog = "The comparison table goes to stdout; --out receives a JSON report."

    p = sub.add_parser("validate", help="check against the convergence-factor route")
    _common(p)
    p.add_argument("--v0a2-list", type=_floats, default=[0.0, -2.0, -4.0, -8.0, -16.0],
                   help="comma-separated depths v0*a^2")
    p.add_argument("--alphas", type=_floats, default=None, help="damping rates in units of 1/t0")
    p.add_argument("--no-extend", action="store_true", help="use the listed rates only")
    p.epilog = "A PASS/FAIL table goes to stdout; --out receives a JSON report with every damped value."
    return parser


def _configs(args) -> tuple[QuadratureConfig, FDConfig]:
    try:
        return QuadratureConfig(k_max=args.kmax, rel_tol=args.rel_tol), FDConfig(h0=args.fd_h0)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _spec(args) -> PotentialSpec:
    try:
        return PotentialSpec(a=args.a, v0=args.v0)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_lifetime(args) -> int:
    spec = _spec(args)
    cfg, fd = _configs(args)
    res = lifetime(spec, cfg, fd)
    d = res.to_dict()
    if args.format == "json":
        _emit(json.dumps(d, indent=2), args.out)
    else:
        keys = [k for k in d if k != "spec"]
        _emit(",".join(keys) + "\n" + ",".join(repr(d[k]) for k in keys), args.out)
    return 0


def cmd_sweep(args) -> int:
    cfg, fd = _configs(args)
    try:
        values = sweep_grid(args.v0a2_min, args.v0a2_max, args.step)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.v0a2_max > 0 or args.a <= 0:
        raise UsageError("need v0a2 <= 0 and a > 0")
    rows = run_sweep(values, args.a, cfg, fd, workers=args.threads)
    manifest = RunManifest(a=args.a, v0a2_values=values, quadrature=asdict(cfg), fd=asdict(fd))
    _emit(to_csv(rows) if args.format == "csv" else to_json(rows, manifest), args.out)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(to_svg(rows))
    return 0 if all(r.status == "ok" for r in rows) else 1


def cmd_oracle(args) -> int:
    spec = _spec(args)
    cfg, fd = _configs(args)
    if args.tmax <= 0 or args.nt < 2 or args.nt % 2:
        raise UsageError("need --tmax > 0 and an even --nt >= 2")
    grid = TimeGrid.build(spec, t_max=args.tmax, n_t=args.nt, kappa_max=min(args.oracle_kmax, args.kmax))
    tm = moments_time_domain(spec, grid)
    res = lifetime(spec, cfg, fd)
    _, _, tau = derived_times(tm.num, tm.den, spec.t0)
    table = [
        ("numerator", res.numerator, tm.num),
        ("denominator", res.denominator, tm.den),
        ("tau_bar", res.tau_bar, tau),
    ]
    ok = True
    lines = [f"{'quantity':<12} {'moment':>16} {'time-domain':>16} {'rel.diff':>10}"]
    report = {"v0a2": spec.v0a2, "tail_bound": tm.tail_bound, "t_max": grid.t_max, "rows": {}}
    for name, m, o in table:
        rel = o / m - 1.0
        ok &= abs(rel) <= args.tolerance
        lines.append(f"{name:<12} {m:>16.10g} {o:>16.10g} {100 * rel:>9.4f}%")
        report["rows"][name] = {"moment": m, "time_domain": o, "rel_diff": rel}
    lines.append(f"tail bound {100 * tm.tail_bound:.4f}% at t_max = {grid.t_max:g} t0")
    report["pass"] = bool(ok)
    print("\n".join(lines))
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2)
    return 0 if ok else 1


def cmd_validate(args) -> int:
    cfg, fd = _configs(args)
    try:
        kw = {} if args.alphas is None else {"alphas": tuple(args.alphas)}
        schedule = AlphaSchedule(extend=not args.no_extend, **kw)
        specs = [PotentialSpec.from_v0a2(v, args.a) for v in args.v0a2_list]
    except ValueError as exc:
        raise UsageError(f"configuration error: {exc}") from exc
    results = []
    ok = True
    print(f"{'v0a2':>7} {'den rel.diff':>13} {'num rel.diff':>13}  status")
    for spec in specs:
        res = lifetime(spec, cfg, fd)
        path = alpha_path(spec, schedule, cfg)
        dd = res.denominator / path.den.limit - 1.0
        dn = res.numerator / path.num.limit - 1.0
        passed = abs(dd) < DEN_TOL and abs(dn) < NUM_TOL
        ok &= passed
        print(f"{spec.v0a2:>7g} {dd:>13.3e} {dn:>13.3e}  {'PASS' if passed else 'FAIL'}")
        results.append({
            "v0a2": spec.v0a2,
            "denominator": res.denominator,
            "numerator": res.numerator,
            "den_alpha": asdict(path.den),
            "num_alpha": asdict(path.num),
            "den_rel_diff": dd,
            "num_rel_diff": dn,
            "pass": passed,
        })
    report = {"schedule": asdict(schedule), "thresholds": {"den": DEN_TOL, "num": NUM_TOL}, "points": results, "pass": ok}
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2)
    return 0 if ok else 1


COMMANDS = {"lifetime": cmd_lifetime, "sweep": cmd_sweep, "oracle": cmd_oracle, "validate": cmd_validate}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except LifetimeError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
