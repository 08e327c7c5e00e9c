"""Command line entry point: ``nlks {simulate,sweep,properties,attractor}``.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure
(blow-up, mean drift, or a failed run inside a sweep), 3 a property check
failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import io
from .analysis import alpha_sweep, attractor_distances, check_inequalities
from .dynamics import integrate
from .errors import ConfigurationError, NLKSError
from .spectral import DomainConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_PROPERTY = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for numerical failure here
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _threads(n_items):
    raw = os.environ.get("NLKS_THREADS")
    if raw is None:
        return max(1, n_items)
    try:
        n = int(raw)
    except ValueError:
        raise ConfigurationError(f"NLKS_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigurationError("NLKS_THREADS must be >= 1")
    return n


def build_parser():
    p = _Parser(prog="nlks", description="Nonlocal Kuramoto-Sivashinsky simulations.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp):
        sp.add_argument("--config", type=Path, help="JSON config file (defaults if omitted)")
        sp.add_argument("--out", type=Path, default=Path("nlks_out"), help="output directory")
        sp.add_argument("--seed", type=int, help="override the random seed")
        sp.add_argument(
            "--alpha", type=float, action="append",
            help="nonlocal coefficient; repeat to give a grid for sweep/attractor",
        )
        return sp

    s = common(sub.add_parser("simulate", help="integrate one trajectory"))
    s.add_argument("--t-end", type=float, help="override solver.t_end")
    s.add_argument(
        "--snapshots", action="store_true", help="write every recorded field as CSV"
    )
    common(sub.add_parser("sweep", help="difference runs over an alpha grid"))
    pr = common(sub.add_parser("properties", help="Hilbert identities and inequalities"))
    pr.add_argument("--count", type=int, help="override properties.count")
    common(sub.add_parser("attractor", help="attractor distances over an alpha grid"))
    return p


def _config(args):
    cfg = io.load_config(args.config)
    if args.seed is not None:
        cfg.initial.seed = args.seed
    if args.alpha:
        if args.command == "simulate":
            if len(args.alpha) > 1:
                raise ConfigurationError("simulate takes a single --alpha")
            cfg.solver.alpha = args.alpha[0]
        elif args.command == "sweep":
            cfg.sweep.alphas = list(args.alpha)
        elif args.command == "attractor":
            cfg.attractor.alphas = list(args.alpha)
        else:
            raise ConfigurationError("properties does not take --alpha")
    if getattr(args, "t_end", None) is not None:
        cfg.solver.t_end = args.t_end
    if getattr(args, "count", None) is not None:
        cfg.properties.count = args.count
    cfg.validate()
    return cfg


def _write_meta(path, cfg, command, **extra):
    record = {"command": command, "config": cfg.to_dict(), **extra}
    io.write_report(record, path)


def cmd_simulate(cfg, out: Path, args):
    params = cfg.solver_params()
    u0 = cfg.initial_field()
    snap_dir = out / "snapshots"
    if args.snapshots:
        snap_dir.mkdir(exist_ok=True)

    def observer(t, u):
        if args.snapshots:
            io.write_snapshot(snap_dir / f"u_{round(t / params.dt):08d}.csv", t, u, params.alpha)

    final = {}

    def keep_last(t, u):
        observer(t, u)
        final["t"], final["u"] = t, u

    series = integrate(u0, params, keep_last)
    io.write_norms(series, out / "norms.csv")
    io.write_snapshot(out / "final.csv", final["t"], final["u"], params.alpha)
    _write_meta(out / "norms.meta.json", cfg, "simulate", n_rows=len(series))
    print(
        f"simulate: alpha={params.alpha:g} t_end={series.times[-1]:g} "
        f"sup l2={series.sup('l2'):.6g} final l2={series.l2[-1]:.6g}"
    )
    return EXIT_OK


def cmd_sweep(cfg, out: Path, args):
    sw = cfg.sweep
    params = cfg.solver_params().replace(t_end=sw.t_end, snapshot_every=sw.snapshot_every)
    report = alpha_sweep(
        cfg.initial_field(), sw.alphas, params, sw.t_max_check, _threads(len(sw.alphas))
    )
    record = io.convergence_to_dict(report)
    record["config"] = cfg.to_dict()
    io.write_report(record, out / "sweep.json")
    for a, s, c in zip(report.alphas, report.sup_w, report.bound_checks):
        print(f"alpha={a:g} sup||w||={s:.6g} bound {'ok' if c.passed else 'VIOLATED'}")
    for a, msg in report.failed.items():
        print(f"alpha={a:g} FAILED: {msg}")
    if report.slope is not None:
        print(f"slope={report.slope:.4f}")
    return EXIT_NUMERICAL if report.failed else EXIT_OK


def cmd_properties(cfg, out: Path, args):
    seed = cfg.initial.seed
    domain = DomainConfig(cfg.domain.half_length, cfg.properties.grid_size)
    report = check_inequalities(seed, cfg.properties.count, domain)
    record = io.properties_to_dict(report)
    record["seed"] = seed
    io.write_report(record, out / "properties.json")
    for c in report.checks:
        print(f"{c.name}: worst={c.worst:.3e} violations={c.violations} "
              f"{'PASS' if c.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_PROPERTY


def cmd_attractor(cfg, out: Path, args):
    at = cfg.attractor
    params = cfg.solver_params().replace(snapshot_every=at.snapshot_every)
    report = attractor_distances(
        cfg.initial_field(), at.alphas, params, at.t_transient, at.t_sample,
        at.stride, at.use_fields, _threads(len(at.alphas) + 1),
    )
    record = io.attractor_to_dict(report)
    record["config"] = cfg.to_dict()
    io.write_report(record, out / "attractor.json")
    for a, d in zip(report.alphas, report.distances):
        print(f"alpha={a:g} dist(A_alpha, A_0)={d:.6g}")
    for a, msg in report.failed.items():
        print(f"alpha={a:g} FAILED: {msg}")
    return EXIT_NUMERICAL if report.failed else EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "properties": cmd_properties,
    "attractor": cmd_attractor,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config(args)
        args.out.mkdir(parents=True, exist_ok=True)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ConfigurationError, TypeError, ValueError, OSError) as exc:
        print(f"nlks: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](cfg, args.out, args)
    except ConfigurationError as exc:
        print(f"nlks: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NLKSError as exc:
        print(f"nlks: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
