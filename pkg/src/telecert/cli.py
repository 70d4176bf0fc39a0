"""Command-line front end.

Subcommands: run, sweep, average, certify, enumerate, thresholds. Angles are
radians. Flags override config-file entries (--config, KEY=VALUE lines, same
keys as the long flags), which override the TELECERT_SEED environment
variable for the seed. Output is deterministic for a fixed (config, seed):
no timestamps, canonical JSON key order, full-precision floats.

Exit codes: 0 success, 2 configuration error, 3 register capacity exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .certify import (
    Adversary,
    AdversaryModel,
    Criterion,
    ThresholdSource,
    decide,
    self_threshold,
    threshold_table,
)
from .fidelity import exact_report, monte_carlo_threshold, theta_average, theta_sweep
from .protocols import InputFamily, ProtocolId, ProtocolParams, run_exact
from .statevec import CapacityError

SEED_ENV = "TELECERT_SEED"

F_TH_DEFINITION = "sum over announcements of probability-weighted target overlap"


def _read_config(path: str) -> dict[str, str]:
    cfg = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected KEY=VALUE, got {line!r}")
            key, _, value = line.partition("=")
            cfg[key.strip().lower().replace("-", "_")] = value.strip()
    return cfg


_CONFIG_TYPES = {
    "m": int, "points": int, "shots": int, "seed": int, "threads": int,
    "theta": float, "phi": float, "theta_start": float, "theta_stop": float,
    "observed": float,
    "self_evaluate": lambda s: s.strip().lower() in ("1", "true", "yes"),
}
_CONFIG_ALIASES = {"self": "self_evaluate"}


def _explicit_flags(argv: list[str]) -> set[str]:
    out = set()
    for tok in argv:
        if tok.startswith("--"):
            name = tok[2:].split("=", 1)[0].replace("-", "_")
            out.add(_CONFIG_ALIASES.get(name, name))
    return out


def _merge_config(args: argparse.Namespace, argv: list[str]) -> argparse.Namespace:
    """Fill flags not given on the command line from the config file, then env."""
    explicit = _explicit_flags(argv)
    if getattr(args, "config", None):
        for key, value in _read_config(args.config).items():
            dest = _CONFIG_ALIASES.get(key, key)
            if dest in explicit or not hasattr(args, dest):
                continue
            setattr(args, dest, _CONFIG_TYPES.get(dest, str)(value))
    if getattr(args, "seed", None) is None and os.environ.get(SEED_ENV):
        args.seed = int(os.environ[SEED_ENV])
    return args


def _params_from(args) -> ProtocolParams:
    return ProtocolParams(m=args.m, family=InputFamily.parse(args.family),
                          theta=args.theta, phi=args.phi)


def _branch_row(bf) -> dict:
    return {
        "a": bf.announcement.a,
        "b": bf.announcement.b,
        "probability": bf.probability,
        "fidelity": bf.fidelity,
    }


def _report_payload(report) -> dict:
    payload = {
        "protocol": report.protocol.value,
        "m": report.params.m,
        "family": report.params.family.value,
        "theta": report.params.theta,
        "phi": report.params.phi,
        "mode": report.mode,
        "f_th": report.f_th,
        "f_th_definition": F_TH_DEFINITION,
        "per_branch": [_branch_row(bf) for bf in report.per_branch],
    }
    if report.mode == "monte_carlo":
        payload.update(shots=report.shots, stderr=report.stderr, seed=report.seed)
    return payload


def _emit(payload, fmt: str, csv_rows=None, csv_fields=None) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return
    if fmt == "csv":
        if csv_rows is None:
            raise ValueError("csv format is not available for this command")
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=csv_fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(csv_rows)
        sys.stdout.write(buf.getvalue())
        return
    if fmt == "table":
        _emit_table(payload)
        return
    raise ValueError(f"unknown format {fmt!r}")


def _emit_table(payload, indent: str = "") -> None:
    if isinstance(payload, dict):
        for key, value in payload.items():
            if isinstance(value, (dict, list)):
                sys.stdout.write(f"{indent}{key}:\n")
                _emit_table(value, indent + "  ")
            else:
                sys.stdout.write(f"{indent}{key} = {value!r}\n")
    elif isinstance(payload, list):
        for item in payload:
            _emit_table(item, indent + "  ")
            sys.stdout.write(f"{indent}--\n")
    else:
        sys.stdout.write(f"{indent}{payload!r}\n")


def cmd_run(args) -> int:
    params = _params_from(args)
    protocol = ProtocolId.parse(args.protocol)
    if args.mode == "exact":
        report = exact_report(protocol, params)
    else:
        if args.seed is None:
            raise ValueError("monte_carlo mode requires a seed (flag, config, or env)")
        report = monte_carlo_threshold(protocol, params, args.shots, args.seed,
                                       threads=args.threads)
    _emit(_report_payload(report), args.format,
          csv_rows=[_branch_row(bf) for bf in report.per_branch],
          csv_fields=["a", "b", "probability", "fidelity"])
    return 0


def cmd_sweep(args) -> int:
    protocol = ProtocolId.parse(args.protocol)
    grid = np.linspace(args.theta_start, args.theta_stop, args.points)
    points = theta_sweep(protocol, args.m, grid)
    payload = {
        "protocol": protocol.value,
        "m": args.m,
        "family": "ghz",
        "f_th_definition": F_TH_DEFINITION,
        "points": [{"theta": t, "f_th": f} for t, f in points],
    }
    _emit(payload, args.format, csv_rows=[{"theta": t, "f_th": f} for t, f in points],
          csv_fields=["theta", "f_th"])
    return 0


def cmd_average(args) -> int:
    protocol = ProtocolId.parse(args.protocol)
    value = theta_average(protocol, args.m, args.quadrature)
    payload = {
        "protocol": protocol.value,
        "m": args.m,
        "family": "ghz",
        "criterion": "theta_average",
        "quadrature": args.quadrature,
        "theta_average": value,
        "definition": "average of f_th(theta) for theta uniform on [0, pi)",
    }
    _emit(payload, args.format)
    return 0


def cmd_certify(args) -> int:
    adversary = Adversary.parse(args.model)
    criterion = Criterion.parse(args.criterion)
    family = InputFamily.parse(args.family)
    if args.self_evaluate:
        # Self-evaluation feeds the adversary's own computed optimum back in,
        # always against the computed threshold: the cheater cannot strictly
        # exceed their own optimum, so the verdict is deny.
        observed = self_threshold(adversary, criterion, args.m)
        source = ThresholdSource.COMPUTED
    else:
        if args.observed is None:
            raise ValueError("provide --observed or --self")
        observed = args.observed
        source = ThresholdSource(args.threshold_source)
    decision = decide(observed, AdversaryModel(adversary, source), m=args.m,
                      family=family, criterion=criterion)
    payload = {
        "model": adversary.value,
        "certificate": decision.certificate,
        "criterion": decision.criterion,
        "observed": decision.observed,
        "threshold": decision.threshold,
        "threshold_source": source.value,
        "comparison": decision.comparison,
        "verdict": decision.verdict,
        "provenance": decision.provenance,
        "self_evaluation": bool(args.self_evaluate),
    }
    _emit(payload, args.format)
    return 0


def cmd_enumerate(args) -> int:
    params = _params_from(args)
    protocol = ProtocolId.parse(args.protocol)
    branches = run_exact(protocol, params)
    rows = []
    for br in branches:
        rows.append({
            "a": br.announcement.a,
            "b": br.announcement.b,
            "probability": br.probability,
            "output_trace": None if br.output is None else br.output.trace,
            "subnormalized_trace": br.probability,
        })
    payload = {
        "protocol": protocol.value,
        "m": params.m,
        "family": params.family.value,
        "theta": params.theta,
        "phi": params.phi,
        "branches": rows,
    }
    _emit(payload, args.format, csv_rows=rows,
          csv_fields=["a", "b", "probability", "output_trace", "subnormalized_trace"])
    return 0


def cmd_thresholds(args) -> int:
    rows = threshold_table(args.m, InputFamily.parse(args.family))
    payload = {"m": args.m, "family": args.family, "thresholds": rows}
    _emit(payload, args.format, csv_rows=rows,
          csv_fields=["model", "certificate", "criterion", "source", "threshold", "provenance"])
    return 0


def _add_common(sub, protocol=True, angles=True):
    sub.add_argument("--config", help="config file with KEY=VALUE lines (flags override)")
    sub.add_argument("--format", default="json", choices=["json", "csv", "table"])
    sub.add_argument("--m", type=int, default=1, help="teleported-share register size")
    if protocol:
        sub.add_argument("--protocol", default="p0", help="p0 | pa1 | pa2 | pb | pab")
    if angles:
        sub.add_argument("--family", default="bloch", help="trivial | ghz | bloch")
        sub.add_argument("--theta", type=float, default=0.0, help="polar angle, radians")
        sub.add_argument("--phi", type=float, default=0.0, help="azimuthal angle, radians")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="telecert",
                                     description="Adversarial teleportation simulator and certifier")
    parser.add_argument("--version", action="version", version=f"telecert {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p_run = subs.add_parser("run", help="run one protocol and report f_th")
    _add_common(p_run)
    p_run.add_argument("--mode", default="exact", choices=["exact", "monte_carlo"])
    p_run.add_argument("--shots", type=int, default=100000)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--threads", type=int, default=1)
    p_run.set_defaults(func=cmd_run)

    p_sweep = subs.add_parser("sweep", help="exact f_th over a theta grid (ghz family)")
    _add_common(p_sweep, angles=False)
    p_sweep.add_argument("--theta-start", type=float, default=0.0)
    p_sweep.add_argument("--theta-stop", type=float, default=3.141592653589793)
    p_sweep.add_argument("--points", type=int, default=21)
    p_sweep.set_defaults(func=cmd_sweep)

    p_avg = subs.add_parser("average", help="theta-averaged f_th (ghz family)")
    _add_common(p_avg, angles=False)
    p_avg.add_argument("--quadrature", default="gauss:64", help="gauss:<n> or grid:<n>")
    p_avg.set_defaults(func=cmd_average)

    p_cert = subs.add_parser("certify", help="issue or deny a certificate")
    _add_common(p_cert, protocol=False)
    p_cert.add_argument("--model", required=True,
                        help="honest | cheating_a | cheating_b | cheating_ab")
    p_cert.add_argument("--criterion", default="pointwise",
                        help="pointwise | theta_average | bloch_postselected")
    p_cert.add_argument("--observed", type=float, default=None)
    p_cert.add_argument("--threshold-source", default="tabulated",
                        choices=["tabulated", "computed"])
    p_cert.add_argument("--self", dest="self_evaluate", action="store_true",
                        help="evaluate the model's own protocol optimum")
    p_cert.set_defaults(func=cmd_certify)

    p_enum = subs.add_parser("enumerate", help="dump the exact branch set")
    _add_common(p_enum)
    p_enum.set_defaults(func=cmd_enumerate)

    p_thr = subs.add_parser("thresholds", help="dump the certification threshold table")
    _add_common(p_thr, protocol=False, angles=False)
    p_thr.add_argument("--family", default="bloch", help="trivial | ghz | bloch")
    p_thr.set_defaults(func=cmd_thresholds)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(argv)
        args = _merge_config(args, argv)
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
