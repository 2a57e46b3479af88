"""Command-line front end.

Exit codes: 0 success / no violations, 1 numerical discrepancy, 2 configuration
or validation error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import channels, measures, monolab, states
from .errors import QcorrError

EXIT_OK, EXIT_DISCREPANCY, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3
SCALING_TOL = 1e-10
BELL_TOL = 1e-12


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def fmt(x: float) -> str:
    return f"{x:.12g}"


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}", EXIT_CONFIG) from exc


def _write_json(path: str, data) -> None:
    try:
        with open(path, "w") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from exc


def load_state(path: str) -> states.BipartiteState:
    try:
        return states.state_from_dict(_read_json(path))
    except QcorrError as exc:
        raise CliError(f"invalid state in {path}: {exc}", EXIT_CONFIG) from exc


def detect_bell_diagonal(state: states.BipartiteState, tol: float = BELL_TOL) -> states.BellDiagonalCoeffs | None:
    """Return the coefficients if the state is Bell-diagonal, else None."""
    if state.dims != (2, 2):
        return None
    P = states.linalg.PAULIS
    corr = np.einsum("mab,ncd,bdac->mn", P, P, np.asarray(state.rho).reshape(2, 2, 2, 2)).real
    # corr[m, n] = Tr(rho sigma_m (x) sigma_n) with sigma_0 = I.
    off = corr.copy()
    off[0, 0] = 0.0
    off[1, 1] = off[2, 2] = off[3, 3] = 0.0
    if np.max(np.abs(off)) > tol:
        return None
    c = states.BellDiagonalCoeffs(*np.diag(corr)[1:])
    return c if c.is_valid() else None


def cmd_compute(args) -> int:
    state = load_state(args.state)
    res = measures.guo_D(state, fast=args.fast)
    out = {"D_A": res.value, "pair_count": res.pair_count, "dims": list(state.dims)}
    print(f"D_A (computational basis) = {fmt(res.value)}")
    print(f"pairs |Omega| = {res.pair_count}")
    c = detect_bell_diagonal(state)
    if c is not None:
        closed = measures.bell_diagonal_D(c)
        out["bell_diagonal"] = {"c": [c.c1, c.c2, c.c3], "D_A_closed_form": closed}
        print(f"Bell-diagonal c = ({fmt(c.c1)}, {fmt(c.c2)}, {fmt(c.c3)}); closed form D_A = {fmt(closed)}")
    if args.d_min:
        rep = measures.minimize_d(state)
        out["d_A"] = {"value": rep.d_value, "evaluations": rep.evaluations, "converged": rep.converged}
        print(f"d_A = {fmt(rep.d_value)} (evaluations {rep.evaluations}, converged {rep.converged})")
    if args.json:
        _write_json(args.json, out)
    return EXIT_OK


def _load_config(path: str, overrides: argparse.Namespace) -> tuple[str, monolab.CampaignConfig]:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise CliError(f"{path}: campaign config must be a JSON object", EXIT_CONFIG)
    for key in ("trials", "seed", "tolerance"):
        val = getattr(overrides, key, None)
        if val is not None:
            data[key] = val
    if getattr(overrides, "d_min", False):
        data["use_d_min"] = True
    mode = data.get("mode")
    try:
        config = monolab.CampaignConfig.from_dict(data)
    except QcorrError as exc:
        raise CliError(f"{path}: {exc}", EXIT_CONFIG) from exc
    if mode is None:
        if config.side == "A":
            mode = "lcpo"
        elif config.state_family == "bell_diagonal":
            mode = "bside_bell"
        else:
            mode = "scan"
    return mode, config


def _run(mode: str, config: monolab.CampaignConfig) -> monolab.CampaignReport:
    runners = {
        "lcpo": monolab.run_lcpo_campaign,
        "bside_bell": monolab.run_bside_bell_campaign,
        "scan": monolab.explore_bside_general,
    }
    if mode not in runners:
        raise CliError(f"unknown campaign mode {mode!r}", EXIT_CONFIG)
    try:
        return runners[mode](config)
    except QcorrError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from exc


def _write_csv(path: str, report: monolab.CampaignReport) -> None:
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "D_before", "D_after", "excess"])
            for i, before, after, excess in report.rows:
                w.writerow([i, repr(before), repr(after), repr(excess)])
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from exc


def _summarize(mode: str, report: monolab.CampaignReport) -> None:
    print(f"mode {mode}: {report.trials_run} trials, {len(report.violations)} violations, "
          f"max excess {fmt(report.max_excess)}, {report.runtime_ms:.0f} ms")


def cmd_campaign(args) -> int:
    mode, config = _load_config(args.config, args)
    report = _run(mode, config)
    payload = report.to_dict()
    payload["mode"] = mode
    if args.out:
        _write_json(args.out, payload)
    if args.csv:
        _write_csv(args.csv, report)
    _summarize(mode, report)
    if mode == "scan":
        return EXIT_OK
    return EXIT_OK if not report.violations else EXIT_DISCREPANCY


def cmd_scan(args) -> int:
    mode, config = _load_config(args.config, args)
    if config.side != "B":
        raise CliError("scan needs a side-B config", EXIT_CONFIG)
    report = _run("scan", config)
    payload = report.to_dict()
    payload["mode"] = "scan"
    _write_json(args.out, payload)
    if args.csv:
        _write_csv(args.csv, report)
    _summarize("scan", report)
    return EXIT_OK


def cmd_check_scaling(args) -> int:
    state = load_state(args.state)
    U = np.eye(state.dA) if args.seed is None else states.random_unitary(state.dA, args.seed)
    try:
        lhs, rhs, gap = monolab.isotropic_scaling_check(state, args.p, U, args.kind)
    except QcorrError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from exc
    print(f"D_A(rho') = {fmt(lhs)}")
    print(f"p^2 D_A = {fmt(rhs)}")
    print(f"discrepancy = {fmt(gap)}")
    return EXIT_OK if gap <= SCALING_TOL else EXIT_DISCREPANCY


def cmd_probe_basis(args) -> int:
    state = load_state(args.state)
    stats = monolab.basis_dependence_probe(state, args.samples, args.seed)
    for name in stats._fields:
        print(f"{name} = {fmt(getattr(stats, name))}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcorr", description="Non-commutativity measures of quantum correlations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate D_A (and optionally d_A) on a state file")
    p.add_argument("--state", required=True)
    p.add_argument("--d-min", action="store_true", help="also minimize over B-bases")
    p.add_argument("--fast", action="store_true", help="Pauli-coefficient path when d_A = 2")
    p.add_argument("--json", help="write the result as JSON")
    p.set_defaults(func=cmd_compute)

    for name, func, help_ in (
        ("campaign", cmd_campaign, "run a monotonicity campaign"),
        ("scan", cmd_scan, "scan general states for B-side increases"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True)
        p.add_argument("--out", required=(name == "scan"))
        p.add_argument("--csv")
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--tolerance", type=float)
        p.add_argument("--d-min", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("check-scaling", help="check D_A(rho') = p^2 D_A(rho) for an isotropic map on A")
    p.add_argument("--state", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--kind", choices=("unitary", "antiunitary"), required=True)
    p.add_argument("--seed", type=int, help="Haar unitary seed; identity when omitted")
    p.set_defaults(func=cmd_check_scaling)

    p = sub.add_parser("probe-basis", help="spread of D_A over random B-bases")
    p.add_argument("--state", required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_probe_basis)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
