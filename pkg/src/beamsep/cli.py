"""Command-line entry point: ``beamsep {state,apply,report,sweep,verify}``.

Every flag can also be supplied through ``--config run.json``; flags given on
the command line win.  Exit codes: 0 success, 1 claim failure, 2 usage error,
3 cutoff/leakage violation.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import io
from .entanglement import e_p, negativity, report
from .fock import ConfigurationError, CutoffConfig, CutoffError, DomainError, JointState, SingleModeState
from .optics import BeamSplitterParams, apply_bs
from .verify import CLAIMS, VerifyConfig, run_all, summary_line

EXIT_OK, EXIT_CLAIM, EXIT_USAGE, EXIT_CUTOFF = 0, 1, 2, 3
CSV_HEADER = "# beamsep-sweep v1"
CSV_COLUMNS = ("theta", "e_p", "negativity", "min_pt_eigenvalue")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = ""
    state: Optional[dict] = None
    a: Optional[dict] = None
    b: Optional[dict] = None
    input: Optional[str] = None
    theta: Optional[float] = None
    phi: float = 0.0
    theta_min: float = 0.0
    theta_max: float = 0.2
    steps: int = 21
    nmax: Optional[int] = None
    leakage_tol: float = 1e-12
    out: Optional[str] = None
    seed: int = VerifyConfig.seed
    claims: list = field(default_factory=list)

    def check(self) -> None:
        if self.command == "sweep":
            if self.steps < 2:
                raise UsageError("a sweep needs steps >= 2")
            if not self.theta_max > self.theta_min:
                raise UsageError("empty theta range: theta_max must exceed theta_min")
        if self.nmax is not None and self.nmax < 1:
            raise UsageError("--nmax must be >= 1")
        if not 0 < self.leakage_tol < 1:
            raise UsageError("--leakage-tol must lie in (0, 1)")
        if self.out is not None:
            parent = Path(self.out).resolve().parent
            if not parent.is_dir():
                raise UsageError(f"output directory {parent} does not exist")


def _descriptor_arg(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"not a JSON descriptor: {exc}") from exc
    if not isinstance(obj, dict):
        raise argparse.ArgumentTypeError("descriptor must be a JSON object")
    return obj


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with RunConfig fields")
    p.add_argument("--nmax", type=int, help="photon-number cutoff per mode (default: smallest meeting the leakage tolerance)")
    p.add_argument("--leakage-tol", type=float, dest="leakage_tol")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--seed", type=int)


def _add_state_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", help="state kind, e.g. fock, coherent, unpolarized, laser_average")
    p.add_argument("--n", type=int)
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--gamma")
    p.add_argument("--nbar", type=float)
    p.add_argument("--sector", type=int)
    p.add_argument("--intensity", type=float)
    p.add_argument("--descriptor", type=_descriptor_arg, help="full JSON descriptor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="beamsep", description="Beam-splitter entanglement toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", help="build a state and write it as JSON")
    _add_common(p)
    _add_state_flags(p)
    p.add_argument("--phi", type=float, help="phase parameter for matched_squeezed_pair")

    p = sub.add_parser("apply", help="apply a beam splitter to a stored joint state")
    _add_common(p)
    p.add_argument("--in", dest="input", help="state JSON file")
    p.add_argument("--theta", type=float)
    p.add_argument("--phi", type=float)

    p = sub.add_parser("report", help="entanglement report of a stored joint state")
    _add_common(p)
    p.add_argument("--in", dest="input", help="state JSON file")
    p.add_argument("--theta", type=float, help="rotate before reporting")
    p.add_argument("--phi", type=float)

    p = sub.add_parser("sweep", help="CSV of entanglement measures against theta")
    _add_common(p)
    p.add_argument("--a", type=_descriptor_arg, help="mode-a descriptor (JSON)")
    p.add_argument("--b", type=_descriptor_arg, help="mode-b descriptor (JSON)")
    p.add_argument("--state", type=_descriptor_arg, help="joint descriptor (JSON), instead of --a/--b")
    p.add_argument("--phi", type=float)
    p.add_argument("--theta-min", type=float, dest="theta_min")
    p.add_argument("--theta-max", type=float, dest="theta_max")
    p.add_argument("--steps", type=int)

    p = sub.add_parser("verify", help="run the verification claims and write a manifest")
    _add_common(p)
    p.add_argument("--claims", nargs="*", help=f"subset of: {', '.join(CLAIMS)}")
    return parser


_STATE_FLAGS = ("n", "alpha", "beta", "gamma", "nbar", "sector", "intensity")


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        known = {f.name for f in fields(RunConfig)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg = replace(cfg, **{k: v for k, v in data.items() if k != "command"})
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None and f.name != "command":
            setattr(cfg, f.name, value)
    if args.command == "state":
        desc = args.descriptor
        if desc is None and args.kind is not None:
            desc = {"kind": args.kind}
            desc.update({k: getattr(args, k) for k in _STATE_FLAGS if getattr(args, k) is not None})
            if args.phi is not None:
                desc["phi"] = args.phi
        if desc is not None:
            cfg.state = desc
        if cfg.state is None:
            raise UsageError("state needs --kind, --descriptor, or a config 'state' entry")
    cfg.check()
    return cfg


def _cutoff_for(desc: dict, cfg: RunConfig) -> CutoffConfig:
    if cfg.nmax is not None:
        return CutoffConfig(cfg.nmax, cfg.leakage_tol)
    return io.auto_cutoff(desc, cfg.leakage_tol)


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text)


def _load_joint(cfg: RunConfig) -> JointState:
    if cfg.input is None:
        raise UsageError("--in is required")
    try:
        state = io.load_state(cfg.input)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise UsageError(f"cannot read state {cfg.input}: {exc}") from exc
    if not isinstance(state, JointState):
        raise UsageError("this command needs a two-mode state")
    return state


def cmd_state(cfg: RunConfig) -> int:
    cut = _cutoff_for(cfg.state, cfg)
    state = io.build_state(cfg.state, cut)
    _emit(json.dumps(io.state_to_dict(state, cfg.state)), cfg.out)
    return EXIT_OK


def _rotate(state: JointState, cfg: RunConfig) -> JointState:
    out = apply_bs(state, BeamSplitterParams(cfg.theta, cfg.phi))
    if out.leakage > out.cutoff.leakage_tol:
        raise CutoffError(
            f"rotation pushed leakage to {out.leakage:.3g} > {out.cutoff.leakage_tol:.3g}",
            recommended_n_max=out.cutoff.n_max + 4,
        )
    return out


def cmd_apply(cfg: RunConfig) -> int:
    state = _load_joint(cfg)
    if cfg.theta is None:
        raise UsageError("apply needs --theta")
    out = _rotate(state, cfg)
    desc = {"kind": "rotated", "theta": cfg.theta, "phi": cfg.phi, "source": cfg.input}
    _emit(json.dumps(io.state_to_dict(out, desc)), cfg.out)
    return EXIT_OK


def cmd_report(cfg: RunConfig) -> int:
    state = _load_joint(cfg)
    if cfg.theta is not None:
        state = _rotate(state, cfg)
    rep = report(state).to_dict()
    rep["leakage"] = state.leakage
    rep["n_max"] = state.cutoff.n_max
    _emit(json.dumps(rep, indent=2), cfg.out)
    return EXIT_OK


def _sweep_state(cfg: RunConfig) -> JointState:
    if cfg.state is not None:
        desc = cfg.state
    elif cfg.a is not None and cfg.b is not None:
        desc = {"kind": "product", "a": cfg.a, "b": cfg.b}
    else:
        raise UsageError("sweep needs --state or both --a and --b")
    state = io.build_state(desc, _cutoff_for(desc, cfg))
    if isinstance(state, SingleModeState):
        raise UsageError("sweep needs a two-mode state")
    return state


def sweep_rows(state: JointState, thetas: np.ndarray, phi: float) -> list[tuple[float, float, float, float]]:
    rows = []
    for t in thetas:
        out = apply_bs(state, BeamSplitterParams(float(t), phi))
        neg = negativity(out)
        rows.append((float(t), e_p(out), neg.negativity, neg.min_pt_eigenvalue))
    return rows


def cmd_sweep(cfg: RunConfig) -> int:
    state = _sweep_state(cfg)
    thetas = np.linspace(cfg.theta_min, cfg.theta_max, cfg.steps)
    lines = [CSV_HEADER, ",".join(CSV_COLUMNS)]
    lines += [",".join(repr(x) for x in row) for row in sweep_rows(state, thetas, cfg.phi)]
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    try:
        results = run_all(VerifyConfig(seed=cfg.seed), only=cfg.claims or None, manifest=cfg.out)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.claim_id}: metric={r.metric:.3g} threshold={r.threshold:.3g}")
    print(summary_line(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_CLAIM


COMMANDS = {"state": cmd_state, "apply": cmd_apply, "report": cmd_report, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = resolve_config(args)
        return COMMANDS[cfg.command](cfg)
    except CutoffError as exc:
        hint = f" (try --nmax {exc.recommended_n_max})" if exc.recommended_n_max else ""
        print(f"cutoff error: {exc}{hint}", file=sys.stderr)
        return EXIT_CUTOFF
    except (UsageError, io.DescriptorError, ConfigurationError, DomainError, TypeError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
