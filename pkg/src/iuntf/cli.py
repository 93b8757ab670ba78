"""Command-line front end: ``iuntf {construct,analyze,bounds,experiment}``.

Exit codes: 0 success, 2 parameter violation, 3 I/O, 4 numerical failure.
Every subcommand also accepts ``--config FILE`` with flat ``key = value``
lines mirroring its flags (``s-max`` or ``s_max``); explicit flags win.
The output directory defaults to ``$IUNTF_OUTPUT_DIR`` or the current
directory.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .analysis import analyze, guarantees
from .errors import FrameIOError, IUNTFError, ParameterError, ParseError
from .experiment import ExperimentConfig, run_experiment, write_outputs
from .frame import build_frame, frame_shape, gaussian_frame, max_admissible_k
from .mmio import load_frame, read_sidecar, save_dense, save_frame
from .unitary import UNITARY_KINDS, make_unitary

OUTPUT_ENV = "IUNTF_OUTPUT_DIR"
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}

log = logging.getLogger("iuntf")


def read_config(path) -> dict[str, str]:
    """Parse a flat ``key = value`` file (``#`` starts a comment)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FrameIOError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{n}: expected key = value")
        key, value = (t.strip() for t in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _apply_config(parser: argparse.ArgumentParser, cfg: dict[str, str]) -> None:
    actions = {a.dest: a for a in parser._actions}
    defaults = {}
    for key, value in cfg.items():
        action = actions.get(key)
        if action is None or key in ("help", "config"):
            raise ParameterError(f"unknown config key {key!r}")
        if isinstance(action, argparse.BooleanOptionalAction):
            low = value.lower()
            if low not in _TRUE | _FALSE:
                raise ParameterError(f"config key {key!r} needs a boolean, got {value!r}")
            defaults[key] = low in _TRUE
        else:
            # argparse runs string defaults through the action's type.
            defaults[key] = value
    parser.set_defaults(**defaults)


def _out_dir(args) -> Path:
    return Path(args.out or os.environ.get(OUTPUT_ENV) or ".")


# --- subcommands ------------------------------------------------------------

def cmd_construct(args) -> int:
    out = _out_dir(args)
    out.mkdir(parents=True, exist_ok=True)
    if args.gaussian_seed is not None:
        d, M = frame_shape(args.m, args.k, args.r)
        name = args.name or f"gaussian_d{d}_M{M}_seed{args.gaussian_seed}"
        A = gaussian_frame(d, M, args.gaussian_seed)
        paths = save_dense(A, out / f"{name}.mtx",
                           {"generator": "gaussian", "seed": args.gaussian_seed,
                            "column_normalized": True, "basis_size": d})
    else:
        U = make_unitary(args.unitary, args.k, args.unitary_file)
        F = build_frame(args.m, args.k, args.r, U)
        name = args.name or f"uob_m{args.m}_k{args.k}_r{args.r}_{F.unitary_kind}"
        paths = save_frame(F, out / f"{name}.mtx")
    for p in paths:
        print(p)
    return 0


def _format_report(rep) -> str:
    rows = [
        ("dimension d", rep.d),
        ("columns M", rep.M),
        ("bases Q", rep.Q),
        ("coherence", f"{rep.coherence:.15g}"),
        ("bound min(r a^2, 1)", "n/a" if rep.coherence_bound is None else f"{rep.coherence_bound:.15g}"),
        ("frame bounds (A, B)", f"({rep.lower_bound:.12g}, {rep.upper_bound:.12g})"),
        ("density", f"{rep.density.numerator}/{rep.density.denominator}"),
        ("mutually unbiased", "yes" if rep.is_mub else "no"),
    ]
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def cmd_analyze(args) -> int:
    F = load_frame(args.frame)
    meta = read_sidecar(args.frame) or {}
    rep = analyze(F, basis_size=meta.get("basis_size"))
    payload = rep.to_dict()
    if args.report:
        try:
            Path(args.report).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        except OSError as exc:
            raise FrameIOError(f"cannot write {args.report}: {exc}") from exc
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(_format_report(rep))
    return 0


def _s_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad sparsity list {text!r}") from exc


def cmd_bounds(args) -> int:
    rep = guarantees(args.mu, args.Q, args.s_list)
    payload = rep.to_dict()
    payload["mu"] = str(args.mu)
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0
    print(f"mu = {args.mu} ({float(args.mu):.6g}), Q = {args.Q}")
    print(f"general bound:         s <= {rep.s_general}")
    if rep.s_union is not None:
        print(f"union-of-bases bound:  s <= {rep.s_union}")
    if rep.mixed_support is not None:
        print(f"mixed support {args.s_list}: {'holds' if rep.mixed_support else 'fails'}")
    if rep.two_basis is not None:
        print(f"two-basis condition:   {'holds' if rep.two_basis else 'fails'}")
    return 0


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig(
        m=args.m, k=args.k, r=args.r, unitary=args.unitary, unitary_file=args.unitary_file,
        s_min=args.s_min, s_max=args.s_max, trials=args.trials, seed=args.seed,
        snr_threshold_db=args.snr_threshold, success_threshold=args.success_threshold,
        gaussian=args.gaussian, workers=args.workers, prefix=args.prefix,
    )
    out = _out_dir(args)
    try:
        result = run_experiment(cfg)
        paths = write_outputs(result, out)
    except IUNTFError as exc:
        record = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code,
                  "config": cfg.semantic_dict() if isinstance(cfg, ExperimentConfig) else None}
        try:
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{cfg.prefix}.error.json").write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
        except OSError:
            pass
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        return exc.exit_code
    for kind in result.frames:
        print(f"{kind}: largest sparsity with rate >= {cfg.success_threshold:g}: "
              f"{result.largest_good_level(kind)}")
    for p in paths.values():
        print(p)
    return 0


# --- parser -----------------------------------------------------------------

def _add_frame_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=int, required=False, default=None, help="dimension factor m")
    p.add_argument("--k", type=int, default=None, help="blocks per column (<= smallest prime-power factor of m)")
    p.add_argument("--r", type=int, default=1, help="polynomial degree bound (r < k)")
    p.add_argument("--unitary", choices=UNITARY_KINDS, default="dft")
    p.add_argument("--unitary-file", default=None, help="unitary matrix (.npy or text) for --unitary file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iuntf", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a frame and write .mtx + .json")
    p.add_argument("--config")
    _add_frame_params(p)
    p.add_argument("--gaussian-seed", type=int, default=None,
                   help="write a same-shape column-normalized Gaussian matrix instead")
    p.add_argument("--name", default=None, help="output file stem")
    p.add_argument("--out", default=None, help="output directory")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("analyze", help="measure coherence, frame bounds, density, MUB property")
    p.add_argument("--config")
    p.add_argument("frame", help="Matrix Market file written by 'construct'")
    p.add_argument("--json", action="store_true", help="print JSON instead of a table")
    p.add_argument("--report", default=None, help="also write the JSON report here")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bounds", help="sparsity guarantees for a coherence value")
    p.add_argument("--config")
    p.add_argument("--mu", type=Fraction, required=False, default=None, help="coherence, e.g. 0.2 or 1/5")
    p.add_argument("--Q", type=int, default=2, help="number of orthonormal bases")
    p.add_argument("--s-list", type=_s_list, default=None, help="atoms per basis, ascending, e.g. 1,2")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("experiment", help="OMP success rates: structured vs Gaussian")
    p.add_argument("--config")
    _add_frame_params(p)
    p.add_argument("--s-min", type=int, default=1)
    p.add_argument("--s-max", type=int, default=None, help="default: d = m k")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--snr-threshold", type=float, default=100.0, help="dB")
    p.add_argument("--success-threshold", type=float, default=0.90)
    p.add_argument("--gaussian", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--prefix", default="experiment")
    p.add_argument("--out", default=None, help="output directory")
    p.set_defaults(func=cmd_experiment)
    return parser


def _required(args, names) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise ParameterError("missing required parameter(s): " + ", ".join(f"--{n.replace('_', '-')}" for n in missing))


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            subparser = parser._subparsers._group_actions[0].choices[args.command]
            _apply_config(subparser, read_config(args.config))
            args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        if args.command in ("construct", "experiment"):
            _required(args, ["m", "k"])
            if args.k is not None and args.m is not None and args.m >= 2:
                kmax = max_admissible_k(args.m)
                if not 1 <= args.r < args.k <= kmax:
                    raise ParameterError(
                        f"invalid parameters: need 1 <= r < k <= {kmax} for m={args.m}"
                        f" (k is capped by the smallest prime-power factor of m); got k={args.k}, r={args.r}")
        if args.command == "bounds":
            _required(args, ["mu"])
        return args.func(args)
    except IUNTFError as exc:
        print(f"iuntf: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"iuntf: I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
