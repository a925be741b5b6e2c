"""Command-line surface.

Subcommands: compare, metrics, gradcheck, reconstruct, transfer. Machine-
readable JSON goes to stdout, diagnostics to stderr. Exit codes are a
stable contract: 0 success, 1 check failed, 2 usage or I/O error, 3
numerical failure. An optional --config JSON file supplies any option;
explicit flags take precedence over it.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import _threads
from .errors import IoError, NonFiniteError, ShapeError, SplError
from .image import ColourMatrix, colour_matrix_by_name, load_image, save_image, to_symmetric
from .loss import (LossConfig, TermWeights, spl_objective, two_target_objective)
from .metrics import compute_metrics
from .optimize import PAPER_LR, AdamParams, colour_transfer, reconstruct
from .verify import OBJECTIVES, gradcheck

GRADCHECK_GATE = 1e-4  # CLI pass/fail threshold on max relative error

_CONFIG_KEYS = {
    "epsilon", "w_gp", "w_cp_rgb", "w_cp_yuv", "w_cp_grad_yuv", "alpha",
    "colour_matrix", "lr", "steps", "seed", "preset", "grad_clip",
    "objective", "size", "image_a", "image_b", "target", "source",
    "reference", "output",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spl",
        description="Profile-similarity losses, gradient checks and direct "
                    "pixel optimisation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_loss_flags(p):
        p.add_argument("--epsilon", type=float, default=None,
                       help="norm regulariser in the profile cosine (default 1e-12)")
        p.add_argument("--w-gp", type=float, default=None, dest="w_gp")
        p.add_argument("--w-cp-rgb", type=float, default=None, dest="w_cp_rgb")
        p.add_argument("--w-cp-yuv", type=float, default=None, dest="w_cp_yuv")
        p.add_argument("--w-cp-grad-yuv", type=float, default=None,
                       dest="w_cp_grad_yuv")
        p.add_argument("--alpha", type=float, default=None,
                       help="weight of the input-anchored structure term")
        p.add_argument("--colour-matrix", default=None, dest="colour_matrix",
                       help="bt601, bt709, or path to a JSON file with a "
                            "3x3 'forward' matrix")
        p.add_argument("--config", default=None,
                       help="JSON file of option values; flags win")

    def add_run_flags(p):
        p.add_argument("--lr", type=float, default=None)
        p.add_argument("--steps", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--grad-clip", type=float, default=None, dest="grad_clip")
        p.add_argument("--preset", choices=("default", "paper"), default=None,
                       help="'paper' selects the gentle lr=2e-4 schedule")

    p = sub.add_parser("compare", help="loss + metric report for two images")
    p.add_argument("image_a", nargs="?")
    p.add_argument("image_b", nargs="?")
    add_loss_flags(p)

    p = sub.add_parser("metrics", help="PSNR/SSIM/L1 report for two images")
    p.add_argument("image_a", nargs="?")
    p.add_argument("image_b", nargs="?")
    p.add_argument("--config", default=None)

    p = sub.add_parser("gradcheck", help="analytic vs numeric gradient check")
    p.add_argument("objective", nargs="?", choices=OBJECTIVES)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--size", default=None, help="HxWxC, e.g. 8x8x3")
    p.add_argument("--sabotage", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--config", default=None)

    p = sub.add_parser("reconstruct", help="rebuild a target image from noise")
    p.add_argument("target", nargs="?")
    p.add_argument("output", nargs="?")
    add_loss_flags(p)
    add_run_flags(p)

    p = sub.add_parser("transfer", help="recolour a source toward a reference")
    p.add_argument("source", nargs="?")
    p.add_argument("reference", nargs="?")
    p.add_argument("output", nargs="?")
    add_loss_flags(p)
    add_run_flags(p)
    return parser


class _Options:
    """Flag > config-file > default resolution."""

    def __init__(self, args: argparse.Namespace):
        self.args = vars(args)
        self.config = {}
        path = self.args.get("config")
        if path:
            try:
                raw = Path(path).read_text()
            except OSError as exc:
                raise IoError(f"cannot read config {path}: {exc}") from None
            try:
                self.config = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ValueError(f"config {path} is not valid JSON: {exc}") from None
            if not isinstance(self.config, dict):
                raise ValueError(f"config {path} must hold a JSON object")
            unknown = set(self.config) - _CONFIG_KEYS - {"weights"}
            if unknown:
                raise ValueError(f"unknown config keys: {sorted(unknown)}")
            weights = self.config.pop("weights", None)
            if weights is not None:
                for key, val in weights.items():
                    if key not in ("gp", "cp_rgb", "cp_yuv", "cp_grad_yuv"):
                        raise ValueError(f"unknown weight key {key!r} in config")
                    self.config.setdefault(f"w_{key}", val)

    def get(self, name, default=None):
        value = self.args.get(name)
        if value is not None:
            return value
        return self.config.get(name, default)

    def require_path(self, name) -> str:
        value = self.get(name)
        if value is None:
            raise ValueError(f"missing required path argument {name!r}")
        return str(value)


def _loss_config(opts: _Options) -> LossConfig:
    matrix = opts.get("colour_matrix", "bt601")
    if isinstance(matrix, str) and matrix.lower() in ("bt601", "bt709"):
        cm = colour_matrix_by_name(matrix)
    else:
        try:
            spec = json.loads(Path(matrix).read_text())
        except OSError as exc:
            raise IoError(f"cannot read colour matrix {matrix}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ValueError(f"colour matrix file {matrix}: {exc}") from None
        if not isinstance(spec, dict) or "forward" not in spec:
            raise ValueError("custom colour matrix file needs a 'forward' key")
        cm = ColourMatrix(spec["forward"])
    weights = TermWeights(
        gp=float(opts.get("w_gp", 1.0)),
        cp_rgb=float(opts.get("w_cp_rgb", 1.0)),
        cp_yuv=float(opts.get("w_cp_yuv", 1.0)),
        cp_grad_yuv=float(opts.get("w_cp_grad_yuv", 1.0)),
    )
    return LossConfig(
        epsilon=float(opts.get("epsilon", 1e-12)),
        colour_matrix=cm,
        weights=weights,
        alpha_identity=float(opts.get("alpha", 0.0)),
    )


def _adam_params(opts: _Options, default_lr: float, default_steps: int) -> AdamParams:
    lr = opts.get("lr")
    if lr is None:
        lr = PAPER_LR if opts.get("preset", "default") == "paper" else default_lr
    clip = opts.get("grad_clip")
    return AdamParams(lr=float(lr), max_steps=int(opts.get("steps", default_steps)),
                      grad_clip=None if clip is None else float(clip))


def _load_pair(opts, name_a, name_b):
    a = load_image(opts.require_path(name_a))
    b = load_image(opts.require_path(name_b))
    if a.data.shape != b.data.shape:
        raise ShapeError(f"image shapes differ: {a.data.shape} vs {b.data.shape}")
    return a, b


def _cmd_compare(opts: _Options) -> int:
    a, b = _load_pair(opts, "image_a", "image_b")
    cfg = _loss_config(opts)
    report, _ = spl_objective(to_symmetric(a), to_symmetric(b), cfg)
    payload = {"loss": report.to_json_dict(),
               "metrics": compute_metrics(a, b).to_json_dict()}
    print(json.dumps(payload))
    return 0


def _cmd_metrics(opts: _Options) -> int:
    a, b = _load_pair(opts, "image_a", "image_b")
    print(json.dumps(compute_metrics(a, b).to_json_dict()))
    return 0


def _parse_size(text: str) -> tuple[int, int, int]:
    parts = text.lower().split("x")
    if len(parts) != 3:
        raise ValueError(f"size must look like HxWxC, got {text!r}")
    h, w, c = (int(p) for p in parts)
    if min(h, w, c) < 1:
        raise ValueError(f"size fields must be positive, got {text!r}")
    return h, w, c


def _cmd_gradcheck(opts: _Options) -> int:
    objective = opts.get("objective")
    if objective is None:
        raise ValueError("missing objective (one of %s)" % ", ".join(OBJECTIVES))
    size = _parse_size(str(opts.get("size", "8x8x3")))
    result = gradcheck(objective, seed=int(opts.get("seed", 0)), size=size,
                       sabotage=bool(opts.get("sabotage", False)))
    payload = result.to_json_dict()
    payload["passed"] = result.max_rel_error < GRADCHECK_GATE
    print(json.dumps(payload))
    return 0 if payload["passed"] else 1


def _finish_run(trace, out_path: str, final_report) -> int:
    save_image(trace.final_image, out_path)
    trace.write_jsonl(out_path + ".trace.jsonl")
    print(json.dumps(final_report.to_json_dict()))
    return 0


def _cmd_reconstruct(opts: _Options) -> int:
    target = to_symmetric(load_image(opts.require_path("target")))
    out = opts.require_path("output")
    cfg = _loss_config(opts)
    params = _adam_params(opts, default_lr=2e-2, default_steps=2000)
    trace = reconstruct(target, params, cfg, seed=int(opts.get("seed", 0)))
    report, _ = spl_objective(trace.final_image, target, cfg)
    return _finish_run(trace, out, report)


def _cmd_transfer(opts: _Options) -> int:
    src = load_image(opts.require_path("source"))
    ref = load_image(opts.require_path("reference"))
    if src.data.shape != ref.data.shape:
        raise ShapeError(f"image shapes differ: {src.data.shape} vs {ref.data.shape}")
    out = opts.require_path("output")
    cfg = _loss_config(opts)
    # starting at the structure optimum wants gentler steps than reconstruction
    params = _adam_params(opts, default_lr=2e-3, default_steps=400)
    src_s, ref_s = to_symmetric(src), to_symmetric(ref)
    trace = colour_transfer(src_s, ref_s, params, cfg, seed=int(opts.get("seed", 0)))
    report, _ = two_target_objective(trace.final_image, src_s, ref_s, cfg)
    return _finish_run(trace, out, report)


_COMMANDS = {
    "compare": _cmd_compare,
    "metrics": _cmd_metrics,
    "gradcheck": _cmd_gradcheck,
    "reconstruct": _cmd_reconstruct,
    "transfer": _cmd_transfer,
}


def main(argv=None) -> int:
    try:
        _threads.configured_threads()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        opts = _Options(args)
        return _COMMANDS[args.command](opts)
    except NonFiniteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (SplError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
