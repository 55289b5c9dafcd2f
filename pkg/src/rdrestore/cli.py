"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 numerical abort (non-finite
values, CFL refusal, broken growth bound), 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import config as cfgmod
from .degrade import degrade
from .grid import DomainError, GridGeometry
from .kernels import write_kernel_csv
from .metrics import evaluate
from .pgm import load_image, save_image
from .solver import (NumericalAbort, cfl_bound_u, cfl_bound_u_explicit, cfl_bound_v, run,
                     write_trace_csv)
from .spectral import frac_multiplier, write_multiplier_csv
from .synthetic import stripes_and_blobs

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _report(u, f) -> dict:
    return evaluate(u, f).to_dict()


def _require(value, what):
    if value is None:
        raise cfgmod.ConfigError(f"missing {what}")
    return value


def cmd_degrade(cfg: cfgmod.RunConfig) -> int:
    src = _require(cfg.io.input, "io.input (clean image)")
    dst = _require(cfg.io.output, "io.output")
    clean = load_image(src)
    degraded = degrade(clean, cfg.build_kernel(), cfg.noise)
    save_image(degraded, dst)
    stored = load_image(dst)
    _write_json(dst + ".json", {
        "kernel": cfg.kernel,
        "noise": {"sigma": cfg.noise.sigma, "seed": cfg.noise.seed},
        "quality_vs_clean": _report(stored, clean),
    })
    return EXIT_OK


def cmd_restore(cfg: cfgmod.RunConfig) -> int:
    src = _require(cfg.io.input, "io.input (degraded image)")
    dst = _require(cfg.io.output, "io.output")
    f = load_image(src)
    result = run(f, cfg.build_kernel(), cfg.solver_config())
    save_image(result.restored, dst)
    write_trace_csv(result.state.trace, cfg.io.trace or dst + ".trace.csv")
    summary = {
        "iterations": result.state.n,
        "stop_reason": result.stop_reason,
        "final_rel_change": result.state.trace[-1]["rel_change"],
    }
    if cfg.io.reference:
        ref = load_image(cfg.io.reference)
        summary["degraded"] = _report(f, ref)
        summary["restored"] = _report(load_image(dst), ref)
    _write_json(dst + ".summary.json", summary)
    return EXIT_OK


def cmd_evaluate(path_a, path_b) -> int:
    print(json.dumps(_report(load_image(path_a), load_image(path_b)), sort_keys=True))
    return EXIT_OK


def cmd_stability(cfg: cfgmod.RunConfig) -> int:
    """Check the three step-size bounds at the worst case ``c = a = 1``."""
    s = cfg.solver
    geom = GridGeometry(h=s.h, tau=s.tau)
    lam = cfg.model.lam
    checks = {
        "u_semi_implicit": cfl_bound_u(1.0, geom),
        "v_explicit": cfl_bound_v(1.0, geom),
        "u_explicit": cfl_bound_u_explicit(1.0, geom, lam),
    }
    out = {}
    for name, chk in checks.items():
        out[name] = {"bound": chk.bound, "lhs": chk.lhs, "ok": chk.ok}
        if name == "u_explicit":
            out[name]["max_tau"] = chk.bound
    if not checks["u_semi_implicit"].ok:
        out["advisory"] = ("u scheme exceeds tau*max(c)/h^2 <= 1/4 at c = 1; it usually "
                           "still behaves when the bound is exceeded only slightly")
    print(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK


def _load_config(args) -> cfgmod.RunConfig:
    cfg = cfgmod.load(args.config) if args.config else cfgmod.RunConfig()
    if args.set:
        cfg = cfgmod.apply_overrides(cfg, args.set)
    return cfgmod.with_io(cfg, input=getattr(args, "input", None),
                          output=getattr(args, "output", None),
                          trace=getattr(args, "trace", None),
                          reference=getattr(args, "reference", None))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rdrestore",
                                description="Reaction-diffusion image restoration")
    sub = p.add_subparsers(dest="command", required=True)

    def with_config(sp):
        sp.add_argument("--config", help="JSON run configuration")
        sp.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE",
                        help="override one config value (repeatable)")

    sp = sub.add_parser("degrade", help="blur and add noise to a clean image")
    with_config(sp)
    sp.add_argument("--input")
    sp.add_argument("--output")

    sp = sub.add_parser("restore", help="restore a degraded image")
    with_config(sp)
    sp.add_argument("--input")
    sp.add_argument("--output")
    sp.add_argument("--trace")
    sp.add_argument("--reference", help="clean image for PSNR/SSIM in the summary")

    sp = sub.add_parser("evaluate", help="PSNR and SSIM between two images")
    sp.add_argument("image_a")
    sp.add_argument("image_b")

    sp = sub.add_parser("stability", help="check the step-size bounds")
    with_config(sp)

    sp = sub.add_parser("multiplier-dump", help="write a fractional multiplier as CSV")
    sp.add_argument("--alpha", type=float, default=0.9)
    sp.add_argument("--axis", choices=("x", "y"), default="x")
    sp.add_argument("--width", type=int, required=True)
    sp.add_argument("--height", type=int, required=True)
    sp.add_argument("--h", type=float, default=1.0)
    sp.add_argument("--output", required=True)

    sp = sub.add_parser("kernel-dump", help="write the configured kernel taps as CSV")
    with_config(sp)
    sp.add_argument("--output", required=True)

    sp = sub.add_parser("synthetic", help="write the built-in synthetic test image")
    sp.add_argument("--size", type=int, default=64)
    sp.add_argument("--output", required=True)
    return p


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    with warnings.catch_warnings():
        warnings.showwarning = _show_warning
        return _dispatch(args)


def _dispatch(args) -> int:
    try:
        if args.command == "evaluate":
            return cmd_evaluate(args.image_a, args.image_b)
        if args.command == "multiplier-dump":
            mult = frac_multiplier(args.alpha, args.axis, args.width, args.height, args.h)
            write_multiplier_csv(mult, args.output)
            return EXIT_OK
        if args.command == "synthetic":
            save_image(stripes_and_blobs(args.size), args.output)
            return EXIT_OK
        cfg = _load_config(args)
        if args.command == "degrade":
            return cmd_degrade(cfg)
        if args.command == "restore":
            return cmd_restore(cfg)
        if args.command == "stability":
            return cmd_stability(cfg)
        if args.command == "kernel-dump":
            write_kernel_csv(cfg.build_kernel(), args.output)
            return EXIT_OK
    except NumericalAbort as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (cfgmod.ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
