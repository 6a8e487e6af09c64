"""Command-line entry point: ``rskernel verify|eval|selftest``.

Exit codes: 0 when every verification passes, 1 when one fails, 2 for
configuration or input errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

import numpy as np

from . import identities as ids
from .errors import ConfigError, RSKernelError
from .gammas import SpectralParams
from .io import CoefficientTable, LSampleTable, load_config

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
THREADS_ENV = "RSKERNEL_THREADS"


def parse_complex(text: str) -> complex:
    """Read ``re+imi`` (also ``re``, ``imi`` or a trailing ``j``)."""
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _encode(v):
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": float(v.real), "im": float(v.imag)}
    if isinstance(v, (np.floating, float)):
        return float(v) if np.isfinite(v) else None  # an unbounded tail is reported as null
    return v


def _emit(obj: dict) -> None:
    print(json.dumps({k: _encode(v) for k, v in obj.items()}, sort_keys=True))


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t1", type=float, help="first spectral parameter (default 0.8)")
    p.add_argument("--t2", type=float, help="second spectral parameter (default 1.3)")
    p.add_argument("--tol", type=float, help="tolerance override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rskernel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    v = sub.add_parser("verify", help="run identity verifications")
    v.add_argument("target", nargs="?", default="all", help="identity id, id prefix or 'all'")
    _common(v)
    v.add_argument("--config", help="key = value configuration file")
    v.add_argument("--out", help="write JSON Lines reports here instead of stdout")
    v.add_argument("--threads", type=int, help=f"worker threads (env {THREADS_ENV} overrides)")
    v.add_argument("--summary", action="store_true", help="print a fixed-width summary table")
    v.add_argument("--list", action="store_true", help="list identity ids and exit")

    e = sub.add_parser("eval", help="evaluate a single quantity")
    e.add_argument("what", choices=["wilson", "nkernel", "hchi", "kernel", "theta", "diag", "offdiag", "zsum"])
    _common(e)
    e.add_argument("--S", type=parse_complex, default=complex(ids.SHIFTED_RE, 0.0), help="complex S as re+imi")
    e.add_argument("--t", type=float, default=0.4, help="spectral variable t")
    e.add_argument("--u", type=float, default=1.0, help="point-pair invariant u")
    e.add_argument("--z", type=parse_complex, default=1j, help="point of the upper half plane")
    e.add_argument("--chi", default="1.0*exp(-1.0*t^2)", help="test function as 'c*exp(-A*t^2);...'")
    e.add_argument("--lsamples", help="file of 'tau value_re value_im' rows")
    e.add_argument("--coefficients", help="file of 'm rho1_re rho1_im rho2_re rho2_im' rows")

    s = sub.add_parser("selftest", help="run the fast identity checks")
    s.add_argument("--summary", action="store_true")
    return parser


def _spectral(args) -> SpectralParams:
    return SpectralParams(args.t1 or ids.DEFAULT_SPECTRAL.t1, args.t2 or ids.DEFAULT_SPECTRAL.t2)


def _chi(text: str):
    from .wilson import ChiSpec

    try:
        return ChiSpec.parse(text)
    except (ValueError, IndexError):
        raise ConfigError(f"cannot read test function {text!r}", field="chi") from None


def _cmd_eval(args) -> int:
    from . import kernel, theorem, theta, wilson

    sp = _spectral(args)
    tol = args.tol
    if args.what == "wilson":
        lam = 1j * (0.5 - args.S)
        _emit(dict(plus=wilson.wilson_plus(lam, args.t, sp), minus=wilson.wilson_minus(lam, args.t, sp)))
    elif args.what == "nkernel":
        plus, minus = wilson.kernel_parts(args.S, args.t, sp)
        _emit(dict(value=plus + minus, plus=plus, minus=minus))
    elif args.what == "hchi":
        _emit(dict(value=wilson.integrated_kernel(args.S, _chi(args.chi), sp, tol or 1e-8)))
    elif args.what == "kernel":
        _emit(dict(value=float(kernel.point_pair_kernel(args.u, _chi(args.chi), tol or 1e-10))))
    elif args.what == "theta":
        _emit(dict(theta=complex(theta.theta(args.z)), weighted=complex(theta.weighted_theta(args.z))))
    elif args.what == "diag":
        _emit(dict(value=theorem.diagonal_term(_chi(args.chi), sp, tol or 1e-10)))
    elif args.what == "offdiag":
        if not args.lsamples:
            raise ConfigError("eval offdiag needs --lsamples", field="lsamples")
        res = theorem.offdiagonal_term(_chi(args.chi), sp, LSampleTable.load(args.lsamples), tol or 1e-6)
        _emit(dict(value=res.value, tail_bound=res.tail_bound))
    elif args.what == "zsum":
        if not args.coefficients:
            raise ConfigError("eval zsum needs --coefficients", field="coefficients")
        res = theorem.rankin_selberg_sum(args.S, CoefficientTable.load(args.coefficients))
        _emit(dict(value=res.value, tail_bound=res.tail_bound))
    return EXIT_PASS


def _threads(arg, cfg) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    else:
        n = arg or cfg.get("threads") or 1
    if n < 1:
        raise ConfigError("thread count must be at least 1", field="threads")
    return n


def _write_reports(reports, out, summary: bool) -> None:
    lines = "".join(r.to_json() + "\n" for r in reports)
    if out:
        with open(out, "w") as fh:
            fh.write(lines)
    else:
        sys.stdout.write(lines)
    if summary or out:
        stream = sys.stdout if out else sys.stderr
        print(ids.summary_table(reports), file=stream)


def _cmd_verify(args) -> int:
    if args.list:
        for ident, (desc, _) in ids.REGISTRY.items():
            print(f"{ident:<28}{desc}")
        return EXIT_PASS
    cfg = load_config(args.config) if args.config else {}
    for key in ("coefficients", "lsamples"):
        if key in cfg:
            loader = CoefficientTable if key == "coefficients" else LSampleTable
            try:
                loader.load(cfg[key])
            except OSError as exc:
                raise ConfigError(f"cannot read {cfg[key]}: {exc.strerror}", field=key) from None
    filters = tuple(cfg.get("filter", ()))
    if args.target != "all" or not filters:
        filters = (args.target,)
    try:
        ids.select_ids(filters)
    except KeyError as exc:
        raise ConfigError(exc.args[0], field="target") from None
    suite = ids.SuiteConfig(
        t1=args.t1 or cfg.get("t1"),
        t2=args.t2 or cfg.get("t2"),
        tol=args.tol or cfg.get("tol"),
        threads=_threads(args.threads, cfg),
        filters=filters,
    )
    reports = ids.run_suite(suite)
    _write_reports(reports, args.out or cfg.get("out"), args.summary)
    return EXIT_PASS if ids.all_passed(reports) else EXIT_FAIL


def _cmd_selftest(args) -> int:
    reports = ids.run_suite(ids.SuiteConfig(filters=ids.QUICK_IDS))
    print(ids.summary_table(reports))
    return EXIT_PASS if ids.all_passed(reports) else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    warnings.simplefilter("default")
    try:
        if args.verb == "verify":
            return _cmd_verify(args)
        if args.verb == "eval":
            return _cmd_eval(args)
        return _cmd_selftest(args)
    except ConfigError as exc:
        print(f"rskernel: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RSKernelError, ValueError) as exc:
        print(f"rskernel: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG if args.verb == "eval" else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
