"""Command line front end: evaluation and verification as batch runs.

Every invocation is parsed into a RunConfig and the run is a pure
function of it: no randomness, rows gathered then sorted on a fixed
key, floats printed with 17 significant digits so values round-trip.
Output goes to stdout (CSV by default, JSON with --format json);
verify additionally writes JSON+CSV report files.

Exit codes: 0 success / all checks passed, 1 at least one failed
check, 2 argument or config errors, 3 numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import partial

from .basis import JacobiParams, fourier_coeffs, resolve_function, trig_poly_deriv
from .config import DEFAULT_CONFIG, EvalConfig, NumericalError, TruncationError
from .kernels import (
    dtheta_potential_kernel,
    potential_kernel,
    riesz_kernel,
    riesz_kernel_interlaced,
)
from .poisson import poisson_deriv_theta, poisson_kernel, product_deriv_theta
from .transforms import riesz_singular, riesz_spectral
from .verify import DEFAULT_PAIRS, check_representation, reports_to_csv, run_all

__all__ = ["RunConfig", "main"]

# transform subcommand synthesizes its input from this many modes
_COEFF_NMAX = 480
_COEFF_TAIL = 1e-8


class CliError(ValueError):
    """Bad arguments or config; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Fully parsed description of one run.

    A run is a pure function of this object: parameter pairs, the
    numerical evaluation config, the command-specific options, and the
    output plumbing. Nothing else feeds the computation.
    """

    command: str
    subcommand: str
    pairs: tuple
    eval_config: EvalConfig
    options: dict = field(default_factory=dict)
    fmt: str = "csv"
    out: str | None = None
    jobs: int | None = None

    def to_dict(self) -> dict:
        opts = {
            k: (list(v) if isinstance(v, tuple) else v)
            for k, v in sorted(self.options.items())
        }
        return {
            "command": self.command,
            "subcommand": self.subcommand,
            "pairs": [list(p) for p in self.pairs],
            "eval": self.eval_config.to_dict(),
            "options": opts,
            "format": self.fmt,
            "out": self.out,
            "jobs": self.jobs,
        }


# --- argument parsing ---------------------------------------------------------


def _add_common(sp, pair_required: bool) -> None:
    sp.add_argument("--alpha", type=float, required=pair_required,
                    help="Jacobi parameter alpha > -1")
    sp.add_argument("--beta", type=float, required=pair_required,
                    help="Jacobi parameter beta > -1")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--config", metavar="FILE",
                    help="strict JSON run config (pairs, eval sections)")
    sp.add_argument("--jobs", type=int, default=None,
                    help="worker threads; default RIESZ_JACOBI_JOBS or cores")
    sp.add_argument("--out", metavar="PATH",
                    help="eval: write the table here instead of stdout; "
                         "verify: report file prefix")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="riesz-jacobi",
        description="Jacobi trigonometric expansions: kernels, Riesz "
                    "transforms, and the verification suite. Angles are "
                    "radians; output is CSV unless --format json.",
    )
    top = p.add_subparsers(dest="command", required=True)

    pe = top.add_parser("eval", help="evaluate basis, kernel, and transform values")
    se = pe.add_subparsers(dest="subcommand", required=True)

    sp = se.add_parser("poly", help="basis polynomials and theta derivatives")
    sp.add_argument("--n", type=int, nargs="+", required=True)
    sp.add_argument("--j", type=int, nargs="+", default=[0])
    sp.add_argument("--theta", type=float, nargs="+", required=True)
    _add_common(sp, True)

    sp = se.add_parser("poisson", help="Poisson kernel and theta derivatives")
    sp.add_argument("--t", type=float, nargs="+", required=True)
    sp.add_argument("--theta", type=float, nargs="+", required=True)
    sp.add_argument("--phi", type=float, nargs="+", required=True)
    sp.add_argument("--j", type=int, nargs="+", default=[0])
    sp.add_argument("--mode", choices=("auto", "series", "product"),
                    default="auto")
    _add_common(sp, True)

    sp = se.add_parser("kernel", help="potential or Riesz kernels off diagonal")
    sp.add_argument("--N", type=int, nargs="+", help="Riesz kernel order")
    sp.add_argument("--sigma", type=float, nargs="+",
                    help="potential kernel exponent (instead of --N)")
    sp.add_argument("--theta", type=float, nargs="+", required=True)
    sp.add_argument("--phi", type=float, nargs="+", required=True)
    sp.add_argument("--j", type=int, nargs="+", default=[0],
                    help="theta derivative order, potential route only")
    sp.add_argument("--variant", choices=("standard", "interlaced"),
                    default="standard")
    _add_common(sp, True)

    sp = se.add_parser("transform", help="Riesz transform by both routes")
    sp.add_argument("--N", type=int, nargs="+", required=True)
    sp.add_argument("--f", required=True,
                    help="input function: bump(a,b), cosk(k), or poly(n)")
    sp.add_argument("--theta", type=float, nargs="+", required=True)
    sp.add_argument("--variant", choices=("standard", "interlaced"),
                    default="standard")
    _add_common(sp, True)

    pv = top.add_parser("verify", help="run verification checks, write reports")
    sv = pv.add_subparsers(dest="subcommand", required=True)
    for name, text in (
        ("representation", "multiplier route vs singular-integral route"),
        ("pvzero", "pv row integrals of the first-order kernel vanish"),
        ("envelope", "short-time kernel envelope and long-time decay"),
        ("l1probe", "row L1 growth of the second-order kernel"),
        ("identities", "closed forms, mass, semigroup, decomposition"),
        ("all", "every check against every parameter pair"),
    ):
        sp = sv.add_parser(name, help=text)
        if name == "representation":
            sp.add_argument("--N", type=int, default=2)
            sp.add_argument("--f", default="bump(1,2)")
            sp.add_argument("--variant", choices=("standard", "interlaced"),
                            default="standard")
        _add_common(sp, False)

    return p


def _resolve_jobs(flag_value) -> int | None:
    if flag_value is None:
        env = os.environ.get("RIESZ_JACOBI_JOBS", "").strip()
        if not env:
            return None
        try:
            flag_value = int(env)
        except ValueError:
            raise CliError(f"RIESZ_JACOBI_JOBS={env!r} is not an integer")
    if flag_value < 1:
        raise CliError("--jobs must be >= 1")
    return flag_value


def _load_run_file(path: str):
    """Strict JSON: top level allows 'pairs' and 'eval', nothing else."""
    with open(path, encoding="utf-8") as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as e:
            raise CliError(f"config {path}: invalid JSON ({e})")
    if not isinstance(d, dict):
        raise CliError(f"config {path}: root must be an object")
    unknown = sorted(set(d) - {"pairs", "eval"})
    if unknown:
        raise CliError(f"config {path}: unknown keys {unknown}")
    pairs = None
    if "pairs" in d:
        raw = d["pairs"]
        if (not isinstance(raw, list) or not raw
                or any(not isinstance(p, list) or len(p) != 2 for p in raw)):
            raise CliError(f"config {path}: pairs must be [[alpha, beta], ...]")
        pairs = tuple((float(a), float(b)) for a, b in raw)
    try:
        cfg = EvalConfig.from_dict(d.get("eval", {}))
    except (ValueError, TypeError) as e:
        raise CliError(f"config {path}: {e}")
    return pairs, cfg


def _runconfig_from_args(args) -> RunConfig:
    file_pairs, cfg = (None, DEFAULT_CONFIG)
    if args.config:
        file_pairs, cfg = _load_run_file(args.config)

    if (args.alpha is None) != (args.beta is None):
        raise CliError("--alpha and --beta must be given together")
    if args.alpha is not None:
        pairs = ((args.alpha, args.beta),)
    elif args.command == "eval":
        raise CliError("eval requires --alpha and --beta")
    else:
        pairs = file_pairs if file_pairs is not None else DEFAULT_PAIRS

    opts: dict = {}
    sub = args.subcommand
    if args.command == "eval":
        if sub == "poly":
            opts = {"n": tuple(args.n), "j": tuple(args.j),
                    "theta": tuple(args.theta)}
        elif sub == "poisson":
            if args.mode == "product" and any(j > 1 for j in args.j):
                raise CliError("--mode product supports --j 0 and 1 only")
            opts = {"mode": args.mode, "j": tuple(args.j),
                    "t": tuple(args.t), "theta": tuple(args.theta),
                    "phi": tuple(args.phi)}
        elif sub == "kernel":
            if (args.N is None) == (args.sigma is None):
                raise CliError("kernel takes exactly one of --N or --sigma")
            if args.N is not None:
                if any(j != 0 for j in args.j):
                    raise CliError("--j applies to the potential route "
                                   "(--sigma) only")
                opts = {"variant": args.variant, "N": tuple(args.N),
                        "theta": tuple(args.theta), "phi": tuple(args.phi)}
            else:
                opts = {"sigma": tuple(args.sigma), "j": tuple(args.j),
                        "theta": tuple(args.theta), "phi": tuple(args.phi)}
        else:
            opts = {"variant": args.variant, "f": args.f,
                    "N": tuple(args.N), "theta": tuple(args.theta)}
    elif sub == "representation":
        opts = {"N": args.N, "f": args.f, "variant": args.variant}

    return RunConfig(
        command=args.command,
        subcommand=sub,
        pairs=pairs,
        eval_config=cfg,
        options=opts,
        fmt=args.format,
        out=args.out,
        jobs=_resolve_jobs(args.jobs),
    )


# --- execution ----------------------------------------------------------------


def _pmap(fn, items, jobs):
    # ex.map preserves input order, so sorting the points up front fixes
    # the row order independently of scheduling
    if jobs == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _eval_table(rc: RunConfig):
    params = JacobiParams(*rc.pairs[0])
    cfg = rc.eval_config
    o = rc.options
    sub = rc.subcommand
    fixed = {"alpha": params.alpha, "beta": params.beta}

    if sub == "poly":
        cols = ["alpha", "beta", "n", "j", "theta", "value"]
        pts = sorted(itertools.product(o["n"], o["j"], o["theta"]))

        def fn(p):
            n, j, th = p
            return dict(fixed, n=n, j=j, theta=th,
                        value=float(trig_poly_deriv(params, n, j, th)))

    elif sub == "poisson":
        cols = ["alpha", "beta", "mode", "j", "t", "theta", "phi", "value"]
        fixed["mode"] = o["mode"]
        pts = sorted(itertools.product(o["j"], o["t"], o["theta"], o["phi"]))

        def fn(p):
            j, t, th, ph = p
            if j == 0:
                v = poisson_kernel(params, t, th, ph, mode=o["mode"],
                                   trunc=cfg.series)
            elif o["mode"] == "product":
                v = product_deriv_theta(params, t, th, ph)
            else:
                v = poisson_deriv_theta(params, j, t, th, ph,
                                        trunc=cfg.series)
            return dict(fixed, j=j, t=t, theta=th, phi=ph, value=float(v))

    elif sub == "kernel" and "N" in o:
        cols = ["alpha", "beta", "variant", "N", "theta", "phi", "value"]
        fixed["variant"] = o["variant"]
        kern = (riesz_kernel_interlaced if o["variant"] == "interlaced"
                else riesz_kernel)
        pts = sorted(itertools.product(o["N"], o["theta"], o["phi"]))

        def fn(p):
            N, th, ph = p
            return dict(fixed, N=N, theta=th, phi=ph,
                        value=float(kern(params, N, th, ph, config=cfg)))

    elif sub == "kernel":
        cols = ["alpha", "beta", "sigma", "j", "theta", "phi", "value"]
        pts = sorted(itertools.product(o["sigma"], o["j"], o["theta"],
                                       o["phi"]))

        def fn(p):
            sg, j, th, ph = p
            if j == 0:
                v = potential_kernel(params, sg, th, ph, config=cfg)
            else:
                v = dtheta_potential_kernel(params, j, sg, th, ph, config=cfg)
            return dict(fixed, sigma=sg, j=j, theta=th, phi=ph,
                        value=float(v))

    else:
        cols = ["alpha", "beta", "variant", "f", "N", "theta", "spectral",
                "singular"]
        fixed["variant"] = o["variant"]
        fixed["f"] = o["f"]
        f = resolve_function(o["f"], params)
        coeffs = fourier_coeffs(f, params, _COEFF_NMAX, tail_tol=_COEFF_TAIL)
        pts = sorted(itertools.product(o["N"], o["theta"]))

        def fn(p):
            N, th = p
            sp = riesz_spectral(coeffs, N, th, variant=o["variant"])
            si = riesz_singular(o["f"], params, N, th, variant=o["variant"],
                                config=cfg)
            return dict(fixed, N=N, theta=th, spectral=float(sp),
                        singular=float(si))

    rows = _pmap(fn, pts, rc.jobs)
    return cols, rows


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _table_csv(cols, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_cell(r[c]) for c in cols])
    return buf.getvalue()


def _table_json(command: str, cfg: EvalConfig, cols, rows) -> str:
    doc = {
        "command": command,
        "config_hash": cfg.config_hash(),
        "columns": cols,
        "rows": rows,
    }
    return json.dumps(doc, indent=2) + "\n"


def _run_eval(rc: RunConfig):
    cols, rows = _eval_table(rc)
    command = f"eval {rc.subcommand}"
    if rc.fmt == "json":
        text = _table_json(command, rc.eval_config, cols, rows)
    else:
        text = _table_csv(cols, rows)
    if rc.out:
        return 0, "", "", {rc.out: text}
    return 0, text, "", {}


def _report_dicts(reports, with_runtime: bool):
    out = []
    for r in reports:
        d = r.to_dict()
        if not with_runtime:
            # stdout stays byte-stable across runs; timings live in the
            # report files only
            d.pop("runtime_ms", None)
        out.append(d)
    return out


def _run_verify(rc: RunConfig):
    cfg = rc.eval_config
    sub = rc.subcommand
    if sub == "all":
        reports = run_all(pairs=rc.pairs, config=cfg, jobs=rc.jobs)
    elif sub == "representation":
        o = rc.options
        check = partial(check_representation, N=o["N"], f_name=o["f"],
                        variant=o["variant"], config=cfg)
        reports = _pmap(lambda ab: check(JacobiParams(*ab)), list(rc.pairs),
                        rc.jobs)
        reports.sort(key=lambda r: (r.check_id, r.params))
    else:
        reports = run_all(pairs=rc.pairs, config=cfg, jobs=rc.jobs,
                          checks=[sub])

    ok = all(r.passed for r in reports)
    command = f"verify {sub}"
    prefix = rc.out if rc.out else f"verify_{sub}"
    files = {
        prefix + ".json": json.dumps(
            {"command": command, "pass": ok,
             "reports": _report_dicts(reports, True)}, indent=2) + "\n",
        prefix + ".csv": reports_to_csv(reports),
    }
    if rc.fmt == "json":
        text = json.dumps(
            {"command": command, "pass": ok,
             "reports": _report_dicts(reports, False)}, indent=2) + "\n"
    else:
        text = reports_to_csv(reports)
    npass = sum(1 for r in reports if r.passed)
    summary = f"{npass}/{len(reports)} checks passed\n"
    return (0 if ok else 1), text, summary, files


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rc = _runconfig_from_args(args)
        if rc.command == "eval":
            status, text, err, files = _run_eval(rc)
        else:
            status, text, err, files = _run_verify(rc)
        for path in sorted(files):
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(files[path])
    except (TruncationError, NumericalError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3
    except (CliError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if text:
        sys.stdout.write(text)
    if err:
        sys.stderr.write(err)
    return status


if __name__ == "__main__":
    sys.exit(main())
