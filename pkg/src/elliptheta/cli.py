"""Command-line batch interface.

Four commands: `eval` applies one exported operation to named parameters,
`table` tabulates an operation over parameter grids, `verify` runs the named
verification suites and reports per-check residuals, and `limits` emits a
convergence report for the classical-limit sequence.  Complex scalars are
written "a+bi", exact rationals "p/q"; reports are JSON (sorted keys) or CSV
with a header row, so reruns with the same seed are byte-identical up to the
timing block.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from fractions import Fraction

from .hts import delta, delta_tilde
from .ellint import omega, q_weight, u_hyper, u_trig_degenerate, u_trig_semi
from .laurent import LaurentPoly
from .limits import classical_limit_check, conformal_block, classical_rhs_const, mehta_check
from .macdonald import elliptic_macdonald, macdonald_m2, macdonald_m2_numeric
from .suites import SUITE_NAMES, format_value, run_suite
from .theta import jacobi_theta, jacobi_theta_dlam, theta0, theta_basis
from .types import DEFAULT_TRUNC, HTSIndex, ModularParams, ThetaLevelIndex, Truncation

__all__ = ["main"]


# --------------------------------------------------------- scalar parsing


def parse_complex(s: str) -> complex:
    """Parse 'a+bi' (also plain reals and pure-imaginary 'bi')."""
    try:
        return complex(s.strip().replace("i", "j"))
    except ValueError:
        raise ValueError(f"malformed complex literal {s!r}; expected 'a+bi'") from None


def parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"malformed rational literal {s!r}; expected 'p/q'") from None


_KIND_PARSERS = {
    "int": lambda s: int(s),
    "rational": parse_rational,
    "complex": parse_complex,
    "float": lambda s: float(s),
}


def _expand_grid(kind: str, s: str) -> list:
    """'a..b' (ints) or comma-separated literals; a single literal gives [x]."""
    p = _KIND_PARSERS[kind]
    s = s.strip()
    if kind == "int" and ".." in s:
        a, b = s.split("..", 1)
        lo, hi = int(a), int(b)
        if hi < lo:
            raise ValueError(f"empty grid range {s!r}")
        return list(range(lo, hi + 1))
    if "," in s:
        vals = [p(tok) for tok in s.split(",") if tok.strip()]
        if not vals:
            raise ValueError(f"empty grid range {s!r}")
        return vals
    return [p(s)]


# ------------------------------------------------------- target registry


def _delta_wrap(fn):
    def call(l, kappa, lam, tau, eta, trunc):
        return fn(HTSIndex(l, kappa), lam, ModularParams(tau=tau, eta=eta, kappa=kappa), trunc)
    return call


def _theta_basis_wrap(j, kappa, lam, tau, trunc):
    return theta_basis(ThetaLevelIndex(j, kappa), lam, tau, trunc)


# target name -> (callable, ordered (name, kind) params, takes_trunc)
TARGETS = {
    "jacobi_theta": (jacobi_theta, (("lam", "complex"), ("tau", "complex")), True),
    "jacobi_theta_dlam": (jacobi_theta_dlam, (("lam", "complex"), ("tau", "complex")), True),
    "theta_basis": (_theta_basis_wrap,
                    (("j", "int"), ("kappa", "int"), ("lam", "complex"), ("tau", "complex")), True),
    "theta0": (theta0, (("x", "complex"), ("q", "complex")), True),
    "omega": (omega, (("t", "complex"), ("tau", "complex"), ("sigma", "complex"),
                      ("eta", "complex")), True),
    "q_weight": (q_weight, (("mu", "complex"), ("sigma", "complex"), ("eta", "complex")), True),
    "u_hyper": (u_hyper, (("lam", "complex"), ("mu", "complex"), ("tau", "complex"),
                          ("sigma", "complex"), ("eta", "complex")), True),
    "u_trig_degenerate": (u_trig_degenerate,
                          (("lam", "complex"), ("mu", "complex"), ("eta", "complex")), False),
    "u_trig_semi": (u_trig_semi, (("lam", "complex"), ("l", "int"), ("kappa", "int"),
                                  ("eta", "complex")), True),
    "delta_tilde": (_delta_wrap(delta_tilde),
                    (("l", "int"), ("kappa", "int"), ("lam", "complex"),
                     ("tau", "complex"), ("eta", "complex")), True),
    "delta": (_delta_wrap(delta),
              (("l", "int"), ("kappa", "int"), ("lam", "complex"),
               ("tau", "complex"), ("eta", "complex")), True),
    "macdonald_m2": (macdonald_m2, (("j", "int"), ("q", "rational")), False),
    "macdonald_m2_numeric": (macdonald_m2_numeric,
                             (("j", "int"), ("q", "complex"), ("x", "complex")), False),
    "elliptic_macdonald": (elliptic_macdonald,
                           (("j", "int"), ("kappa", "int"), ("x", "complex"),
                            ("q", "complex"), ("p", "complex")), True),
    "conformal_block": (conformal_block,
                        (("l", "int"), ("kappa", "int"), ("lam", "complex"),
                         ("tau", "complex")), True),
    "classical_rhs_const": (classical_rhs_const,
                            (("l", "int"), ("kappa", "int"), ("tau", "complex")), False),
    "mehta_check": (mehta_check, (("j", "int"), ("eta", "complex")), True),
}

_FLAG_ALIASES = {"lambda": "lam"}


def _poly_str(p: LaurentPoly) -> str:
    degs = sorted(range(p.min_deg, p.max_deg + 1), reverse=True)
    terms = []
    for d in degs:
        c = p.coeff(d)
        if c == 0:
            continue
        cs = f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)
        if d == 0:
            terms.append(cs)
        else:
            xs = "x" if d == 1 else f"x^{d}"
            terms.append(xs if cs == "1" else f"{cs}*{xs}")
    return " + ".join(terms) if terms else "0"


def _result_fields(value) -> dict:
    """Normalize a target's return into {'value': ..., 'err_estimate': ...}."""
    if isinstance(value, LaurentPoly):
        return {"value": _poly_str(value), "err_estimate": 0.0}
    if hasattr(value, "value") and hasattr(value, "err_estimate"):
        return {"value": format_value(complex(value.value)),
                "err_estimate": float(value.err_estimate)}
    if isinstance(value, complex):
        return {"value": format_value(value), "err_estimate": None}
    return {"value": format_value(value), "err_estimate": None}


# ------------------------------------------------------------- run config


def _collect_parameters(extra: list[str]) -> dict[str, str]:
    """Leftover '--name value' pairs become raw parameter strings."""
    params: dict[str, str] = {}
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--") or i + 1 >= len(extra):
            raise ValueError(f"dangling or malformed parameter token {tok!r}")
        key = tok[2:].replace("-", "_")
        params[_FLAG_ALIASES.get(key, key)] = extra[i + 1]
        i += 2
    return params


def _build_trunc(args) -> Truncation:
    t = DEFAULT_TRUNC
    over = {}
    for name in ("product_cutoff", "series_cutoff", "quad_points"):
        v = getattr(args, name, None)
        if v is not None:
            over[name] = v
    for name in ("tol_abs", "tol_rel"):
        v = getattr(args, name, None)
        if v is not None:
            over[name] = v
    return replace(t, **over) if over else t


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv_text(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


# --------------------------------------------------------------- commands


def _parse_target_args(target: str | None, raw: dict[str, str]):
    if target is None:
        raise ValueError("no target given (flag --target or config file)")
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}; choose from {sorted(TARGETS)}")
    fn, sig, takes_trunc = TARGETS[target]
    missing = [n for n, _ in sig if n not in raw]
    if missing:
        raise ValueError(f"target {target!r} missing parameters: {missing}")
    unknown = [n for n in raw if n not in {s[0] for s in sig}]
    if unknown:
        raise ValueError(f"target {target!r} got unknown parameters: {unknown}")
    return fn, sig, takes_trunc


def cmd_eval(args, raw_params: dict[str, str]) -> int:
    fn, sig, takes_trunc = _parse_target_args(args.target, raw_params)
    kwargs = {n: _KIND_PARSERS[kind](raw_params[n]) for n, kind in sig}
    if takes_trunc:
        kwargs["trunc"] = _build_trunc(args)
    value = fn(**kwargs)
    row = {"target": args.target}
    row.update({n: format_value(kwargs[n]) for n, _ in sig})
    row.update(_result_fields(value))
    if args.format == "csv":
        _emit(_csv_text([row]), args.output)
    else:
        _emit(_json_text(row), args.output)
    return 0


def cmd_table(args, raw_params: dict[str, str]) -> int:
    fn, sig, takes_trunc = _parse_target_args(args.target, raw_params)
    grids = [(n, kind, _expand_grid(kind, raw_params[n])) for n, kind in sig]
    trunc = _build_trunc(args)
    rows = []

    def rec(i: int, kwargs: dict) -> None:
        if i == len(grids):
            call = dict(kwargs, trunc=trunc) if takes_trunc else dict(kwargs)
            row = {n: format_value(kwargs[n]) for n, _, _ in grids}
            row.update(_result_fields(fn(**call)))
            rows.append(row)
            return
        n, _, vals = grids[i]
        for v in vals:
            kwargs[n] = v
            rec(i + 1, kwargs)
        del kwargs[n]

    rec(0, {})
    out = {"target": args.target, "rows": rows}
    if args.format == "csv":
        _emit(_csv_text(rows), args.output)
    else:
        _emit(_json_text(out), args.output)
    return 0


def cmd_verify(args, raw_params: dict[str, str]) -> int:
    if raw_params:
        raise ValueError(f"verify takes no extra parameters, got {sorted(raw_params)}")
    names = list(SUITE_NAMES) if args.suite in (None, "all") else [args.suite]
    trunc = _build_trunc(args)
    reports = [run_suite(n, seed=args.seed, kappa=args.kappa, trunc=trunc) for n in names]
    include_timing = not args.no_timing
    if args.format == "csv":
        rows = []
        for rep in reports:
            for c in rep.checks:
                d = c.to_dict()
                rows.append({"suite": rep.suite, "name": d["name"],
                             "paper_anchor": d["paper_anchor"],
                             "parameters": json.dumps(d["parameters"], sort_keys=True),
                             "residual": d["residual"], "tolerance": d["tolerance"],
                             "pass": d["pass"]})
        _emit(_csv_text(rows), args.output)
    else:
        if len(reports) == 1:
            out = reports[0].to_dict(include_timing=include_timing)
        else:
            out = {"reports": [r.to_dict(include_timing=include_timing) for r in reports],
                   "summary": {"n_pass": sum(r.n_pass for r in reports),
                               "n_fail": sum(r.n_fail for r in reports),
                               "all_pass": all(r.all_pass for r in reports)}}
        _emit(_json_text(out), args.output)
    return 0 if all(r.all_pass for r in reports) else 1


def cmd_limits(args, raw_params: dict[str, str]) -> int:
    defaults = {"l": "2", "kappa": "5", "lam": "0.3", "tau": "0+1.2i",
                "eta_sequence": "-0.02i,-0.01i,-0.005i"}
    unknown = [n for n in raw_params if n not in defaults]
    if unknown:
        raise ValueError(f"limits got unknown parameters: {unknown}")
    raw = dict(defaults, **raw_params)
    l, kappa = int(raw["l"]), int(raw["kappa"])
    lam, tau = parse_complex(raw["lam"]), parse_complex(raw["tau"])
    etas = _expand_grid("complex", raw["eta_sequence"])
    rep = classical_limit_check(l, kappa, lam, tau, etas, _build_trunc(args))
    out = {
        "target": "classical_limit_check",
        "parameters": {"l": l, "kappa": kappa, "lam": format_value(lam),
                       "tau": format_value(tau),
                       "eta_sequence": [format_value(e) for e in etas]},
        "parameter_sequence": [format_value(e) for e in rep.parameter_sequence],
        "ratio_values": [format_value(r) for r in rep.ratio_values],
        "extrapolated_limit": format_value(rep.extrapolated_limit),
        "convergence_order_estimate": rep.convergence_order_estimate,
    }
    if args.format == "csv":
        rows = [{"eta": format_value(e), "ratio": format_value(r)}
                for e, r in zip(rep.parameter_sequence, rep.ratio_values)]
        _emit(_csv_text(rows), args.output)
    else:
        _emit(_json_text(out), args.output)
    return 0


# ------------------------------------------------------------------ main


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", help="write the report to this path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="JSON file with defaults for any flag or parameter")
    p.add_argument("--no-timing", action="store_true",
                   help="omit the timing block from JSON reports")
    p.add_argument("--product-cutoff", type=int, dest="product_cutoff")
    p.add_argument("--series-cutoff", type=int, dest="series_cutoff")
    p.add_argument("--quad-points", type=int, dest="quad_points")
    p.add_argument("--tol-abs", type=float, dest="tol_abs")
    p.add_argument("--tol-rel", type=float, dest="tol_rel")


def _apply_config(args, extra: list[str]) -> list[str]:
    """Config-file values fill in flags/parameters not given on the command line."""
    if not args.config:
        return extra
    with open(args.config) as fh:
        cfg = json.load(fh)
    given = {extra[i][2:].replace("-", "_") for i in range(0, len(extra) - 1, 2)}
    for key, val in cfg.items():
        k = key.replace("-", "_")
        if k == "parameters" and isinstance(val, dict):
            for pk, pv in val.items():
                pk = pk.replace("-", "_")
                if pk not in given:
                    extra = extra + [f"--{pk}", str(pv)]
        elif hasattr(args, k) and getattr(args, k) in (None, False):
            setattr(args, k, val)
        elif not hasattr(args, k):
            if k not in given:
                extra = extra + [f"--{k}", str(val)]
    return extra


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="elliptheta", allow_abbrev=False,
        description="Evaluate, tabulate and verify the library's operations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one operation at a point",
                            allow_abbrev=False)
    p_eval.add_argument("--target")
    _add_common(p_eval)

    p_table = sub.add_parser("table", help="tabulate one operation over grids",
                             allow_abbrev=False)
    p_table.add_argument("--target")
    _add_common(p_table)

    p_verify = sub.add_parser("verify", help="run named verification suites",
                              allow_abbrev=False)
    p_verify.add_argument("--suite", choices=SUITE_NAMES + ("all",), default="all")
    p_verify.add_argument("--kappa", type=int)
    _add_common(p_verify)

    p_limits = sub.add_parser("limits", help="classical-limit convergence report",
                              allow_abbrev=False)
    _add_common(p_limits)

    args, extra = parser.parse_known_args(argv)
    try:
        extra = _apply_config(args, extra)
        raw_params = _collect_parameters(extra)
        handler = {"eval": cmd_eval, "table": cmd_table,
                   "verify": cmd_verify, "limits": cmd_limits}[args.command]
        return handler(args, raw_params)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
