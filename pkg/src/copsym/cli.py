"""Command-line interface: measure, table, verify, sample, audit.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone

from . import empirical as em
from . import measures as ms
from . import quadrature as quad
from . import verify as vf
from .copulas import (
    Copula,
    MThetaParams,
    make_clayton,
    make_m,
    make_mtheta,
    make_pi,
    make_w,
    mixture,
    symmetrize,
    transpose,
)
from .quadrature import QuadratureConfig
from .sampling import sample

SCHEMA_VERSION = 1
MAX_MIX_DEPTH = 4
DEFAULT_P = "1,2,inf"


class UsageError(ValueError):
    pass


# --- family specs ----------------------------------------------------------


def _split_top(text: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts]


def parse_family(text: str, depth: int = 0) -> Copula:
    """Parse a compact copula spec.

    Grammar: ``pi | m | w | mtheta:<theta> | clayton:<delta> |
    mix(<lambda>,<spec>,<spec>) | t(<spec>)``. Mixtures nest at most four
    deep.
    """
    text = text.strip()
    low = text.lower()
    if low.startswith("mix(") and low.endswith(")"):
        if depth >= MAX_MIX_DEPTH:
            raise UsageError(f"mixtures nest at most {MAX_MIX_DEPTH} deep")
        args = _split_top(text[4:-1])
        if len(args) != 3:
            raise UsageError(f"mix expects (lambda, left, right), got {text!r}")
        return mixture(_number(args[0], "lambda"), parse_family(args[1], depth + 1), parse_family(args[2], depth + 1))
    if low.startswith("t(") and low.endswith(")"):
        return transpose(parse_family(text[2:-1], depth))
    name, _, param = low.partition(":")
    if name in ("pi", "m", "w"):
        if param:
            raise UsageError(f"family {name!r} takes no parameter")
        return {"pi": make_pi, "m": make_m, "w": make_w}[name]()
    if name == "mtheta":
        return make_mtheta(MThetaParams(_number(param, "theta")))
    if name == "clayton":
        return make_clayton(_number(param, "delta"))
    raise UsageError(f"unknown family {text!r}; expected pi, m, w, mtheta:<theta>, clayton:<delta>, mix(...) or t(...)")


def _number(text, name: str) -> float:
    if text is None or str(text).strip() == "":
        raise UsageError(f"missing value for {name}")
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"{name} must be a number, got {text!r}") from None


def copula_from_args(args) -> Copula:
    fam = args.family.lower()
    if fam == "mtheta":
        c = make_mtheta(MThetaParams(_number(args.theta, "--theta")))
    elif fam == "clayton":
        c = make_clayton(_number(args.delta, "--delta"))
    elif fam == "mix":
        if args.left is None or args.right is None:
            raise UsageError("--family mix needs --left and --right")
        c = mixture(_number(args.lam, "--lambda"), parse_family(args.left, 1), parse_family(args.right, 1))
    else:
        c = parse_family(fam)
    if getattr(args, "transpose", False):
        c = transpose(c)
    if getattr(args, "symmetrize", False):
        c = symmetrize(c)
    return c


def parse_p_list(text: str) -> list[float]:
    try:
        return [ms.parse_p(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# --- output helpers --------------------------------------------------------


def _clean(obj):
    """Replace non-finite floats with None so the output is strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def emit_json(args, command: str, payload: dict):
    doc = {"spec": SCHEMA_VERSION, "command": command}
    if args.timestamp:
        doc["timestamp"] = datetime.now(timezone.utc).isoformat()
    doc.update(payload)
    print(json.dumps(_clean(doc), indent=2, allow_nan=False))


def fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    return f"{x:.6g}"


def print_table(header: list[str], rows: list[list[str]]):
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    print("  ".join("-" * w for w in widths))
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))


def _report_rows(report: ms.MeasureReport) -> list[list[str]]:
    rows = []
    for name in ("tau", "rho", "beta", "sigma"):
        e = getattr(report, name)
        rows.append([name, fmt(e.value), "", e.method, fmt(e.gap)])
    for m in report.mu.values():
        rows.append([f"mu_{ms.p_label(m.p)}", fmt(m.raw), fmt(m.normalized), m.method, fmt(m.gap)])
    for name in ("lambda_lower", "lambda_upper"):
        e = getattr(report, name)
        flag = "" if e.converged else " (not converged)"
        rows.append([name, fmt(e.value), "", e.method + flag, fmt(e.gap)])
    return rows


def _cfg(args) -> QuadratureConfig:
    return QuadratureConfig(n=args.grid_n)


# --- subcommands -----------------------------------------------------------


def cmd_measure(args) -> int:
    c = copula_from_args(args)
    report = ms.full_report(c, parse_p_list(args.p), _cfg(args), closed_forms=not args.numeric, seed=args.seed)
    if args.json:
        emit_json(args, "measure", {"report": report.to_dict()})
        return 0
    print(f"copula: {c.label}")
    print_table(["functional", "value", "normalized", "method", "gap"], _report_rows(report))
    for w in report.warnings:
        print(f"warning: {w}")
    return 0


def table_rows(thetas, cfg: QuadratureConfig, seed: int, mc_pairs: int = ms.DEFAULT_MC_PAIRS) -> list[dict]:
    """Closed forms of M_theta next to their numerical counterparts."""
    rows = []
    for th in thetas:
        params = MThetaParams(th)
        c = make_mtheta(params)
        cf = c.closed_forms
        rho_q = ms.spearman_rho(c, cfg, closed_forms=False).value
        tau_q = ms.kendall_tau_support(params)
        tau_mc, _ = ms.kendall_tau_monte_carlo(c, mc_pairs, seed)
        mu_q = ms.mu(c, math.inf, cfg, closed_forms=False).raw
        tails = ms.tail_coefficients(c, closed_forms=False)
        diffs = [
            abs(rho_q - cf["rho"]),
            abs(tau_q - cf["tau"]),
            abs(mu_q - cf["mu_inf"]),
            abs(tails.lambda_lower.value - cf["lambda_lower"]),
            abs(tails.lambda_upper.value - cf["lambda_upper"]),
        ]
        rows.append(
            {
                "theta": th,
                "tau": cf["tau"],
                "tau_quadrature": tau_q,
                "tau_monte_carlo": tau_mc,
                "rho": cf["rho"],
                "rho_quadrature": rho_q,
                "beta": cf["beta"],
                "beta_evaluated": ms.blomqvist_beta(c).value,
                "mu_inf": cf["mu_inf"],
                "mu_inf_quadrature": mu_q,
                "mu_inf_normalized": mu_q / ms.mu_bound(math.inf),
                "lambda_lower": cf["lambda_lower"],
                "lambda_lower_numeric": tails.lambda_lower.value,
                "lambda_upper": cf["lambda_upper"],
                "lambda_upper_numeric": tails.lambda_upper.value,
                "max_abs_diff": max(diffs),
            }
        )
    return rows


def cmd_table(args) -> int:
    if args.theta:
        try:
            thetas = [float(t) for t in args.theta.split(",") if t.strip()]
        except ValueError:
            raise UsageError(f"--theta must be a comma-separated list of numbers, got {args.theta!r}") from None
    else:
        thetas = list(vf.THETA_GRID)
    for th in thetas:
        MThetaParams(th)
    rows = table_rows(thetas, _cfg(args), args.seed)
    if args.json:
        emit_json(args, "table", {"grid_n": args.grid_n, "rows": rows})
        return 0
    keys = list(rows[0].keys())
    print_table(keys, [[fmt(r[k]) for k in keys] for r in rows])
    return 0


def cmd_verify(args) -> int:
    props = tuple(vf.CHECKS) if args.prop == "all" else (args.prop,)
    cfg = QuadratureConfig(n=args.grid_n, refine_levels=1)
    reports = [vf.run(p, args.trials, args.seed, cfg) for p in props]
    ok = all(r.passed for r in reports)
    if args.json:
        payload = {
            "tolerances": vf.TOLERANCES,
            "trials": args.trials,
            "seed": args.seed,
            "grid_n": args.grid_n,
            "results": [
                {"prop": r.prop, "passed": r.passed, "min_margin": r.min_margin, "checks": [c.to_dict() for c in r.checks]}
                for r in reports
            ],
            "passed": ok,
        }
        emit_json(args, "verify", payload)
        return 0 if ok else 1
    print(f"tolerance policy (grid n = {args.grid_n}, trials = {args.trials}, seed = {args.seed}):")
    for name, tol in vf.TOLERANCES.items():
        print(f"  {name}: {tol:g}")
    for r in reports:
        print(f"\n== check {r.prop}: {vf.CHECKS[r.prop]} ==")
        for i, c in enumerate(r.checks):
            status = "PASS" if c.passed else "FAIL"
            print(f"[{status}] #{i:03d} {c.subject} | {c.quantity} = {c.value:.6g} (bound {c.bound:.3g}, margin {c.margin:.3g})")
        print(f"-> {'passed' if r.passed else 'FAILED'}: {len(r.checks)} checks, minimum margin {r.min_margin:.3g}")
        for c in r.failures():
            print(f"   offending: {c.subject} | {c.quantity} margin {c.margin:.3g}")
    return 0 if ok else 1


def cmd_sample(args) -> int:
    c = copula_from_args(args)
    if args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    data = sample(c, args.n, args.seed).pairs
    lines = ["u,v"] + [f"{u:.17g},{v:.17g}" for u, v in data]
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        if args.json:
            emit_json(args, "sample", {"copula": c.label, "n": args.n, "seed": args.seed, "pairs": data.tolist()})
        else:
            sys.stdout.write(text)
        return 0
    try:
        with open(args.out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc.strerror}") from None
    if args.json:
        emit_json(args, "sample", {"copula": c.label, "n": args.n, "seed": args.seed, "out": args.out})
    return 0


def audit(path: str, p_list, cfg: QuadratureConfig, B: int, level: float, seed: int) -> dict:
    """Data audit: estimates, bootstrap intervals for mu_1 and mu_inf, the
    sigma >= 6 mu_1 consistency line and an asymmetry verdict."""
    raw = em.read_csv(path)
    pseudo = em.pseudo_observations(raw)
    report = em.estimate_report(pseudo, p_list, cfg)
    boot = [em.bootstrap(pseudo, name, B, level, seed) for name in ("mu_1", "mu_inf")]
    mu1 = report.mu[1.0].raw if 1.0 in report.mu else ms.mu(em.empirical_copula(pseudo), 1, cfg).raw
    slack = report.sigma.value - 6.0 * mu1
    null_q = em.swap_null_quantile(pseudo, "mu_1", R=max(100, B // 2), seed=seed + 1)
    verdict = "asymmetric" if boot[0].estimate > null_q else "no evidence of asymmetry"
    return {
        "n": len(raw),
        "report": report,
        "bootstrap": boot,
        "sigma_bound": {"holds": slack >= 0.0, "slack": slack},
        "swap_null_q95_mu_1": null_q,
        "verdict": verdict,
    }


def cmd_audit(args) -> int:
    result = audit(args.csv, parse_p_list(args.p), _cfg(args), args.bootstrap, args.level, args.seed)
    report = result["report"]
    if args.json:
        payload = dict(result)
        payload["report"] = report.to_dict()
        payload["bootstrap"] = [b.to_dict() for b in result["bootstrap"]]
        emit_json(args, "audit", payload)
        return 0
    print(f"observations: {result['n']}")
    print_table(["functional", "value", "normalized", "method", "gap"], _report_rows(report))
    for b in result["bootstrap"]:
        print(f"bootstrap {b.functional}: {fmt(b.estimate)}  {b.level:.0%} CI [{fmt(b.ci_low)}, {fmt(b.ci_high)}]  (B = {b.resamples})")
    sb = result["sigma_bound"]
    print(f"sigma_hat >= 6 mu_hat_1: {'yes' if sb['holds'] else 'no'} (slack = {fmt(sb['slack'])})")
    print(f"swap-null 95% quantile of mu_hat_1: {fmt(result['swap_null_q95_mu_1'])}")
    print(f"verdict: {result['verdict']}")
    for w in report.warnings:
        print(f"warning: {w}")
    return 0


# --- parser ----------------------------------------------------------------


def _add_family_args(p: argparse.ArgumentParser):
    p.add_argument("--family", required=True, help="pi, m, w, mtheta, clayton or mix (compact specs also accepted)")
    p.add_argument("--theta", help="M_theta parameter in [0, 1/3]")
    p.add_argument("--delta", help="Clayton parameter > 0")
    p.add_argument("--lambda", dest="lam", help="mixture weight of --left")
    p.add_argument("--left", help="left mixture component, e.g. mtheta:0.3")
    p.add_argument("--right", help="right mixture component, e.g. pi")
    p.add_argument("--transpose", action="store_true", help="use the transposed copula")
    p.add_argument("--symmetrize", action="store_true", help="use (C + C^t)/2")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a single JSON document")
    common.add_argument("--grid-n", type=int, default=512, help="quadrature grid resolution (default 512)")
    common.add_argument("--seed", type=int, default=0, help="random seed (unsigned 64-bit)")
    common.add_argument("--p", default=DEFAULT_P, help="exponents for mu_p, comma-separated, 'inf' allowed")
    common.add_argument("--timestamp", action="store_true", help="add a timestamp to JSON output")

    parser = argparse.ArgumentParser(prog="copsym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", parents=[common], help="all functionals of one copula")
    _add_family_args(p)
    p.add_argument("--numeric", action="store_true", help="ignore closed forms, use quadrature/Monte-Carlo")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("table", parents=[common], help="M_theta closed forms next to numerical oracles")
    p.add_argument("--theta", help="comma-separated theta values (default 0, 0.05, ..., 0.3, 1/3)")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", parents=[common], help="run one numerical check (or all) over a seeded copula pool")
    p.add_argument("prop", choices=list(vf.CHECKS) + ["all"])
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", parents=[common], help="draw a sample as CSV")
    _add_family_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("audit", parents=[common], help="estimate functionals from a two-column CSV")
    p.add_argument("csv")
    p.add_argument("--bootstrap", type=int, default=200, help="bootstrap resamples (>= 100)")
    p.add_argument("--level", type=float, default=0.95)
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.grid_n < 2:
            raise UsageError(f"--grid-n must be >= 2, got {args.grid_n}")
        if not 0 <= args.seed < 2**64:
            raise UsageError(f"--seed must be an unsigned 64-bit integer, got {args.seed}")
        if args.command == "verify" and args.trials < 1:
            raise UsageError(f"--trials must be >= 1, got {args.trials}")
        return args.func(args)
    except (ValueError, OSError, quad.QuadratureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
