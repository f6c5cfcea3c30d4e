"""Command line front end.

    python -m lmoments compare --Q 50 --auto-shifts
    python -m lmoments verify-identities --output identities.json
    python -m lmoments sweep --lambda-file coeffs.csv --Q 50 --auto-shifts

Every report carries the fully resolved configuration.  Timing and the
worker count live under a separate "runtime" key (a "runtime_s" column in
CSV) so reports from different thread counts compare equal once it is
dropped.  Exit codes: 0 ok, 2 bad configuration, 3 budget guard, 4 an
identity check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass

from . import __version__
from .arith import (
    EulerProductConfig,
    coprime_series_closed_form,
    coprime_series_direct_sum,
    totient_series_closed_form,
    totient_series_direct_sum,
)
from .characters import (
    build_group,
    enumerate_characters,
    orthogonality_formula,
    orthogonality_sum,
    root_number,
)
from .lfunction import ShiftPair, functional_equation_residual
from .moments import (
    DEFAULT_BUDGET,
    DIAGONAL_CONTOUR,
    BudgetExceeded,
    CoefficientVector,
    FamilySpec,
    afe_residuals,
    default_threads,
    delta_bruteforce,
    diagonal_term,
    main_term_executed,
    main_term_theorem1,
    moment_report,
    weighted_sweep,
)
from .special import PrecisionProfile
from .transforms import ContourSpec, WeightSpec, kernel_identity_check, mellin_w

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_SUITE = 4

COMMANDS = ("verify-identities", "compute-moment", "predict-moment", "diagonal", "compare", "sweep",
            "kernel-check", "orthogonality-check")


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors become ConfigError so they get the same JSON error record
    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunConfig:
    command: str
    Q: float
    h: int
    k: int
    shifts: ShiftPair | None
    auto_shifts: bool
    profile: PrecisionProfile
    euler: EulerProductConfig
    weight: WeightSpec
    contour: ContourSpec
    output_path: str | None
    output_format: str
    threads: int
    budget: int | None
    lambda_file: str | None
    q_max: int
    mn_max: int
    sum_limit: int
    suites: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        """Resolved knobs, minus the worker count (which must not change results)."""
        return {
            "command": self.command,
            "version": __version__,
            "Q": self.Q,
            "h": self.h,
            "k": self.k,
            "shifts": self.shifts.to_dict() if self.shifts else None,
            "auto_shifts": self.auto_shifts,
            "precision": {"zeta_series_terms": self.profile.zeta_series_terms,
                          "euler_maclaurin_correction_order": self.profile.euler_maclaurin_correction_order,
                          "target_abs_error": self.profile.target_abs_error},
            "euler_product": {"prime_cutoff": self.euler.prime_cutoff,
                              "tail_estimate_mode": self.euler.tail_estimate_mode},
            "weight": self.weight.to_dict(),
            "contour": self.contour.to_dict(),
            "budget": self.budget,
            "lambda_file": self.lambda_file,
            "q_max": self.q_max,
            "mn_max": self.mn_max,
            "sum_limit": self.sum_limit,
            "suites": list(self.suites),
        }


def _parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--Q", type=float, default=50.0, help="family scale; moduli run over Q < q < 2Q")
    common.add_argument("--h", type=int, default=1)
    common.add_argument("--k", type=int, default=1)
    common.add_argument("--alpha-re", type=float, default=None)
    common.add_argument("--alpha-im", type=float, default=0.0)
    common.add_argument("--beta-re", type=float, default=None)
    common.add_argument("--beta-im", type=float, default=0.0)
    common.add_argument("--auto-shifts", action="store_true", help="use (0.9/log Q, 0.4/log Q)")
    common.add_argument("--shift-bound", type=float, default=0.5)
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes (default: $LMOMENTS_THREADS or 1)")
    common.add_argument("--format", dest="output_format", choices=("json", "csv"), default="json")
    common.add_argument("--output", default=None, help="write the report here instead of stdout")
    common.add_argument("--budget-override", action="store_true", help="lift the family-size guard")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--prime-cutoff", type=int, default=10**6)
    common.add_argument("--no-tail-estimate", action="store_true")
    common.add_argument("--zeta-terms", type=int, default=50)
    common.add_argument("--em-order", type=int, default=24)
    common.add_argument("--target-abs-error", type=float, default=1e-10)
    common.add_argument("--bump-sharpness", type=float, default=1.0)
    common.add_argument("--quad-nodes", type=int, default=256)
    common.add_argument("--contour-eps", type=float, default=DIAGONAL_CONTOUR.real_part)
    common.add_argument("--contour-height", type=float, default=DIAGONAL_CONTOUR.im_cutoff)
    common.add_argument("--contour-step", type=float, default=DIAGONAL_CONTOUR.step)
    common.add_argument("--lambda-file", default=None, help="CSV with header h,re,im")
    common.add_argument("--q-max", type=int, default=None, help="largest modulus in identity suites")
    common.add_argument("--mn-max", type=int, default=20)
    common.add_argument("--sum-limit", type=int, default=10**6, help="length of direct series in identity suites")
    common.add_argument("--suites", default=None,
                        help="comma-separated subset of identity suites (default: all)")

    parser = _Parser(prog="lmoments", description="Twisted second moments of Dirichlet L-functions")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


_DEFAULT_QMAX = {"verify-identities": 60, "orthogonality-check": 200}


def resolve_config(argv=None) -> RunConfig:
    args = _parser().parse_args(argv)
    try:
        profile = PrecisionProfile(args.zeta_terms, args.em_order, args.target_abs_error)
        euler = EulerProductConfig(args.prime_cutoff, not args.no_tail_estimate)
        weight = WeightSpec(args.bump_sharpness, args.quad_nodes)
        contour = ContourSpec(args.contour_eps, args.contour_height, args.contour_step)
        if args.h < 1 or args.k < 1:
            raise ConfigError("h and k must be positive")
        if args.Q < 2:
            raise ConfigError("Q must be >= 2")
        shifts = None
        explicit = args.alpha_re is not None or args.beta_re is not None
        if args.auto_shifts and explicit:
            raise ConfigError("give either --auto-shifts or explicit shifts, not both")
        if args.auto_shifts:
            shifts = ShiftPair.auto(args.Q, args.shift_bound)
        elif explicit:
            if args.alpha_re is None or args.beta_re is None:
                raise ConfigError("explicit shifts need both --alpha-re and --beta-re")
            shifts = ShiftPair(complex(args.alpha_re, args.alpha_im), complex(args.beta_re, args.beta_im),
                               args.shift_bound)
        elif args.command not in ("kernel-check", "orthogonality-check"):
            shifts = ShiftPair.auto(args.Q, args.shift_bound) if args.command != "verify-identities" else None
        threads = args.threads if args.threads is not None else default_threads()
        if threads < 1:
            raise ConfigError("--threads must be >= 1")
        if args.command == "sweep" and not args.lambda_file:
            raise ConfigError("sweep needs --lambda-file")
        q_max = args.q_max if args.q_max is not None else _DEFAULT_QMAX.get(args.command, 100)
        if args.suites is None:
            suites = tuple(SUITES)
        else:
            suites = tuple(x.strip() for x in args.suites.split(",") if x.strip())
            unknown = [x for x in suites if x not in SUITES]
            if unknown or not suites:
                raise ConfigError(f"unknown suites {unknown}; choose from {sorted(SUITES)}")
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(
        command=args.command, Q=args.Q, h=args.h, k=args.k, shifts=shifts, auto_shifts=args.auto_shifts,
        profile=profile, euler=euler, weight=weight, contour=contour, output_path=args.output,
        output_format=args.output_format, threads=threads, budget=None if args.budget_override else args.budget,
        lambda_file=args.lambda_file, q_max=q_max, mn_max=args.mn_max, sum_limit=args.sum_limit,
        suites=suites,
    )


# ---------------------------------------------------------------------------
# commands


def _cx(v) -> dict:
    v = complex(v)
    return {"re": v.real, "im": v.imag}


def _spec(cfg: RunConfig) -> FamilySpec:
    return FamilySpec(cfg.Q, cfg.shifts, cfg.weight, cfg.h, cfg.k)


def _check(name: str, residual: float, tol: float, **extra) -> dict:
    ok = bool(residual <= tol)
    return {"identity": name, "max_residual": float(residual), "tolerance": tol, "passed": ok, **extra}


def _suite_orthogonality(cfg: RunConfig) -> dict:
    worst = 0.0
    for q in range(1, cfg.q_max + 1):
        for m in range(1, cfg.mn_max + 1):
            for n in range(1, cfg.mn_max + 1):
                if math.gcd(m * n, q) == 1:
                    worst = max(worst, abs(orthogonality_sum(q, m, n) - float(orthogonality_formula(q, m, n))))
    return _check("orthogonality", worst, 1e-9, q_max=cfg.q_max, mn_max=cfg.mn_max)


def _suite_functional_equation(cfg: RunConfig) -> dict:
    worst = 0.0
    worst_eps = 0.0
    for q in range(1, cfg.q_max + 1):
        for chi in enumerate_characters(build_group(q), even_only=True, primitive_only=True):
            worst_eps = max(worst_eps, abs(abs(root_number(chi)) - 1.0))
            for s in (0.0, 0.05, 0.1 + 0.2j):
                worst = max(worst, functional_equation_residual(s, chi, cfg.profile))
    out = _check("functional_equation", worst, 1e-8, q_max=cfg.q_max)
    out["root_number_unimodularity"] = worst_eps
    out["passed"] = out["passed"] and worst_eps <= 1e-10
    return out


def _suite_afe(cfg: RunConfig) -> dict:
    worst = 0.0
    pairs = [ShiftPair(0.02, 0.01), ShiftPair(0.1 + 0.05j, 0.03)]
    if cfg.shifts is not None:
        pairs.append(cfg.shifts)
    for sh in pairs:
        for q in range(1, cfg.q_max + 1):
            res = afe_residuals(sh, q, prof=cfg.profile)
            if res.size:
                worst = max(worst, float(res.max()))
    return _check("approximate_functional_equation", worst, 1e-7, q_max=cfg.q_max,
                  shift_pairs=[p.to_dict() for p in pairs])


def _suite_phi_star_series(cfg: RunConfig) -> dict:
    worst_excess = -math.inf
    rows = []
    for hk in (1, 6):
        for w, s in ((2, 2), (2, 3)):
            d = coprime_series_direct_sum(hk, w, s, cfg.sum_limit, cfg.profile)
            c = coprime_series_closed_form(hk, w, s, cfg.euler, cfg.profile)
            gap = abs(d.value - c.value)
            worst_excess = max(worst_excess, gap - d.error - c.error)
            rows.append({"hk": hk, "w": w, "s": s, "gap": gap, "bar": d.error + c.error})
    out = _check("coprime_primitive_count_series", max(worst_excess, 0.0), 0.0, cases=rows)
    return out


def _suite_r_series(cfg: RunConfig) -> dict:
    worst_excess = -math.inf
    rows = []
    for u, v in ((1, 1), (2, 3), (4, 15)):
        for s in (0.5, 1.0, 2.0):
            d = totient_series_direct_sum(u, v, s, cfg.sum_limit, cfg.profile)
            c = totient_series_closed_form(u, v, s, cfg.euler, cfg.profile)
            gap = abs(d.value - c.value)
            worst_excess = max(worst_excess, gap - d.error - c.error)
            rows.append({"u": u, "v": v, "s": s, "gap": gap, "bar": d.error + c.error})
    return _check("totient_series_euler_product", max(worst_excess, 0.0), 0.0, cases=rows)


def _suite_kernel(cfg: RunConfig) -> dict:
    worst = 0.0
    for r in (0.1, 0.5, 2.0, 10.0):
        for z in (0.3, 0.5 + 2j, 0.9):
            worst = max(worst, kernel_identity_check(r, z).residual)
    return _check("mellin_barnes_kernel", worst, 1e-8)


def _suite_mellin_shift(cfg: RunConfig) -> dict:
    sh = cfg.shifts or ShiftPair(0.01, 0.02)
    worst = 0.0
    for s in (0.3, 1 + 2j, -0.5 + 7j):
        worst = max(worst, abs(mellin_w(1 - sh.total + s, sh, cfg.weight) - mellin_w(1 + s, sh.mirror(), cfg.weight)))
    return _check("mellin_shift", worst, 1e-11)


SUITES = {
    "approximate_functional_equation": _suite_afe,
    "orthogonality": _suite_orthogonality,
    "functional_equation": _suite_functional_equation,
    "coprime_primitive_count_series": _suite_phi_star_series,
    "totient_series_euler_product": _suite_r_series,
    "mellin_barnes_kernel": _suite_kernel,
    "mellin_shift": _suite_mellin_shift,
}


def cmd_verify_identities(cfg: RunConfig) -> tuple[dict, bool]:
    results = [SUITES[name](cfg) for name in cfg.suites]
    return {"identities": results}, all(r["passed"] for r in results)


def cmd_orthogonality_check(cfg: RunConfig) -> tuple[dict, bool]:
    res = _suite_orthogonality(cfg)
    return {"identities": [res]}, res["passed"]


def cmd_kernel_check(cfg: RunConfig) -> tuple[dict, bool]:
    rows = []
    for r in (0.1, 0.5, 2.0, 10.0):
        for z in (0.3, 0.5 + 2j, 0.9):
            rows.append(kernel_identity_check(r, z).to_dict())
    worst = max(row["residual"] for row in rows)
    return {"checks": rows, "max_residual": worst, "tolerance": 1e-8}, worst <= 1e-8


def cmd_compute_moment(cfg: RunConfig) -> tuple[dict, bool]:
    spec = _spec(cfg)
    est = delta_bruteforce(spec, cfg.profile, cfg.threads, cfg.budget)
    cop = delta_bruteforce(spec, cfg.profile, cfg.threads, cfg.budget, coprime_filter=True)
    return {"brute_force": _cx(est.value), "brute_force_error": est.error,
            "brute_force_coprime": _cx(cop.value), "brute_force_coprime_error": cop.error}, True


def cmd_predict_moment(cfg: RunConfig) -> tuple[dict, bool]:
    spec = _spec(cfg)
    ex = main_term_executed(spec, cfg.euler, cfg.profile, with_error=True)
    return {"theorem1_main": _cx(main_term_theorem1(spec, cfg.profile)), "executed_main": _cx(ex.value),
            "executed_error": ex.error}, True


def cmd_diagonal(cfg: RunConfig) -> tuple[dict, bool]:
    spec = _spec(cfg)
    return {"diagonal_main": _cx(diagonal_term(spec, cfg.contour, cfg.euler, cfg.profile))}, True


def cmd_compare(cfg: RunConfig) -> tuple[dict, bool]:
    rep = moment_report(_spec(cfg), cfg.euler, cfg.profile, cfg.contour, cfg.threads, cfg.budget)
    d = rep.to_dict()
    d["metadata"] = {k: v for k, v in d["metadata"].items() if not k.startswith("runtime") and k != "threads"}
    return d, True


def cmd_sweep(cfg: RunConfig) -> tuple[dict, bool]:
    try:
        coeffs = CoefficientVector.from_csv(cfg.lambda_file)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"bad coefficient file: {exc}") from exc
    rep = weighted_sweep(_spec(cfg), coeffs, cfg.euler, cfg.profile, cfg.threads, cfg.budget)
    d = rep.to_dict()
    d["metadata"] = {k: v for k, v in d["metadata"].items() if not k.startswith("runtime") and k != "threads"}
    return d, True


HANDLERS = {
    "verify-identities": cmd_verify_identities,
    "compute-moment": cmd_compute_moment,
    "predict-moment": cmd_predict_moment,
    "diagonal": cmd_diagonal,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "kernel-check": cmd_kernel_check,
    "orthogonality-check": cmd_orthogonality_check,
}


# ---------------------------------------------------------------------------
# output


def _flatten(prefix: str, obj, out: dict):
    if isinstance(obj, dict):
        keys = set(obj)
        if keys == {"re", "im"}:
            out[f"{prefix}_re"] = obj["re"]
            out[f"{prefix}_im"] = obj["im"]
            return
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(obj, list):
        out[prefix] = json.dumps(obj, sort_keys=True)
    else:
        out[prefix] = obj


def _compare_row(payload: dict) -> dict:
    spec = payload["spec"]
    sh = spec["shifts"]
    br, ex = payload["brute_force"], payload["executed_main"]
    return {
        "Q": spec["Q"], "h": spec["h"], "k": spec["k"],
        "alpha_re": sh["alpha"]["re"], "alpha_im": sh["alpha"]["im"],
        "beta_re": sh["beta"]["re"], "beta_im": sh["beta"]["im"],
        "brute_re": br["re"], "brute_im": br["im"],
        "executed_re": ex["re"], "executed_im": ex["im"],
        "theorem1_re": payload["theorem1_main"]["re"], "theorem1_im": payload["theorem1_main"]["im"],
        "diagonal_re": payload["diagonal_main"]["re"], "diagonal_im": payload["diagonal_main"]["im"],
        "relative_gap": payload["relative_gap"], "error_bar": payload["brute_force_error"],
    }


def render(cfg: RunConfig, payload: dict, ok: bool, runtime: float) -> str:
    record = {"config": cfg.to_dict(), "passed": ok, "result": payload,
              "runtime": {"seconds": runtime, "threads": cfg.threads}}
    if cfg.output_format == "json":
        return json.dumps(record, indent=2, sort_keys=True) + "\n"
    if cfg.command == "compare":
        row = _compare_row(payload)
    else:
        row = {}
        _flatten("", payload, row)
    row["passed"] = ok
    cfg_flat = {}
    _flatten("config", cfg.to_dict(), cfg_flat)
    row.update(cfg_flat)
    row["runtime_s"] = runtime
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(row), lineterminator="\n")
    writer.writeheader()
    writer.writerow(row)
    return buf.getvalue()


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    return code


def main(argv=None) -> int:
    try:
        cfg = resolve_config(argv)
    except ConfigError as exc:
        return _error("config", str(exc), EXIT_CONFIG)
    except SystemExit as exc:
        # --help and --version
        return int(exc.code) if exc.code is not None else EXIT_OK
    t0 = time.perf_counter()
    try:
        payload, ok = HANDLERS[cfg.command](cfg)
    except BudgetExceeded as exc:
        return _error("budget", str(exc), EXIT_BUDGET)
    except ConfigError as exc:
        return _error("config", str(exc), EXIT_CONFIG)
    except ValueError as exc:
        return _error("config", str(exc), EXIT_CONFIG)
    text = render(cfg, payload, ok, time.perf_counter() - t0)
    _emit(text, cfg.output_path)
    if not ok:
        return _error("suite_failure", f"{cfg.command}: a check exceeded its tolerance", EXIT_SUITE)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
