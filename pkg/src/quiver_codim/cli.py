"""Command-line interface: ``quiver-codim <command> -d 2,2,3 [options]``.

Every command prints either text or a JSON object with the keys
input, method, C, theta and details. Exit codes: 0 success, 2 invalid
input, 3 resource cap or truncation, 4 disagreement between methods or a
failed self-check.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .components import METHODS, components, sorting_permutation
from .errors import InvalidInputError, MethodDisagreementError, QuiverCodimError
from .quiver_core import (
    DimensionVector,
    OrbitDescriptor,
    count_kostant_partitions,
    enumerate_components,
    enumeration_cap,
    orbit_table,
    top_components_bruteforce,
)

SAFE_INT = 2**53


@dataclass(frozen=True)
class JobConfig:
    dims: tuple[int, ...]
    r: int = 0
    method: str = "auto"
    T: int | None = None
    cap: int | None = None
    fmt: str = "text"
    emit_witnesses: bool = False


def parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise InvalidInputError(f"dimension vector must be comma-separated integers, got {text!r}") from None
    return tuple(DimensionVector(dims))


def jsonable(obj):
    """Plain JSON values; big integers and rationals become strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > SAFE_INT else obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if hasattr(obj, "item"):
        return jsonable(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def describe_orbit(o: OrbitDescriptor) -> dict:
    return {
        "kostant": [list(row) for row in o.kostant.rows()],
        "rank": [list(row) for row in o.rank.rows()],
        "codim": o.codim,
    }


def describe_witness(w):
    return describe_orbit(w) if isinstance(w, OrbitDescriptor) else list(w)


def _input(cfg: JobConfig, **extra) -> dict:
    out = {"dims": list(cfg.dims), "r": cfg.r,
           "permutation": list(sorting_permutation(cfg.dims))}
    out.update(extra)
    return out


def result(cfg: JobConfig, method: str, C, theta, details: dict, **extra_input) -> dict:
    return {"input": _input(cfg, **extra_input), "method": method, "C": C,
            "theta": theta, "details": details}


# ---------------------------------------------------------------------------
# Commands


def cmd_components(cfg: JobConfig) -> dict:
    report = components(cfg.dims, cfg.r, cfg.method, T=cfg.T, cap=cfg.cap)
    details = dict(report.details or {})
    if cfg.emit_witnesses:
        details["witnesses"] = [describe_witness(w) for w in report.witnesses]
    return result(cfg, report.method, report.C, report.theta, details)


def cmd_pseries(cfg: JobConfig) -> dict:
    from .qseries import default_truncation, q_series_bruteforce, q_series_closed

    T = default_truncation(cfg.dims, cfg.r) if cfg.T is None else cfg.T
    series = q_series_closed(cfg.dims, cfg.r, T)
    method = "closed"
    if cfg.method in ("brute", "auto"):
        feasible = count_kostant_partitions(cfg.dims) < enumeration_cap(cfg.cap)
        if cfg.method == "brute" or feasible:
            brute = q_series_bruteforce(cfg.dims, cfg.r, T, cfg.cap)
            if cfg.method == "brute":
                series, method = brute, "brute"
            elif brute != series:
                raise MethodDisagreementError(f"series differ: closed {series}, brute force {brute}")
            else:
                method = "closed+brute"
    elif cfg.method != "closed":
        raise InvalidInputError("pseries supports --method closed, brute or auto")
    C, theta = series.leading()
    return result(cfg, method, C, theta, {"series": series.to_json(), "text": str(series)}, T=T)


def cmd_qip(cfg: JobConfig) -> dict:
    from .qip_lattice import QipInstance, closest_simplex_points, qip_enumerate

    inst = QipInstance.from_dims(cfg.dims, cfg.r)
    details: dict = {"d_sorted": list(inst.d_sorted)}
    C = theta = None
    method = []
    if inst.budget == 0:
        C, theta = 0, 1
        details["minimizers"] = [[0] * inst.N]
        method.append("trivial")
    else:
        if cfg.method in ("auto", "closed"):
            cp = closest_simplex_points(inst.d_sorted)
            details["closest_point"] = {
                "m": cp.m, "S": cp.S, "p_hat": list(cp.p_hat), "rounded": list(cp.rounded),
                "delta": cp.delta, "v_hats": [list(v) for v in cp.v_hats], "D_hat": cp.D_hat,
                "D": cp.D,
            }
            details["minimizers"] = [list(v) for v in cp.minimizers]
            C, theta = cp.optimum, cp.k
            method.append("closed")
        if cfg.method in ("auto", "qip"):
            sol = qip_enumerate(inst, cfg.cap)
            closest = sorted(map(tuple, details.get("minimizers", [])))
            if C is not None and (C, theta, closest) != (sol.optimum, sol.count, sorted(sol.minimizers)):
                raise MethodDisagreementError(
                    f"closest point gives ({C}, {theta}), enumeration gives ({sol.optimum}, {sol.count})")
            C, theta = sol.optimum, sol.count
            details["minimizers"] = [list(v) for v in sol.minimizers]
            method.append("qip")
        if not method:
            raise InvalidInputError("qip supports --method auto, qip or closed")
    details["optimum"] = C
    return result(cfg, "+".join(method), C, theta, details)


def cmd_rlct(cfg: JobConfig) -> dict:
    from .dln_analysis import dln_report

    rep = dln_report(cfg.dims, cfg.r)
    details = {"rlct": rep.rlct, "rlcm": rep.rlcm, "flags": list(rep.flags),
               "sigma_codim": rep.sigma_codim, "fiber_codim": rep.fiber_codim}
    return result(cfg, "closed", rep.sigma_codim, rep.theta, details)


def cmd_orbits(cfg: JobConfig) -> dict:
    table = orbit_table(cfg.dims, cfg.cap)
    orbits = [OrbitDescriptor.of(table.partition(k)) for k in range(len(table))
              if int(table.tops[k]) == cfg.r]
    orbits.sort(key=lambda o: (o.codim, o.kostant.entries))
    report = top_components_bruteforce(cfg.dims, cfg.r, cfg.cap)
    details = {
        "total_orbits": len(table),
        "orbits_with_top_rank_r": [describe_orbit(o) for o in orbits],
        "closure_components": [describe_orbit(o) for o in enumerate_components(cfg.dims, cfg.r, cfg.cap)],
    }
    return result(cfg, "brute", report.C, report.theta, details)


def cmd_ideal(cfg: JobConfig, degree: int | None = None, n_max: int | None = None) -> dict:
    from .avoiding_ideal import PhiMap, kernel_rank_at_degree, lowest_kernel

    basis_cap = cfg.cap
    if degree is not None:
        res = kernel_rank_at_degree(cfg.dims, cfg.r, degree, with_basis=cfg.emit_witnesses, cap=basis_cap)
        C = theta = None
    else:
        low = lowest_kernel(cfg.dims, cfg.r, n_max, with_basis=cfg.emit_witnesses, cap=basis_cap)
        res, C, theta = low.result, low.C, low.theta
    details: dict = {}
    if res is not None:
        details = {"degree": res.degree, "source_dim": res.source_dim, "kernel_rank": res.kernel_rank}
        if cfg.emit_witnesses and res.kernel_basis is not None:
            phi = PhiMap(cfg.dims, cfg.r)
            details["kernel_basis"] = [phi.format_source(v) for v in res.kernel_basis]
    return result(cfg, "ideal", C, theta, details)


def cmd_selfcheck(bound: int, allow_zero: bool) -> tuple[dict, bool]:
    from .selfcheck import selfcheck

    rep = selfcheck(bound, allow_zero=allow_zero)
    details = {"bound": bound, "cases": rep.cases, "passed": rep.passed,
               "counterexample": rep.first_counterexample}
    out = {"input": {"bound": bound, "allow_zero": allow_zero}, "method": "selfcheck",
           "C": None, "theta": None, "details": details}
    return out, rep.passed


# ---------------------------------------------------------------------------
# Rendering


def render_text(out: dict) -> str:
    lines = []
    inp = out["input"]
    if "dims" in inp:
        lines.append(f"d = {tuple(inp['dims'])}, r = {inp['r']}")
        if inp["permutation"] != sorted(inp["permutation"]):
            lines.append(f"sorting permutation: {tuple(inp['permutation'])}")
    lines.append(f"method: {out['method']}")
    if out["C"] is not None:
        lines.append(f"C = {out['C']}")
        lines.append(f"theta = {out['theta']}")
    for key, value in out["details"].items():
        if isinstance(value, list) and value and isinstance(value[0], (dict, list, str)):
            lines.append(f"{key}:")
            lines.extend(f"  {json.dumps(v) if not isinstance(v, str) else v}" for v in value)
        else:
            lines.append(f"{key}: {json.dumps(value) if isinstance(value, (dict, list)) else value}")
    return "\n".join(lines)


def render(out: dict, fmt: str) -> str:
    data = jsonable(out)
    if fmt == "json":
        return json.dumps(data, indent=2)
    return render_text(data)


# ---------------------------------------------------------------------------
# Argument parsing


def _add_common(p: argparse.ArgumentParser, methods=None, rank=True):
    p.add_argument("-d", "--dims", required=True, help="comma-separated dimension vector d_0,...,d_N")
    if rank:
        p.add_argument("-r", "--rank", type=int, default=0, help="rank of the full product (default 0)")
    p.add_argument("-T", "--truncation", type=int, default=None, help="q-series truncation degree")
    if methods:
        p.add_argument("--method", choices=methods, default=methods[0])
    p.add_argument("--cap", type=int, default=None, help="enumeration cap (also QUIVER_CODIM_CAP)")
    p.add_argument("--emit-witnesses", action="store_true", help="include minimizers or components")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quiver-codim", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("components", help="C and theta of the rank-r locus"), list(METHODS))
    _add_common(sub.add_parser("pseries", help="the generating series Q^r_d"), ["closed", "brute", "auto"])
    _add_common(sub.add_parser("qip", help="the quadratic integer program and its closest points"),
                ["auto", "qip", "closed"])
    _add_common(sub.add_parser("rlct", help="rlct and multiplicity of a deep linear network"))
    _add_common(sub.add_parser("orbits", help="orbits with top rank r and closure components"))
    ideal = sub.add_parser("ideal", help="lowest graded piece of the avoiding ideal")
    _add_common(ideal)
    ideal.add_argument("-n", "--degree", type=int, default=None, help="only this degree")
    ideal.add_argument("--n-max", type=int, default=None, help="highest degree to scan")
    check = sub.add_parser("selfcheck", help="cross-method agreement for all small d")
    check.add_argument("--bound", type=int, default=10, help="largest sum of d (default 10)")
    check.add_argument("--allow-zero", action="store_true", help="also d with zero entries")
    for p in sub.choices.values():
        p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    return parser


def run(argv: list[str] | None = None) -> tuple[str, int]:
    args = build_parser().parse_args(argv)
    fmt = args.format
    if args.command == "selfcheck":
        out, passed = cmd_selfcheck(args.bound, args.allow_zero)
        return render(out, fmt), 0 if passed else MethodDisagreementError.exit_code
    cfg = JobConfig(parse_dims(args.dims), args.rank, getattr(args, "method", "auto"),
                    args.truncation, args.cap, fmt, args.emit_witnesses)
    handlers = {"components": cmd_components, "pseries": cmd_pseries, "qip": cmd_qip,
                "rlct": cmd_rlct, "orbits": cmd_orbits}
    if args.command == "ideal":
        out = cmd_ideal(cfg, args.degree, args.n_max)
    else:
        out = handlers[args.command](cfg)
    return render(out, fmt), 0


def main(argv: list[str] | None = None) -> int:
    try:
        text, code = run(argv)
    except QuiverCodimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
