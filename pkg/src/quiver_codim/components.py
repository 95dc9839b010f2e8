"""(C, theta) by any of the independent methods, behind one entry point."""

from __future__ import annotations

from .errors import InvalidInputError, MethodDisagreementError, TruncationError
from .qip_lattice import (
    QipInstance,
    closest_simplex_points,
    codim_closed_form,
    qip_enumerate,
    relevant_data,
    theta_closed_form,
)
from .qseries import q_series_closed
from .quiver_core import (
    ComponentReport,
    as_dims,
    check_rank,
    count_kostant_partitions,
    rep_dim,
    top_components_bruteforce,
)

METHODS = ("auto", "brute", "qseries", "qip", "closed", "ideal")
AUTO_BRUTE_LIMIT = 10**6


def sorting_permutation(d) -> tuple[int, ...]:
    """Positions of d in weakly increasing order (stable)."""
    return tuple(sorted(range(len(d)), key=lambda k: (d[k], k)))


def by_brute(d, r: int, cap: int | None = None) -> ComponentReport:
    report = top_components_bruteforce(d, r, cap)
    details = {"orbits": count_kostant_partitions(d)}
    return ComponentReport(report.dims, r, report.C, report.theta, "brute", report.witnesses, details)


def by_qseries(d, r: int, T: int | None = None) -> ComponentReport:
    """Leading term of the closed-formula series.

    Without an explicit truncation the series is recomputed with growing T;
    codimensions are bounded by rep_dim(d), so the search is finite.
    """
    d = as_dims(d)
    check_rank(d, r)
    if T is not None:
        series = q_series_closed(d, r, T)
        C, theta = series.leading()
    else:
        bound = max(rep_dim(d), 1)
        T = min(8, bound)
        while True:
            series = q_series_closed(d, r, T)
            if any(series.coeffs):
                C, theta = series.leading()
                break
            if T >= bound:
                raise TruncationError(f"series vanishes up to degree {bound}")
            T = min(2 * T, bound)
    return ComponentReport(tuple(d), r, C, theta, "qseries", (), {"series": series.to_json()})


def by_qip(d, r: int, cap: int | None = None) -> ComponentReport:
    inst = QipInstance.from_dims(d, r)
    sol = qip_enumerate(inst, cap)
    details = {"d_sorted": list(inst.d_sorted), "permutation": list(inst.permutation)}
    return ComponentReport(tuple(as_dims(d)), r, sol.optimum, sol.count, "qip", sol.minimizers, details)


def by_closed(d, r: int) -> ComponentReport:
    d = as_dims(d)
    check_rank(d, r)
    C = codim_closed_form(d, r)
    theta = theta_closed_form(d, r)
    perm = sorting_permutation(d)
    details: dict = {"permutation": list(perm)}
    witnesses: tuple = ()
    data = relevant_data(d, r)
    if data is not None:
        cp = closest_simplex_points(tuple(sorted(d[k] - r for k in perm)))
        details.update({"d_sorted": list(cp.d_sorted), "m": cp.m, "S": cp.S, "delta": cp.delta})
        witnesses = cp.minimizers
    return ComponentReport(tuple(d), r, C, theta, "closed", witnesses, details)


def by_ideal(d, r: int, cap: int | None = None) -> ComponentReport:
    from .avoiding_ideal import lowest_kernel

    d = as_dims(d)
    check_rank(d, r)
    res = lowest_kernel(d, r, cap=cap)
    details = {} if res.result is None else {"source_dim": res.result.source_dim}
    return ComponentReport(tuple(d), r, res.C, res.theta, "ideal", (), details)


def components(d, r: int = 0, method: str = "auto", *, T: int | None = None,
               cap: int | None = None) -> ComponentReport:
    d = as_dims(d)
    check_rank(d, r)
    if method == "brute":
        return by_brute(d, r, cap)
    if method == "qseries":
        return by_qseries(d, r, T)
    if method == "qip":
        return by_qip(d, r, cap)
    if method == "closed":
        return by_closed(d, r)
    if method == "ideal":
        return by_ideal(d, r, cap)
    if method != "auto":
        raise InvalidInputError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    closed = by_closed(d, r)
    checked = ["closed"]
    if count_kostant_partitions(d) < AUTO_BRUTE_LIMIT:
        brute = by_brute(d, r, cap)
        if (brute.C, brute.theta) != (closed.C, closed.theta):
            raise MethodDisagreementError(
                f"d={tuple(d)}, r={r}: closed form gives ({closed.C}, {closed.theta}), "
                f"brute force gives ({brute.C}, {brute.theta})")
        checked.append("brute")
    details = dict(closed.details or {})
    details["verified_by"] = checked
    return ComponentReport(tuple(d), r, closed.C, closed.theta, "auto", closed.witnesses, details)


__all__ = [
    "AUTO_BRUTE_LIMIT", "METHODS", "by_brute", "by_closed", "by_ideal", "by_qip",
    "by_qseries", "components", "sorting_permutation",
]
