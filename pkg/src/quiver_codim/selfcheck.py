"""Cross-method agreement over every small dimension vector.

For each d within the bound and each 0 <= r <= min d this compares brute
force, the q-series, QIP enumeration and the closed form, checks that
(C, theta) does not depend on the order of d, and that reducing d by r
gives the same answer. The Ext condition used by brute force can be
swapped out, which is how the suite is tested against deliberate bugs.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidInputError
from .qip_lattice import QipInstance, codim_closed_form, qip_enumerate, theta_closed_form
from .qseries import q_series_closed
from .quiver_core import intervals, orbit_table

ExtCondition = Callable[[int, int, int, int], bool]


def standard_ext(i: int, j: int, u: int, v: int) -> bool:
    return i + 1 <= u <= j + 1 <= v


def dimension_vectors(bound: int, allow_zero: bool = False, max_length: int | None = None) -> Iterator[tuple[int, ...]]:
    """Every d of length >= 2 with sum(d) <= bound, by sum, then length, then lexicographically.

    With allow_zero the length is capped by max_length (default 4), as zero
    entries otherwise give infinitely many vectors.
    """
    if allow_zero:
        longest = 4 if max_length is None else max_length
    else:
        longest = bound if max_length is None else max_length

    def comps(total, parts):
        low = 0 if allow_zero else 1
        if parts == 1:
            if total >= low:
                yield (total,)
            return
        for first in range(low, total + 1):
            for rest in comps(total - first, parts - 1):
                yield (first,) + rest

    for total in range(bound + 1):
        for length in range(2, longest + 1):
            yield from comps(total, length)


@lru_cache(maxsize=None)
def _ext_matrix(N: int, condition: ExtCondition) -> np.ndarray:
    ivs = intervals(N)
    E = np.zeros((len(ivs), len(ivs)), dtype=np.int64)
    for a, (i, j) in enumerate(ivs):
        for b, (u, v) in enumerate(ivs):
            if condition(i, j, u, v):
                E[a, b] = 1
    return E


def brute_by_top(d, condition: ExtCondition = standard_ext) -> dict[int, tuple[int, int]]:
    """(C, theta) for every r, from orbit codimensions under the given Ext condition."""
    table = orbit_table(d)
    N = len(d) - 1
    M = table.entries
    codims = np.einsum("ni,ij,nj->n", M, _ext_matrix(N, condition), M)
    out = {}
    for t in np.unique(table.tops):
        c = codims[table.tops == t]
        C = int(c.min())
        out[int(t)] = (C, int((c == C).sum()))
    return out


@dataclass
class SelfcheckReport:
    bound: int
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def first_counterexample(self) -> str | None:
        return self.failures[0] if self.failures else None


def check_case(d, condition: ExtCondition = standard_ext, brute=None) -> list[str]:
    """Disagreements among the methods for one d, over all r."""
    brute = brute or brute_by_top(d, condition)
    problems = []
    for r in range(min(d) + 1):
        expected = brute.get(r)
        closed = (codim_closed_form(d, r), theta_closed_form(d, r))
        qip = qip_enumerate(QipInstance.from_dims(d, r))
        series = q_series_closed(d, r, closed[0] if expected is None else expected[0])
        lead = next(((n, c) for n, c in enumerate(series.coeffs) if c), None)
        results = {"brute": expected, "closed": closed, "qip": (qip.optimum, qip.count), "qseries": lead}
        if len(set(results.values())) != 1:
            shown = ", ".join(f"{k}={v}" for k, v in results.items())
            problems.append(f"d={tuple(d)}, r={r}: {shown}")
    return problems


def selfcheck(bound: int, condition: ExtCondition = standard_ext, *, allow_zero: bool = False,
              max_length: int | None = None, stop_at_first: bool = True) -> SelfcheckReport:
    if bound < 0:
        raise InvalidInputError("the bound must be nonnegative")
    report = SelfcheckReport(bound)
    classes: dict[tuple[int, ...], tuple[tuple[int, ...], dict]] = {}
    cache: dict[tuple[int, ...], dict] = {}

    def brute(d):
        if d not in cache:
            cache[d] = brute_by_top(d, condition)
        return cache[d]

    for d in dimension_vectors(bound, allow_zero, max_length):
        report.cases += 1
        table = brute(d)
        found = check_case(d, condition, table)
        key = tuple(sorted(d))
        if key in classes and classes[key][1] != table:
            found.append(f"permutation invariance: d={classes[key][0]} gives {classes[key][1]}, "
                         f"d={d} gives {table}")
        classes.setdefault(key, (d, table))
        for r in range(1, min(d) + 1):
            reduced = tuple(x - r for x in d)
            if brute(reduced)[0] != table[r]:
                found.append(f"rank reduction: d={d}, r={r} gives {table[r]}, "
                             f"d-r={reduced} gives {brute(reduced)[0]}")
        report.failures.extend(found)
        if found and stop_at_first:
            break
    return report


__all__ = [
    "SelfcheckReport", "brute_by_top", "check_case", "dimension_vectors", "selfcheck",
    "standard_ext",
]
