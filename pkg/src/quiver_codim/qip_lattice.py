"""The quadratic integer program for C and theta, and its closed-form solution.

For a weakly increasing d' = (d'_0 <= ... <= d'_N) the codimension C of the
rank-zero locus is the minimum of

    G(e) = sum_{1 <= j <= i <= N} e_i (e_j + d'_j - d'_{j-1})

over compositions e of d'_0 into N nonnegative parts, and theta counts the
minimizers. Completing the square turns this into finding the integer
points of the hyperplane sum(x) = d'_0 closest to s = (d'_0 - d'_i)_i,
which the A_n rounding rule solves explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, floor

from .errors import InvalidInputError, ResourceCapError
from .quiver_core import as_dims, check_rank, enumeration_cap


@dataclass(frozen=True)
class QipInstance:
    d_sorted: tuple[int, ...]
    permutation: tuple[int, ...] = field(default=())

    @classmethod
    def from_dims(cls, d, r: int = 0) -> "QipInstance":
        """Instance for the rank-r locus of d, i.e. the rank-0 locus of d - r."""
        d = as_dims(d)
        check_rank(d, r)
        order = tuple(sorted(range(len(d)), key=lambda k: (d[k], k)))
        return cls(tuple(d[k] - r for k in order), order)

    @property
    def N(self) -> int:
        return len(self.d_sorted) - 1

    @property
    def budget(self) -> int:
        return self.d_sorted[0]


@dataclass(frozen=True)
class QipSolution:
    optimum: int
    minimizers: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.minimizers)


def qip_objective(inst: QipInstance, e) -> int:
    d = inst.d_sorted
    N = inst.N
    if len(e) != N:
        raise InvalidInputError(f"expected {N} variables, got {len(e)}")
    total = 0
    for i in range(1, N + 1):
        for j in range(1, i + 1):
            total += e[i - 1] * (e[j - 1] + d[j] - d[j - 1])
    return total


def compositions(total: int, parts: int):
    """Compositions of total into parts nonnegative integers, lexicographically."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def qip_enumerate(inst: QipInstance, cap: int | None = None) -> QipSolution:
    """Exhaustive scan of all compositions.

    Uses G(e) = sum_i e_i (e_1 + ... + e_i + d'_i - d'_0), which telescopes
    the inner sum of the objective.
    """
    d = inst.d_sorted
    N = inst.N
    n_points = comb(inst.budget + N - 1, N - 1)
    limit = enumeration_cap(cap)
    if n_points > limit:
        raise ResourceCapError(f"{n_points} compositions exceed the cap {limit}")
    best = None
    minimizers = []
    for e in compositions(inst.budget, N):
        value = 0
        prefix = 0
        for i, x in enumerate(e, start=1):
            prefix += x
            value += x * (prefix + d[i] - d[0])
        if best is None or value < best:
            best = value
            minimizers = [e]
        elif value == best:
            minimizers.append(e)
    return QipSolution(best, tuple(minimizers))


# ---------------------------------------------------------------------------
# Closest points on the simplex


def _check_sorted(d_sorted) -> tuple[int, ...]:
    d = tuple(int(x) for x in d_sorted)
    if len(d) < 2 or any(a > b for a, b in zip(d, d[1:])):
        raise InvalidInputError(f"{d} is not a weakly increasing vector of length >= 2")
    if d[0] < 1:
        raise InvalidInputError("the smallest entry must be >= 1 (a zero entry gives C = 0, theta = 1)")
    return d


def relevant_count(d_sorted) -> int:
    """Largest l in 1..N with d'_0 + ... + d'_l >= l * d'_l."""
    d = _check_sorted(d_sorted)
    m = 1
    for l in range(1, len(d)):
        if sum(d[: l + 1]) >= l * d[l]:
            m = l
    return m


def round_half_up(x: Fraction) -> int:
    return floor(x + Fraction(1, 2))


def frac(x: Fraction) -> Fraction:
    return x - floor(x)


def delta_direct(S: int, m: int) -> int:
    return S - m * round_half_up(Fraction(S, m))


def delta_by_cases(S: int, m: int) -> tuple[int, int]:
    """(delta, floor(S/m + 1/2)) through the fractional part of S/m."""
    x = Fraction(S, m)
    f = frac(x)
    if f < Fraction(1, 2):
        value, rounded = m * f, x - f
    else:
        value, rounded = m * f - m, x - f + 1
    return int(value), int(rounded)


@dataclass(frozen=True)
class ClosestPointResult:
    d_sorted: tuple[int, ...]
    m: int
    S: int
    s: tuple[int, ...]
    s_hat: tuple[int, ...]
    p_hat: tuple[Fraction, ...]
    rounded: tuple[int, ...]
    delta: int
    epsilon: int
    corrections: tuple[tuple[int, ...], ...]
    v_hats: tuple[tuple[int, ...], ...]
    D_hat: int
    D: int

    @property
    def k(self) -> int:
        return len(self.v_hats)

    @property
    def minimizers(self) -> tuple[tuple[int, ...], ...]:
        """The v_hat embedded in Z^N by zero padding."""
        pad = (0,) * (len(self.s) - self.m)
        return tuple(v + pad for v in self.v_hats)

    @property
    def optimum(self) -> int:
        d = self.d_sorted
        twice = self.D_hat + d[0] ** 2 - sum((d[i] - d[0]) ** 2 for i in range(1, self.m + 1))
        if twice % 2:
            raise ArithmeticError("odd value for twice the optimum")
        return twice // 2


def closest_simplex_points(d_sorted) -> ClosestPointResult:
    d = _check_sorted(d_sorted)
    N = len(d) - 1
    m = relevant_count(d)
    S = sum(d[: m + 1])
    s = tuple(d[0] - d[i] for i in range(1, N + 1))
    s_hat = s[:m]
    shift = Fraction(d[0] - sum(s_hat), m)
    p_hat = tuple(x + shift for x in s_hat)
    rounded = tuple(round_half_up(x) for x in p_hat)
    delta = d[0] - sum(rounded)
    epsilon = (delta > 0) - (delta < 0)
    corrections = []
    for support in combinations(range(m), abs(delta)):
        vec = [0] * m
        for k in support:
            vec[k] = epsilon
        corrections.append(tuple(vec))
    v_hats = tuple(tuple(a + b for a, b in zip(rounded, c)) for c in corrections)
    dists = {sum((a - b) ** 2 for a, b in zip(s_hat, v)) for v in v_hats}
    if len(dists) != 1:
        raise ArithmeticError(f"closest points are not equidistant: {dists}")
    D_hat = dists.pop()
    D = D_hat + sum((d[i] - d[0]) ** 2 for i in range(m + 1, N + 1))
    return ClosestPointResult(d, m, S, s, s_hat, p_hat, rounded, delta, epsilon,
                              tuple(corrections), v_hats, D_hat, D)


# ---------------------------------------------------------------------------
# Closed forms


def _reduced(d, r: int) -> tuple[int, ...]:
    d = as_dims(d)
    check_rank(d, r)
    return tuple(x - r for x in sorted(d))


def codim_closed_form(d, r: int = 0) -> int:
    """C for the rank-r locus, in exact rational arithmetic.

    The relevant count m and the sum S~ are taken on the reduced vector
    sorted(d) - r.
    """
    red = _reduced(d, r)
    if red[0] == 0:
        return 0
    m = relevant_count(red)
    x = Fraction(sum(red[: m + 1]), m)
    f = frac(x)
    pairs = sum(red[i] * red[j] for i in range(m + 1) for j in range(i + 1, m + 1))
    value = Fraction(m, 2) * f * (1 - f) - Fraction(m * (m - 1), 2) * x * x + pairs
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral codimension {value} for d={tuple(as_dims(d))}, r={r}")
    return int(value)


def theta_closed_form(d, r: int = 0) -> int:
    red = _reduced(d, r)
    if red[0] == 0:
        return 1
    m = relevant_count(red)
    return comb(m, abs(delta_direct(sum(red[: m + 1]), m)))


def relevant_data(d, r: int = 0) -> tuple[int, int] | None:
    """(m, S~) for the reduced vector, or None when it has a zero entry."""
    red = _reduced(d, r)
    if red[0] == 0:
        return None
    m = relevant_count(red)
    return m, sum(red[: m + 1])


__all__ = [
    "ClosestPointResult", "QipInstance", "QipSolution", "closest_simplex_points",
    "codim_closed_form", "compositions", "delta_by_cases", "delta_direct", "frac",
    "qip_enumerate", "qip_objective", "relevant_count", "relevant_data", "round_half_up",
    "theta_closed_form",
]
