"""Truncated q-series with exact integer coefficients.

The generating series Q^r_d = sum over Kostant partitions m of d with
m_0N = r of q^codim(O_m) * P_m has lowest term theta * q^C. It is computed
two ways here: by summing over the orbits, and by the alternating formula

    Q^r_d = P_r * sum_{s=0}^{min d - r} (-1)^s q^binom(s,2) P_s P_{d-r-s}

where P_s = 1/((1-q)...(1-q^s)) and P_h is the product of P_{h_i}.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .errors import InvalidInputError, TruncationError
from .quiver_core import as_dims, check_rank, orbit_table


@dataclass(frozen=True)
class QSeries:
    """Power series c_0 + c_1 q + ... + c_T q^T + O(q^{T+1})."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise InvalidInputError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def T(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, T: int) -> "QSeries":
        return cls((0,) * (T + 1))

    @classmethod
    def one(cls, T: int) -> "QSeries":
        return cls.monomial(0, T)

    @classmethod
    def monomial(cls, k: int, T: int, c: int = 1) -> "QSeries":
        coeffs = [0] * (T + 1)
        if k <= T:
            coeffs[k] = c
        return cls(tuple(coeffs))

    @classmethod
    def from_poly(cls, coeffs, T: int) -> "QSeries":
        coeffs = list(coeffs)[: T + 1]
        return cls(tuple(coeffs + [0] * (T + 1 - len(coeffs))))

    def truncate(self, T: int) -> "QSeries":
        if T > self.T:
            raise InvalidInputError(f"cannot extend a series known to degree {self.T} up to {T}")
        return QSeries(self.coeffs[: T + 1])

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __add__(self, other: "QSeries") -> "QSeries":
        T = min(self.T, other.T)
        return QSeries(tuple(a + b for a, b in zip(self.coeffs[: T + 1], other.coeffs[: T + 1])))

    def __neg__(self) -> "QSeries":
        return QSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return QSeries(tuple(other * c for c in self.coeffs))
        T = min(self.T, other.T)
        a, b = self.coeffs, other.coeffs
        out = [0] * (T + 1)
        for i in range(T + 1):
            ai = a[i]
            if ai:
                for j in range(T + 1 - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return QSeries(tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int) -> "QSeries":
        """Multiply by q^k, keeping the truncation."""
        return QSeries(((0,) * k + self.coeffs)[: self.T + 1]) if k <= self.T else QSeries.zero(self.T)

    def inverse(self) -> "QSeries":
        a0 = self.coeffs[0]
        if a0 not in (1, -1):
            raise InvalidInputError("only series with constant term +-1 are invertible over Z")
        out = [0] * (self.T + 1)
        out[0] = a0
        for n in range(1, self.T + 1):
            s = sum(self.coeffs[k] * out[n - k] for k in range(1, n + 1))
            out[n] = -a0 * s
        return QSeries(tuple(out))

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        T = min(self.T, other.T)
        return self.coeffs[: T + 1] == other.coeffs[: T + 1]

    def __hash__(self):
        return hash(self.coeffs)

    def leading(self) -> tuple[int, int]:
        """(lowest nonzero degree, its coefficient)."""
        for n, c in enumerate(self.coeffs):
            if c:
                return n, c
        raise TruncationError(f"series vanishes up to degree {self.T}; raise the truncation")

    def to_json(self) -> dict:
        return {"truncation": self.T, "coefficients": [str(c) for c in self.coeffs]}

    def __str__(self):
        terms = []
        for n, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "1" if n == 0 else ("q" if n == 1 else f"q^{n}")
            if n == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        return f"{body} + O(q^{self.T + 1})"


def series_add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def series_inverse(a: QSeries) -> QSeries:
    return a.inverse()


@lru_cache(maxsize=None)
def pochhammer_inverse(s: int, T: int) -> QSeries:
    """1/((1-q)(1-q^2)...(1-q^s)); coefficient n counts partitions of n into parts <= s."""
    if s < 0:
        raise InvalidInputError("s must be nonnegative")
    c = [1] + [0] * T
    for part in range(1, s + 1):
        for n in range(part, T + 1):
            c[n] += c[n - part]
    return QSeries(tuple(c))


def pochhammer_multi(h, T: int) -> QSeries:
    out = QSeries.one(T)
    for s in sorted(h):
        if s:
            out = out * pochhammer_inverse(s, T)
    return out


def pochhammer_product(lo: int, hi: int, T: int) -> QSeries:
    """(1-q^lo)(1-q^{lo+1})...(1-q^hi); empty when lo > hi."""
    out = QSeries.one(T)
    for k in range(lo, hi + 1):
        out = out * QSeries.from_poly([1] + [0] * (k - 1) + [-1], T)
    return out


@lru_cache(maxsize=4096)
def _pochhammer_multi_cached(h: tuple[int, ...], T: int) -> QSeries:
    return pochhammer_multi(h, T)


def q_series_by_top(d, T: int, cap: int | None = None) -> dict[int, QSeries]:
    """Q^r_d by summing over all orbits, for every r at once."""
    d = as_dims(d)
    table = orbit_table(d, cap)
    groups: Counter = Counter()
    for row, codim, top in zip(table.entries, table.codims, table.tops):
        if codim <= T:
            h = tuple(sorted(int(x) for x in row if x))
            groups[(int(top), int(codim), h)] += 1
    out = {r: QSeries.zero(T) for r in range(min(d) + 1)}
    for (top, codim, h), n in groups.items():
        out[top] = out[top] + _pochhammer_multi_cached(h, T).shift(codim) * n
    return out


def q_series_bruteforce(d, r: int, T: int, cap: int | None = None) -> QSeries:
    d = as_dims(d)
    check_rank(d, r)
    return q_series_by_top(d, T, cap)[r]


def q_series_closed(d, r: int, T: int) -> QSeries:
    d = as_dims(d)
    check_rank(d, r)
    total = QSeries.zero(T)
    for s in range(min(d) - r + 1):
        term = pochhammer_inverse(s, T) * pochhammer_multi([x - r - s for x in d], T)
        term = term.shift(comb(s, 2))
        total = total + (term if s % 2 == 0 else -term)
    return pochhammer_inverse(r, T) * total


def shift_factor(r: int, s: int, T: int) -> QSeries:
    """Factor relating Q^{s-r}_{d-r} to Q^s_d: (1-q^{s-r+1})...(1-q^s)."""
    return pochhammer_product(s - r + 1, s, T)


def extract_C_theta(s: QSeries) -> tuple[int, int]:
    return s.leading()


def default_truncation(d, r: int = 0) -> int:
    from .qip_lattice import codim_closed_form

    return codim_closed_form(d, r) + 4


def euler_coefficients(max_x: int, T: int) -> list[QSeries]:
    """x-coefficients of prod_{k>=0} (1 - x q^k), as q-series up to degree T.

    Factors with k > T only change q-degrees above T, so they are skipped.
    """
    coeffs = [QSeries.one(T)] + [QSeries.zero(T) for _ in range(max_x)]
    for k in range(T + 1):
        nxt = list(coeffs)
        for s in range(1, max_x + 1):
            nxt[s] = coeffs[s] - coeffs[s - 1].shift(k)
        coeffs = nxt
    return coeffs


__all__ = [
    "QSeries", "default_truncation", "euler_coefficients", "extract_C_theta",
    "pochhammer_inverse", "pochhammer_multi", "pochhammer_product", "q_series_bruteforce",
    "q_series_by_top", "q_series_closed", "series_add", "series_inverse", "series_mul",
    "shift_factor",
]
