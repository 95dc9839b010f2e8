"""Orbits of composable matrix tuples: Kostant partitions, rank patterns, laces.

A tuple (A_1, ..., A_N) with A_i of shape d_i x d_{i-1} is a representation
of the equioriented type A quiver 0 -> 1 -> ... -> N. Its orbits under change
of basis at every vertex are indexed by Kostant partitions: multiplicities
m_ij >= 0 of the interval modules [i, j] whose column sums give d.

Arrays indexed by intervals 0 <= i <= j <= N are stored as flat tuples in
row-major order, (0,0), (0,1), ..., (0,N), (1,1), ..., (N,N); see
:func:`interval_index`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidInputError, ResourceCapError
from .linalg import bareiss_rank

DEFAULT_CAP = 2_000_000


def enumeration_cap(cap: int | None = None) -> int:
    """Explicit cap, else the QUIVER_CODIM_CAP environment variable, else the default."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("QUIVER_CODIM_CAP")
    return int(env) if env else DEFAULT_CAP


# ---------------------------------------------------------------------------
# Dimension vectors and interval indexing


@dataclass(frozen=True)
class DimensionVector:
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(x) for x in self.entries)
        if len(entries) < 2:
            raise InvalidInputError("a dimension vector needs at least two entries (N >= 1)")
        if any(x < 0 for x in entries):
            raise InvalidInputError(f"dimension vector entries must be >= 0, got {entries}")
        object.__setattr__(self, "entries", entries)

    @property
    def N(self) -> int:
        return len(self.entries) - 1

    @property
    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.entries))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, k):
        return self.entries[k]


def as_dims(d) -> DimensionVector:
    return d if isinstance(d, DimensionVector) else DimensionVector(tuple(d))


@lru_cache(maxsize=None)
def intervals(N: int) -> tuple[tuple[int, int], ...]:
    """All intervals [i, j] of 0..N in row-major order."""
    return tuple((i, j) for i in range(N + 1) for j in range(i, N + 1))


@lru_cache(maxsize=None)
def _index_table(N: int) -> dict[tuple[int, int], int]:
    return {iv: k for k, iv in enumerate(intervals(N))}


def interval_index(N: int, i: int, j: int) -> int:
    return _index_table(N)[(i, j)]


@lru_cache(maxsize=None)
def ext_pairs(N: int) -> tuple[tuple[int, int], ...]:
    """Index pairs (a, b) with Ext(M_a, M_b) = 1.

    For intervals [i, j] and [u, v] this is i+1 <= u <= j+1 <= v.
    """
    ivs = intervals(N)
    idx = _index_table(N)
    return tuple(
        (idx[(i, j)], idx[(u, v)])
        for (i, j) in ivs
        for (u, v) in ivs
        if i + 1 <= u <= j + 1 <= v
    )


@lru_cache(maxsize=None)
def ext_matrix(N: int) -> np.ndarray:
    K = len(intervals(N))
    E = np.zeros((K, K), dtype=np.int64)
    for a, b in ext_pairs(N):
        E[a, b] = 1
    return E


def rep_dim(d) -> int:
    d = as_dims(d)
    return sum(d[i - 1] * d[i] for i in range(1, len(d)))


# ---------------------------------------------------------------------------
# Kostant partitions and rank patterns


class _IntervalArray:
    """Shared behaviour of arrays indexed by intervals of 0..N."""

    dims: tuple[int, ...]
    entries: tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.dims) - 1

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[interval_index(self.N, i, j)]

    def get(self, i, j, default=0):
        if 0 <= i <= j <= self.N:
            return self[i, j]
        return default

    def rows(self) -> list[tuple[int, ...]]:
        N = self.N
        return [tuple(self[i, j] for j in range(i, N + 1)) for i in range(N + 1)]

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {iv: x for iv, x in zip(intervals(self.N), self.entries)}


@dataclass(frozen=True, order=True)
class KostantPartition(_IntervalArray):
    """Multiplicities m_ij of interval modules; entries in row-major order.

    Instances built by :func:`rank_to_kostant` may carry negative entries;
    :meth:`is_valid` tells whether it is an honest partition of ``dims``.
    """

    dims: tuple[int, ...]
    entries: tuple[int, ...]

    @classmethod
    def from_dict(cls, dims, mults: dict) -> "KostantPartition":
        dims = tuple(as_dims(dims))
        N = len(dims) - 1
        entries = [0] * len(intervals(N))
        for (i, j), x in mults.items():
            entries[interval_index(N, i, j)] = int(x)
        m = cls(dims, tuple(entries))
        if not m.is_valid():
            raise InvalidInputError(f"{mults} is not a Kostant partition of {dims}")
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "KostantPartition":
        """Build from upper-triangular rows and infer d from column sums."""
        N = len(rows) - 1
        entries = tuple(int(x) for row in rows for x in row)
        if len(entries) != len(intervals(N)):
            raise InvalidInputError("rows must be upper triangular")
        probe = cls(tuple([0] * (N + 1)), entries)
        return cls(probe.column_sums(), entries)

    def column_sums(self) -> tuple[int, ...]:
        N = self.N
        sums = [0] * (N + 1)
        for (i, j), x in zip(intervals(N), self.entries):
            for k in range(i, j + 1):
                sums[k] += x
        return tuple(sums)

    def is_valid(self) -> bool:
        return all(x >= 0 for x in self.entries) and self.column_sums() == self.dims

    @property
    def top(self) -> int:
        """m_0N, the multiplicity of the longest interval."""
        return self.entries[self.N]

    def nonzero(self) -> tuple[int, ...]:
        return tuple(x for x in self.entries if x)


@dataclass(frozen=True)
class RankPattern(_IntervalArray):
    """Ranks r_ij of the partial products A_j ... A_{i+1}; r_ii = d_i."""

    dims: tuple[int, ...]
    entries: tuple[int, ...]

    def __post_init__(self):
        if any(x < 0 for x in self.entries):
            raise InvalidInputError("rank pattern entries must be nonnegative")
        if tuple(self[i, i] for i in range(self.N + 1)) != self.dims:
            raise InvalidInputError("rank pattern diagonal must equal the dimension vector")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "RankPattern":
        entries = tuple(int(x) for row in rows for x in row)
        dims = tuple(int(row[0]) for row in rows)
        return cls(dims, entries)

    @property
    def top(self) -> int:
        return self.entries[self.N]

    def __le__(self, other):
        """Entrywise partial order; orbit closures are ordered the same way."""
        return all(a <= b for a, b in zip(self.entries, other.entries))


def enumerate_kostant_entries(d, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """Row-major entry tuples of all Kostant partitions of d, in lexicographic order.

    Row i is fixed by its tail sums t_k = sum_{j >= k} m_ij: t_i must equal
    what is left of column i, t is nonincreasing, and t_k cannot exceed what
    is left of column k. Every such choice extends to a full partition, so
    nothing is ever backtracked. Walking t_{k+1} downwards makes m_ik grow,
    which yields lexicographic order.
    """
    d = as_dims(d)
    N = d.N
    limit = enumeration_cap(cap)
    count = 0

    def rows(i, remaining):
        if i > N:
            yield ()
            return
        width = N - i + 1

        def tails(k, prev, acc):
            # acc holds t_i .. t_{k-1}
            if k > N:
                yield acc
                return
            for t in range(min(prev, remaining[k - i]), -1, -1):
                yield from tails(k + 1, t, acc + (t,))

        for t in tails(i + 1, remaining[0], (remaining[0],)):
            row = tuple(t[k] - (t[k + 1] if k + 1 < width else 0) for k in range(width))
            nxt = tuple(remaining[k] - t[k] for k in range(1, width))
            for rest in rows(i + 1, nxt):
                yield row + rest

    for entries in rows(0, tuple(d)):
        count += 1
        if count > limit:
            raise ResourceCapError(f"more than {limit} Kostant partitions for d={tuple(d)}")
        yield entries


def enumerate_kostant_partitions(d, cap: int | None = None) -> list[KostantPartition]:
    dims = tuple(as_dims(d))
    return [KostantPartition(dims, e) for e in enumerate_kostant_entries(dims, cap)]


@lru_cache(maxsize=4096)
def count_kostant_partitions(d) -> int:
    """Number of Kostant partitions of d, by memoised recursion over rows."""
    d = tuple(as_dims(d))

    @lru_cache(maxsize=None)
    def count(remaining):
        if not remaining:
            return 1
        width = len(remaining)

        def tails(k, prev, nxt):
            if k == width:
                return count(nxt)
            return sum(tails(k + 1, t, nxt + (remaining[k] - t,))
                       for t in range(min(prev, remaining[k]) + 1))

        return tails(1, remaining[0], ())

    return count(d)


def kostant_to_rank(m: KostantPartition) -> RankPattern:
    """r_ij = sum of m_kl over intervals [k, l] containing [i, j]."""
    N = m.N
    # R[i][j] accumulates over k <= i and l >= j
    R = [[0] * (N + 2) for _ in range(N + 1)]
    flat = iter(m.entries)
    dense = [[0] * (N + 1) for _ in range(N + 1)]
    for i, j in intervals(N):
        dense[i][j] = next(flat)
    for i in range(N + 1):
        for j in range(N, i - 1, -1):
            above = R[i - 1][j] - R[i - 1][j + 1] if i else 0
            R[i][j] = dense[i][j] + R[i][j + 1] + above
    return RankPattern(m.dims, tuple(R[i][j] for i, j in intervals(N)))


def rank_to_kostant(r: RankPattern) -> KostantPartition:
    """Inclusion-exclusion inverse; may produce negative entries."""
    N = r.N
    entries = tuple(
        r.get(i, j) - r.get(i, j + 1) - r.get(i - 1, j) + r.get(i - 1, j + 1)
        for i, j in intervals(N)
    )
    return KostantPartition(r.dims, entries)


def is_orbit_rank_pattern(r: RankPattern) -> bool:
    return all(x >= 0 for x in rank_to_kostant(r).entries)


def orbit_codim(m: KostantPartition) -> int:
    """Codimension of the orbit of m: sum of m_a * m_b over Ext-pairs (a, b)."""
    e = m.entries
    return sum(e[a] * e[b] for a, b in ext_pairs(m.N) if e[a] and e[b])


def orbit_codims(N: int, entries: np.ndarray) -> np.ndarray:
    """Vectorised :func:`orbit_codim` over the rows of an entry matrix.

    Uses int64 when the largest possible value fits, else Python ints.
    """
    if entries.size == 0:
        return np.zeros(entries.shape[0], dtype=np.int64)
    biggest = int(entries.max()) if entries.dtype != object else max(int(x) for x in entries.flat)
    n_pairs = len(ext_pairs(N))
    if biggest * biggest * max(n_pairs, 1) < 2**62:
        M = entries.astype(np.int64, copy=False)
        return np.einsum("ni,ij,nj->n", M, ext_matrix(N), M)
    M = entries.astype(object)
    return np.array([sum(row[a] * row[b] for a, b in ext_pairs(N)) for row in M], dtype=object)


def longest_root_shift(m: KostantPartition, p: int) -> KostantPartition:
    """Add p copies of the longest interval [0, N] (the dimension vector grows by p)."""
    if m.top + p < 0:
        raise InvalidInputError(f"m_0N + p = {m.top + p} < 0")
    entries = list(m.entries)
    entries[m.N] += p
    return KostantPartition(tuple(x + p for x in m.dims), tuple(entries))


# ---------------------------------------------------------------------------
# Orbit tables, components


@dataclass(frozen=True)
class OrbitDescriptor:
    kostant: KostantPartition
    rank: RankPattern
    codim: int

    @property
    def top_rank(self) -> int:
        return self.rank.top

    @classmethod
    def of(cls, m: KostantPartition) -> "OrbitDescriptor":
        return cls(m, kostant_to_rank(m), orbit_codim(m))


@dataclass(frozen=True)
class OrbitTable:
    """All Kostant partitions of d as an entry matrix, with codims and m_0N."""

    dims: tuple[int, ...]
    entries: np.ndarray
    codims: np.ndarray
    tops: np.ndarray

    def __len__(self):
        return self.entries.shape[0]

    def partition(self, row: int) -> KostantPartition:
        return KostantPartition(self.dims, tuple(int(x) for x in self.entries[row]))


def orbit_table(d, cap: int | None = None) -> OrbitTable:
    dims = tuple(as_dims(d))
    N = len(dims) - 1
    K = len(intervals(N))
    rows = list(enumerate_kostant_entries(dims, cap))
    entries = np.array(rows, dtype=np.int64).reshape(len(rows), K)
    return OrbitTable(dims, entries, orbit_codims(N, entries), entries[:, N].copy())


def check_rank(d, r: int) -> None:
    d = as_dims(d)
    if not 0 <= r <= min(d):
        raise InvalidInputError(f"rank r={r} must satisfy 0 <= r <= min(d) = {min(d)}")


def enumerate_components(d, r: int, cap: int | None = None) -> list[OrbitDescriptor]:
    """Irreducible components of the locus rank(A_N ... A_1) <= r.

    O_s lies in the closure of O_r exactly when s <= r entrywise, so the
    components are the closures of the orbits whose rank patterns are
    maximal among those with r_0N <= r.
    """
    d = as_dims(d)
    check_rank(d, r)
    table = orbit_table(d, cap)
    keep = np.nonzero(table.tops <= r)[0]
    parts = [table.partition(int(k)) for k in keep]
    ranks = np.array([kostant_to_rank(m).entries for m in parts], dtype=np.int64)
    maximal = []
    for a in range(len(parts)):
        above = np.all(ranks >= ranks[a], axis=1)
        above[a] = False
        # distinct orbits never share a rank pattern
        if not above.any():
            maximal.append(OrbitDescriptor.of(parts[a]))
    return maximal


@dataclass(frozen=True)
class ComponentReport:
    """Codimension C and number theta of top-dimensional components."""

    dims: tuple[int, ...]
    r: int
    C: int
    theta: int
    method: str
    witnesses: tuple = ()
    details: dict | None = None


def c_theta_by_top(table: OrbitTable) -> dict[int, tuple[int, int, np.ndarray]]:
    """For every value t of m_0N: (min codim, multiplicity, witness rows)."""
    out = {}
    for t in np.unique(table.tops):
        rows = np.nonzero(table.tops == t)[0]
        codims = table.codims[rows]
        C = int(min(codims))
        hits = rows[codims == C]
        out[int(t)] = (C, len(hits), hits)
    return out


def top_components_bruteforce(d, r: int, cap: int | None = None) -> ComponentReport:
    d = as_dims(d)
    check_rank(d, r)
    table = orbit_table(d, cap)
    C, theta, hits = c_theta_by_top(table)[r]
    witnesses = tuple(OrbitDescriptor.of(table.partition(int(k))) for k in hits)
    return ComponentReport(tuple(d), r, C, theta, "brute", witnesses)


# ---------------------------------------------------------------------------
# Lace diagrams and explicit representatives


@dataclass(frozen=True)
class Lace:
    start: int
    end: int
    dots: tuple[int, ...]  # dot index used in columns start..end


@dataclass(frozen=True)
class LaceDiagram:
    dims: tuple[int, ...]
    laces: tuple[Lace, ...]

    def __post_init__(self):
        used = set()
        for lace in self.laces:
            if len(lace.dots) != lace.end - lace.start + 1:
                raise InvalidInputError("lace dot list does not match its interval")
            for col, dot in zip(range(lace.start, lace.end + 1), lace.dots):
                if not 0 <= dot < self.dims[col] or (col, dot) in used:
                    raise InvalidInputError(f"dot {dot} of column {col} is missing or shared")
                used.add((col, dot))

    def kostant(self) -> KostantPartition:
        counts = {}
        for lace in self.laces:
            counts[(lace.start, lace.end)] = counts.get((lace.start, lace.end), 0) + 1
        return KostantPartition.from_dict(self.dims, counts)

    def is_horizontal(self) -> bool:
        return all(len(set(lace.dots)) == 1 for lace in self.laces)

    def matrices(self) -> "MatrixTuple":
        mats = [_zeros(self.dims[k], self.dims[k - 1]) for k in range(1, len(self.dims))]
        for lace in self.laces:
            for k in range(lace.start + 1, lace.end + 1):
                src = lace.dots[k - 1 - lace.start]
                dst = lace.dots[k - lace.start]
                mats[k - 1][dst, src] = 1
        return MatrixTuple(tuple(mats))


def lace_diagram(m: KostantPartition) -> LaceDiagram:
    """Greedy lace diagram: longest intervals first, ties by left endpoint,
    each lace taking the first free dot of every column it crosses."""
    if not m.is_valid():
        raise InvalidInputError("not a Kostant partition")
    next_free = [0] * (m.N + 1)
    laces = []
    order = sorted(intervals(m.N), key=lambda iv: (-(iv[1] - iv[0]), iv[0]))
    for i, j in order:
        for _ in range(m[i, j]):
            dots = tuple(next_free[k] for k in range(i, j + 1))
            for k in range(i, j + 1):
                next_free[k] += 1
            laces.append(Lace(i, j, dots))
    return LaceDiagram(m.dims, tuple(laces))


def horizontal_lace_diagram(m: KostantPartition) -> LaceDiagram:
    """A diagram of m whose laces each stay in one row; needs weakly increasing d.

    Row p exists in column k when p < d_k, so with nested columns any free
    row at the start of a lace stays available until its end.
    """
    d = m.dims
    if any(d[k] > d[k + 1] for k in range(len(d) - 1)):
        raise InvalidInputError(f"d={d} is not weakly increasing; horizontal laces may not exist")
    busy_until = [-1] * (max(d) if d else 0)
    laces = []
    for i in range(m.N + 1):
        starting = [(i, j) for j in range(m.N, i - 1, -1) for _ in range(m[i, j])]
        free = [p for p in range(d[i]) if busy_until[p] < i]
        for (a, b), p in zip(starting, free):
            busy_until[p] = b
            laces.append(Lace(a, b, (p,) * (b - a + 1)))
    return LaceDiagram(d, tuple(laces))


@dataclass(frozen=True)
class MatrixTuple:
    """Composable matrices A_1..A_N (object arrays of ints or Fractions)."""

    matrices: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = self.matrices
        if not mats:
            raise InvalidInputError("a matrix tuple needs at least one matrix")
        for a, b in zip(mats, mats[1:]):
            if b.shape[1] != a.shape[0]:
                raise InvalidInputError(f"shapes {a.shape} and {b.shape} do not compose")

    @classmethod
    def from_lists(cls, mats, dims=None) -> "MatrixTuple":
        arrays = []
        for k, mat in enumerate(mats):
            arr = np.array([[Fraction(x) for x in row] for row in mat], dtype=object)
            if dims is not None:
                arr = arr.reshape(dims[k + 1], dims[k])
            arrays.append(arr)
        return cls(tuple(arrays))

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.matrices[0].shape[1],) + tuple(a.shape[0] for a in self.matrices)

    def product(self, i: int = 0, j: int | None = None) -> np.ndarray:
        """A_j ... A_{i+1}, of shape d_j x d_i."""
        j = len(self.matrices) if j is None else j
        dims = self.dims
        out = _zeros(dims[i], dims[i])
        for k in range(dims[i]):
            out[k, k] = 1
        for k in range(i + 1, j + 1):
            out = _matmul(self.matrices[k - 1], out)
        return out


def _zeros(rows, cols) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    out.fill(0)
    return out


def _matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] == 0:
        return _zeros(a.shape[0], b.shape[1])
    return a.dot(b)


def mult(t: "MatrixTuple") -> np.ndarray:
    """The full product A_N ... A_1."""
    return t.product()


def lace_representative(m: KostantPartition) -> MatrixTuple:
    return lace_diagram(m).matrices()


def rank_pattern_of(t: MatrixTuple) -> RankPattern:
    """Exact ranks of all partial products, each built from the previous one."""
    dims = t.dims
    N = len(dims) - 1
    # plain lists: the matrices are tiny and numpy object arrays add overhead
    mats = [a.tolist() for a in t.matrices]
    entries = []
    for i in range(N + 1):
        entries.append(dims[i])
        prod = None
        for j in range(i + 1, N + 1):
            a = mats[j - 1]
            if prod is None:
                prod = a
            else:
                cols = list(zip(*prod)) if prod and prod[0] else []
                prod = [[sum(x * y for x, y in zip(row, col)) for col in cols] if cols
                        else [0] * dims[i] for row in a]
            entries.append(bareiss_rank(prod) if dims[i] and dims[j] else 0)
    return RankPattern(dims, tuple(entries))


def dense_orbits(d) -> list[KostantPartition]:
    """Kostant partitions of d with zero orbit codimension."""
    table = orbit_table(d)
    return [table.partition(int(k)) for k in np.nonzero(table.codims == 0)[0]]


__all__ = [
    "ComponentReport", "DimensionVector", "KostantPartition", "Lace", "LaceDiagram",
    "MatrixTuple", "OrbitDescriptor", "OrbitTable", "RankPattern", "as_dims",
    "c_theta_by_top", "check_rank", "count_kostant_partitions", "dense_orbits",
    "enumerate_components", "enumerate_kostant_partitions", "ext_pairs",
    "horizontal_lace_diagram", "interval_index", "intervals", "is_orbit_rank_pattern",
    "kostant_to_rank", "lace_diagram", "lace_representative", "longest_root_shift", "mult",
    "orbit_codim", "orbit_codims", "orbit_table", "rank_pattern_of", "rank_to_kostant",
    "rep_dim", "top_components_bruteforce",
]
