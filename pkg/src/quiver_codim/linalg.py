"""Exact matrix rank.

``bareiss_rank`` is fraction-free Gaussian elimination over the integers
(rationals are cleared row by row first). ``rank_mod_p`` is a fast
numpy elimination over a prime field; it can only under-estimate the
rank over Q, which callers use as a one-sided certificate.
"""

from fractions import Fraction
from math import gcd, isqrt, lcm

import numpy as np

DEFAULT_PRIME = 2_147_483_629  # prime, below 2**31 so products fit in int64
PRIMES = (2_147_483_629, 2_147_483_587, 2_147_483_579, 2_147_483_563, 2_147_483_549)


def _integer_rows(rows):
    out = []
    for row in rows:
        if all(type(x) is int for x in row):
            out.append(list(row))
            continue
        row = [Fraction(x) for x in row]
        den = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * den) for x in row])
    return out


def bareiss_rank(rows):
    """Rank over Q of a matrix given as a sequence of rows.

    Entries may be ints or Fractions. Every intermediate value stays an
    integer: each update divides exactly by the previous pivot.
    """
    a = _integer_rows(rows)
    if not a or not a[0]:
        return 0
    n_rows, n_cols = len(a), len(a[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        pivot = None
        for i in range(rank, n_rows):
            if a[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][col]
        prow = a[rank]
        for i in range(rank + 1, n_rows):
            row = a[i]
            f = row[col]
            if f == 0:
                row[:] = [(p * x) // prev if x else 0 for x in row]
                continue
            for k in range(col, n_cols):
                row[k] = (p * row[k] - f * prow[k]) // prev
        prev = p
        rank += 1
        if rank == n_rows:
            break
    return rank


def nullspace(rows):
    """Basis of the right nullspace over Q, as lists of Fractions.

    Plain reduced row echelon form on Fractions; the returned vectors are
    scaled to primitive integer vectors.
    """
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return []
    n_rows, n_cols = len(a), len(a[0])
    pivots = []
    r = 0
    for col in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == n_rows:
            break
    free = [c for c in range(n_cols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n_cols
        v[fcol] = Fraction(1)
        for i, pcol in enumerate(pivots):
            v[pcol] = -a[i][fcol]
        den = lcm(*(x.denominator for x in v))
        ints = [int(x * den) for x in v]
        g = gcd(*ints)
        basis.append([Fraction(x, g) for x in ints])
    return basis


def rank_mod_p(matrix, p=DEFAULT_PRIME):
    """Rank of an integer matrix over GF(p); a lower bound for the rank over Q."""
    a = np.array(matrix, dtype=object)
    if a.size == 0:
        return 0
    a = np.array(np.mod(a, p), dtype=np.int64)
    n_rows, n_cols = a.shape
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), p - 2, p)
        a[rank] = (a[rank] * inv) % p
        below = a[rank + 1:, col].copy()
        idx = np.nonzero(below)[0]
        if idx.size:
            rows = rank + 1 + idx
            # entries < 2**31: a - f*b stays inside int64; columns before
            # col are already zero in the pivot row
            a[rows, col:] = (a[rows, col:] - below[idx, None] * a[rank, col:]) % p
        rank += 1
    return rank


def rref_mod_p(matrix, p=DEFAULT_PRIME):
    """Reduced row echelon form over GF(p): (rows as int64 array, pivot columns)."""
    a = np.array(np.mod(np.array(matrix, dtype=object), p), dtype=np.int64)
    if a.ndim != 2:
        a = a.reshape(0, 0)
    n_rows, n_cols = a.shape
    pivots = []
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), p - 2, p)
        a[rank] = (a[rank] * inv) % p
        column = a[:, col].copy()
        column[rank] = 0
        idx = np.nonzero(column)[0]
        if idx.size:
            a[idx, col:] = (a[idx, col:] - column[idx, None] * a[rank, col:]) % p
        pivots.append(col)
        rank += 1
    return a[:rank], pivots


def nullspace_mod_p(matrix, p=DEFAULT_PRIME):
    """Nullspace basis over GF(p) normalised to 1 at its own free column.

    Returns (free columns, basis as an int64 array with one vector per row).
    """
    reduced, pivots = rref_mod_p(matrix, p)
    n_cols = np.shape(matrix)[1] if np.ndim(matrix) == 2 else 0
    pivot_set = set(pivots)
    free = [c for c in range(n_cols) if c not in pivot_set]
    basis = np.zeros((len(free), n_cols), dtype=np.int64)
    for k, fcol in enumerate(free):
        basis[k, fcol] = 1
        if pivots:
            basis[k, pivots] = (-reduced[:, fcol]) % p
    return free, basis


def rational_reconstruction(a: int, m: int) -> Fraction | None:
    """The fraction n/d with |n|, d <= sqrt(m/2) congruent to a mod m, if any."""
    bound = isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)
