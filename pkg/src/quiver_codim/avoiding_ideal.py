"""Graded kernel of the restriction map phi_r, computed by exact linear algebra.

The source is H_d, the ring of polynomials in x_{i,1..d_i} symmetric in each
block, freely generated by the elementary symmetric polynomials
a_{i,k} = e_k(x_{i,1}, ..., x_{i,d_i}) of degree k. phi_r sends x_{i,j} to y_j
for j <= r+1 and fixes the other variables. The lowest degree in which the
kernel is nonzero equals the codimension C of the rank-r locus, and the
kernel's rank there equals theta.

Images are written in one of two target bases:

``"invariant"``
    monomials in E_a = e_a(y_1..y_{r+1}) and F_{i,b} = e_b(x_{i,r+2..d_i}).
    phi_r(a_{i,k}) = sum_{a+b=k} E_a F_{i,b}. These generators are
    algebraically independent, so this is a faithful and much smaller
    coordinate system for the image; kernel ranks are computed here.
``"expanded"``
    monomials in the actual variables y_j and x_{i,j}.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

from .errors import InvalidInputError, ResourceCapError
from .linalg import PRIMES, nullspace, nullspace_mod_p, rank_mod_p, rational_reconstruction
from .quiver_core import as_dims, check_rank

DEFAULT_BASIS_CAP = 20_000

Poly = dict  # exponent tuple -> int coefficient


def poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in p.items():
        for eb, cb in q.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            c = out.get(e, 0) + ca * cb
            if c:
                out[e] = c
            else:
                out.pop(e, None)
    return out


def poly_add(p: Poly, q: Poly, scale: int = 1) -> Poly:
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


@dataclass(frozen=True)
class Generator:
    vertex: int
    degree: int

    def name(self, n_vertices: int) -> str:
        if n_vertices <= 26:
            return f"{chr(ord('a') + self.vertex)}{self.degree}"
        return f"e{self.vertex}_{self.degree}"


class PhiMap:
    """phi_r for a fixed dimension vector, with memoised images."""

    def __init__(self, d, r: int, target: str = "invariant"):
        d = as_dims(d)
        check_rank(d, r)
        if r >= min(d):
            raise InvalidInputError(
                f"phi_r needs r < min(d) (got r={r}, min d={min(d)}); "
                "for r = min(d) the rank-r locus is dense")
        if target not in ("invariant", "expanded"):
            raise InvalidInputError(f"unknown target basis {target!r}")
        self.d = tuple(d)
        self.r = r
        self.target = target
        self.generators = tuple(Generator(i, k) for i, di in enumerate(self.d) for k in range(1, di + 1))
        self.target_vars = self._target_variables()
        self._images: dict = {(0,) * len(self.generators): {(0,) * len(self.target_vars): 1}}

    # -- target variables ---------------------------------------------------

    def _target_variables(self) -> tuple[str, ...]:
        ry = self.r + 1
        if self.target == "invariant":
            names = [f"E{a}" for a in range(1, ry + 1)]
            names += [f"F{i}_{b}" for i, di in enumerate(self.d) for b in range(1, di - ry + 1)]
        else:
            names = [f"y{j}" for j in range(1, ry + 1)]
            names += [f"x{i}_{j}" for i, di in enumerate(self.d) for j in range(ry + 1, di + 1)]
        return tuple(names)

    @lru_cache(maxsize=None)
    def generator_image(self, n: int) -> Poly:
        g = self.generators[n]
        ry = self.r + 1
        one = (0,) * len(self.target_vars)
        out: Poly = {}
        if self.target == "invariant":
            rest = self.d[g.vertex] - ry
            for a in range(0, min(ry, g.degree) + 1):
                b = g.degree - a
                if b > rest:
                    continue
                e = list(one)
                if a:
                    e[self.target_vars.index(f"E{a}")] += 1
                if b:
                    e[self.target_vars.index(f"F{g.vertex}_{b}")] += 1
                out[tuple(e)] = out.get(tuple(e), 0) + 1
        else:
            names = [f"y{j}" for j in range(1, ry + 1)]
            names += [f"x{g.vertex}_{j}" for j in range(ry + 1, self.d[g.vertex] + 1)]
            for subset in combinations(names, g.degree):
                e = [0] * len(self.target_vars)
                for v in subset:
                    e[self.target_vars.index(v)] += 1
                out[tuple(e)] = out.get(tuple(e), 0) + 1
        return out

    # -- source monomials ---------------------------------------------------

    def source_basis(self, n: int, cap: int | None = None) -> list[tuple[int, ...]]:
        """Exponent vectors over the generators with weighted degree n, lexicographically."""
        limit = DEFAULT_BASIS_CAP if cap is None else cap
        degs = [g.degree for g in self.generators]
        out = []

        def rec(k, left, acc):
            if k == len(degs):
                if left == 0:
                    out.append(tuple(acc))
                    if len(out) > limit:
                        raise ResourceCapError(f"degree-{n} basis exceeds the cap {limit}")
                return
            for e in range(left // degs[k] + 1):
                acc.append(e)
                rec(k + 1, left - e * degs[k], acc)
                acc.pop()

        rec(0, n, [])
        return out

    def monomial_image(self, mono: tuple[int, ...]) -> Poly:
        img = self._images.get(mono)
        if img is not None:
            return img
        k = next(i for i, e in enumerate(mono) if e)
        lower = list(mono)
        lower[k] -= 1
        img = poly_mul(self.monomial_image(tuple(lower)), self.generator_image(k))
        self._images[mono] = img
        return img

    def apply(self, element: Poly) -> Poly:
        out: Poly = {}
        for mono, c in element.items():
            out = poly_add(out, self.monomial_image(mono), c)
        return out

    # -- parsing and printing -----------------------------------------------

    def source_names(self) -> list[str]:
        return [g.name(len(self.d)) for g in self.generators]

    def format_source(self, element: Poly) -> str:
        return format_poly(element, self.source_names())

    def format_target(self, element: Poly) -> str:
        return format_poly(element, list(self.target_vars))

    def parse_source(self, text: str) -> Poly:
        return parse_poly(text, self.source_names())

    def parse_target(self, text: str) -> Poly:
        return parse_poly(text, list(self.target_vars))


def format_poly(p: Poly, names: list[str]) -> str:
    if not p:
        return "0"
    terms = []
    for e in sorted(p, key=lambda e: (-sum(e), tuple(-x for x in e))):
        c = p[e]
        factors = [n if x == 1 else f"{n}^{x}" for n, x in zip(names, e) if x]
        mono = "*".join(factors)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    text = " ".join(f"{s} {b}" for s, b in terms)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")


def parse_poly(text: str, names: list[str]) -> Poly:
    """Parse sums of terms like ``-2*a1^2*b2`` over the given variable names."""
    index = {n: k for k, n in enumerate(names)}
    out: Poly = {}
    pos = 0
    text = text.strip()
    while pos < len(text):
        match = _TERM.match(text, pos)
        if not match:
            raise InvalidInputError(f"cannot parse polynomial near {text[pos:]!r}")
        sign = -1 if match.group(1) == "-" else 1
        coeff = sign
        e = [0] * len(names)
        for factor in match.group(2).split("*"):
            factor = factor.strip()
            if not factor:
                continue
            base, _, power = factor.partition("^")
            base = base.strip()
            power = int(power) if power else 1
            if base.isdigit():
                coeff *= int(base) ** power
            elif base in index:
                e[index[base]] += power
            else:
                raise InvalidInputError(f"unknown variable {base!r}")
        out = poly_add(out, {tuple(e): coeff})
        pos = match.end()
    return out


def apply_phi(d, r: int, element: Poly, target: str = "expanded") -> Poly:
    return PhiMap(d, r, target).apply(element)


@dataclass(frozen=True)
class GradedBasis:
    degree: int
    generators: tuple[str, ...]
    monomials: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.monomials)


@dataclass(frozen=True)
class GradedKernelResult:
    degree: int
    source_dim: int
    kernel_rank: int
    kernel_basis: tuple[dict, ...] | None = None


def graded_basis(d, n: int, cap: int | None = None) -> GradedBasis:
    """Monomials of degree n in the block elementary symmetric polynomials of d."""
    d = tuple(as_dims(d))
    gens = tuple(Generator(i, k) for i, di in enumerate(d) for k in range(1, di + 1))
    phi = PhiMap.__new__(PhiMap)
    phi.generators = gens
    mons = PhiMap.source_basis(phi, n, cap)
    return GradedBasis(n, tuple(g.name(len(d)) for g in gens), tuple(mons))


def _image_matrix(phi: PhiMap, basis):
    """Matrix with one column per source monomial, one row per target monomial."""
    images = [phi.monomial_image(mono) for mono in basis]
    targets = sorted({e for img in images for e in img})
    row_index = {e: k for k, e in enumerate(targets)}
    matrix = [[0] * len(basis) for _ in targets]
    for k, img in enumerate(images):
        for e, c in img.items():
            matrix[row_index[e]][k] = c
    return matrix, targets


def _primitive(vec: list[Fraction]) -> list[int]:
    den = lcm(*(x.denominator for x in vec))
    ints = [int(x * den) for x in vec]
    g = gcd(*ints)
    return [x // g for x in ints]


def _lift_kernel(phi: PhiMap, basis, matrix, free, residues):
    """Lift a modular kernel basis to Q, or return None.

    Residues modulo several primes are combined by CRT and rationally
    reconstructed; a lifted vector only counts once phi maps it to 0 exactly.
    """
    modulus = 1
    combined = None
    for p in PRIMES:
        if p == PRIMES[0]:
            vecs = residues
        else:
            free_p, vecs = nullspace_mod_p(matrix, p)
            if free_p != free:
                continue
        vecs = [[int(x) for x in row] for row in vecs]
        if combined is None:
            combined = vecs
        else:
            inv = pow(modulus, -1, p)
            combined = [
                [a + modulus * (((b - a) * inv) % p) for a, b in zip(old, new)]
                for old, new in zip(combined, vecs)
            ]
        modulus *= p
        lifted = []
        for row in combined:
            fracs = [rational_reconstruction(x, modulus) for x in row]
            if any(f is None for f in fracs):
                break
            ints = _primitive(fracs)
            element = {basis[k]: c for k, c in enumerate(ints) if c}
            if phi.apply(element):
                break
            lifted.append(element)
        else:
            return tuple(lifted)
    return None


def kernel_rank_at_degree(d, r: int, n: int, *, with_basis: bool = False,
                          cap: int | None = None, target: str = "invariant",
                          phi: PhiMap | None = None) -> GradedKernelResult:
    """Rank of the degree-n part of ker(phi_r), exactly.

    The kernel over GF(p) is at least as large as the kernel over Q. When
    its basis lifts to vectors that phi kills exactly, the two agree, which
    certifies the rank without elimination over Q. Fraction-free elimination
    is the fallback when lifting fails.
    """
    phi = phi or PhiMap(d, r, target)
    basis = phi.source_basis(n, cap)
    limit = DEFAULT_BASIS_CAP if cap is None else cap
    matrix, targets = _image_matrix(phi, basis)
    if len(targets) > limit:
        raise ResourceCapError(f"degree-{n} target basis exceeds the cap {limit}")
    dim = len(basis)
    if not targets:
        kernel = tuple({mono: 1} for mono in basis)
        return GradedKernelResult(n, dim, dim, kernel if with_basis else None)
    if rank_mod_p(matrix, PRIMES[0]) == dim:
        return GradedKernelResult(n, dim, 0, () if with_basis else None)
    free, residues = nullspace_mod_p(matrix, PRIMES[0])
    kernel = _lift_kernel(phi, basis, matrix, free, residues)
    if kernel is None:
        vectors = nullspace(matrix)
        kernel = tuple({basis[k]: int(c) for k, c in enumerate(v) if c} for v in vectors)
    return GradedKernelResult(n, dim, len(kernel), kernel if with_basis else None)


@dataclass(frozen=True)
class LowestKernel:
    C: int
    theta: int
    result: GradedKernelResult | None

    def __iter__(self):
        return iter((self.C, self.theta))


def lowest_kernel(d, r: int = 0, n_max: int | None = None, *, with_basis: bool = False,
                  cap: int | None = None) -> LowestKernel:
    """(C, theta) as the lowest degree with a nonzero kernel, and its rank.

    For r = min d the locus is dense: every class is supported on it, so
    the lowest piece is the constants (C = 0, theta = 1).
    """
    d = as_dims(d)
    check_rank(d, r)
    if r == min(d):
        return LowestKernel(0, 1, None)
    if n_max is None:
        from .qip_lattice import codim_closed_form

        n_max = codim_closed_form(d, r)
    phi = PhiMap(d, r)
    for n in range(1, n_max + 1):
        res = kernel_rank_at_degree(d, r, n, with_basis=with_basis, cap=cap, phi=phi)
        if res.kernel_rank:
            return LowestKernel(n, res.kernel_rank, res)
    raise ResourceCapError(f"no kernel found up to degree {n_max}; raise n_max")


__all__ = [
    "GradedBasis", "GradedKernelResult", "LowestKernel", "PhiMap", "apply_phi",
    "format_poly", "graded_basis", "kernel_rank_at_degree", "lowest_kernel",
    "parse_poly", "poly_add", "poly_mul",
]
