"""Deep linear networks: fibers of the multiplication map and their rlct.

For layer widths d and a target matrix B of rank r, the loss
K(A) = ||A_N ... A_1 - B||^2 vanishes exactly on the fiber mult^{-1}(B).
Its real log-canonical threshold is half the fiber codimension, and the
fiber codimension is C(d, r) + r (d_0 + d_N - r).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidInputError
from .qip_lattice import codim_closed_form, frac, relevant_data, theta_closed_form
from .quiver_core import DimensionVector, MatrixTuple, as_dims, check_rank, mult


def reduce_rank(d, r: int) -> DimensionVector:
    d = as_dims(d)
    check_rank(d, r)
    return DimensionVector(tuple(x - r for x in d))


def fiber_offset(d, r: int) -> int:
    d = as_dims(d)
    return r * (d[0] + d[-1] - r)


def fiber_codim(d, r: int) -> int:
    d = as_dims(d)
    check_rank(d, r)
    return codim_closed_form(d, r) + fiber_offset(d, r)


def rlct(d, r: int) -> Fraction:
    return Fraction(fiber_codim(d, r), 2)


@dataclass(frozen=True)
class Multiplicity:
    value: int
    flags: tuple[str, ...] = ()


def rlcm_detail(d, r: int) -> Multiplicity:
    """m^2 {S~/m} (1 - {S~/m}), flagged at the boundary cases.

    When {S~/m} = 0 the expression is 0 although a pole has order >= 1; the
    value is reported as is, with the flag ``fractional_part_zero``. When
    r = min d the relevant count is undefined: the fiber is smooth and the
    loss is Morse-Bott along it, so the multiplicity is 1 (flag
    ``smooth_fiber``); if moreover min d = 0 the loss vanishes identically
    (flag ``loss_identically_zero``).
    """
    d = as_dims(d)
    check_rank(d, r)
    data = relevant_data(d, r)
    if data is None:
        flags = ("smooth_fiber",) + (("loss_identically_zero",) if min(d) == 0 else ())
        return Multiplicity(1, flags)
    m, S = data
    f = frac(Fraction(S, m))
    value = m * m * f * (1 - f)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral multiplicity {value}")
    return Multiplicity(int(value), ("fractional_part_zero",) if f == 0 else ())


def rlcm(d, r: int) -> int:
    return rlcm_detail(d, r).value


@dataclass(frozen=True)
class DlnReport:
    d: tuple[int, ...]
    r: int
    sigma_codim: int
    fiber_codim: int
    theta: int
    rlct: Fraction
    rlcm: int
    flags: tuple[str, ...]


def dln_report(d, r: int) -> DlnReport:
    d = as_dims(d)
    check_rank(d, r)
    sigma = codim_closed_form(d, r)
    fib = sigma + fiber_offset(d, r)
    mult_ = rlcm_detail(d, r)
    return DlnReport(tuple(d), r, sigma, fib, theta_closed_form(d, r),
                     Fraction(fib, 2), mult_.value, mult_.flags)


def evaluate_loss(t: MatrixTuple, B) -> Fraction:
    """Squared Frobenius norm of A_N ... A_1 - B, exactly."""
    B = np.asarray(B, dtype=object)
    P = mult(t)
    if B.shape != P.shape:
        raise InvalidInputError(f"target has shape {B.shape}, the product has shape {P.shape}")
    return sum(((Fraction(x) - Fraction(y)) ** 2 for x, y in zip(P.flat, B.flat)), Fraction(0))


__all__ = [
    "DlnReport", "Multiplicity", "dln_report", "evaluate_loss", "fiber_codim",
    "fiber_offset", "reduce_rank", "rlcm", "rlcm_detail", "rlct",
]
