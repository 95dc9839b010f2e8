from itertools import permutations

import pytest

from quiver_codim.errors import InvalidInputError, TruncationError
from quiver_codim.qseries import (
    QSeries,
    euler_coefficients,
    extract_C_theta,
    pochhammer_inverse,
    pochhammer_multi,
    pochhammer_product,
    q_series_bruteforce,
    q_series_by_top,
    q_series_closed,
    series_add,
    series_inverse,
    series_mul,
    shift_factor,
)


def partitions_with_parts_at_most(n, k):
    """Count partitions of n into parts of size <= k, by brute recursion."""
    def count(n, largest):
        if n == 0:
            return 1
        return sum(count(n - p, p) for p in range(1, min(n, largest) + 1))
    return count(n, k)


def test_geometric_series():
    T = 10
    one_minus_q = QSeries.from_poly([1, -1], T)
    geometric = QSeries((1,) * (T + 1))
    assert one_minus_q * geometric == QSeries.one(T)
    assert series_inverse(one_minus_q) == geometric


def test_ring_axioms():
    a = QSeries((1, 2, -3, 0, 5, 1, 0))
    b = QSeries((-1, 0, 4, 7, 1, 0, 2))
    c = QSeries((2, 1, 1, -1, 0, 3, 9))
    assert series_mul(a, b) == series_mul(b, a)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert series_add(a, b) - b == a
    assert a * series_inverse(a) == QSeries.one(6)
    with pytest.raises(InvalidInputError):
        QSeries((2, 1)).inverse()


def test_truncation_is_the_minimum():
    a = QSeries((1, 1, 1, 1, 1))
    b = QSeries((1, 1, 1))
    assert (a + b).T == 2
    assert (a * b).T == 2
    assert a.shift(2).coeffs == (0, 0, 1, 1, 1)
    with pytest.raises(InvalidInputError):
        b.truncate(4)


def test_pochhammer_inverse():
    assert pochhammer_inverse(0, 6) == QSeries.one(6)
    assert pochhammer_inverse(1, 6).coeffs == (1,) * 7
    assert pochhammer_inverse(2, 5).coeffs == (1, 1, 2, 2, 3, 3)
    for s in range(5):
        P = pochhammer_inverse(s, 12)
        assert list(P.coeffs) == [partitions_with_parts_at_most(n, s) for n in range(13)]
        assert P * pochhammer_product(1, s, 12) == QSeries.one(12)


def test_pochhammer_multi():
    assert pochhammer_multi([], 5) == QSeries.one(5)
    assert pochhammer_multi([1, 1], 6).coeffs == tuple(n + 1 for n in range(7))
    assert pochhammer_multi([3, 0, 2], 4)[0] == 1


def test_known_bruteforce_series():
    assert q_series_bruteforce((2, 2, 2), 0, 4).coeffs == (0, 0, 0, 1, 6)
    assert q_series_bruteforce((2, 3, 2), 0, 5).coeffs == (0, 0, 0, 0, 2, 7)
    assert q_series_bruteforce((2, 0, 3), 0, 3)[0] == 1


def test_known_closed_series():
    assert q_series_closed((3, 3, 3), 0, 11).coeffs[7:] == (2, 8, 27, 67, 151)
    assert q_series_closed((3, 3, 3), 0, 11).coeffs[:7] == (0,) * 7
    assert q_series_closed((2, 4, 2), 0, 5).coeffs == (0, 0, 0, 0, 1, 4)
    big = q_series_closed((4, 4, 4, 5, 5, 5, 5, 5, 5, 6, 6, 6), 0, 15)
    assert big.coeffs[:12] == (0,) * 12
    assert big.coeffs[12:] == (28, 508, 5129, 37424)


def test_extract():
    assert extract_C_theta(QSeries((0, 0, 0, 1, 6))) == (3, 1)
    assert extract_C_theta(QSeries((0, 0, 0, 0, 2, 7))) == (4, 2)
    assert extract_C_theta(QSeries.one(3)) == (0, 1)
    with pytest.raises(TruncationError):
        extract_C_theta(QSeries.zero(5))


@pytest.mark.parametrize("d", [(2, 2, 2), (1, 3, 2), (2, 0, 2), (3, 2, 2, 1), (1, 1, 1, 1, 1)])
def test_closed_equals_bruteforce(d):
    by_top = q_series_by_top(d, 8)
    for r in range(min(d) + 1):
        assert q_series_closed(d, r, 8) == by_top[r]


@pytest.mark.parametrize("d", [(2, 2, 2), (3, 1, 2), (2, 2, 3, 1)])
def test_sum_over_ranks_is_P_d(d):
    total = QSeries.zero(8)
    for series in q_series_by_top(d, 8).values():
        total = total + series
    assert total == pochhammer_multi(d, 8)


def test_shift_identity():
    T = 10
    for d in [(3, 3, 3), (2, 4, 3), (3, 2, 4, 3)]:
        for s in range(min(d) + 1):
            for r in range(s + 1):
                lhs = q_series_closed(tuple(x - r for x in d), s - r, T)
                rhs = shift_factor(r, s, T) * q_series_closed(d, s, T)
                assert lhs == rhs, (d, r, s)


def test_euler_expansion():
    T, X = 8, 6
    coeffs = euler_coefficients(X, T)
    for s in range(X + 1):
        expected = pochhammer_inverse(s, T).shift(s * (s - 1) // 2) * (-1) ** s
        assert coeffs[s] == expected


def test_closed_series_is_permutation_invariant():
    d = (1, 3, 2, 2)
    base = q_series_closed(d, 1, 9)
    for p in permutations(d):
        assert q_series_closed(p, 1, 9) == base


def test_json_and_text():
    s = QSeries((0, 0, 2, -1))
    assert s.to_json() == {"truncation": 3, "coefficients": ["0", "0", "2", "-1"]}
    assert str(s) == "2*q^2 - q^3 + O(q^4)"
