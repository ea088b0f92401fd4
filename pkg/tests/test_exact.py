import itertools
import random
from fractions import Fraction

import pytest

from drgcert.errors import ParameterError, SingularSystem
from drgcert.exact import (
    ExactMatrix,
    PrimeField,
    format_fraction,
    is_prime,
    parse_fraction,
    q_binomial,
    q_int,
    rank_gf,
    rref_gf,
    solve_linear_exact,
)


def brute_subspace_count(n, k):
    # oracle: enumerate spanning sets over GF(2)^n, close under addition,
    # deduplicate by the resulting point set
    seen = set()
    for combo in itertools.combinations(range(1, 2 ** n), k):
        span = {0}
        for v in combo:
            span |= {x ^ v for x in span}
        if len(span) == 2 ** k:
            seen.add(frozenset(span))
    return len(seen)


def test_q_binomial_against_enumeration():
    assert q_binomial(4, 0, 2) == 1
    assert q_binomial(4, 1, 2) == 15 == brute_subspace_count(4, 1)
    assert q_binomial(5, 2, 2) == 155 == brute_subspace_count(5, 2)


def test_q_binomial_edge_cases():
    assert q_binomial(3, 5, 2) == 0
    assert q_binomial(0, 0, 2) == 1
    with pytest.raises(ParameterError):
        q_binomial(-1, 0, 2)
    with pytest.raises(ParameterError):
        q_binomial(3, 1, 1)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_q_binomial_symmetry_and_pascal(q):
    for m in range(9):
        for n in range(m + 1):
            assert q_binomial(m, n, q) == q_binomial(m, m - n, q)
            if m >= 1 and n >= 1:
                assert q_binomial(m, n, q) == (
                    q_binomial(m - 1, n - 1, q) + q ** n * q_binomial(m - 1, n, q)
                )


def test_q_int():
    assert q_int(3, 2) == 7
    assert q_int(1, 5) == 1
    assert q_int(4, 3) == 40


def test_solve_identity():
    A = ExactMatrix.identity(3)
    assert solve_linear_exact(A, [1, 2, 3]) == (1, 2, 3)


def test_solve_diagonal():
    A = ExactMatrix([[2, 0], [0, 4]])
    assert solve_linear_exact(A, [1, 1]) == (Fraction(1, 2), Fraction(1, 4))


def test_solve_singular():
    A = ExactMatrix([[1, 1], [2, 2]])
    with pytest.raises(SingularSystem):
        solve_linear_exact(A, [1, 1])


def test_solve_random_systems_resubstitute():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(1, 5)
        A = ExactMatrix(
            [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
        )
        b = [Fraction(rng.randint(-9, 9)) for _ in range(n)]
        try:
            x = solve_linear_exact(A, b)
        except SingularSystem:
            continue
        assert A.apply(x) == tuple(b)


def test_matrix_inverse_and_product():
    A = ExactMatrix([[1, 2], [3, 5]])
    inv = A.inverse()
    assert A * inv == ExactMatrix.identity(2)
    assert inv * A == ExactMatrix.identity(2)
    with pytest.raises(SingularSystem):
        ExactMatrix([[1, 2], [2, 4]]).inverse()


def test_matrix_rejects_floats_and_ragged():
    with pytest.raises(TypeError):
        ExactMatrix([[0.5]])
    with pytest.raises(ParameterError):
        ExactMatrix([[1, 2], [3]])


def test_matrix_rank():
    assert ExactMatrix([[1, 2], [2, 4]]).rank() == 1
    assert ExactMatrix.identity(4).rank() == 4


def test_rref_fixed_cases():
    assert rref_gf([[0, 0], [0, 0]], 2) == ((), 0)
    eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert rref_gf(eye, 2) == (tuple(map(tuple, eye)), 3)
    # worked by hand: add row 2 to row 1 to clear the second column
    assert rref_gf([[1, 1, 0], [0, 1, 1]], 2) == (((1, 0, 1), (0, 1, 1)), 2)


def row_space(rows, p, n):
    # oracle: all linear combinations, as a frozen set of tuples
    if not rows:
        return frozenset({(0,) * n})
    space = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        v = [0] * n
        for c, row in zip(coeffs, rows):
            for j, x in enumerate(row):
                v[j] = (v[j] + c * x) % p
        space.add(tuple(v))
    return frozenset(space)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_rref_random_properties(p):
    rng = random.Random(p * 11)
    for _ in range(40):
        rows = [[rng.randrange(p) for _ in range(4)] for _ in range(rng.randint(1, 4))]
        red, rank = rref_gf(rows, p)
        assert rref_gf(red, p) == (red, rank)
        assert rank == len(red)
        assert row_space(red, p, 4) == row_space(rows, p, 4)
        pivots = []
        for row in red:
            j = next(i for i, x in enumerate(row) if x)
            assert row[j] == 1
            pivots.append(j)
            assert all(other[j] == 0 for other in red if other is not row)
        assert pivots == sorted(pivots)


def test_rank_gf():
    assert rank_gf([[1, 1], [1, 1]], 2) == 1
    # (2,1) = 2*(1,2) over GF(3), so rank 1; (2,2) is independent
    assert rank_gf([[1, 2], [2, 1]], 3) == 1
    assert rank_gf([[1, 2], [2, 2]], 3) == 2


def test_prime_field():
    f = PrimeField(7)
    assert f.mul(3, f.inv(3)) == 1
    assert f.add(5, 4) == 2
    assert f.neg(3) == 4
    with pytest.raises(ZeroDivisionError):
        f.inv(0)
    with pytest.raises(ParameterError):
        PrimeField(6)
    assert is_prime(2) and is_prime(13) and not is_prime(1) and not is_prime(9)


def test_fraction_strings():
    assert format_fraction(Fraction(-3, 6)) == "-1/2"
    assert format_fraction(5) == "5/1"
    assert parse_fraction("-1/2") == Fraction(-1, 2)
    assert parse_fraction("7") == 7
    with pytest.raises(TypeError):
        format_fraction(0.5)
