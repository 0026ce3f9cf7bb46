import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fibcat.errors import DomainError
from fibcat.exactnum import ALPHA, BETA, SQRT5, QuadRat, binomial, catalan, fibonacci, lucas, qr_pow


def pascal_triangle(rows):
    row = [1]
    out = [row]
    for _ in range(rows):
        row = [a + b for a, b in zip([0] + row, row + [0])]
        out.append(row)
    return out


def test_binomial_examples():
    assert binomial(0, 0) == 1
    assert binomial(4, 2) == 6
    assert binomial(10, 5) == 252


def test_binomial_against_pascal_triangle():
    triangle = pascal_triangle(40)
    for n in range(41):
        for k in range(n + 1):
            assert binomial(n, k) == triangle[n][k]


def test_binomial_outside_range_is_zero():
    assert binomial(5, -1) == 0
    assert binomial(5, 6) == 0


def test_binomial_negative_n_rejected():
    with pytest.raises(DomainError):
        binomial(-2, -1)


def test_catalan_examples():
    assert catalan(0) == 1
    assert catalan(3) == 5
    # recurrence oracle (n+2) C_{n+1} = 2(2n+1) C_n walked up from C_0
    c = 1
    for n in range(10):
        c = c * 2 * (2 * n + 1) // (n + 2)
    assert catalan(10) == c == 16796


def test_catalan_recurrence_to_2000():
    for n in range(0, 2000):
        assert (n + 2) * catalan(n + 1) == 2 * (2 * n + 1) * catalan(n)


def test_fibonacci_examples():
    assert fibonacci(0) == 0
    assert fibonacci(10) == 55
    assert fibonacci(-2) == -1


def test_lucas_examples():
    assert lucas(0) == 2
    assert lucas(1) == 1
    assert lucas(7) == 29
    assert lucas(-1) == -1


def test_recurrences_both_directions():
    for n in range(-500, 499):
        assert fibonacci(n + 2) == fibonacci(n + 1) + fibonacci(n)
        assert lucas(n + 2) == lucas(n + 1) + lucas(n)


def test_negative_index_extension_rules():
    for n in range(0, 60):
        assert fibonacci(-n) == (-1) ** (n + 1) * fibonacci(n)
        assert lucas(-n) == (-1) ** n * lucas(n)


def test_lucas_fibonacci_norm_identity():
    for n in range(-200, 201):
        assert lucas(n) ** 2 - 5 * fibonacci(n) ** 2 == 4 * (-1) ** n


def test_qr_pow_examples():
    assert qr_pow(ALPHA, 1) == QuadRat.of(Fraction(1, 2), Fraction(1, 2))
    assert qr_pow(ALPHA, 2) == QuadRat.of(Fraction(3, 2), Fraction(1, 2))
    assert qr_pow(ALPHA, 10) == QuadRat.of(Fraction(123, 2), Fraction(55, 2))


def test_binet_exact_in_quadrat():
    for n in range(-200, 201):
        diff = qr_pow(ALPHA, n) - qr_pow(BETA, n)
        assert diff == QuadRat.of(0, fibonacci(n))  # F(n) * sqrt5
        total = qr_pow(ALPHA, n) + qr_pow(BETA, n)
        assert total == QuadRat.of(lucas(n))


def test_qr_zero_to_negative_power():
    with pytest.raises(ZeroDivisionError):
        qr_pow(QuadRat.of(0), -1)


def _random_quadrat(rng):
    return QuadRat.of(
        Fraction(rng.randint(-50, 50), rng.randint(1, 9)),
        Fraction(rng.randint(-50, 50), rng.randint(1, 9)),
    )


def test_field_axioms_on_random_triples():
    rng = random.Random(20260808)
    for _ in range(1000):
        x, y, z = (_random_quadrat(rng) for _ in range(3))
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert (x * y).norm() == x.norm() * y.norm()
        if not y.is_zero():
            assert (x / y) * y == x


@given(
    st.integers(-30, 30), st.integers(-30, 30),
    st.integers(-30, 30), st.integers(-30, 30),
)
def test_conjugate_product_is_norm(a, b, c, d):
    x = QuadRat.of(Fraction(a, 7), Fraction(b, 5))
    y = QuadRat.of(Fraction(c, 3), Fraction(d, 11))
    assert (x * x.conjugate()).b == 0
    assert (x * x.conjugate()).a == x.norm()
    assert (x * y).norm() == x.norm() * y.norm()


def test_alpha_beta_relations():
    assert ALPHA * BETA == QuadRat.of(-1)
    assert ALPHA + BETA == QuadRat.of(1)
    assert ALPHA - BETA == SQRT5
