import math
from fractions import Fraction

import pytest

from fqgauss.exactmath import (
    CycNum,
    ResidueQ2Z,
    ResidueQZ,
    as_cyc,
    cyc,
    cyclotomic_coefficients,
    factorize,
    inv_mod,
    kronecker,
    least_nonresidue,
    sqrt_int,
    unit_square_sum,
)


def test_roots_of_unity():
    assert cyc(1, 4) ** 2 == -1
    assert cyc(1, 3) + cyc(2, 3) == -1
    assert cyc(1, 4) == cyc(2, 8)
    assert cyc(5, 4) == cyc(1, 4)
    assert cyc(1, 8) ** 8 == 1


def test_arithmetic_across_orders():
    value = cyc(1, 3) * cyc(1, 4)
    assert value == cyc(7, 12)
    assert value.conjugate() == cyc(5, 12)
    assert (cyc(1, 3) - cyc(1, 3)).is_zero()
    assert as_cyc(Fraction(1, 2)) * 4 == 2


@pytest.mark.parametrize("n", [*range(1, 121), 256, 343, 360, 500, 675, 729, 968, 1000])
def test_square_roots(n):
    root = sqrt_int(n)
    assert root * root == n
    value = root.to_complex()
    assert value.real == pytest.approx(n**0.5)
    assert abs(value.imag) < 1e-9


def test_square_root_factorisation():
    assert sqrt_int(12) == 2 * sqrt_int(3)
    assert sqrt_int(2) == cyc(1, 8) + cyc(7, 8)


def test_minimal_order():
    assert sqrt_int(5).embed(40).minimal().order == 5
    assert (cyc(1, 4) * cyc(3, 4)).minimal().order == 1
    assert cyc(3, 12).minimal() == cyc(1, 4)


def test_render():
    assert as_cyc(Fraction(-3, 2)).render() == "-3/2"
    assert cyc(1, 4).render() == "e(1/4)"
    assert (1 - cyc(1, 3)).render() == "1 - e(1/3)"
    assert (cyc(1, 8) * 0).render() == "0"


def test_rational_value():
    assert (sqrt_int(7) * sqrt_int(7)).rational_value() == 7
    with pytest.raises(ValueError):
        cyc(1, 4).rational_value()


def test_from_exponent_counts():
    assert CycNum.from_exponent_counts([1, 2, 2], 3) == 1 + 2 * (cyc(1, 3) + cyc(2, 3))
    assert CycNum.from_exponent_counts([1, 2, 2], 3) == -1


def test_invalid_orders():
    with pytest.raises(ValueError):
        CycNum(0)
    with pytest.raises(ValueError):
        cyc(1, 0)
    with pytest.raises(ValueError):
        cyc(1, 3).embed(4)
    with pytest.raises(ValueError):
        sqrt_int(0)


def test_cyclotomic_coefficients():
    assert cyclotomic_coefficients(4) == (1, 0, 1)
    assert cyclotomic_coefficients(3) == (1, 1, 1)
    assert cyclotomic_coefficients(8) == (1, 0, 0, 0, 1)


@pytest.mark.parametrize(
    "a, n, expected",
    [(2, 7, 1), (3, 7, -1), (-1, 3, -1), (-1, 5, 1), (5, 8, -1), (7, 8, 1), (2, 4, 0), (6, 9, 0)],
)
def test_kronecker(a, n, expected):
    assert kronecker(a, n) == expected


def test_inv_mod():
    assert inv_mod(3, 7) == 5
    assert inv_mod(8, 9) == 8
    with pytest.raises(ValueError):
        inv_mod(2, 4)


def test_factorize_and_nonresidues():
    assert factorize(360) == ((2, 3), (3, 2), (5, 1))
    assert factorize(1) == ()
    assert [least_nonresidue(p) for p in (3, 5, 7, 17, 23)] == [2, 2, 3, 3, 5]


def test_unit_square_sum():
    assert unit_square_sum(3, 1, 1) == 2 * cyc(1, 3)
    assert unit_square_sum(2, 1, 1) == cyc(1, 2)


def test_residues():
    assert ResidueQZ.from_fraction(Fraction(-1, 3)) == ResidueQZ(2, 3)
    assert str(ResidueQZ(0)) == "0"
    assert ResidueQZ(1, 3) + ResidueQZ(2, 3) == ResidueQZ(0)
    assert ResidueQ2Z.from_fraction(Fraction(5, 2)).value == Fraction(1, 2)
    assert ResidueQ2Z.from_fraction(Fraction(3, 2)).mod_one() == ResidueQZ(1, 2)
    with pytest.raises(ValueError):
        ResidueQZ(2, 4)


@pytest.mark.parametrize("p, k", [(3, 2), (3, 3), (5, 2), (7, 2)])
def test_unit_square_sum_vanishes_above_the_first_power(p, k):
    for a in (1, least_nonresidue(p)):
        assert unit_square_sum(p, k, a).is_zero()


@pytest.mark.parametrize("order", [1, 2, 3, 4, 5, 8, 9, 12, 15, 16, 24, 60])
def test_roots_of_unity_have_their_exact_order(order):
    for j in range(order):
        assert cyc(j, order) ** (order // math.gcd(j, order)) == 1
