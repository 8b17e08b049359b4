"""Exact arithmetic for the values of quadratic forms and Gauss sums

Values of quadratic forms live in Q/Z (and, for norms of 2-adic forms, in Q/2Z). Gauss sums live
in cyclotomic fields. Every value in this module is immutable.
"""
import dataclasses
import functools
import logging
import math
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

import numpy
from sympy import QQ, Poly, Symbol, cyclotomic_poly, divisors, factorint, jacobi_symbol
from sympy import mod_inverse, totient
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger("fqgauss.exactmath")

Rational = Union[int, Fraction]

_X = Symbol("x")


@dataclasses.dataclass(frozen=True)
class ResidueQZ:
    """A rational number modulo 1, stored as the reduced fraction ``num/den`` with
    ``0 <= num < den``"""

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den < 1:
            raise ValueError(f"The denominator must be positive. Current value: {self.den}")
        # gcd(0, den) == den, so the zero residue can only be stored as 0/1
        if not 0 <= self.num < self.den or math.gcd(self.num, self.den) != 1:
            raise ValueError(f"{self.num}/{self.den} is not a reduced residue modulo 1")

    @classmethod
    def from_fraction(cls, value: Rational) -> "ResidueQZ":
        """Reduce a rational number modulo 1"""
        reduced = Fraction(value) % 1
        return cls(reduced.numerator, reduced.denominator)

    @property
    def value(self) -> Fraction:
        """The representative in [0, 1)"""
        return Fraction(self.num, self.den)

    def __add__(self, other: "ResidueQZ") -> "ResidueQZ":
        return ResidueQZ.from_fraction(self.value + other.value)

    def __sub__(self, other: "ResidueQZ") -> "ResidueQZ":
        return ResidueQZ.from_fraction(self.value - other.value)

    def __neg__(self) -> "ResidueQZ":
        return ResidueQZ.from_fraction(-self.value)

    def __mul__(self, factor: int) -> "ResidueQZ":
        return ResidueQZ.from_fraction(self.value * factor)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return "0" if self.num == 0 else f"{self.num}/{self.den}"


@dataclasses.dataclass(frozen=True)
class ResidueQ2Z:
    """A rational number modulo 2, stored as ``num/den`` with ``0 <= num < 2*den``"""

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den < 1:
            raise ValueError(f"The denominator must be positive. Current value: {self.den}")
        if not 0 <= self.num < 2 * self.den or Fraction(self.num, self.den).denominator != self.den:
            raise ValueError(f"{self.num}/{self.den} is not a reduced residue modulo 2")

    @classmethod
    def from_fraction(cls, value: Rational) -> "ResidueQ2Z":
        """Reduce a rational number modulo 2"""
        reduced = Fraction(value) % 2
        return cls(reduced.numerator, reduced.denominator)

    @property
    def value(self) -> Fraction:
        """The representative in [0, 2)"""
        return Fraction(self.num, self.den)

    def mod_one(self) -> ResidueQZ:
        """Forget the information modulo 2"""
        return ResidueQZ.from_fraction(self.value)

    def __add__(self, other: "ResidueQ2Z") -> "ResidueQ2Z":
        return ResidueQ2Z.from_fraction(self.value + other.value)

    def __sub__(self, other: "ResidueQ2Z") -> "ResidueQ2Z":
        return ResidueQ2Z.from_fraction(self.value - other.value)

    def __neg__(self) -> "ResidueQ2Z":
        return ResidueQ2Z.from_fraction(-self.value)

    def __str__(self) -> str:
        return "0" if self.num == 0 else str(self.value)


@functools.lru_cache(maxsize=None)
def _cyclotomic(order: int) -> Poly:
    return Poly(cyclotomic_poly(order, _X), _X, domain=QQ)


@functools.lru_cache(maxsize=None)
def _degree(order: int) -> int:
    return int(totient(order))


@functools.lru_cache(maxsize=None)
def cyclotomic_coefficients(order: int) -> Tuple[int, ...]:
    """The integer coefficients of the cyclotomic polynomial of the given order, constant first"""
    return tuple(int(c) for c in reversed(_cyclotomic(order).all_coeffs()))


def _to_fraction(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def _reduce(order: int, dense: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Reduce sum(dense[j] * x**j) modulo the cyclotomic polynomial of the given order"""
    degree = _degree(order)
    if not any(dense):
        return (Fraction(0),) * degree
    if len(dense) <= degree:
        return tuple(dense) + (Fraction(0),) * (degree - len(dense))
    poly = Poly([QQ(c.numerator, c.denominator) for c in reversed(dense)], _X, domain=QQ)
    remainder = [_to_fraction(c) for c in reversed(poly.rem(_cyclotomic(order)).all_coeffs())]
    return tuple(remainder) + (Fraction(0),) * (degree - len(remainder))


class CycNum:
    """An exact element of the cyclotomic field generated by e(1/L)

    The value is ``sum(coefficients[j] * e(j/L))``. The stored coefficient tuple is the
    remainder modulo the L-th cyclotomic polynomial, which makes it canonical for a fixed order.
    Operands of different orders are embedded into the least common multiple first.

    :param order: The order L of the root of unity e(1/L)
    :type order: int
    :param coefficients: Rational coefficients, the j-th one multiplies e(j/L). Exponents are
        read modulo L, the sequence may have any length
    :raise ValueError: The order is below 1
    """

    __slots__ = ("_order", "_coefficients")
    __hash__ = None

    def __init__(self, order: int, coefficients: Sequence[Rational] = ()):
        if order < 1:
            raise ValueError(f"The order of a cyclotomic field may not be below 1: {order}")
        dense = [Fraction(0)] * order
        for exponent, coefficient in enumerate(coefficients):
            if coefficient:
                dense[exponent % order] += Fraction(coefficient)
        self._order = order
        self._coefficients = _reduce(order, dense)

    @classmethod
    def _canonical(cls, order: int, coefficients: Tuple[Fraction, ...]) -> "CycNum":
        value = cls.__new__(cls)
        value._order = order
        value._coefficients = coefficients
        return value

    @classmethod
    def from_exponent_counts(cls, counts: Sequence[int], order: int) -> "CycNum":
        """Build ``sum(counts[j] * e(j/order))``, the usual shape of a Gauss sum"""
        return cls(order, [int(c) for c in counts])

    @property
    def order(self) -> int:
        return self._order

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        """The canonical coefficients, one per power of e(1/L) below the field degree"""
        return self._coefficients

    def embed(self, order: int) -> "CycNum":
        """Express the same value in the cyclotomic field of a multiple order"""
        if order == self._order:
            return self
        if order % self._order:
            raise ValueError(f"Cannot embed order {self._order} into order {order}")
        step = order // self._order
        dense = [Fraction(0)] * order
        for exponent, coefficient in enumerate(self._coefficients):
            dense[exponent * step] = coefficient
        return CycNum(order, dense)

    def _poly(self) -> Poly:
        return Poly(
            [QQ(c.numerator, c.denominator) for c in reversed(self._coefficients)],
            _X,
            domain=QQ,
        )

    def _aligned(self, other: "CycNum") -> Tuple["CycNum", "CycNum"]:
        order = math.lcm(self._order, other._order)
        return self.embed(order), other.embed(order)

    def __add__(self, other) -> "CycNum":
        other = as_cyc(other)
        left, right = self._aligned(other)
        return CycNum._canonical(
            left._order, tuple(a + b for a, b in zip(left._coefficients, right._coefficients))
        )

    __radd__ = __add__

    def __neg__(self) -> "CycNum":
        return CycNum._canonical(self._order, tuple(-c for c in self._coefficients))

    def __sub__(self, other) -> "CycNum":
        return self + (-as_cyc(other))

    def __rsub__(self, other) -> "CycNum":
        return as_cyc(other) - self

    def __mul__(self, other) -> "CycNum":
        if isinstance(other, (int, Fraction)):
            return CycNum._canonical(self._order, tuple(c * other for c in self._coefficients))
        left, right = self._aligned(as_cyc(other))
        product = (left._poly() * right._poly()).rem(_cyclotomic(left._order))
        coefficients = [_to_fraction(c) for c in reversed(product.all_coeffs())]
        degree = _degree(left._order)
        return CycNum._canonical(
            left._order, tuple(coefficients) + (Fraction(0),) * (degree - len(coefficients))
        )

    __rmul__ = __mul__

    def __truediv__(self, divisor: Rational) -> "CycNum":
        if not isinstance(divisor, (int, Fraction)):
            return NotImplemented
        return self * (1 / Fraction(divisor))

    def __pow__(self, exponent: int) -> "CycNum":
        if exponent < 0:
            raise ValueError("Only non-negative powers are supported")
        result = CycNum(1, [1])
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, (CycNum, int, Fraction)):
            return NotImplemented
        left, right = self._aligned(as_cyc(other))
        return left._coefficients == right._coefficients

    def conjugate(self) -> "CycNum":
        """Complex conjugation, sending e(j/L) to e(-j/L)"""
        dense = [Fraction(0)] * self._order
        for exponent, coefficient in enumerate(self._coefficients):
            dense[-exponent % self._order] = coefficient
        return CycNum(self._order, dense)

    def is_zero(self) -> bool:
        return not any(self._coefficients)

    def is_rational(self) -> bool:
        return not any(self._coefficients[1:])

    def rational_value(self) -> Fraction:
        """The value as a fraction

        :raise ValueError: The value is not rational
        """
        if not self.is_rational():
            raise ValueError("The cyclotomic number is not rational")
        return self._coefficients[0]

    def to_complex(self) -> complex:
        """Floating point evaluation, for display and rounding only"""
        exponents = numpy.arange(len(self._coefficients))
        roots = numpy.exp(2j * numpy.pi * exponents / self._order)
        weights = numpy.array([float(c) for c in self._coefficients])
        return complex(roots @ weights)

    def minimal(self) -> "CycNum":
        """The same value, expressed in the cyclotomic field of least possible order"""
        if self.is_rational():
            return CycNum(1, [self._coefficients[0]])
        for order in divisors(self._order):
            if order == self._order:
                break
            # The fields of order 2m and m agree for odd m, the smaller one was tried already
            if order % 4 == 2:
                continue
            restricted = self._restrict(int(order))
            if restricted is not None:
                return restricted
        return self

    def _restrict(self, order: int) -> Optional["CycNum"]:
        size = _degree(order)
        step = self._order // order
        columns = []
        for exponent in range(size):
            dense = [Fraction(0)] * self._order
            dense[exponent * step] = Fraction(1)
            columns.append(CycNum(self._order, dense)._coefficients)
        rows = [
            [QQ(column[i].numerator, column[i].denominator) for column in columns]
            + [QQ(self._coefficients[i].numerator, self._coefficients[i].denominator)]
            for i in range(len(self._coefficients))
        ]
        matrix = DomainMatrix(rows, (len(rows), size + 1), QQ)
        reduced, pivots = matrix.rref()
        if size in pivots:
            return None
        entries = reduced.to_Matrix()
        solution = [Fraction(0)] * size
        for row, column in enumerate(pivots):
            solution[column] = _to_fraction(entries[row, size])
        restricted = CycNum(order, solution)
        if restricted != self:
            return None
        return restricted

    def render(self) -> str:
        """Render as ``c_0 + c_1*e(1/L) + ...`` at the least possible order L"""
        value = self.minimal()
        if value.is_rational():
            return _format_fraction(value._coefficients[0])
        terms = []
        for exponent, coefficient in enumerate(value._coefficients):
            if not coefficient:
                continue
            if exponent == 0:
                terms.append(_format_fraction(coefficient))
                continue
            root = f"e({exponent}/{value._order})"
            if coefficient == 1:
                terms.append(root)
            elif coefficient == -1:
                terms.append(f"-{root}")
            else:
                terms.append(f"{_format_fraction(coefficient)}*{root}")
        return " + ".join(terms).replace("+ -", "- ")

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        coefficients = ", ".join(_format_fraction(c) for c in self._coefficients)
        return f"CycNum(order={self._order}, coefficients=({coefficients}))"


def _format_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else str(value)


def as_cyc(value: Union[CycNum, Rational]) -> CycNum:
    """Turn integers and fractions into cyclotomic numbers of order 1"""
    if isinstance(value, CycNum):
        return value
    if isinstance(value, (int, Fraction)):
        return CycNum._canonical(1, (Fraction(value),))
    raise TypeError(f"Cannot interpret {value!r} as a cyclotomic number")


def cyc(exponent: int, order: int) -> CycNum:
    """The root of unity e(exponent/order)"""
    if order < 1:
        raise ValueError(f"The order of a root of unity may not be below 1: {order}")
    dense = [0] * order
    dense[exponent % order] = 1
    return CycNum(order, dense)


def cyc_arith(a: CycNum, b: CycNum, op: str) -> CycNum:
    """Apply ``add``, ``sub`` or ``mul`` to two cyclotomic numbers"""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"Unknown operation: {op}")


def cyc_conj(a: CycNum) -> CycNum:
    return a.conjugate()


def cyc_eq(a: CycNum, b: CycNum) -> bool:
    return a == b


def cyc_to_complex(a: CycNum) -> complex:
    return a.to_complex()


def kronecker(a: int, n: int) -> int:
    """The Kronecker symbol (a/n), which extends the Legendre and Jacobi symbols"""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * int(jacobi_symbol(a % n, n))


def inv_mod(a: int, n: int) -> int:
    """The inverse of a modulo n

    :raise ValueError: a is not a unit modulo n
    """
    return int(mod_inverse(a, n))


def factorize(n: int) -> Tuple[Tuple[int, int], ...]:
    """The prime factorisation of n as sorted (prime, exponent) pairs"""
    if n < 1:
        raise ValueError(f"Only positive integers can be factorised: {n}")
    return tuple(sorted((int(p), int(e)) for p, e in factorint(n).items()))


def least_nonresidue(p: int) -> int:
    """The least positive quadratic non-residue modulo an odd prime"""
    return next(x for x in range(2, p) if kronecker(x, p) == -1)


@functools.lru_cache(maxsize=None)
def _sqrt_prime(p: int) -> CycNum:
    if p == 2:
        return cyc(1, 8) + cyc(7, 8)
    gauss_sum = CycNum(p, [kronecker(x, p) for x in range(p)])
    if p % 4 == 1:
        return gauss_sum
    # Here the quadratic Gauss sum equals i*sqrt(p)
    return cyc(3, 4) * gauss_sum


@functools.lru_cache(maxsize=None)
def sqrt_int(n: int) -> CycNum:
    """The positive square root of a positive integer as an exact cyclotomic number"""
    if n < 1:
        raise ValueError(f"Only positive integers have a square root here: {n}")
    result = as_cyc(1)
    square_part = 1
    for p, e in factorize(n):
        square_part *= p ** (e // 2)
        if e % 2:
            result = result * _sqrt_prime(p)
    return result * square_part


def unit_square_sum(p: int, k: int, a: int) -> CycNum:
    """The sum of e(a*x^2/p^k) over the units x modulo p^k"""
    modulus = p**k
    counts = [0] * modulus
    for x in range(modulus):
        if x % p:
            counts[a * x * x % modulus] += 1
    return CycNum.from_exponent_counts(counts, modulus)
