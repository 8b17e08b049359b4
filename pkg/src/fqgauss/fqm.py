"""Finite quadratic modules

A form is presented on generators e_1, ..., e_r of cyclic groups of orders n_1, ..., n_r. It is
determined by the values q(e_i) in Q/Z and the pairings (e_i, e_j) for i != j, and q extends to
all of A by q(sum a_i e_i) = sum a_i^2 q(e_i) + sum_{i<j} a_i a_j (e_i, e_j).

Forms are either written as direct sums of standard blocks (see :func:`parse_form`) or given
as raw generator data.
"""
import dataclasses
import functools
import logging
import math
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Tuple

import numpy
from sympy import isprime

from . import exactmath, exceptions, tools
from .enums import BlockKind
from .exactmath import ResidueQ2Z, ResidueQZ

logger = logging.getLogger("fqgauss.fqm")

Element = Tuple[int, ...]


@dataclasses.dataclass(frozen=True)
class FqForm:
    """A finite quadratic module presented on cyclic generators

    :param orders: The orders n_i of the generators, each at least 2
    :type orders: tuple[int, ...]
    :param qdiag: The values q(e_i)
    :type qdiag: tuple[ResidueQZ, ...]
    :param pairing: The symmetric matrix of the pairings (e_i, e_j) with zero diagonal. The
        diagonal pairing is determined by q and is never read from this matrix
    :type pairing: tuple[tuple[ResidueQZ, ...], ...]
    :raise InvalidParameterError: The data does not define a quadratic form on the group
    """

    orders: Tuple[int, ...]
    qdiag: Tuple[ResidueQZ, ...]
    pairing: Tuple[Tuple[ResidueQZ, ...], ...]

    def __post_init__(self):
        rank = len(self.orders)
        if len(self.qdiag) != rank or len(self.pairing) != rank:
            raise exceptions.InvalidParameterError(
                "The number of q-values and pairing rows must match the number of generators"
            )
        for i, order in enumerate(self.orders):
            if order < 2:
                raise exceptions.InvalidParameterError(
                    f"Generator orders may not be below 2. Current value: {order}"
                )
            if len(self.pairing[i]) != rank:
                raise exceptions.InvalidParameterError("The pairing matrix must be square")
            if self.pairing[i][i].num != 0:
                raise exceptions.InvalidParameterError(
                    "The pairing matrix must have a zero diagonal"
                )
            for j in range(i):
                if self.pairing[i][j] != self.pairing[j][i]:
                    raise exceptions.InvalidParameterError("The pairing matrix must be symmetric")
        self._check_well_defined()

    def _check_well_defined(self) -> None:
        # q(x + n_i e_i) - q(x) is affine in x, so testing x = 0 and x = e_j suffices
        for i, n in enumerate(self.orders):
            q_i = self.qdiag[i].value
            if (n * n * q_i).denominator != 1 or ((2 * n + n * n) * q_i).denominator != 1:
                raise exceptions.InvalidParameterError(
                    f"q(e_{i + 1}) = {self.qdiag[i]} is not well defined on a cyclic group of "
                    f"order {n}"
                )
            for j in range(len(self.orders)):
                if j != i and (n * n * q_i + n * self.pairing[i][j].value).denominator != 1:
                    raise exceptions.InvalidParameterError(
                        f"The pairing (e_{i + 1}, e_{j + 1}) = {self.pairing[i][j]} is not well "
                        f"defined on a cyclic group of order {n}"
                    )

    @classmethod
    def parse(cls, text: str) -> "FqForm":
        """Parse a form expression and realize it"""
        return realize(parse_form(text))

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        """The group order |A|"""
        return math.prod(self.orders)

    @functools.cached_property
    def level(self) -> int:
        """A common denominator of all values of q and of the pairing"""
        denominators = [q.den for q in self.qdiag]
        denominators += [entry.den for row in self.pairing for entry in row]
        return math.lcm(1, *denominators)

    @functools.cached_property
    def gram(self) -> numpy.ndarray:
        """Integer Gram matrix G with (x, y) = x^T G y / level and q(x) = x^T G x / (2 level)"""
        level = self.level
        matrix = numpy.zeros((self.rank, self.rank), dtype=numpy.int64)
        for i in range(self.rank):
            matrix[i, i] = int(2 * self.qdiag[i].value * level)
            for j in range(self.rank):
                if i != j:
                    matrix[i, j] = int(self.pairing[i][j].value * level)
        return matrix

    @functools.cached_property
    def order_array(self) -> numpy.ndarray:
        return numpy.array(self.orders, dtype=numpy.int64)

    @functools.cached_property
    def _table(self) -> "ElementTable":
        return ElementTable(self)

    def reduce(self, x: Sequence[int]) -> Element:
        """Reduce integer coefficients componentwise modulo the generator orders"""
        if len(x) != self.rank:
            raise ValueError(
                f"An element of this form needs {self.rank} coefficients, got {len(x)}"
            )
        return tuple(int(a) % n for a, n in zip(x, self.orders))

    def q_int(self, x: Sequence[int]) -> int:
        """``q(x) * level`` reduced modulo ``level``"""
        vector = numpy.array(x, dtype=numpy.int64)
        return int(vector @ self.gram @ vector) // 2 % self.level

    def pair_int(self, x: Sequence[int], y: Sequence[int]) -> int:
        """``(x, y) * level`` reduced modulo ``level``"""
        left = numpy.array(x, dtype=numpy.int64)
        right = numpy.array(y, dtype=numpy.int64)
        return int(left @ self.gram @ right) % self.level

    def zero(self) -> Element:
        return (0,) * self.rank

    def negate(self, x: Sequence[int]) -> Element:
        return self.reduce([-a for a in x])

    def __str__(self) -> str:
        orders = ",".join(str(n) for n in self.orders)
        qdiag = ",".join(str(q) for q in self.qdiag)
        offdiag = ",".join(
            str(self.pairing[i][j]) for i in range(self.rank) for j in range(i + 1, self.rank)
        )
        return f"gram[{orders};{qdiag};{offdiag}]"


class ElementTable:
    """All elements of a form in lexicographic order together with their q-values

    Element ``k`` of the table is the k-th coefficient tuple in lexicographic order, so the
    index of a tuple is its mixed radix value.
    """

    def __init__(self, form: FqForm):
        self.form = form
        if form.rank == 0:
            self.elements = numpy.zeros((1, 0), dtype=numpy.int64)
        else:
            grid = numpy.indices(form.orders, dtype=numpy.int64)
            self.elements = grid.reshape(form.rank, -1).T.copy()
        self.size = self.elements.shape[0]
        strides = [1] * form.rank
        for i in range(form.rank - 2, -1, -1):
            strides[i] = strides[i + 1] * form.orders[i + 1]
        self.strides = numpy.array(strides, dtype=numpy.int64)
        products = self.elements @ form.gram
        self.q_values = (products * self.elements).sum(axis=1) // 2 % form.level
        self.dual_values = products % form.level

    def index_of(self, coordinates: numpy.ndarray) -> numpy.ndarray:
        """Table indices of (already reduced or unreduced) coefficient rows"""
        return (coordinates % self.form.order_array) @ self.strides

    def element(self, index: int) -> Element:
        return tuple(int(a) for a in self.elements[index])

    def pairings_with(self, y: Sequence[int]) -> numpy.ndarray:
        """``(x, y) * level`` modulo ``level`` for every element x"""
        column = self.form.gram @ numpy.array(y, dtype=numpy.int64)
        return (self.elements @ column) % self.form.level

    def norm_values(self) -> numpy.ndarray:
        """``(x, x) * level`` modulo ``2 * level`` for every element x"""
        return 2 * self.q_values % (2 * self.form.level)


def element_table(form: FqForm, limits: Optional[tools.Limits] = None) -> ElementTable:
    """The element table of a form, after checking the enumeration cap

    :raise EnumerationCapError: The form has more elements than allowed
    """
    limits = tools.resolve_limits(limits)
    if form.order > limits.max_order:
        raise exceptions.EnumerationCapError(form.order, limits.max_order)
    return form._table


def trivial_form() -> FqForm:
    """The form on the trivial group"""
    return FqForm((), (), ())


def q_of(form: FqForm, x: Sequence[int]) -> ResidueQZ:
    """The value q(x) in Q/Z"""
    return ResidueQZ.from_fraction(Fraction(form.q_int(form.reduce(x)), form.level))


def pair(form: FqForm, x: Sequence[int], y: Sequence[int]) -> ResidueQZ:
    """The value of the bilinear form (x, y) in Q/Z"""
    value = form.pair_int(form.reduce(x), form.reduce(y))
    return ResidueQZ.from_fraction(Fraction(value, form.level))


def norm2(form: FqForm, x: Sequence[int]) -> ResidueQ2Z:
    """The norm (x, x) = 2q(x) in Q/2Z"""
    return ResidueQ2Z.from_fraction(2 * q_of(form, x).value)


def direct_sum(first: FqForm, second: FqForm) -> FqForm:
    """The orthogonal direct sum, generators of ``first`` come first"""
    zero = ResidueQZ(0)
    rows = [row + (zero,) * second.rank for row in first.pairing]
    rows += [(zero,) * first.rank + row for row in second.pairing]
    return FqForm(first.orders + second.orders, first.qdiag + second.qdiag, tuple(rows))


@dataclasses.dataclass(frozen=True)
class SubformEmbedding:
    """An embedding of a subform, given by the images of its generators"""

    ambient: FqForm
    generator_images: Tuple[Element, ...]

    def apply(self, x: Sequence[int]) -> Element:
        image = [0] * self.ambient.rank
        for coefficient, generator in zip(x, self.generator_images):
            for i, value in enumerate(generator):
                image[i] += coefficient * value
        return self.ambient.reduce(image)


def p_part(form: FqForm, p: int) -> Tuple[FqForm, SubformEmbedding]:
    """The subform of elements of p-power order

    It is presented on the generators (n_i / p^v) e_i where p^v is the exact power of p dividing
    n_i > 1.

    :return: The p-part and its embedding into ``form``
    """
    indices, cofactors, orders = [], [], []
    for i, n in enumerate(form.orders):
        power = 1
        while n % (power * p) == 0:
            power *= p
        if power > 1:
            indices.append(i)
            cofactors.append(n // power)
            orders.append(power)
    qdiag = tuple(form.qdiag[i] * (c * c) for i, c in zip(indices, cofactors))
    pairing = tuple(
        tuple(
            ResidueQZ(0) if i == j else form.pairing[i][j] * (c * d)
            for j, d in zip(indices, cofactors)
        )
        for i, c in zip(indices, cofactors)
    )
    images = []
    for i, c in zip(indices, cofactors):
        image = [0] * form.rank
        image[i] = c
        images.append(tuple(image))
    return FqForm(tuple(orders), qdiag, pairing), SubformEmbedding(form, tuple(images))


def primes_of(form: FqForm) -> Tuple[int, ...]:
    """The primes dividing |A|"""
    return tuple(p for p, _ in exactmath.factorize(form.order)) if form.order > 1 else ()


def rescale(form: FqForm, factor: int) -> FqForm:
    """The form A(c): the same group with q multiplied by a unit c

    :raise InvalidParameterError: c is not a unit modulo the exponent
    """
    if math.gcd(factor, exponent(form)) != 1:
        raise exceptions.InvalidParameterError(
            f"The scaling factor {factor} is not a unit modulo the exponent {exponent(form)}"
        )
    return FqForm(
        form.orders,
        tuple(q * factor for q in form.qdiag),
        tuple(tuple(entry * factor for entry in row) for row in form.pairing),
    )


def enumerate_elements(form: FqForm, limits: Optional[tools.Limits] = None) -> Iterator[Element]:
    """Iterate over all elements in lexicographic order

    :raise EnumerationCapError: The form has more elements than allowed
    """
    table = element_table(form, limits)
    for index in range(table.size):
        yield table.element(index)


def group_order(form: FqForm) -> int:
    return form.order


def exponent(form: FqForm) -> int:
    """The exponent of the underlying group"""
    return math.lcm(1, *form.orders)


def is_nondegenerate(form: FqForm, limits: Optional[tools.Limits] = None) -> bool:
    """Whether x -> (x, .) is injective, tested on the pairings with all generators"""
    table = element_table(form, limits)
    radical = numpy.flatnonzero(~table.dual_values.any(axis=1))
    return radical.size == 1


def require_nondegenerate(form: FqForm, limits: Optional[tools.Limits] = None) -> None:
    """
    :raise DegenerateFormError: The form is degenerate
    """
    if not is_nondegenerate(form, limits):
        raise exceptions.DegenerateFormError(f"The form {form} is degenerate")


# ---------------------------------------------------------------------------------------------
# Blocks and the form grammar
# ---------------------------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Block:
    """A standard block of the form grammar

    ``params`` is ``(n, a)`` for cyclic blocks, ``(p,)`` for the planes over F_p and empty for
    U2 and V2. Raw blocks carry their form in ``raw``.
    """

    kind: BlockKind
    params: Tuple[int, ...] = ()
    raw: Optional[FqForm] = None

    @property
    def prime(self) -> Optional[int]:
        if self.kind == BlockKind.CYCLIC:
            return exactmath.factorize(self.params[0])[0][0]
        if self.kind in (BlockKind.HYPERBOLIC_ODD, BlockKind.ANISOTROPIC_ODD):
            return self.params[0]
        if self.kind in (BlockKind.HYPERBOLIC_TWO, BlockKind.ANISOTROPIC_TWO):
            return 2
        return None

    @property
    def exponent_k(self) -> int:
        """k for a cyclic block of order p^k, 1 for the planes"""
        if self.kind == BlockKind.CYCLIC:
            return exactmath.factorize(self.params[0])[0][1]
        return 1

    @property
    def dimension(self) -> int:
        return 1 if self.kind == BlockKind.CYCLIC else 2

    def __str__(self) -> str:
        if self.kind == BlockKind.CYCLIC:
            return f"q({self.params[0]},{self.params[1]})"
        if self.kind in (BlockKind.HYPERBOLIC_ODD, BlockKind.ANISOTROPIC_ODD):
            return f"{self.kind.value}({self.params[0]})"
        if self.kind == BlockKind.RAW:
            return str(self.raw)
        return self.kind.value


@dataclasses.dataclass(frozen=True)
class BlockExpr:
    """A direct sum of blocks with multiplicities"""

    terms: Tuple[Tuple[Block, int], ...]

    def blocks(self) -> Tuple[Block, ...]:
        """The blocks with every multiplicity expanded"""
        return tuple(block for block, count in self.terms for _ in range(count))

    @property
    def is_raw(self) -> bool:
        return any(block.kind == BlockKind.RAW for block, _ in self.terms)

    def __str__(self) -> str:
        return " + ".join(
            str(block) if count == 1 else f"{count}*{block}" for block, count in self.terms
        )


def cyclic_block(n: int, a: int) -> Block:
    """The block A_{n,a} for a prime power n and a unit a

    :raise InvalidParameterError: n is not a prime power or a is not a unit
    """
    if n < 2 or len(exactmath.factorize(n)) != 1:
        raise exceptions.InvalidParameterError(f"{n} is not a prime power")
    p = exactmath.factorize(n)[0][0]
    if a % p == 0:
        raise exceptions.InvalidParameterError(f"{a} is not a unit modulo {n}")
    return Block(BlockKind.CYCLIC, (n, a))


def _odd_prime(p: int, name: str) -> int:
    if p == 2 or not isprime(p):
        raise exceptions.InvalidParameterError(f"{name}({p}) needs an odd prime, got {p}")
    return p


def hyperbolic_block(p: int) -> Block:
    return Block(BlockKind.HYPERBOLIC_ODD, (_odd_prime(p, "U"),))


def anisotropic_block(p: int) -> Block:
    return Block(BlockKind.ANISOTROPIC_ODD, (_odd_prime(p, "N"),))


def raw_block(
    orders: Sequence[int], qdiag: Sequence[Fraction], offdiag: Sequence[Fraction]
) -> Block:
    """A block given by raw generator data, the pairings listed row by row above the diagonal"""
    rank = len(orders)
    if len(qdiag) != rank:
        raise exceptions.InvalidParameterError(
            f"Expected {rank} q-values for {rank} generators, got {len(qdiag)}"
        )
    if len(offdiag) != rank * (rank - 1) // 2:
        raise exceptions.InvalidParameterError(
            f"Expected {rank * (rank - 1) // 2} pairings for {rank} generators, got {len(offdiag)}"
        )
    matrix = [[ResidueQZ(0)] * rank for _ in range(rank)]
    values = iter(offdiag)
    for i in range(rank):
        for j in range(i + 1, rank):
            matrix[i][j] = matrix[j][i] = ResidueQZ.from_fraction(next(values))
    form = FqForm(
        tuple(int(n) for n in orders),
        tuple(ResidueQZ.from_fraction(q) for q in qdiag),
        tuple(tuple(row) for row in matrix),
    )
    return Block(BlockKind.RAW, (), form)


def discriminant(blocks: Sequence[Block]) -> int:
    """The discriminant class of a p-elementary block sum for odd p

    The product of the diagonal entries of the Gram matrix over F_p: a cyclic block q(p, a)
    contributes a, U(p) contributes -1 and N(p) contributes -ε. Only its class modulo squares
    is meaningful.

    :raise StructureError: A block is not p-elementary for an odd prime
    """
    value = 1
    for block in blocks:
        if block.kind == BlockKind.CYCLIC and block.exponent_k == 1 and block.prime != 2:
            value *= block.params[1]
        elif block.kind == BlockKind.HYPERBOLIC_ODD:
            value *= -1
        elif block.kind == BlockKind.ANISOTROPIC_ODD:
            value *= -exactmath.least_nonresidue(block.params[0])
        else:
            raise exceptions.StructureError(f"{block} is not an odd p-elementary block")
    return value


def _block_form(block: Block) -> FqForm:
    zero = ResidueQZ(0)
    if block.kind == BlockKind.RAW:
        return block.raw
    if block.kind == BlockKind.CYCLIC:
        n, a = block.params
        p = block.prime
        if p == 2:
            q = Fraction(a, 2 * n)
        else:
            q = Fraction(a * exactmath.inv_mod(2, n), n)
        return FqForm((n,), (ResidueQZ.from_fraction(q),), ((zero,),))
    if block.kind == BlockKind.HYPERBOLIC_ODD:
        p = block.params[0]
        half = ResidueQZ.from_fraction(Fraction(1, p))
        return FqForm((p, p), (zero, zero), ((zero, half), (half, zero)))
    if block.kind == BlockKind.ANISOTROPIC_ODD:
        return _anisotropic_plane(block.params[0])
    half = ResidueQZ(1, 2)
    if block.kind == BlockKind.HYPERBOLIC_TWO:
        return FqForm((2, 2), (zero, zero), ((zero, half), (half, zero)))
    return FqForm((2, 2), (half, half), ((zero, half), (half, zero)))


@functools.lru_cache(maxsize=None)
def _anisotropic_plane(p: int) -> FqForm:
    epsilon = exactmath.least_nonresidue(p)
    inverse_two = exactmath.inv_mod(2, p)
    zero = ResidueQZ(0)
    form = FqForm(
        (p, p),
        (
            ResidueQZ.from_fraction(Fraction(inverse_two, p)),
            ResidueQZ.from_fraction(Fraction(-epsilon * inverse_two, p)),
        ),
        ((zero, zero), (zero, zero)),
    )
    isotropic = [x for x in range(1, p * p) if form.q_int((x // p, x % p)) == 0]
    if isotropic:
        raise exceptions.ConsistencyError(f"N({p}) has the isotropic vector index {isotropic[0]}")
    return form


def realize(expr: BlockExpr) -> FqForm:
    """The form described by a block expression, blocks in the order written"""
    form = trivial_form()
    for block in expr.blocks():
        form = direct_sum(form, _block_form(block))
    return form


class _FormParser:
    def __init__(self, text: str):
        self._symbols = [(char, index) for index, char in enumerate(text) if not char.isspace()]
        self._cursor = 0
        self._end = len(text)

    def _position(self) -> int:
        if self._cursor < len(self._symbols):
            return self._symbols[self._cursor][1]
        return self._end

    def _peek(self) -> str:
        if self._cursor < len(self._symbols):
            return self._symbols[self._cursor][0]
        return ""

    def _advance(self) -> str:
        char = self._peek()
        self._cursor += 1
        return char

    def _expect(self, literal: str) -> None:
        for char in literal:
            if self._peek() != char:
                found = repr(self._peek()) if self._peek() else "the end of the input"
                raise exceptions.FormSyntaxError(
                    f"Expected {literal!r} but found {found}", self._position()
                )
            self._advance()

    def _integer(self, signed: bool = False) -> int:
        start = self._position()
        sign = 1
        if signed and self._peek() in ("-", "+"):
            sign = -1 if self._advance() == "-" else 1
        digits = ""
        while self._peek().isdigit():
            digits += self._advance()
        if not digits:
            raise exceptions.FormSyntaxError("Expected an integer", start)
        return sign * int(digits)

    def _rational(self) -> Fraction:
        numerator = self._integer(signed=True)
        if self._peek() == "/":
            self._advance()
            position = self._position()
            denominator = self._integer()
            if denominator == 0:
                raise exceptions.FormSyntaxError("Zero denominator", position)
            return Fraction(numerator, denominator)
        return Fraction(numerator)

    def _list(self, item, terminator: str) -> list:
        if self._peek() == terminator:
            return []
        items = [item()]
        while self._peek() == ",":
            self._advance()
            items.append(item())
        return items

    def parse(self) -> BlockExpr:
        if not self._symbols:
            raise exceptions.FormSyntaxError("The form is empty", 0)
        terms = [self._term()]
        while self._peek() in ("+", "⊕"):
            self._advance()
            terms.append(self._term())
        if self._cursor != len(self._symbols):
            raise exceptions.FormSyntaxError(f"Unexpected {self._peek()!r}", self._position())
        return BlockExpr(tuple(terms))

    def _term(self) -> Tuple[Block, int]:
        multiplicity = 1
        if self._peek().isdigit():
            multiplicity = self._integer()
            self._expect("*")
            if multiplicity < 1:
                raise exceptions.InvalidParameterError("Multiplicities must be at least 1")
        return self._block(), multiplicity

    def _block(self) -> Block:
        char = self._peek()
        if char == "q":
            self._advance()
            self._expect("(")
            n = self._integer()
            self._expect(",")
            a = self._integer(signed=True)
            self._expect(")")
            return cyclic_block(n, a)
        if char in ("U", "N"):
            self._advance()
            if char == "U" and self._peek() == "2":
                self._advance()
                return Block(BlockKind.HYPERBOLIC_TWO)
            self._expect("(")
            p = self._integer()
            self._expect(")")
            return hyperbolic_block(p) if char == "U" else anisotropic_block(p)
        if char == "V":
            self._advance()
            self._expect("2")
            return Block(BlockKind.ANISOTROPIC_TWO)
        if char == "g":
            self._expect("gram[")
            orders = self._list(self._integer, ";")
            self._expect(";")
            qdiag = self._list(self._rational, ";")
            self._expect(";")
            offdiag = self._list(self._rational, "]")
            self._expect("]")
            return raw_block(orders, qdiag, offdiag)
        found = repr(char) if char else "the end of the input"
        raise exceptions.FormSyntaxError(f"Expected a block but found {found}", self._position())


def parse_form(text: str) -> BlockExpr:
    """Parse a form expression

    The grammar is::

        form   := term (('+' | '⊕') term)*
        term   := [int '*'] block
        block  := 'q(' int ',' int ')' | 'U(' int ')' | 'N(' int ')' | 'U2' | 'V2'
                | 'gram[' orders ';' qdiag ';' offdiag ']'

    Whitespace is ignored. Raw rationals are written ``n/d`` and ``offdiag`` lists the pairings
    above the diagonal row by row.

    :param text: The expression
    :return: The parsed and validated block expression
    :raise FormSyntaxError: The text does not follow the grammar
    :raise InvalidParameterError: A block has invalid parameters
    """
    return _FormParser(text).parse()
