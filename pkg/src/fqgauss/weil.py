"""The Weil representation of a finite quadratic module and invariant modular forms

The Weil representation ρ acts on the group algebra C[A] with basis e_x by

    ρ(T) e_x = e(q(x)) e_x
    ρ(S) e_x = e(-σ/8) |A|^(-1/2) sum over y of e(-(x, y)) e_y

and commutes with the permutation action of O(A). Its restriction to the O(A)-invariant vectors
determines the dimension of the spaces of O(A)-invariant vector valued modular forms.

Matrices are kept exact as :class:`WeilMatrix`: an integer array of root of unity multiplicities
together with a power of |A|^(-1/2).
"""
import dataclasses
import logging
import math
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy

from . import exactmath, exceptions, fqm, gauss, orthogroup, tools
from .exactmath import CycNum, cyc, sqrt_int
from .fqm import Element, FqForm

logger = logging.getLogger("fqgauss.weil")

_INT64_SAFE = 2**62


def _reduced(core: numpy.ndarray, order: int) -> numpy.ndarray:
    """Reduce every entry of a group ring array modulo the cyclotomic polynomial of ``order``

    The array keeps its dtype, callers pass object arrays whenever int64 could overflow.
    """
    phi = numpy.array(exactmath.cyclotomic_coefficients(order), dtype=core.dtype)
    degree = len(phi) - 1
    work = core.copy()
    for top in range(order - 1, degree - 1, -1):
        lead = work[..., top]
        if not lead.any():
            continue
        work[..., top - degree : top + 1] -= lead[..., None] * phi
    return work[..., :degree]


def _magnitude(core: numpy.ndarray) -> int:
    return int(numpy.abs(core).max(initial=0))


def _fits(core: numpy.ndarray) -> bool:
    return core.dtype != object and _magnitude(core) < _INT64_SAFE


class WeilMatrix:
    """An exact matrix over Q(e(1/D), sqrt(|A|))

    The value is ``|A|^(-scale_power/2) * sum over c of core[..., c] * e(c/D)``.

    :param core: Integer array of shape (rows, columns, D)
    :param order: D, a multiple of 8, of the level of q and of the order of sqrt(|A|)
    :param form_order: |A|
    :param scale_power: The power s of |A|^(-1/2)
    :param basis_labels: The labels of the basis vectors, elements or orbit representatives
    """

    def __init__(
        self,
        core: numpy.ndarray,
        order: int,
        form_order: int,
        scale_power: int = 0,
        basis_labels: Sequence[Element] = (),
    ):
        if core.ndim != 3 or core.shape[2] != order:
            raise ValueError(f"The core must have shape (rows, columns, {order})")
        if scale_power < 0:
            raise ValueError(f"The scale power may not be below 0. Current value: {scale_power}")
        self.core = core
        self.order = order
        self.form_order = form_order
        self.scale_power = scale_power
        self.basis_labels = tuple(basis_labels)

    @classmethod
    def identity(
        cls, dim: int, order: int, form_order: int, basis_labels: Sequence[Element] = ()
    ) -> "WeilMatrix":
        core = numpy.zeros((dim, dim, order), dtype=numpy.int64)
        core[numpy.arange(dim), numpy.arange(dim), 0] = 1
        return cls(core, order, form_order, 0, basis_labels)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.core.shape[0], self.core.shape[1]

    @property
    def dim(self) -> int:
        return self.core.shape[0]

    def _like(self, core: numpy.ndarray, scale_power: int) -> "WeilMatrix":
        return WeilMatrix(core, self.order, self.form_order, scale_power, self.basis_labels)

    def _scale(self, value: CycNum) -> CycNum:
        if self.scale_power % 2 == 0:
            return value / self.form_order ** (self.scale_power // 2)
        return value * sqrt_int(self.form_order) / self.form_order ** ((self.scale_power + 1) // 2)

    def entry(self, i: int, j: int) -> CycNum:
        return self._scale(CycNum(self.order, [int(c) for c in self.core[i, j]]))

    def trace(self) -> CycNum:
        diagonal = sum(self.core[i, i] for i in range(self.dim))
        return self._scale(CycNum(self.order, [int(c) for c in diagonal]))

    def conj_transpose(self) -> "WeilMatrix":
        reverse = (-numpy.arange(self.order)) % self.order
        return self._like(self.core.transpose(1, 0, 2)[..., reverse], self.scale_power)

    def permuted(self, permutation: numpy.ndarray) -> "WeilMatrix":
        """The matrix P M P^-1 for the permutation matrix P with P e_x = e_permutation[x]"""
        core = numpy.empty_like(self.core)
        core[numpy.ix_(permutation, permutation)] = self.core
        return self._like(core, self.scale_power)

    def times_root(self) -> "WeilMatrix":
        """The same value with the scale power raised by one"""
        root = sqrt_int(self.form_order).embed(self.order)
        step = self.order // root.order
        vector = numpy.zeros(self.order, dtype=object)
        for exponent, coefficient in enumerate(root.coefficients):
            vector[exponent * step] = int(coefficient)
        bound = _magnitude(self.core) * sum(abs(int(c)) for c in vector)
        dtype = numpy.int64 if bound < _INT64_SAFE and _fits(self.core) else object
        source = self.core.astype(dtype)
        core = numpy.zeros(self.core.shape, dtype=dtype)
        for shift in numpy.flatnonzero(vector):
            core += int(vector[shift]) * numpy.roll(source, int(shift), axis=2)
        return self._like(core, self.scale_power + 1)

    def __matmul__(self, other: "WeilMatrix") -> "WeilMatrix":
        if not isinstance(other, WeilMatrix):
            return NotImplemented
        if self.order != other.order or self.form_order != other.form_order:
            raise ValueError("Both matrices must belong to the same form")
        left, right = self.core, other.core
        bound = _magnitude(left) * _magnitude(right) * left.shape[1] * self.order
        if not (_fits(left) and _fits(right)) or bound >= _INT64_SAFE:
            left, right = left.astype(object), right.astype(object)
        core = numpy.zeros((left.shape[0], right.shape[1], self.order), dtype=left.dtype)
        for shift in range(self.order):
            block = left[..., shift]
            if not block.any():
                continue
            core += numpy.tensordot(block, numpy.roll(right, shift, axis=2), axes=([1], [0]))
        result = WeilMatrix(core, self.order, self.form_order, self.scale_power + other.scale_power)
        result.basis_labels = other.basis_labels
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeilMatrix):
            return NotImplemented
        if self.shape != other.shape or self.order != other.order:
            return False
        if self.scale_power == other.scale_power and numpy.array_equal(self.core, other.core):
            return True
        left, right = self, other
        if left.scale_power % 2 != right.scale_power % 2:
            if left.scale_power % 2:
                left = left.times_root()
            else:
                right = right.times_root()
        power = max(left.scale_power, right.scale_power)
        left_factor = self.form_order ** ((power - left.scale_power) // 2)
        right_factor = self.form_order ** ((power - right.scale_power) // 2)
        bound = (
            _magnitude(left.core) * left_factor + _magnitude(right.core) * right_factor
        ) * self.order**2
        dtype = numpy.int64 if bound < _INT64_SAFE else object
        difference = (
            left.core.astype(dtype) * left_factor - right.core.astype(dtype) * right_factor
        )
        return not _reduced(difference, self.order).any()

    __hash__ = None

    def to_complex(self) -> numpy.ndarray:
        roots = numpy.exp(2j * numpy.pi * numpy.arange(self.order) / self.order)
        values = self.core.astype(float) @ roots
        return values / math.sqrt(self.form_order) ** self.scale_power

    def __repr__(self) -> str:
        return (
            f"WeilMatrix(shape={self.shape}, order={self.order}, "
            f"scale_power={self.scale_power})"
        )


@dataclasses.dataclass(frozen=True)
class HalfWeight:
    """A weight l in 1/2 Z, stored as 2l"""

    twice_l: int

    @classmethod
    def parse(cls, text: Union[str, int, "HalfWeight"]) -> "HalfWeight":
        """Read ``"7"``, ``"15/2"`` or ``"7.5"``

        :raise InvalidParameterError: The text is no half integer
        """
        if isinstance(text, HalfWeight):
            return text
        try:
            value = Fraction(str(text).strip())
        except (ValueError, ZeroDivisionError):
            raise exceptions.InvalidParameterError(f"{text!r} is not a weight")
        if (2 * value).denominator != 1:
            raise exceptions.InvalidParameterError(f"The weight {text} is not in 1/2 Z")
        return cls(int(2 * value))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_l, 2)

    def __str__(self) -> str:
        return str(self.twice_l // 2) if self.twice_l % 2 == 0 else f"{self.twice_l}/2"


def weil_order(form: FqForm) -> int:
    """The order D of the roots of unity used by the matrices of a form"""
    return math.lcm(8, form.level, sqrt_int(form.order).order)


def _labels(table: fqm.ElementTable) -> Tuple[Element, ...]:
    return tuple(table.element(i) for i in range(table.size))


def rho_T(form: FqForm, limits: Optional[tools.Limits] = None) -> WeilMatrix:
    """ρ(T) on the basis e_x in lexicographic order

    :raise DegenerateFormError: The form is degenerate
    :raise EnumerationCapError: The form has too many elements
    """
    fqm.require_nondegenerate(form, limits)
    table = fqm.element_table(form, limits)
    order = weil_order(form)
    core = numpy.zeros((table.size, table.size, order), dtype=numpy.int64)
    indices = numpy.arange(table.size)
    core[indices, indices, table.q_values * (order // form.level)] = 1
    return WeilMatrix(core, order, form.order, 0, _labels(table))


def rho_S(form: FqForm, limits: Optional[tools.Limits] = None) -> WeilMatrix:
    """ρ(S) on the basis e_x in lexicographic order

    :raise DegenerateFormError: The form is degenerate
    :raise EnumerationCapError: The form has too many elements
    """
    sigma = gauss.signature(form, limits)
    table = fqm.element_table(form, limits)
    order = weil_order(form)
    pairings = (table.dual_values @ table.elements.T) % form.level
    exponents = (-sigma * (order // 8) - pairings * (order // form.level)) % order
    core = numpy.zeros((table.size, table.size, order), dtype=numpy.int64)
    rows, columns = numpy.indices((table.size, table.size))
    core[rows, columns, exponents] = 1
    return WeilMatrix(core, order, form.order, 1, _labels(table))


def _inverse_of_unitary(matrix: WeilMatrix) -> WeilMatrix:
    return matrix.conj_transpose()


def parse_word(word: str) -> List[Tuple[str, int]]:
    """Split a word into letters S, T, Z with exponents 1 or -1

    Inverses are written ``S^-1`` or in lower case. Letters may be separated by whitespace.

    :raise WordSyntaxError: The word contains anything else
    """
    letters = []
    position = 0
    while position < len(word):
        char = word[position]
        if char.isspace():
            position += 1
            continue
        if char.upper() not in "STZ":
            raise exceptions.WordSyntaxError(
                f"Unexpected {char!r} at position {position} in {word!r}"
            )
        exponent = -1 if char.islower() else 1
        position += 1
        if word.startswith("^-1", position):
            if exponent == -1:
                raise exceptions.WordSyntaxError(
                    f"{char}^-1 at position {position - 1} mixes both ways of writing an inverse"
                )
            exponent = -1
            position += 3
        elif word.startswith("^", position):
            raise exceptions.WordSyntaxError(f"Only ^-1 may follow a letter (position {position})")
        letters.append((char.upper(), exponent))
    return letters


def rho_word(form: FqForm, word: str, limits: Optional[tools.Limits] = None) -> WeilMatrix:
    """The image of a word in S, T and Z, where Z = S^2

    The leftmost letter is applied last, so ``"S T"`` is ρ(S)ρ(T).

    :raise WordSyntaxError: The word could not be parsed
    """
    letters = parse_word(word)
    table = fqm.element_table(form, limits)
    result = WeilMatrix.identity(table.size, weil_order(form), form.order, _labels(table))
    if not letters:
        fqm.require_nondegenerate(form, limits)
        return result
    generators = {}
    s_matrix = rho_S(form, limits)
    generators[("S", 1)] = s_matrix
    generators[("S", -1)] = _inverse_of_unitary(s_matrix)
    generators[("T", 1)] = rho_T(form, limits)
    generators[("T", -1)] = _inverse_of_unitary(generators[("T", 1)])
    generators[("Z", 1)] = s_matrix @ s_matrix
    generators[("Z", -1)] = generators[("S", -1)] @ generators[("S", -1)]
    for letter in letters:
        result = result @ generators[letter]
    return result


def invariant_basis(
    form: FqForm, limits: Optional[tools.Limits] = None
) -> Tuple[numpy.ndarray, orthogroup.OrbitPartition]:
    """The O(A)-invariant vectors v_[x], the sums of e_y over the orbits

    :return: A 0/1 matrix whose columns are the vectors, and the orbit partition they come from
    """
    partition = orthogroup.orbits(form, limits=limits)
    table = fqm.element_table(form, limits)
    basis = numpy.zeros((table.size, len(partition)), dtype=numpy.int64)
    basis[numpy.arange(table.size), partition.orbit_of] = 1
    return basis, partition


def rho_inv(form: FqForm, word: str, limits: Optional[tools.Limits] = None) -> WeilMatrix:
    """The matrix of a word on the invariant subspace, in the basis v_[x]

    :raise ConsistencyError: The word does not preserve the invariant subspace
    """
    matrix = rho_word(form, word, limits)
    basis, partition = invariant_basis(form, limits)
    # Columns of ρV, which have to be constant on every orbit
    applied_core = numpy.tensordot(matrix.core, basis, axes=([1], [0])).transpose(0, 2, 1)
    applied = WeilMatrix(applied_core, matrix.order, form.order, matrix.scale_power)
    rows = numpy.array([members[0] for members in partition.orbit_elements], dtype=numpy.int64)
    restricted = WeilMatrix(
        applied_core[rows], matrix.order, form.order, matrix.scale_power, partition.representatives
    )
    spread = WeilMatrix(
        restricted.core[partition.orbit_of], matrix.order, form.order, matrix.scale_power
    )
    if applied != spread:
        raise exceptions.ConsistencyError(f"{word!r} does not preserve the invariant vectors")
    return restricted


class TraceIdentities(NamedTuple):
    """The traces of ρ(S) and ρ(ST) on the invariant subspace"""

    tr_s: CycNum
    tr_st: CycNum
    check: bool


def trace_identities(form: FqForm, limits: Optional[tools.Limits] = None) -> TraceIdentities:
    """Compute both traces as matrix traces and compare them with the Gauss sum expressions

    tr ρ(S) = e(-σ/8) G(A, O(A)) / sqrt(|A|)
    tr ρ(ST) = e(-σ/8) conj(G'(A, O(A))) / sqrt(|A|)
    """
    tr_s = rho_inv(form, "S", limits).trace()
    tr_st = rho_inv(form, "ST", limits).trace()
    sigma = gauss.signature(form, limits)
    factor = cyc(-sigma, 8) * sqrt_int(form.order) / form.order
    expected_s = factor * gauss.equivariant_gauss(form, limits=limits).value
    expected_st = factor * gauss.equivariant_gauss2(form, limits=limits).value.conjugate()
    check = tr_s == expected_s and tr_st == expected_st
    if not check:
        logger.warning("Trace identities fail for %s", form)
    return TraceIdentities(tr_s, tr_st, check)


def alpha_invariant(form: FqForm, limits: Optional[tools.Limits] = None) -> Fraction:
    """The sum of the lifts to [0, 1) of q over a set of orbit representatives"""
    partition = orthogroup.orbits(form, limits=limits)
    return sum(
        (fqm.q_of(form, representative).value for representative in partition.representatives),
        Fraction(0),
    )


class InvariantData(NamedTuple):
    """Everything the dimension formulas need to know about a form"""

    orbit_count: int
    alpha: Fraction
    sigma: int
    first: CycNum
    second: CycNum
    form_order: int


def invariant_data(form: FqForm, limits: Optional[tools.Limits] = None) -> InvariantData:
    return InvariantData(
        orbit_count=len(orthogroup.orbits(form, limits=limits)),
        alpha=alpha_invariant(form, limits),
        sigma=gauss.signature(form, limits),
        first=gauss.equivariant_gauss(form, limits=limits).value,
        second=gauss.equivariant_gauss2(form, limits=limits).value,
        form_order=form.order,
    )


def _check_weight(weight: Union[HalfWeight, str, int], warn: bool = True) -> HalfWeight:
    weight = HalfWeight.parse(weight)
    if weight.twice_l < 4:
        raise exceptions.InvalidParameterError(
            f"The weight may not be below 2. Current value: {weight}"
        )
    if warn and weight.twice_l == 4:
        logger.warning("The dimension for l = 2 follows the formula as printed")
    return weight


def integral_value(value: float) -> Optional[int]:
    """The nearest integer if it is nonnegative and within 1e-6 of the value"""
    nearest = round(value)
    if abs(value - nearest) >= 1e-6 or nearest < 0:
        return None
    return int(nearest)


def _rounded(value: float, form: FqForm, weight: HalfWeight) -> int:
    nearest = integral_value(value)
    if nearest is None:
        raise exceptions.ConsistencyError(
            f"The dimension formula gives {value} for {form} in weight {weight}"
        )
    return nearest


def _formula(data: InvariantData, weight: HalfWeight) -> float:
    root = math.sqrt(data.form_order)
    sign = (-1) ** ((weight.twice_l - data.sigma) // 4)
    rational_part = Fraction(data.orbit_count * (weight.twice_l + 10), 24) - data.alpha
    rotation = cyc(2 * weight.twice_l + 2 - 3 * data.sigma, 24)
    phase = (rotation * data.second.conjugate()).to_complex()
    return (
        float(rational_part)
        + sign * data.first.to_complex().real / (4 * root)
        + 2 / (3 * math.sqrt(3) * root) * phase.real
    )


def _trace_formula(data: InvariantData, traces: TraceIdentities, weight: HalfWeight) -> float:
    rational_part = Fraction(data.orbit_count * (weight.twice_l + 10), 24) - data.alpha
    s_term = (cyc(weight.twice_l, 8) * traces.tr_s).to_complex()
    st_term = (cyc(weight.twice_l + 1, 12) * traces.tr_st).to_complex()
    return float(rational_part) + s_term.real / 4 + 2 / (3 * math.sqrt(3)) * st_term.real


def _parity_excludes(data: InvariantData, weight: HalfWeight) -> bool:
    return (weight.twice_l - data.sigma) % 4 != 0


def dim_invariant_forms(
    form: FqForm, weight: Union[HalfWeight, str, int], limits: Optional[tools.Limits] = None
) -> int:
    """The dimension of the O(A)-invariant modular forms of weight l for ρ

    :param form: A nondegenerate form
    :param weight: The weight l >= 2
    :return: 0 if 2l - σ is not divisible by 4, otherwise the value of the closed formula in
        the Gauss sums G(A, O(A)) and G'(A, O(A))
    :raise InvalidParameterError: l < 2
    :raise ConsistencyError: The formula is not within 1e-6 of a nonnegative integer
    """
    weight = _check_weight(weight)
    data = invariant_data(form, limits)
    if _parity_excludes(data, weight):
        return 0
    return _rounded(_formula(data, weight), form, weight)


def dim_from_traces(
    form: FqForm, weight: Union[HalfWeight, str, int], limits: Optional[tools.Limits] = None
) -> int:
    """The same dimension computed from the traces of ρ(S) and ρ(ST) on the invariant vectors"""
    weight = _check_weight(weight)
    data = invariant_data(form, limits)
    if _parity_excludes(data, weight):
        return 0
    return _rounded(_trace_formula(data, trace_identities(form, limits), weight), form, weight)


class DimensionRow(NamedTuple):
    """Unrounded values of both dimension formulas, 0.0 where the parity excludes the weight"""

    weight: HalfWeight
    formula: float
    from_traces: float

    @property
    def dimension(self) -> Optional[int]:
        """The common rounded value, or ``None`` if a value fails the guard or they differ"""
        first, second = integral_value(self.formula), integral_value(self.from_traces)
        return first if first is not None and first == second else None


def dimension_table(
    form: FqForm,
    weights: Sequence[Union[HalfWeight, str, int]],
    limits: Optional[tools.Limits] = None,
) -> List[DimensionRow]:
    """Both dimension values for several weights, sharing the orbit and trace computations"""
    weights = [_check_weight(weight, warn=False) for weight in weights]
    data = invariant_data(form, limits)
    traces = trace_identities(form, limits)
    rows = []
    for weight in weights:
        if _parity_excludes(data, weight):
            rows.append(DimensionRow(weight, 0.0, 0.0))
        else:
            rows.append(
                DimensionRow(weight, _formula(data, weight), _trace_formula(data, traces, weight))
            )
    return rows


class WeilChecks(NamedTuple):
    """Exact identities of the Weil representation of one form"""

    unitary_s: bool
    unitary_t: bool
    s_order_eight: bool
    modular_relation: bool
    z_action: bool
    equivariance: bool
    trace_identities: bool

    @property
    def passed(self) -> bool:
        return all(self)


def weil_checks(form: FqForm, limits: Optional[tools.Limits] = None) -> WeilChecks:
    """Check unitarity, S^8 = 1, S^2 = (ST)^3, the action of Z, the commutation with O(A) and
    the trace identities"""
    table = fqm.element_table(form, limits)
    s_matrix = rho_S(form, limits)
    t_matrix = rho_T(form, limits)
    identity = WeilMatrix.identity(table.size, s_matrix.order, form.order)
    s_squared = s_matrix @ s_matrix
    s_fourth = s_squared @ s_squared
    st = s_matrix @ t_matrix

    sigma = gauss.signature(form, limits)
    z_core = numpy.zeros_like(s_matrix.core)
    negatives = table.index_of(-table.elements)
    z_core[negatives, numpy.arange(table.size), (-sigma * s_matrix.order // 4) % s_matrix.order] = 1
    z_expected = WeilMatrix(z_core, s_matrix.order, form.order)

    group = orthogroup.orthogonal_group(form, limits)
    equivariance = True
    for matrix in group.stack:
        permutation = table.index_of(table.elements @ matrix.T)
        if s_matrix.permuted(permutation) != s_matrix or t_matrix.permuted(permutation) != t_matrix:
            equivariance = False
            break

    checks = WeilChecks(
        unitary_s=s_matrix @ s_matrix.conj_transpose() == identity,
        unitary_t=t_matrix @ t_matrix.conj_transpose() == identity,
        s_order_eight=s_fourth @ s_fourth == identity,
        modular_relation=s_squared == st @ st @ st,
        z_action=s_squared == z_expected,
        equivariance=equivariance,
        trace_identities=trace_identities(form, limits).check,
    )
    logger.debug("Weil checks for %s: %s", form, checks)
    return checks
