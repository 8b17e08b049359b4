"""Equivariant Gauss sums computed by summing over orbits

For a group Γ of isometries of A the orbit pairing of x and y is the sum of e((x, y')) over the
orbit of y. The equivariant Gauss sums are

    G(A, Γ)  = sum over orbits [x] of <[x], [x]>
    G'(A, Γ) = sum over orbits [x] of e(-q(x)) <[x], [x]>

Both are independent of the chosen representatives. The values computed here are the reference
against which the closed formulas are checked.
"""
import dataclasses
import logging
from typing import Optional, Sequence

import numpy

from . import exceptions, fqm, orthogroup, tools
from .enums import GaussKind
from .exactmath import CycNum, cyc, sqrt_int
from .fqm import FqForm
from .orthogroup import IsomGroup

logger = logging.getLogger("fqgauss.gauss")


@dataclasses.dataclass(frozen=True)
class GaussValue:
    """An exact Gauss sum of a form of order ``form_order``"""

    value: CycNum
    form_order: int

    @property
    def approx(self) -> complex:
        return self.value.to_complex()

    def magnitude_class(self) -> Optional[int]:
        """c in {0, 1, 2} with |value| = c * sqrt(|A|), or ``None`` for any other absolute value"""
        norm = self.value * self.value.conjugate()
        if not norm.is_rational():
            return None
        norm = norm.rational_value()
        for factor in (0, 1, 2):
            if norm == factor * factor * self.form_order:
                return factor
        return None

    def conjugate(self) -> "GaussValue":
        return GaussValue(self.value.conjugate(), self.form_order)

    def __str__(self) -> str:
        return str(self.value)


def _counts(exponents: numpy.ndarray, level: int) -> CycNum:
    return CycNum.from_exponent_counts(numpy.bincount(exponents % level, minlength=level), level)


def orbit_pairing(
    form: FqForm,
    group: IsomGroup,
    x: Sequence[int],
    y: Sequence[int],
    limits: Optional[tools.Limits] = None,
) -> CycNum:
    """The sum of e((x, y')) over the orbit of y under the group"""
    table = fqm.element_table(form, limits)
    orbit = numpy.unique(table.index_of(group.images_of(form.reduce(y))))
    values = table.dual_values[orbit] @ numpy.array(form.reduce(x), dtype=numpy.int64)
    return _counts(values, form.level)


def _equivariant(
    form: FqForm, group: Optional[IsomGroup], kind: GaussKind, limits: Optional[tools.Limits]
) -> GaussValue:
    limits = tools.resolve_limits(limits)
    fqm.require_nondegenerate(form, limits)
    table = fqm.element_table(form, limits)
    partition = orthogroup.orbits(form, group, limits)
    level = form.level
    exponents = []
    for representative, members in zip(partition.representatives, partition.orbit_elements):
        vector = numpy.array(representative, dtype=numpy.int64)
        values = table.dual_values[members] @ vector
        if kind == GaussKind.SECOND:
            values = values - form.q_int(representative)
        exponents.append(values % level)
    logger.debug("Summed %s kind over %d orbits", kind.value, len(partition))
    return GaussValue(_counts(numpy.concatenate(exponents), level), form.order)


def equivariant_gauss(
    form: FqForm, group: Optional[IsomGroup] = None, limits: Optional[tools.Limits] = None
) -> GaussValue:
    """G(A, Γ), where Γ defaults to O(A)

    :raise DegenerateFormError: The form is degenerate
    :raise EnumerationCapError: The form has too many elements
    :raise SearchBudgetExceeded: O(A) could not be enumerated within the budget
    """
    return _equivariant(form, group, GaussKind.FIRST, limits)


def equivariant_gauss2(
    form: FqForm, group: Optional[IsomGroup] = None, limits: Optional[tools.Limits] = None
) -> GaussValue:
    """G'(A, Γ), where Γ defaults to O(A)

    :raise DegenerateFormError: The form is degenerate
    :raise EnumerationCapError: The form has too many elements
    :raise SearchBudgetExceeded: O(A) could not be enumerated within the budget
    """
    return _equivariant(form, group, GaussKind.SECOND, limits)


def equivariant(
    form: FqForm,
    kind: GaussKind,
    group: Optional[IsomGroup] = None,
    limits: Optional[tools.Limits] = None,
) -> GaussValue:
    """Dispatch to :func:`equivariant_gauss` or :func:`equivariant_gauss2`"""
    return _equivariant(form, group, GaussKind(kind), limits)


def classical_gauss(
    form: FqForm, kind: GaussKind, limits: Optional[tools.Limits] = None
) -> GaussValue:
    """The sum of e((x, x)) (first kind) or of e(q(x)) (second kind) over all x"""
    table = fqm.element_table(form, limits)
    if GaussKind(kind) == GaussKind.FIRST:
        exponents = 2 * table.q_values
    else:
        exponents = table.q_values
    return GaussValue(_counts(exponents, form.level), form.order)


def signature(form: FqForm, limits: Optional[tools.Limits] = None) -> int:
    """The signature σ in Z/8 with sum of e(q(x)) = e(σ/8) sqrt(|A|)

    :return: The lift of σ in 0..7
    :raise DegenerateFormError: The form is degenerate
    :raise ConsistencyError: The sum is not of the expected shape
    """
    fqm.require_nondegenerate(form, limits)
    value = classical_gauss(form, GaussKind.SECOND, limits).value
    if value**8 != form.order**4:
        raise exceptions.ConsistencyError(f"The Gauss sum of {form} does not have |G|^2 = |A|")
    root = sqrt_int(form.order)
    for candidate in range(8):
        if value == cyc(candidate, 8) * root:
            return candidate
    raise exceptions.ConsistencyError(f"No signature matches the Gauss sum {value} of {form}")


@dataclasses.dataclass(frozen=True)
class LocalizationCheck:
    """Both equivariant sums of a form next to the products of the sums of its p-parts"""

    primes: tuple
    whole_first: CycNum
    product_first: CycNum
    whole_second: CycNum
    product_second: CycNum

    @property
    def first_ok(self) -> bool:
        return self.whole_first == self.product_first

    @property
    def second_ok(self) -> bool:
        return self.whole_second == self.product_second

    @property
    def ok(self) -> bool:
        return self.first_ok and self.second_ok


def localization_check(form: FqForm, limits: Optional[tools.Limits] = None) -> LocalizationCheck:
    """Compare G(A, O(A)) and G'(A, O(A)) with the products over the p-parts of A"""
    primes = fqm.primes_of(form)
    product_first, product_second = CycNum(1, [1]), CycNum(1, [1])
    for p in primes:
        part, _ = fqm.p_part(form, p)
        product_first = product_first * equivariant_gauss(part, limits=limits).value
        product_second = product_second * equivariant_gauss2(part, limits=limits).value
    return LocalizationCheck(
        primes,
        equivariant_gauss(form, limits=limits).value,
        product_first,
        equivariant_gauss2(form, limits=limits).value,
        product_second,
    )
