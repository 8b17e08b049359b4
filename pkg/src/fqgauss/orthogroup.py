"""The orthogonal group O(A) of a finite quadratic module and its orbits"""
import collections
import dataclasses
import functools
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy

from . import exceptions, fqm, tools
from .exactmath import ResidueQ2Z
from .fqm import Element, FqForm

logger = logging.getLogger("fqgauss.orthogroup")


@dataclasses.dataclass(frozen=True)
class Isometry:
    """A group endomorphism given by the images of the generators

    :param orders: The generator orders of the form it acts on
    :type orders: tuple[int, ...]
    :param images: ``images[j]`` is the image of e_j, the j-th column of the matrix
    :type images: tuple[Element, ...]
    """

    orders: Tuple[int, ...]
    images: Tuple[Element, ...]

    @classmethod
    def identity(cls, form: FqForm) -> "Isometry":
        return cls(form.orders, tuple(_unit_vector(form.rank, j) for j in range(form.rank)))

    @classmethod
    def negation(cls, form: FqForm) -> "Isometry":
        return cls(
            form.orders,
            tuple(form.negate(_unit_vector(form.rank, j)) for j in range(form.rank)),
        )

    @property
    def matrix(self) -> numpy.ndarray:
        """The integer matrix whose j-th column is the image of e_j"""
        rank = len(self.orders)
        if rank == 0:
            return numpy.zeros((0, 0), dtype=numpy.int64)
        return numpy.array(self.images, dtype=numpy.int64).T

    def apply(self, x: Sequence[int]) -> Element:
        image = [0] * len(self.orders)
        for coefficient, column in zip(x, self.images):
            for i, value in enumerate(column):
                image[i] += coefficient * value
        return tuple(a % n for a, n in zip(image, self.orders))

    def __matmul__(self, other: "Isometry") -> "Isometry":
        if not isinstance(other, Isometry):
            return NotImplemented
        return Isometry(self.orders, tuple(self.apply(column) for column in other.images))

    def inverse(self) -> "Isometry":
        rank = len(self.orders)
        identity = Isometry(self.orders, tuple(_unit_vector(rank, j) for j in range(rank)))
        previous, power = identity, self
        while power != identity:
            previous, power = power, power @ self
        return previous

    def direct_sum(self, other: "Isometry") -> "Isometry":
        """The isometry g1 + g2 of the direct sum of the two forms"""
        padding = (0,) * len(other.orders)
        leading = (0,) * len(self.orders)
        return Isometry(
            self.orders + other.orders,
            tuple(image + padding for image in self.images)
            + tuple(leading + image for image in other.images),
        )

    def preserves(self, form: FqForm) -> bool:
        """Whether the images are well defined and preserve q and the pairing on the generators"""
        if form.orders != self.orders or len(self.images) != form.rank:
            return False
        for j, image in enumerate(self.images):
            if any(self.orders[j] * a % m for a, m in zip(image, self.orders)):
                return False
            if form.q_int(image) != form.q_int(_unit_vector(form.rank, j)):
                return False
            for i in range(j):
                if form.pair_int(self.images[i], image) != int(form.gram[i, j]) % form.level:
                    return False
        return True

    def is_bijective(self, form: FqForm, limits: Optional[tools.Limits] = None) -> bool:
        """Exhaustive check that the map permutes the elements"""
        table = fqm.element_table(form, limits)
        images = table.index_of(table.elements @ self.matrix.T)
        return numpy.unique(images).size == table.size

    def __str__(self) -> str:
        return "[" + " ".join(str(list(image)) for image in self.images) + "]"


def _unit_vector(rank: int, j: int) -> Element:
    return tuple(1 if i == j else 0 for i in range(rank))


class IsomGroup:
    """A finite group of isometries of a form

    :param form: The form the isometries act on
    :param elements: The group elements, the identity included
    """

    def __init__(self, form: FqForm, elements: Sequence[Isometry]):
        self.form = form
        self.elements = tuple(elements)
        self._members = frozenset(self.elements)
        if form.rank:
            self.stack = numpy.stack([g.matrix for g in self.elements])
        else:
            self.stack = numpy.zeros((len(self.elements), 0, 0), dtype=numpy.int64)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, isometry: Isometry) -> bool:
        return isometry in self._members

    def __len__(self) -> int:
        return len(self.elements)

    def images_of(self, x: Sequence[int]) -> numpy.ndarray:
        """The rows g(x) for all group elements g"""
        return (self.stack @ numpy.array(x, dtype=numpy.int64)) % self.form.order_array


@dataclasses.dataclass(frozen=True)
class OrbitPartition:
    """The orbits of a group acting on the elements of a form

    ``orbit_of`` maps element table indices to orbit numbers and ``orbit_elements`` holds the
    table indices of every orbit. Each representative is the lexicographically least element of
    its orbit, and orbits are numbered by their representatives.
    """

    representatives: Tuple[Element, ...]
    orbit_of: numpy.ndarray
    orbit_elements: Tuple[numpy.ndarray, ...]

    def __len__(self) -> int:
        return len(self.representatives)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(int(members.size) for members in self.orbit_elements)


def orthogonal_group(form: FqForm, limits: Optional[tools.Limits] = None) -> IsomGroup:
    """Enumerate O(A) by a depth-first search over the images of the generators

    The image of e_j has to be an element of order dividing n_j with the same q-value as e_j
    whose pairings with the images already chosen match the pairings of the generators.

    :param form: A nondegenerate form
    :param limits: The enumeration cap and the search budget
    :return: The full orthogonal group
    :raise DegenerateFormError: The form is degenerate
    :raise EnumerationCapError: The form has too many elements
    :raise SearchBudgetExceeded: The search visited too many partial assignments
    """
    return _search(form, tools.resolve_limits(limits))


@functools.lru_cache(maxsize=32)
def _search(form: FqForm, limits: tools.Limits) -> IsomGroup:
    fqm.require_nondegenerate(form, limits)
    table = fqm.element_table(form, limits)
    rank = form.rank
    candidates = []
    for j in range(rank):
        target = form.q_int(_unit_vector(rank, j))
        admissible = (table.q_values == target) & ~(
            (form.orders[j] * table.elements) % form.order_array
        ).any(axis=1)
        candidates.append(numpy.flatnonzero(admissible))
    logger.debug(
        "Isometry search on %s: candidate counts %s", form, [int(c.size) for c in candidates]
    )

    found: List[Isometry] = []
    chosen: List[int] = []
    visited = 0

    def extend(depth: int) -> None:
        nonlocal visited
        if depth == rank:
            found.append(Isometry(form.orders, tuple(table.element(i) for i in chosen)))
            return
        pool = candidates[depth]
        if chosen:
            images = table.elements[chosen]
            targets = form.gram[depth, :depth] % form.level
            keep = ((table.dual_values[pool] @ images.T) % form.level == targets).all(axis=1)
            pool = pool[keep]
        visited += int(pool.size)
        if visited > limits.search_budget:
            raise exceptions.SearchBudgetExceeded(limits.search_budget)
        for index in pool:
            chosen.append(int(index))
            extend(depth + 1)
            chosen.pop()

    extend(0)
    logger.debug("Found %d isometries after %d partial assignments", len(found), visited)
    return IsomGroup(form, found)


def subgroup_from_generators(group: IsomGroup, generators: Sequence[Isometry]) -> IsomGroup:
    """The subgroup generated by some elements of a group

    :raise NotAnIsometryError: A generator is not an element of the group
    """
    for generator in generators:
        if generator not in group:
            raise exceptions.NotAnIsometryError(f"{generator} is not an element of the group")
    identity = Isometry.identity(group.form)
    elements = [identity]
    seen = {identity}
    queue = collections.deque([identity])
    while queue:
        current = queue.popleft()
        for generator in generators:
            product = generator @ current
            if product not in seen:
                seen.add(product)
                elements.append(product)
                queue.append(product)
    return IsomGroup(group.form, elements)


def orbits(
    form: FqForm, group: Optional[IsomGroup] = None, limits: Optional[tools.Limits] = None
) -> OrbitPartition:
    """Partition the elements of a form into orbits

    :param form: The form
    :param group: The acting group, by default O(A)
    :param limits: The enumeration cap and the search budget
    """
    if group is None:
        return _full_orbits(form, tools.resolve_limits(limits))
    return _partition(form, group, limits)


@functools.lru_cache(maxsize=32)
def _full_orbits(form: FqForm, limits: tools.Limits) -> OrbitPartition:
    return _partition(form, _search(form, limits), limits)


def _partition(form: FqForm, group: IsomGroup, limits: Optional[tools.Limits]) -> OrbitPartition:
    table = fqm.element_table(form, limits)
    orbit_of = numpy.full(table.size, -1, dtype=numpy.int64)
    representatives, members = [], []
    for index in range(table.size):
        if orbit_of[index] >= 0:
            continue
        orbit = numpy.unique(table.index_of(group.images_of(table.elements[index])))
        orbit_of[orbit] = len(representatives)
        representatives.append(table.element(index))
        members.append(orbit)
    orbit_of.flags.writeable = False
    logger.debug(
        "%d orbits of a group of order %d on %d elements", len(members), group.order, table.size
    )
    return OrbitPartition(tuple(representatives), orbit_of, tuple(members))


def _require_two_elementary(form: FqForm) -> None:
    if any(n != 2 for n in form.orders):
        raise exceptions.StructureError(f"The form {form} is not 2-elementary")


def characteristic_element(form: FqForm, limits: Optional[tools.Limits] = None) -> Element:
    """The element x_A with (x, x_A) = (x, x) for every x of a 2-elementary form

    :raise StructureError: The form is not 2-elementary or x_A does not exist uniquely
    """
    _require_two_elementary(form)
    table = fqm.element_table(form, limits)
    # Both sides are additive in x, so the generators suffice
    targets = numpy.diag(form.gram) % form.level
    matches = numpy.flatnonzero((table.dual_values == targets).all(axis=1))
    if matches.size != 1:
        raise exceptions.StructureError(
            f"The form {form} has {matches.size} candidates for the characteristic element"
        )
    return table.element(int(matches[0]))


def is_special(form: FqForm, limits: Optional[tools.Limits] = None) -> bool:
    """A 2-elementary form is special if its characteristic element vanishes"""
    return not any(characteristic_element(form, limits))


def contains_U_summand(
    form: FqForm, limits: Optional[tools.Limits] = None
) -> Optional[Tuple[Element, Element]]:
    """Find isotropic x, y with (x, y) = 1/2 in a 2-elementary form

    Such a pair spans an orthogonal summand isometric to U2.

    :return: The pair, or ``None`` if the form has no summand U2
    :raise StructureError: The form is not 2-elementary
    """
    _require_two_elementary(form)
    table = fqm.element_table(form, limits)
    isotropic = numpy.flatnonzero(table.q_values == 0)[1:]
    half = form.level // 2
    for position, index in enumerate(isotropic):
        partners = isotropic[position + 1 :]
        hits = partners[table.dual_values[partners] @ table.elements[index] % form.level == half]
        if hits.size:
            return table.element(int(index)), table.element(int(hits[0]))
    return None


def norm_strata(
    form: FqForm, limits: Optional[tools.Limits] = None
) -> Dict[ResidueQ2Z, Tuple[Element, ...]]:
    """Group the elements by their norm (x, x) in Q/2Z"""
    table = fqm.element_table(form, limits)
    strata: Dict[ResidueQ2Z, List[Element]] = {}
    for index, value in enumerate(table.norm_values()):
        key = ResidueQ2Z.from_fraction(Fraction(int(value), form.level))
        strata.setdefault(key, []).append(table.element(index))
    return {key: tuple(elements) for key, elements in strata.items()}
