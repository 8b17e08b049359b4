"""Closed formulas for the equivariant Gauss sums G(A, O(A)) and G'(A, O(A))

The dispatcher :func:`eval_closed` splits a block expression into its p-parts, picks the
formula which covers each of them and multiplies the results. Shapes without a known formula
are reported as :class:`Unsupported` instead of raising.
"""
import dataclasses
import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import isprime

from . import exceptions, fqm, orthogroup, tools
from .enums import BlockKind, GaussKind, RuleId
from .exactmath import CycNum, as_cyc, cyc, kronecker, sqrt_int
from .fqm import Block, BlockExpr

logger = logging.getLogger("fqgauss.closedform")


@dataclasses.dataclass(frozen=True)
class Unsupported:
    """No closed formula covers the p-part ``prime`` (``None`` for raw input)"""

    prime: Optional[int]
    reason: str

    def __str__(self) -> str:
        return f"unsupported ({self.reason})"


Rule = Union[RuleId, Unsupported]


@dataclasses.dataclass(frozen=True)
class Verdict:
    """The outcome of the dispatcher

    :param parts: One ``(prime, rule)`` pair per p-part in increasing order of p
    :param value: The product of the closed values, ``None`` unless every part is supported
    """

    parts: Tuple[Tuple[Optional[int], Rule], ...]
    value: Optional[CycNum]

    @property
    def supported(self) -> bool:
        return all(isinstance(rule, RuleId) for _, rule in self.parts)

    @property
    def rule(self) -> str:
        return "*".join(
            rule.value if isinstance(rule, RuleId) else str(rule) for _, rule in self.parts
        )


_RULES = {
    GaussKind.FIRST: {
        "cyclic_odd": RuleId.CYCLIC_ODD,
        "cyclic_two": RuleId.CYCLIC_TWO,
        "elem_iso": RuleId.ELEM_ODD_ISO,
        "elem_aniso": RuleId.ELEM_ODD_ANISO,
        "product_odd": RuleId.PRODUCT_ODD,
    },
    GaussKind.SECOND: {
        "cyclic_odd": RuleId.CYCLIC_ODD_2ND,
        "cyclic_two": RuleId.CYCLIC_TWO_2ND,
        "elem_iso": RuleId.ELEM_ODD_ISO_2ND,
        "elem_aniso": RuleId.ELEM_ODD_ANISO_2ND,
        "product_odd": RuleId.PRODUCT_2ND,
    },
}


def _check_odd_prime(p: int) -> None:
    if p == 2 or not isprime(p):
        raise exceptions.InvalidParameterError(f"{p} is not an odd prime")


def _roots(p: int, polynomial) -> List[int]:
    return [x for x in range(p) if polynomial(x) % p == 0]


def _agree(values: Sequence[CycNum], description: str) -> CycNum:
    """Check that a formula does not depend on the root chosen for δ"""
    for value in values[1:]:
        if value != values[0]:
            raise exceptions.ConsistencyError(f"{description} depends on the choice of δ")
    return values[0]


def cyclic_odd(p: int, k: int, a: int, kind: GaussKind) -> CycNum:
    """The closed value for the cyclic form q(p^k, a) with p odd

    :raise InvalidParameterError: p is not an odd prime, k < 1 or a is divisible by p
    """
    _check_odd_prime(p)
    if k < 1:
        raise exceptions.InvalidParameterError(
            f"The exponent may not be below 1. Current value: {k}"
        )
    if a % p == 0:
        raise exceptions.InvalidParameterError(f"{a} is not a unit modulo {p}")
    n = p**k
    root = sqrt_int(n)
    if GaussKind(kind) == GaussKind.FIRST:
        if n % 4 == 3:
            return as_cyc(0)
        return root * kronecker(a, p) ** k
    if p == 3:
        # -i^(k^2) (-a/3)^k e(-a/3) sqrt(3^k)
        return -cyc(k * k, 4) * cyc(-a, 3) * root * kronecker(-a, 3) ** k
    if kronecker(p, 3) ** k == -1:
        return as_cyc(0)
    unit = as_cyc(1) if n % 4 == 1 else cyc(1, 4)
    return unit * root * kronecker(2 * a, p) ** k


def elem_odd(p: int, m: int, d: int, kind: GaussKind, isotropic: bool) -> CycNum:
    """The closed value for an m-dimensional quadratic space over F_p with p odd

    :param p: The prime
    :param m: The dimension, at least 2
    :param d: A representative of the discriminant
    :param kind: The kind of the Gauss sum
    :param isotropic: Whether the space has a nonzero isotropic vector
    :raise InvalidParameterError: The parameters describe no quadratic space
    """
    _check_odd_prime(p)
    if m < 2:
        raise exceptions.InvalidParameterError(
            f"The dimension may not be below 2. Current value: {m}"
        )
    if d % p == 0:
        raise exceptions.InvalidParameterError(f"The discriminant {d} is not a unit modulo {p}")
    if m == 2 and isotropic != (kronecker(-d, p) == 1):
        raise exceptions.InvalidParameterError(
            f"A plane over F_{p} with discriminant {d} is "
            f"{'anisotropic' if isotropic else 'isotropic'}"
        )
    if not isotropic and m > 2:
        raise exceptions.InvalidParameterError(
            f"Every quadratic space of dimension {m} > 2 over F_{p} is isotropic"
        )
    root = sqrt_int(p**m)
    if GaussKind(kind) == GaussKind.FIRST:
        if not isotropic:
            return as_cyc((-1) ** ((p + 1) // 2) * p)
        if p % 4 == 3:
            return as_cyc(0)
        values = [
            root * (2 * kronecker(2 * delta, p) ** m * kronecker(d, p))
            for delta in _roots(p, lambda x: x * x + 1)
        ]
        return _agree(values, f"G of an isotropic space over F_{p}")
    if not isotropic:
        return as_cyc(-kronecker(p, 3) * p)
    if p == 3:
        return cyc(-m, 4) * root * kronecker(d, 3)
    if p % 3 == 2:
        return as_cyc(0)
    sign = kronecker((-1) ** (m // 2) * d, p)
    phase = cyc(-m * m * (p - 1) ** 2, 16)
    values = [
        phase * root * (2 * kronecker(2 * delta, p) ** m * sign)
        for delta in _roots(p, lambda x: x * x - x + 1)
    ]
    return _agree(values, f"G' of an isotropic space over F_{p}")


def cyclic_two(k: int, a: int, kind: GaussKind) -> CycNum:
    """The closed value for the cyclic form q(2^k, a)

    :raise InvalidParameterError: k < 1 or a is even
    """
    if k < 1:
        raise exceptions.InvalidParameterError(
            f"The exponent may not be below 1. Current value: {k}"
        )
    if a % 2 == 0:
        raise exceptions.InvalidParameterError(f"{a} is not a unit modulo 2")
    root = sqrt_int(2**k)
    if GaussKind(kind) == GaussKind.FIRST:
        if k == 1:
            return as_cyc(0)
        return root * kronecker(2, a % 8) ** k
    if k % 2 == 0:
        return as_cyc(0)
    values = [
        cyc(-1, 8) * cyc((b + 1) ** 2 // 4, 4) * root * kronecker(2, b % 8) ** (k + 1)
        for b in (a % 8, a % 8 + 8)
    ]
    return _agree(values, "G' of a cyclic 2-adic form modulo 8")


def classical_elementary(p: int, m: int, d: int) -> CycNum:
    """The sum of e(q(x)) over an m-dimensional quadratic space over F_p with discriminant d

    :raise InvalidParameterError: p is not an odd prime or d is divisible by p
    """
    _check_odd_prime(p)
    if d % p == 0:
        raise exceptions.InvalidParameterError(f"The discriminant {d} is not a unit modulo {p}")
    unit = as_cyc(1) if p % 4 == 1 else cyc(1, 4)
    return unit**m * sqrt_int(p**m) * (kronecker(2, p) ** m * kronecker(d, p))


def _two_elementary_form(blocks: Sequence[Block]) -> fqm.FqForm:
    for block in blocks:
        if block.prime != 2 or block.exponent_k != 1:
            raise exceptions.StructureError(f"{block} is not a 2-elementary block")
    return fqm.realize(BlockExpr(tuple((block, 1) for block in blocks)))


def _isotropy_difference(form: fqm.FqForm, limits: Optional[tools.Limits]) -> int:
    """|A_0| - |A_1| for the elements with q = 0 and q = 1/2"""
    table = fqm.element_table(form, limits)
    return int((table.q_values == 0).sum() - (2 * table.q_values == form.level).sum())


def two_elementary(
    blocks: Union[BlockExpr, Sequence[Block]],
    kind: GaussKind,
    limits: Optional[tools.Limits] = None,
) -> CycNum:
    """The closed value for a 2-elementary form of dimension m >= 2

    Forms with a summand U2 are handled through the characteristic element. The remaining
    shapes are told apart by their dimension and their norm counts.

    :raise StructureError: A block is not 2-elementary, or the form is free of U2 summands and
        has dimension above 4
    """
    if isinstance(blocks, BlockExpr):
        blocks = blocks.blocks()
    form = _two_elementary_form(blocks)
    m = form.rank
    kind = GaussKind(kind)
    if m == 1:
        return cyclic_two(1, blocks[0].params[1], kind)
    has_u = orthogroup.contains_U_summand(form, limits) is not None
    special = orthogroup.is_special(form, limits)
    table = fqm.element_table(form, limits)
    isotropic_count = int((table.q_values == 0).sum())
    if kind == GaussKind.FIRST:
        if has_u:
            return as_cyc(_isotropy_difference(form, limits) if special else 0)
        if m == 2:
            return as_cyc(0 if special or isotropic_count == 2 else 2)
        if m == 3:
            return as_cyc(0)
        if m == 4:
            return as_cyc(4)
    else:
        if has_u:
            return as_cyc(0)
        if m == 2:
            return as_cyc(2 if special or isotropic_count == 2 else 0)
        if m == 3:
            # (A_{2,a})^3, a = 1 exactly when three elements have norm 1/2
            quarter_norms = int((4 * table.q_values == form.level).sum())
            a = 1 if quarter_norms == 3 else 3
            return 2 * (1 + cyc(-a, 4))
        if m == 4:
            return as_cyc(4)
    raise exceptions.StructureError(
        f"No closed formula for a 2-elementary form of dimension {m} without a summand U2"
    )


def _odd_elementary(
    p: int, blocks: Sequence[Block], kind: GaussKind
) -> Tuple[RuleId, CycNum]:
    rules = _RULES[kind]
    m = sum(block.dimension for block in blocks)
    if m == 1:
        return rules["cyclic_odd"], cyclic_odd(p, 1, blocks[0].params[1], kind)
    d = fqm.discriminant(blocks)
    isotropic = m >= 3 or kronecker(-d, p) == 1
    rule = rules["elem_iso"] if isotropic else rules["elem_aniso"]
    return rule, elem_odd(p, m, d, kind, isotropic)


def _two_elementary_rule(
    blocks: Sequence[Block], kind: GaussKind, limits: Optional[tools.Limits]
) -> Tuple[RuleId, CycNum]:
    if len(blocks) == 1 and blocks[0].kind == BlockKind.CYCLIC:
        return _RULES[kind]["cyclic_two"], cyclic_two(1, blocks[0].params[1], kind)
    value = two_elementary(blocks, kind, limits)
    if kind == GaussKind.SECOND:
        return RuleId.TWO_ELEM_2ND, value
    form = _two_elementary_form(blocks)
    if orthogroup.contains_U_summand(form, limits) is not None:
        return RuleId.TWO_ELEM_WITH_U, value
    return RuleId.TWO_ELEM_NO_U, value


def product_rule(
    p: int,
    k: int,
    a: int,
    blocks: Union[BlockExpr, Sequence[Block]],
    kind: GaussKind,
    limits: Optional[tools.Limits] = None,
) -> CycNum:
    """The closed value for q(p^k, a) + B with k >= 2 and a p-elementary B

    For odd p, for the second kind and for p = 2 with k >= 4 the value is the product of the
    values of both summands. For p = 2 with k = 2 or 3 and the first kind it is not, and neither
    is G' for q(9, a) + B, which equals 3 G'(B) + 3 e(a/3) S(B) with the classical sum S(B) of
    e(q(x)) over B. If B contains U(3) this agrees with the product again.

    :raise InvalidParameterError: k is below 2 or B is empty
    """
    if isinstance(blocks, BlockExpr):
        blocks = blocks.blocks()
    kind = GaussKind(kind)
    if k < 2:
        raise exceptions.InvalidParameterError(
            f"The exponent may not be below 2. Current value: {k}"
        )
    if not blocks:
        raise exceptions.InvalidParameterError("The p-elementary summand may not be empty")
    if p != 2:
        elementary = _odd_elementary(p, blocks, kind)[1]
        if kind == GaussKind.SECOND and (p, k) == (3, 2):
            m = sum(block.dimension for block in blocks)
            classical = classical_elementary(3, m, fqm.discriminant(blocks))
            return 3 * elementary + 3 * cyc(a, 3) * classical
        return cyclic_odd(p, k, a, kind) * elementary
    cyclic_value = cyclic_two(k, a, kind)
    if kind == GaussKind.SECOND or k >= 4:
        return cyclic_value * _two_elementary_rule(blocks, kind, limits)[1]
    form = _two_elementary_form(blocks)
    special = orthogroup.is_special(form, limits)
    if k == 3:
        if not special:
            return as_cyc(0)
        if form.rank == 2 and orthogroup.contains_U_summand(form, limits) is None:
            return -2 * cyclic_value
        return cyclic_value * _isotropy_difference(form, limits)
    return as_cyc(4 if form.rank == 2 and not special else 0)


def _split(blocks: Sequence[Block]) -> Tuple[List[Block], List[Block]]:
    elementary = [block for block in blocks if block.exponent_k == 1]
    higher = [block for block in blocks if block.exponent_k > 1]
    return elementary, higher


def _dispatch_odd(
    p: int, blocks: Sequence[Block], kind: GaussKind
) -> Tuple[Rule, Optional[CycNum]]:
    elementary, higher = _split(blocks)
    if not higher:
        return _odd_elementary(p, elementary, kind)
    if len(higher) > 1:
        return Unsupported(p, "more than one cyclic block of exponent above 1"), None
    a = higher[0].params[1]
    k = higher[0].exponent_k
    if not elementary:
        return _RULES[kind]["cyclic_odd"], cyclic_odd(p, k, a, kind)
    return _RULES[kind]["product_odd"], product_rule(p, k, a, elementary, kind)


def _is_vanishing_shape(elementary: Sequence[Block], higher: Sequence[Block]) -> bool:
    """q(4, b) + q(2^k, c) with k >= 2, optionally plus one q(2, d)"""
    if len(higher) != 2 or not any(block.params[0] == 4 for block in higher):
        return False
    return not elementary or (len(elementary) == 1 and elementary[0].kind == BlockKind.CYCLIC)


def _dispatch_two(
    blocks: Sequence[Block], kind: GaussKind, limits: Optional[tools.Limits]
) -> Tuple[Rule, Optional[CycNum]]:
    elementary, higher = _split(blocks)
    try:
        if not higher:
            return _two_elementary_rule(elementary, kind, limits)
        if len(higher) == 1:
            a = higher[0].params[1]
            k = higher[0].exponent_k
            if not elementary:
                return _RULES[kind]["cyclic_two"], cyclic_two(k, a, kind)
            value = product_rule(2, k, a, elementary, kind, limits)
            if kind == GaussKind.SECOND:
                return RuleId.PRODUCT_2ND, value
            if k >= 4:
                return RuleId.PRODUCT_TWO_K4, value
            return (RuleId.PRODUCT_TWO_K3 if k == 3 else RuleId.PRODUCT_TWO_K2), value
        if kind == GaussKind.SECOND and _is_vanishing_shape(elementary, higher):
            return RuleId.REMARK_2ND, as_cyc(0)
    except exceptions.StructureError as error:
        return Unsupported(2, str(error)), None
    return Unsupported(2, "more than one cyclic block of exponent above 1"), None


def eval_closed(
    expr: Union[str, BlockExpr], kind: GaussKind, limits: Optional[tools.Limits] = None
) -> Verdict:
    """Evaluate the closed formula for G(A, O(A)) or G'(A, O(A))

    :param expr: A block expression or its text
    :param kind: The kind of the Gauss sum
    :param limits: Limits for the small enumerations some 2-adic rules need
    :return: The rules applied per prime and, if all parts are covered, the value
    """
    if isinstance(expr, str):
        expr = fqm.parse_form(expr)
    kind = GaussKind(kind)
    if expr.is_raw:
        return Verdict(((None, Unsupported(None, "raw input has no block structure")),), None)
    by_prime: Dict[int, List[Block]] = {}
    for block in expr.blocks():
        by_prime.setdefault(block.prime, []).append(block)
    parts = []
    value: Optional[CycNum] = as_cyc(1)
    for p in sorted(by_prime):
        if p == 2:
            rule, part_value = _dispatch_two(by_prime[p], kind, limits)
        else:
            rule, part_value = _dispatch_odd(p, by_prime[p], kind)
        logger.debug("%s, %s kind, p = %d: %s", expr, kind.value, p, rule)
        parts.append((p, rule))
        value = None if value is None or part_value is None else value * part_value
    return Verdict(tuple(parts), value)
