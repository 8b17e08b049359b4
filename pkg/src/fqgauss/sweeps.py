"""Verification sweeps comparing the closed formulas and the Weil layer with enumeration

Every family generates a list of :class:`Case` objects. The cases are evaluated independently,
possibly in several processes, and the report keeps them in generation order.
"""
import dataclasses
import functools
import itertools
import logging
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy
from sympy import isprime, primerange

from . import closedform, exceptions, fqm, gauss, orthogroup, tools, weil
from .enums import Check, Family, GaussKind, Status
from .exactmath import factorize, least_nonresidue
from .fqm import BlockExpr, FqForm
from .report import Report, ReportEntry

logger = logging.getLogger("fqgauss.sweeps")

SWEEP_MAX_ORDER = 2500
"""The enumeration cap ``verify`` uses unless one is configured explicitly"""

CLASSICAL_DIMENSIONS = {8: 1, 12: 1, 16: 1, 20: 1, 24: 2, 28: 1}
"""Dimensions of level one modular forms, keyed by twice the weight"""

_QUANTITY = {GaussKind.FIRST: "g", GaussKind.SECOND: "gprime"}

_TWO_ELEMENTARY = (("U2", 2), ("V2", 2), ("q(2,1)", 1), ("q(2,-1)", 1))

_SEED = 20240


@dataclasses.dataclass(frozen=True)
class Bounds:
    """The parameters of the verification families

    :param max_cyclic: The largest odd prime power of ``cyclic-odd``
    :param max_k: The largest exponent of ``cyclic-two``
    :param primes: The primes of ``elem-odd``
    :param dims: The dimensions of ``elem-odd``, the largest one also bounds ``elem-two``
    :param product_k: The exponents of ``product-two``
    :param count: The number of forms of ``localization``
    :param pairs: The number of pairs of the signature additivity check
    :param weil_max_order: The largest group order of ``weil``
    """

    max_cyclic: int = 343
    max_k: int = 6
    primes: Tuple[int, ...] = (3, 5, 7, 11, 13)
    dims: Tuple[int, ...] = (2, 3, 4)
    product_k: Tuple[int, ...] = (2, 3, 4, 5)
    count: int = 20
    pairs: int = 30
    weil_max_order: int = 30

    def __post_init__(self):
        if self.max_cyclic < 3:
            raise ValueError(
                f"The cyclic bound may not be below 3. Current value: {self.max_cyclic}"
            )
        if self.max_k < 1:
            raise ValueError(f"The exponent bound may not be below 1. Current value: {self.max_k}")
        for p in self.primes:
            if p == 2 or not isprime(p):
                raise ValueError(f"The elementary primes must be odd primes. Current value: {p}")
        if any(m < 2 for m in self.dims):
            raise ValueError(f"The dimensions may not be below 2. Current value: {self.dims}")
        if any(k < 2 for k in self.product_k):
            raise ValueError(f"The product exponents may not be below 2: {self.product_k}")
        if self.count < 0 or self.pairs < 0 or self.weil_max_order < 1:
            raise ValueError("The counts may not be negative and the Weil bound must be positive")


@dataclasses.dataclass(frozen=True)
class Case:
    """One comparison, identified by the family, the form text, the kind and the check"""

    family: Family
    form: str
    check: Check
    kind: Optional[GaussKind] = None


def _join(parts: Sequence[str]) -> str:
    return " + ".join(part for part in parts if part)


def _multiple(count: int, block: str) -> str:
    if count == 0:
        return ""
    return block if count == 1 else f"{count}*{block}"


def _closed_cases(family: Family, forms: Sequence[str], kind: GaussKind) -> List[Case]:
    return [Case(family, form, Check.CLOSED, kind) for form in forms]


def _unit_classes(p: int) -> Tuple[int, ...]:
    return (1, least_nonresidue(p))


def cyclic_odd_forms(bounds: Bounds) -> List[str]:
    forms = []
    for n in range(3, bounds.max_cyclic + 1):
        factors = factorize(n)
        if len(factors) != 1 or factors[0][0] == 2:
            continue
        forms.extend(f"q({n},{a})" for a in _unit_classes(factors[0][0]))
    return forms


def cyclic_two_forms(bounds: Bounds) -> List[str]:
    return [f"q({2 ** k},{a})" for k in range(1, bounds.max_k + 1) for a in (1, 3, 5, 7)]


def elem_odd_forms(bounds: Bounds) -> List[str]:
    forms = []
    for p in bounds.primes:
        epsilon = least_nonresidue(p)
        for m in bounds.dims:
            forms.append(_multiple(m, f"q({p},1)"))
            forms.append(_join([_multiple(m - 1, f"q({p},1)"), f"q({p},{epsilon})"]))
            forms.append(_join([f"U({p})", _multiple(m - 2, f"q({p},1)")]))
            forms.append(_join([f"N({p})", _multiple(m - 2, f"q({p},1)")]))
    return forms


def _two_elementary_sums(min_dim: int, max_dim: int) -> Iterator[str]:
    for count in range(1, max_dim + 1):
        for choice in itertools.combinations_with_replacement(_TWO_ELEMENTARY, count):
            if min_dim <= sum(dim for _, dim in choice) <= max_dim:
                yield _join([text for text, _ in choice])


def elem_two_forms(bounds: Bounds) -> List[str]:
    return list(_two_elementary_sums(2, max(bounds.dims)))


def product_odd_forms(bounds: Bounds) -> List[str]:
    forms = []
    for p, k in ((3, 2), (3, 3), (5, 2)):
        units = _unit_classes(p)
        for a in units:
            cyclic = f"q({p ** k},{a})"
            for b in units:
                forms.append(_join([cyclic, f"q({p},{b})"]))
            for b, c in itertools.combinations_with_replacement(units, 2):
                forms.append(_join([cyclic, f"q({p},{b})", f"q({p},{c})"]))
    return forms


def product_two_forms(bounds: Bounds) -> List[str]:
    forms = []
    for k in bounds.product_k:
        summands = list(_two_elementary_sums(1, 2))
        if k == 2:
            summands += ["4*q(2,1)", "4*q(2,-1)"]
        for a in (1, 3, 5, 7):
            forms.extend(_join([f"q({2 ** k},{a})", summand]) for summand in summands)
    return forms


def vanishing_forms(bounds: Bounds) -> List[str]:
    """q(2^k, a) + q(4, b), optionally plus q(2, c)"""
    forms = []
    for k in (2, 3, 4):
        for a, b in itertools.product((1, 3), (1, 3)):
            base = [f"q({2 ** k},{a})", f"q(4,{b})"]
            forms.append(_join(base))
            forms.append(_join(base + ["q(2,1)"]))
    return forms


_CLOSED_FAMILIES: Dict[Family, Callable[[Bounds], List[str]]] = {
    Family.CYCLIC_ODD: cyclic_odd_forms,
    Family.CYCLIC_TWO: cyclic_two_forms,
    Family.ELEM_ODD: elem_odd_forms,
    Family.ELEM_TWO: elem_two_forms,
    Family.PRODUCT_ODD: product_odd_forms,
    Family.PRODUCT_TWO: product_two_forms,
}


def _localization_forms(bounds: Bounds) -> List[str]:
    two_parts = ["q(2,1)", "q(2,3)", "q(4,1)", "q(4,7)", "q(8,1)", "q(8,5)", "U2", "V2"]
    odd_parts = [
        "q(3,1)",
        "q(3,2)",
        "q(9,1)",
        "q(9,2)",
        "U(3)",
        "N(3)",
        "q(5,1)",
        "q(5,2)",
        "q(25,1)",
        "U(5)",
        "q(7,1)",
        "q(7,3)",
        "q(3,1) + q(5,2)",
        "q(3,2) + q(7,1)",
    ]
    candidates = [
        _join([two, odd])
        for two, odd in itertools.product(two_parts, odd_parts)
        if FqForm.parse(_join([two, odd])).order <= 360
    ]
    generator = numpy.random.default_rng(_SEED)
    return [candidates[i] for i in generator.permutation(len(candidates))[: bounds.count]]


def _additivity_pairs(bounds: Bounds) -> List[str]:
    library = ["q(2,1)", "q(2,3)", "q(4,1)", "q(8,3)", "U2", "V2", "q(3,1)", "q(3,2)"]
    library += ["q(9,1)", "U(3)", "N(3)", "q(5,1)", "q(5,2)", "q(7,1)", "N(5)"]
    generator = numpy.random.default_rng(_SEED + 1)
    pairs = []
    while len(pairs) < bounds.pairs:
        first, second = generator.integers(len(library), size=2)
        text = _join([library[first], library[second]])
        if FqForm.parse(text).order <= 360:
            pairs.append(text)
    return pairs


def weil_forms(bounds: Bounds) -> List[str]:
    """The trivial form, every library block and every sum of two blocks up to the bound"""
    blocks = []
    for n in range(2, bounds.weil_max_order + 1):
        factors = factorize(n)
        if len(factors) != 1:
            continue
        p = factors[0][0]
        units = (1, 3, 5, 7)[: min(4, n)] if p == 2 else _unit_classes(p)
        blocks.extend(f"q({n},{a})" for a in units)
    for p in primerange(3, bounds.weil_max_order + 1):
        if p * p <= bounds.weil_max_order:
            blocks += [f"U({p})", f"N({p})"]
    if bounds.weil_max_order >= 4:
        blocks += ["U2", "V2"]
    forms = ["gram[;;]"] + blocks
    for first, second in itertools.combinations_with_replacement(blocks, 2):
        text = _join([first, second])
        if FqForm.parse(text).order <= bounds.weil_max_order:
            forms.append(text)
    return forms


def cases(family: Family, bounds: Optional[Bounds] = None) -> List[Case]:
    """Generate the cases of a family in a fixed order"""
    bounds = bounds or Bounds()
    family = Family(family)
    if family == Family.ALL:
        return [
            case for member in Family if member != Family.ALL for case in cases(member, bounds)
        ]
    if family in _CLOSED_FAMILIES:
        result = _closed_cases(family, _CLOSED_FAMILIES[family](bounds), GaussKind.FIRST)
        if family == Family.PRODUCT_ODD:
            result += [
                Case(family, form, Check.AUTORDER) for form in product_odd_forms(bounds)
            ]
        if family == Family.PRODUCT_TWO and 2 in bounds.product_k:
            result.append(Case(family, "q(4,1) + U2", Check.PRODUCT_FAILS))
        if family == Family.PRODUCT_TWO and 3 in bounds.product_k:
            result.append(Case(family, "q(8,1) + V2", Check.PRODUCT_FAILS))
        return result
    if family == Family.SECOND_KIND:
        result = []
        for generate in _CLOSED_FAMILIES.values():
            result += _closed_cases(family, generate(bounds), GaussKind.SECOND)
        return result + _closed_cases(family, vanishing_forms(bounds), GaussKind.SECOND)
    if family == Family.LOCALIZATION:
        return [Case(family, form, Check.LOCALIZATION) for form in _localization_forms(bounds)] + [
            Case(family, form, Check.ADDITIVITY) for form in _additivity_pairs(bounds)
        ]
    return [Case(family, form, Check.WEIL) for form in weil_forms(bounds)]


def _check_closed(case: Case, limits: tools.Limits) -> List[ReportEntry]:
    quantity = _QUANTITY[case.kind]
    verdict = closedform.eval_closed(case.form, case.kind, limits)
    if not verdict.supported:
        return [ReportEntry(case.form, quantity, "", rule=verdict.rule, status=Status.UNSUPPORTED)]
    form = FqForm.parse(case.form)
    oracle = gauss.equivariant(form, case.kind, limits=limits)
    if verdict.value == oracle.value:
        entry = ReportEntry.for_value(case.form, quantity, verdict.value, verdict.rule)
    else:
        entry = ReportEntry.for_value(
            case.form,
            quantity,
            verdict.value,
            verdict.rule,
            Status.MISMATCH,
            f"oracle {oracle.value.render()}",
        )
    magnitude = oracle.magnitude_class()
    magnitude_entry = ReportEntry(
        case.form,
        f"|{quantity}|/sqrt|A|",
        "" if magnitude is None else str(magnitude),
        note="" if magnitude is not None else "absolute value outside {0, 1, 2}*sqrt|A|",
    )
    return [entry, magnitude_entry, _signature_entry(case.form, form, limits)]


def _signature_entry(text: str, form: FqForm, limits: tools.Limits) -> ReportEntry:
    try:
        sigma = gauss.signature(form, limits)
    except exceptions.ConsistencyError as error:
        return ReportEntry(text, "signature", "", status=Status.MISMATCH, note=str(error))
    return ReportEntry(text, "signature", str(sigma))


def _check_autorder(case: Case, limits: tools.Limits) -> List[ReportEntry]:
    """|O(q(p^k, a) + B)| = 2 |B| |O(B)| for a p-elementary B"""
    expr = fqm.parse_form(case.form)
    whole = orthogroup.orthogonal_group(fqm.realize(expr), limits).order
    summand = fqm.realize(BlockExpr(tuple((block, 1) for block in expr.blocks()[1:])))
    expected = 2 * summand.order * orthogroup.orthogonal_group(summand, limits).order
    status = Status.OK if whole == expected else Status.MISMATCH
    note = "" if whole == expected else f"expected {expected}"
    return [ReportEntry(case.form, "autorder", str(whole), status=status, note=note)]


def _check_product_fails(case: Case, limits: tools.Limits) -> List[ReportEntry]:
    """The naive product differs from the enumerated value, which the table reproduces"""
    expr = fqm.parse_form(case.form)
    cyclic, *rest = expr.blocks()
    naive = closedform.cyclic_two(cyclic.exponent_k, cyclic.params[1], GaussKind.FIRST)
    naive = naive * closedform.two_elementary(rest, GaussKind.FIRST, limits)
    oracle = gauss.equivariant_gauss(fqm.realize(expr), limits=limits).value
    status = Status.OK if naive != oracle else Status.MISMATCH
    return [
        ReportEntry.for_value(
            case.form, "naive product", naive, status=status, note=f"oracle {oracle.render()}"
        )
    ]


def _check_localization(case: Case, limits: tools.Limits) -> List[ReportEntry]:
    form = FqForm.parse(case.form)
    check = gauss.localization_check(form, limits)
    primes = ",".join(str(p) for p in check.primes)
    entries = []
    for quantity, whole, product, ok in (
        ("g", check.whole_first, check.product_first, check.first_ok),
        ("gprime", check.whole_second, check.product_second, check.second_ok),
    ):
        entries.append(
            ReportEntry.for_value(
                case.form,
                f"{quantity} over p-parts {primes}",
                whole,
                status=Status.OK if ok else Status.MISMATCH,
                note="" if ok else f"product {product.render()}",
            )
        )
    return entries


def _check_additivity(case: Case, limits: tools.Limits) -> List[ReportEntry]:
    expr = fqm.parse_form(case.form)
    blocks = expr.blocks()
    whole = gauss.signature(fqm.realize(expr), limits)
    parts = [gauss.signature(fqm.realize(BlockExpr(((block, 1),))), limits) for block in blocks]
    total = sum(parts) % 8
    status = Status.OK if whole == total else Status.MISMATCH
    note = "" if whole == total else f"sum of the summands {total}"
    return [ReportEntry(case.form, "signature additivity", str(whole), status=status, note=note)]


def _check_weil(case: Case, limits: tools.Limits) -> List[ReportEntry]:
    form = FqForm.parse(case.form)
    checks = weil.weil_checks(form, limits)
    failed = [name for name, passed in checks._asdict().items() if not passed]
    entries = [
        ReportEntry(
            case.form,
            "weil checks",
            "pass" if checks.passed else "fail",
            status=Status.OK if checks.passed else Status.MISMATCH,
            note=", ".join(failed),
        )
    ]
    rows = weil.dimension_table(form, [weil.HalfWeight(twice) for twice in range(5, 41)], limits)
    failing = [str(row.weight) for row in rows if row.dimension is None]
    if form.order == 1:
        failing += [
            str(row.weight)
            for row in rows
            if row.dimension != CLASSICAL_DIMENSIONS.get(row.weight.twice_l, row.dimension)
        ]
    dims = " ".join(f"{row.weight}:{row.dimension}" for row in rows if row.dimension)
    entries.append(
        ReportEntry(
            case.form,
            "dim l=5/2..20",
            dims,
            status=Status.MISMATCH if failing else Status.OK,
            note=f"not integral or not matching at l = {', '.join(failing)}" if failing else "",
        )
    )
    return entries


_CHECKS: Dict[Check, Callable[[Case, tools.Limits], List[ReportEntry]]] = {
    Check.CLOSED: _check_closed,
    Check.AUTORDER: _check_autorder,
    Check.PRODUCT_FAILS: _check_product_fails,
    Check.LOCALIZATION: _check_localization,
    Check.ADDITIVITY: _check_additivity,
    Check.WEIL: _check_weil,
}


def _failure(case: Case, status: Status, error: Exception) -> List[ReportEntry]:
    quantity = _QUANTITY[case.kind] if case.kind is not None else case.check.value
    return [ReportEntry(case.form, quantity, "", rule="", status=status, note=str(error))]


def run_case(case: Case, limits: tools.Limits) -> List[ReportEntry]:
    """Evaluate one case, reporting forms over the cap or the budget as skipped"""
    logger.debug("%s: %s (%s)", case.family.value, case.form, case.check.value)
    try:
        return _CHECKS[case.check](case, limits)
    except (exceptions.EnumerationCapError, exceptions.SearchBudgetExceeded) as error:
        return _failure(case, Status.SKIPPED, error)
    except exceptions.ConsistencyError as error:
        logger.error("Internal check failed for %s: %s", case.form, error)
        return _failure(case, Status.MISMATCH, error)


def verify(
    family: Family, bounds: Optional[Bounds] = None, limits: Optional[tools.Limits] = None
) -> Report:
    """Run a family and collect the entries in generation order"""
    limits = tools.resolve_limits(limits)
    family_cases = cases(family, bounds)
    logger.info(
        "Running %d cases of %s with %d workers",
        len(family_cases),
        Family(family).value,
        limits.workers,
    )
    results = tools.run_in_order(
        functools.partial(run_case, limits=limits), family_cases, limits.workers
    )
    report = Report()
    for entries in results:
        report.extend(entries)
    logger.info("Summary of %s: %s", Family(family).value, report.counts())
    return report
