import pytest

from fqgauss import closedform, exceptions, fqm, gauss
from fqgauss.enums import GaussKind, RuleId
from fqgauss.exactmath import cyc, sqrt_int
from fqgauss.fqm import FqForm

FIRST, SECOND = GaussKind.FIRST, GaussKind.SECOND


@pytest.mark.parametrize(
    "args, expected",
    [
        ((3, 1, 1, FIRST), 0),
        ((5, 1, 1, FIRST), sqrt_int(5)),
        ((5, 1, 2, FIRST), -sqrt_int(5)),
        ((3, 2, 1, FIRST), 3),
        ((3, 1, 1, SECOND), 1 - cyc(1, 3)),
        ((5, 1, 1, SECOND), 0),
    ],
)
def test_cyclic_odd(args, expected):
    assert closedform.cyclic_odd(*args) == expected


@pytest.mark.parametrize(
    "args, expected",
    [
        ((1, 1, FIRST), 0),
        ((2, 1, FIRST), 2),
        ((3, 1, FIRST), sqrt_int(8)),
        ((3, 3, FIRST), -sqrt_int(8)),
        ((1, 1, SECOND), 1 + cyc(1, 4)),
        ((2, 1, SECOND), 0),
        ((3, 1, SECOND), 2 + 2 * cyc(1, 4)),
    ],
)
def test_cyclic_two(args, expected):
    assert closedform.cyclic_two(*args) == expected


def test_elem_odd():
    assert closedform.elem_odd(3, 2, 1, FIRST, isotropic=False) == 3
    assert closedform.elem_odd(5, 2, -1, FIRST, isotropic=True) == 10
    assert closedform.elem_odd(7, 2, -1, FIRST, isotropic=True) == 0
    assert closedform.elem_odd(3, 2, 1, SECOND, isotropic=False) == 0
    assert closedform.elem_odd(7, 2, -1, SECOND, isotropic=True) == 14


def test_elem_odd_three_dimensional_second_kind():
    assert closedform.elem_odd(7, 3, 1, SECOND, isotropic=True) == -14 * sqrt_int(7) * cyc(1, 4)


@pytest.mark.parametrize(
    "args",
    [
        (2, 2, 1, FIRST, True),
        (9, 2, 1, FIRST, True),
        (5, 1, 1, FIRST, True),
        (5, 2, 5, FIRST, True),
        (5, 2, 1, FIRST, False),
        (5, 3, 1, FIRST, False),
    ],
)
def test_elem_odd_rejects_impossible_spaces(args):
    with pytest.raises(exceptions.InvalidParameterError):
        closedform.elem_odd(*args)


def test_parameter_validation():
    with pytest.raises(exceptions.InvalidParameterError):
        closedform.cyclic_odd(9, 1, 1, FIRST)
    with pytest.raises(exceptions.InvalidParameterError):
        closedform.cyclic_odd(3, 0, 1, FIRST)
    with pytest.raises(exceptions.InvalidParameterError):
        closedform.cyclic_two(2, 2, FIRST)
    with pytest.raises(exceptions.InvalidParameterError):
        closedform.product_rule(3, 1, 1, fqm.parse_form("q(3,1)"), FIRST)
    with pytest.raises(exceptions.InvalidParameterError):
        closedform.product_rule(3, 2, 1, [], FIRST)


def test_two_elementary(limits):
    assert closedform.two_elementary(fqm.parse_form("V2"), FIRST, limits) == 0
    assert closedform.two_elementary(fqm.parse_form("V2"), SECOND, limits) == 2
    assert closedform.two_elementary(fqm.parse_form("U2"), FIRST, limits) == 2
    assert closedform.two_elementary(fqm.parse_form("U2"), SECOND, limits) == 0
    with pytest.raises(exceptions.StructureError):
        closedform.two_elementary(fqm.parse_form("q(4,1) + q(2,1)"), FIRST, limits)


@pytest.mark.parametrize(
    "text, kind, rule",
    [
        ("q(25,2)", FIRST, "CyclicOdd"),
        ("U(5) + q(5,1)", FIRST, "ElemOddIso"),
        ("N(5)", FIRST, "ElemOddAniso"),
        ("q(9,1) + q(3,1)", FIRST, "ProductOdd"),
        ("q(8,3)", FIRST, "CyclicTwo"),
        ("U2 + q(2,1)", FIRST, "TwoElemWithU"),
        ("V2", FIRST, "TwoElemNoU"),
        ("q(16,1) + q(2,1)", FIRST, "ProductTwoK4"),
        ("q(8,1) + V2", FIRST, "ProductTwoK3"),
        ("q(4,1) + q(2,1)", FIRST, "ProductTwoK2"),
        ("q(9,1)", SECOND, "CyclicOdd2nd"),
        ("q(2,1)", SECOND, "CyclicTwo2nd"),
        ("U(7)", SECOND, "ElemOddIso2nd"),
        ("N(7)", SECOND, "ElemOddAniso2nd"),
        ("U2 + V2", SECOND, "TwoElem2nd"),
        ("q(8,1) + U2", SECOND, "Product2nd"),
        ("q(4,1) + q(8,3)", SECOND, "Remark2nd"),
        ("q(8,3) + U(3)", FIRST, "CyclicTwo*ElemOddIso"),
    ],
)
def test_dispatch_rules(text, kind, rule, limits):
    verdict = closedform.eval_closed(text, kind, limits)
    assert verdict.supported
    assert verdict.rule == rule


@pytest.mark.parametrize(
    "text, kind",
    [
        ("q(5,1)", FIRST),
        ("q(9,2)", FIRST),
        ("U(5)", FIRST),
        ("q(3,1) + q(3,1)", FIRST),
        ("q(9,1) + q(3,1)", FIRST),
        ("q(8,3)", FIRST),
        ("q(4,1)", FIRST),
        ("V2", FIRST),
        ("U2", FIRST),
        ("q(4,1) + U2", FIRST),
        ("q(4,1) + V2", FIRST),
        ("q(8,1) + V2", FIRST),
        ("q(3,1)", SECOND),
        ("q(8,1)", SECOND),
        ("q(4,1)", SECOND),
        ("q(2,1)", SECOND),
        ("V2", SECOND),
        ("N(3)", SECOND),
        ("3*q(7,1)", SECOND),
        ("q(9,1) + q(3,1)", SECOND),
        ("q(9,1) + q(3,2)", SECOND),
        ("q(9,1) + 2*q(3,1)", SECOND),
        ("q(9,2) + q(3,2)", SECOND),
        ("q(9,2) + 2*q(3,1)", SECOND),
        ("q(9,1) + U(3)", SECOND),
        ("q(27,1) + q(3,1)", SECOND),
    ],
)
def test_closed_matches_enumeration(text, kind, limits):
    verdict = closedform.eval_closed(text, kind, limits)
    oracle = gauss.equivariant(FqForm.parse(text), kind, limits=limits)
    assert verdict.value == oracle.value


def test_closed_values():
    assert closedform.eval_closed("q(8,3)", FIRST).value == -sqrt_int(8)
    assert closedform.eval_closed("q(9,1) + q(3,1)", FIRST).value == 0
    assert closedform.eval_closed("U(3) + q(5,1)", FIRST).value == 0
    assert closedform.eval_closed("q(4,1) + q(8,3)", SECOND).value == 0
    assert closedform.eval_closed("q(8,1) + V2", FIRST).value == -2 * sqrt_int(8)
    assert closedform.eval_closed("q(4,1) + U2", FIRST).value == 0


def test_unsupported_shapes():
    raw = closedform.eval_closed("gram[3;1/3;]", FIRST)
    assert not raw.supported
    assert raw.value is None
    assert raw.rule == "unsupported (raw input has no block structure)"

    double = closedform.eval_closed("q(9,1) + q(27,1) + q(5,1)", FIRST)
    assert not double.supported
    assert double.value is None
    assert double.parts[0] == (
        3,
        closedform.Unsupported(3, "more than one cyclic block of exponent above 1"),
    )
    assert double.parts[1] == (5, RuleId.CYCLIC_ODD)
    assert double.rule == "unsupported (more than one cyclic block of exponent above 1)*CyclicOdd"

    assert not closedform.eval_closed("q(4,1) + q(8,3)", FIRST).supported


@pytest.mark.parametrize(
    "text, expected",
    [
        ("q(9,1) + q(3,1)", 9),
        ("q(9,1) + q(3,2)", 0),
        ("q(9,1) + 2*q(3,1)", -9 * cyc(1, 3)),
        ("q(9,2) + q(3,2)", 9),
        ("q(9,2) + 2*q(3,1)", 9 + 9 * cyc(1, 3)),
        ("q(9,1) + U(3)", 9 + 9 * cyc(1, 3)),
    ],
)
def test_second_kind_of_nine_plus_elementary(text, expected):
    verdict = closedform.eval_closed(text, SECOND)
    assert verdict.rule == "Product2nd"
    assert verdict.value == expected


def test_classical_elementary_values():
    assert closedform.classical_elementary(3, 1, 1) == -sqrt_int(3) * cyc(1, 4)
    assert closedform.classical_elementary(3, 2, -1) == 3
    assert closedform.classical_elementary(3, 2, -2) == -3
    with pytest.raises(exceptions.InvalidParameterError):
        closedform.classical_elementary(3, 2, 3)


@pytest.mark.parametrize(
    "text", ["q(3,1)", "q(3,2)", "U(3)", "N(3)", "2*q(3,1)", "q(5,2)", "U(5) + q(5,1)"]
)
def test_classical_elementary_matches_enumeration(text, limits):
    blocks = fqm.parse_form(text).blocks()
    p = blocks[0].prime
    m = sum(block.dimension for block in blocks)
    expected = gauss.classical_gauss(FqForm.parse(text), SECOND, limits).value
    assert closedform.classical_elementary(p, m, fqm.discriminant(blocks)) == expected


@pytest.mark.parametrize(
    "kind, polynomial, cases",
    [
        (
            FIRST,
            lambda x: x * x + 1,
            [(5, 2, -1), (13, 2, -1), (17, 2, -4), (5, 3, 1), (13, 3, 2), (17, 3, 3)],
        ),
        (
            SECOND,
            lambda x: x * x - x + 1,
            [(7, 2, -1), (13, 2, -1), (19, 2, -1), (7, 3, 1), (13, 3, 2), (19, 3, 2)],
        ),
    ],
)
def test_isotropic_values_do_not_depend_on_the_root(kind, polynomial, cases, monkeypatch):
    roots = closedform._roots
    for p, m, d in cases:
        assert len(roots(p, polynomial)) == 2
        values = []
        for choice in (0, 1):
            monkeypatch.setattr(
                closedform,
                "_roots",
                lambda q, f, choice=choice: roots(q, f)[choice : choice + 1],
            )
            values.append(closedform.elem_odd(p, m, d, kind, isotropic=True))
        monkeypatch.setattr(closedform, "_roots", roots)
        assert values[0] == values[1]


@pytest.mark.parametrize(
    "parts",
    [
        ("q(8,3)", "U(5)"),
        ("V2", "q(9,2)"),
        ("q(4,1) + U2", "N(3)"),
        ("q(27,2) + q(3,1)", "q(5,1)"),
        ("U2 + q(2,1)", "q(7,3) + U(7)"),
        ("q(16,5)", "q(3,1) + q(3,2)"),
        ("q(2,1)", "q(3,1)", "q(5,2)"),
    ],
)
@pytest.mark.parametrize("kind", [FIRST, SECOND])
def test_closed_value_is_multiplicative_over_primes(parts, kind, limits):
    whole = closedform.eval_closed(" + ".join(parts), kind, limits)
    assert whole.supported
    expected = 1
    for part in parts:
        expected = closedform.eval_closed(part, kind, limits).value * expected
    assert whole.value == expected
