import typing

import pytest

from fqgauss import Workbench, exceptions, tools
from fqgauss.enums import Quantity, Status
from fqgauss.exactmath import sqrt_int
from fqgauss.weil import HalfWeight


@pytest.fixture
def workbench():
    return Workbench(environ={})


def test_limits_from_arguments_and_environment():
    assert Workbench(environ={}).limits == tools.Limits()
    workbench = Workbench(max_order=9, environ={"FQGAUSS_MAX_ORDER": "7", "FQGAUSS_WORKERS": "3"})
    assert workbench.limits == tools.Limits(max_order=9, workers=3)
    with pytest.raises(ValueError):
        Workbench(workers=0, environ={})


def test_evaluate(workbench):
    result = workbench.evaluate("U(3)", ["orbits", Quantity.AUTORDER, "signature"])
    orbits, autorder, signature = result.entries
    assert (orbits.exact, orbits.note) == ("4", "sizes 1,4,2,2")
    assert autorder.exact == "4"
    assert signature.exact == "0"
    assert result.exit_code == 0


def test_evaluate_gauss_sums(workbench):
    g, gprime = workbench.evaluate("q(3,1)", ["g", "gprime"]).entries
    assert g.exact == "0"
    assert gprime.exact == "1 - e(1/3)"
    assert gprime.approx == "1.5000000000-0.8660254038i"


def test_evaluate_over_the_cap():
    with pytest.raises(exceptions.EnumerationCapError):
        Workbench(max_order=5, environ={}).evaluate("U(3)")


def test_closed(workbench):
    (entry,) = workbench.closed("q(8,3)").entries
    assert entry.approx == "-2.8284271247"
    assert entry.rule == "CyclicTwo"
    (unsupported,) = workbench.closed("gram[3;1/3;]", "second").entries
    assert unsupported.status == Status.UNSUPPORTED
    assert unsupported.quantity == "gprime"


def test_weil_dimension(workbench):
    (entry,) = workbench.weil("gram[;;]", "dim", "12").entries
    assert (entry.quantity, entry.exact, entry.note) == ("dim l=12", "2", "")
    (excluded,) = workbench.weil("q(3,1)", "dim", "4").entries
    assert excluded.exact == "0"
    assert excluded.note == "2l - sigma is not divisible by 4"
    (printed,) = workbench.weil("gram[;;]", "dim", "2").entries
    assert printed.note == "per printed formula"


def test_weil_dimension_needs_a_weight(workbench):
    with pytest.raises(exceptions.InvalidParameterError):
        workbench.weil("q(3,1)", "dim")
    with pytest.raises(exceptions.InvalidParameterError):
        workbench.weil("q(3,1)", "dim", "3/4")


def test_weil_traces(workbench):
    tr_s, tr_st = workbench.weil("gram[;;]", "traces").entries
    assert (tr_s.exact, tr_st.exact) == ("1", "1")
    assert tr_s.status == Status.OK


def test_weil_matrix(workbench):
    rows = workbench.weil("q(3,1)", "matrix", word="T").entries
    assert [row.quantity for row in rows] == ["T[0]", "T[1]", "T[2]"]
    assert rows[0].exact == "1; 0; 0"
    with pytest.raises(exceptions.WordSyntaxError):
        workbench.weil("q(3,1)", "matrix", word="X")


def test_table(workbench):
    first, second = workbench.table(["q(5,1)", "V2"])
    assert (first.form, first.order, first.sigma) == ("q(5,1)", 5, 4)
    assert first.first == sqrt_int(5)
    assert first.rule == "CyclicOdd / CyclicOdd2nd"
    assert second.first == 0
    assert second.second == 2


def test_weight_annotation_resolves_to_the_weight_type(workbench):
    hints = typing.get_type_hints(Workbench._dimension)
    assert hints["weight"] is HalfWeight
    (entry,) = workbench.weil("q(3,1)", "dim", "7").entries
    assert entry.quantity == "dim l=7"
