import pytest

from fqgauss import sweeps, tools
from fqgauss.enums import Check, ExitCode, Family, GaussKind, Status
from fqgauss.sweeps import Bounds, Case


def test_cyclic_odd_forms():
    assert sweeps.cyclic_odd_forms(Bounds(max_cyclic=9)) == [
        "q(3,1)",
        "q(3,2)",
        "q(5,1)",
        "q(5,2)",
        "q(7,1)",
        "q(7,3)",
        "q(9,1)",
        "q(9,2)",
    ]


def test_cyclic_two_forms():
    forms = sweeps.cyclic_two_forms(Bounds(max_k=2))
    assert forms == [f"q({n},{a})" for n in (2, 4) for a in (1, 3, 5, 7)]


def test_elem_odd_forms():
    forms = sweeps.elem_odd_forms(Bounds(primes=(3,), dims=(2,)))
    assert forms == ["2*q(3,1)", "q(3,1) + q(3,2)", "U(3)", "N(3)"]


def test_elem_two_forms():
    forms = sweeps.elem_two_forms(Bounds(dims=(2,)))
    assert forms == ["U2", "V2", "q(2,1) + q(2,1)", "q(2,1) + q(2,-1)", "q(2,-1) + q(2,-1)"]


def test_weil_forms():
    forms = sweeps.weil_forms(Bounds(weil_max_order=4))
    assert forms[0] == "gram[;;]"
    assert "U2" in forms and "V2" in forms
    assert "q(2,1) + q(2,3)" in forms
    assert "q(2,1) + q(3,1)" not in forms
    assert sweeps.weil_forms(Bounds(weil_max_order=1)) == ["gram[;;]"]


def test_sampled_forms_are_reproducible():
    bounds = Bounds(count=5, pairs=4)
    first = [case.form for case in sweeps.cases(Family.LOCALIZATION, bounds)]
    second = [case.form for case in sweeps.cases(Family.LOCALIZATION, bounds)]
    assert first == second
    assert len(first) == 9


def test_case_generation():
    product_two = sweeps.cases(Family.PRODUCT_TWO, Bounds(product_k=(2, 3)))
    failures = [case.form for case in product_two if case.check == Check.PRODUCT_FAILS]
    assert failures == ["q(4,1) + U2", "q(8,1) + V2"]

    product_odd = sweeps.cases(Family.PRODUCT_ODD)
    assert {case.check for case in product_odd} == {Check.CLOSED, Check.AUTORDER}

    second = sweeps.cases(Family.SECOND_KIND, Bounds(max_cyclic=3, max_k=1))
    assert {case.kind for case in second} == {GaussKind.SECOND}
    assert "q(8,3) + q(4,1)" in [case.form for case in second]


def test_all_concatenates_the_families():
    bounds = Bounds(max_cyclic=5, max_k=1, primes=(3,), dims=(2,), count=1, pairs=1)
    everything = sweeps.cases(Family.ALL, bounds)
    expected = sum(
        len(sweeps.cases(family, bounds)) for family in Family if family != Family.ALL
    )
    assert len(everything) == expected


@pytest.mark.parametrize(
    "changes",
    [
        {"max_cyclic": 2},
        {"max_k": 0},
        {"primes": (2,)},
        {"primes": (9,)},
        {"dims": (1,)},
        {"product_k": (1,)},
        {"count": -1},
        {"weil_max_order": 0},
    ],
)
def test_bounds_validation(changes):
    with pytest.raises(ValueError):
        Bounds(**changes)


def test_product_failure_cases(limits):
    for form, naive, oracle in (("q(4,1) + U2", "4", "oracle 0"), ("q(8,1) + V2", "0", None)):
        (entry,) = sweeps.run_case(Case(Family.PRODUCT_TWO, form, Check.PRODUCT_FAILS), limits)
        assert entry.status == Status.OK
        assert entry.exact == naive
        if oracle:
            assert entry.note == oracle


def test_closed_case_entries(limits):
    entries = sweeps.run_case(
        Case(Family.CYCLIC_ODD, "q(5,1)", Check.CLOSED, GaussKind.FIRST), limits
    )
    assert [entry.quantity for entry in entries] == ["g", "|g|/sqrt|A|", "signature"]
    assert [entry.exact for entry in entries[1:]] == ["1", "4"]
    assert entries[0].rule == "CyclicOdd"
    assert all(entry.status == Status.OK for entry in entries)


def test_unsupported_case(limits):
    (entry,) = sweeps.run_case(
        Case(Family.CYCLIC_ODD, "q(9,1) + q(27,1)", Check.CLOSED, GaussKind.FIRST), limits
    )
    assert entry.status == Status.UNSUPPORTED


def test_cases_over_the_cap_are_skipped():
    (entry,) = sweeps.run_case(
        Case(Family.CYCLIC_ODD, "q(343,1)", Check.CLOSED, GaussKind.FIRST),
        tools.Limits(max_order=100),
    )
    assert entry.status == Status.SKIPPED
    assert entry.quantity == "g"
    assert "343" in entry.note


def test_autorder_and_additivity(limits):
    (autorder,) = sweeps.run_case(
        Case(Family.PRODUCT_ODD, "q(9,1) + q(3,1)", Check.AUTORDER), limits
    )
    assert autorder.status == Status.OK
    assert autorder.exact == "12"
    (additivity,) = sweeps.run_case(
        Case(Family.LOCALIZATION, "q(3,1) + q(5,2)", Check.ADDITIVITY), limits
    )
    assert additivity.status == Status.OK


def test_verify_cyclic_two(limits):
    result = sweeps.verify(Family.CYCLIC_TWO, Bounds(max_k=2), limits)
    assert len(result.entries) == 24
    assert result.counts()["ok"] == 24
    assert result.exit_code == ExitCode.OK


def test_verify_keeps_the_order_with_workers():
    bounds = Bounds(max_k=2)
    inline = sweeps.verify(Family.CYCLIC_TWO, bounds, tools.Limits(workers=1))
    pooled = sweeps.verify(Family.CYCLIC_TWO, bounds, tools.Limits(workers=2))
    assert pooled.entries == inline.entries


def test_verify_localization(limits):
    result = sweeps.verify(Family.LOCALIZATION, Bounds(count=3, pairs=3), limits)
    assert len(result.entries) == 3 * 2 + 3
    assert result.exit_code == ExitCode.OK


def test_verify_weil_on_the_trivial_form(limits):
    result = sweeps.verify(Family.WEIL, Bounds(weil_max_order=1), limits)
    checks, dimensions = result.entries
    assert checks.exact == "pass"
    assert dimensions.status == Status.OK
    assert dimensions.exact.startswith("4:1 6:1 8:1 10:1 12:2 14:1")


@pytest.mark.parametrize(
    "family, bounds",
    [
        (Family.SECOND_KIND, Bounds(max_cyclic=9, max_k=2, primes=(3,), dims=(2,), product_k=(2,))),
        (Family.PRODUCT_ODD, Bounds()),
        (Family.PRODUCT_TWO, Bounds(product_k=(2, 3))),
        (Family.ELEM_ODD, Bounds(primes=(3, 5), dims=(2, 3))),
        (Family.ELEM_TWO, Bounds(dims=(2, 3))),
    ],
)
def test_verify_closed_families(family, bounds, limits):
    result = sweeps.verify(family, bounds, limits)
    counts = result.counts()
    assert counts["mismatch"] == 0
    assert counts["ok"] > 0
    assert result.exit_code == ExitCode.OK


def test_magnitude_outside_the_observed_classes_is_a_note(limits):
    entries = sweeps.run_case(
        Case(Family.SECOND_KIND, "q(9,1) + q(3,1)", Check.CLOSED, GaussKind.SECOND), limits
    )
    value, magnitude, _ = entries
    assert value.exact == "9"
    assert value.status == Status.OK
    assert magnitude.exact == ""
    assert magnitude.status == Status.OK
    assert magnitude.note == "absolute value outside {0, 1, 2}*sqrt|A|"
