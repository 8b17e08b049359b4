import json

import pytest

from fqgauss import cli


def test_eval(capsys):
    assert cli.main(["eval", "q(5,1)"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("q(5,1)  g = ")
    assert lines[1].startswith("q(5,1)  gprime = 0")
    assert lines[-1] == "2 entries: 2 ok"


def test_eval_quantities(capsys):
    assert cli.main(["--format", "csv", "eval", "U(3)", "--what", "orbits,autorder"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == 'U(3),orbits,4,,oracle,ok,"sizes 1,4,2,2"'
    assert lines[2].startswith("U(3),autorder,4,")


def test_closed_json(capsys):
    assert cli.main(["--format", "json", "closed", "q(8,3)"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["entries"][0]["rule"] == "CyclicTwo"
    assert payload["entries"][0]["approx"] == "-2.8284271247"
    assert payload["exit_code"] == 0


def test_unsupported_shapes_do_not_fail(capsys):
    assert cli.main(["closed", "q(9,1) + q(27,1)"]) == 0
    assert "unsupported" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "q(6,1)"],
        ["eval", ""],
        ["eval", "gram[2;1/0;]"],
        ["weil", "q(3,1)"],
        ["weil", "q(3,1)", "--weight", "1"],
        ["weil", "q(3,1)", "--what", "matrix", "--word", "S^2"],
        ["verify", "elem-odd", "--primes", "9"],
    ],
)
def test_invalid_input(argv, capsys):
    assert cli.main(argv) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err.startswith("fqgauss: ")


def test_resource_cap(capsys):
    assert cli.main(["--max-order", "5", "eval", "U(3)"]) == 3
    assert "enumeration cap of 5" in capsys.readouterr().err


def test_argument_errors():
    with pytest.raises(SystemExit) as info:
        cli.main(["bogus"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        cli.main(["eval", "q(3,1)", "--what", "volume"])


def test_verify(capsys):
    assert cli.main(["verify", "cyclic-two", "--k", "2"]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "24 entries: 24 ok"


def test_verify_bounds():
    parser = cli.build_parser()
    args = parser.parse_args(["verify", "product-two", "--k", "2,3", "--dims", "2", "--count", "0"])
    bounds = cli._bounds(args)
    assert (bounds.max_k, bounds.product_k) == (3, (2, 3))
    assert bounds.dims == (2,)
    assert bounds.count == 0
    args = parser.parse_args(["verify", "weil", "--max-order", "12"])
    assert cli._bounds(args).weil_max_order == 12


def test_sweep_cap(monkeypatch):
    parser = cli.build_parser()
    assert cli._sweep_max_order(parser.parse_args(["verify", "weil"])) == 2500
    assert cli._sweep_max_order(parser.parse_args(["--max-order", "9", "verify", "weil"])) == 9
    monkeypatch.setenv("FQGAUSS_MAX_ORDER", "40")
    assert cli._sweep_max_order(parser.parse_args(["verify", "weil"])) is None


def test_weil(capsys):
    assert cli.main(["weil", "gram[;;]", "--weight", "12"]) == 0
    assert capsys.readouterr().out.startswith("gram[;;]  dim l=12 = 2")


def test_table(capsys):
    assert cli.main(["--format", "csv", "table", "q(5,1)", "V2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("form,|A|,sigma,")
    assert lines[2] == "V2,4,4,0,0.0000000000,2,2.0000000000,TwoElemNoU / TwoElem2nd"
