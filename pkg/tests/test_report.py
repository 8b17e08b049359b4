import json

import pytest

from fqgauss import report
from fqgauss.enums import ExitCode, OutputFormat, Status
from fqgauss.exactmath import cyc, sqrt_int
from fqgauss.report import Report, ReportEntry, TableRow


@pytest.mark.parametrize(
    "value, digits, expected",
    [
        (complex(-0.0, 0.0), 10, "0.0000000000"),
        (complex(-1e-14, -1e-14), 4, "0.0000"),
        (complex(1, 1), 2, "1.00+1.00i"),
        (complex(0, -(2**0.5)), 4, "0.0000-1.4142i"),
        (complex(5**0.5, 0), 10, "2.2360679775"),
    ],
)
def test_format_complex(value, digits, expected):
    assert report.format_complex(value, digits) == expected


def test_entry_for_value():
    entry = ReportEntry.for_value("q(5,1)", "g", sqrt_int(5))
    assert entry.exact == sqrt_int(5).render()
    assert entry.approx == "2.2360679775"
    assert entry.rule == report.ORACLE
    assert entry.status == Status.OK


def _sample() -> Report:
    return Report(
        [
            ReportEntry.for_value("q(3,1)", "gprime", 1 - cyc(1, 3), "CyclicOdd2nd"),
            ReportEntry("q(9,1) + q(27,1)", "g", "", rule="unsupported", status=Status.UNSUPPORTED),
            ReportEntry("q(8,1)", "g", "0", status=Status.MISMATCH, note="oracle 2*e(1/8)"),
        ]
    )


def test_counts_and_exit_code():
    sample = _sample()
    assert sample.counts() == {"ok": 1, "mismatch": 1, "unsupported": 1, "skipped": 0}
    assert sample.exit_code == ExitCode.MISMATCH
    assert Report(sample.entries[:2]).exit_code == ExitCode.OK
    assert Report().exit_code == ExitCode.OK


def test_json_round_trip():
    sample = _sample()
    text = sample.to_json()
    payload = json.loads(text)
    assert payload["exit_code"] == 1
    assert payload["summary"]["mismatch"] == 1
    assert payload["entries"][0]["status"] == "ok"
    assert list(payload["entries"][0]) == sorted(report.ENTRY_FIELDS)
    assert Report.from_json(text).entries == sample.entries


def test_csv():
    lines = _sample().to_csv().splitlines()
    assert lines[0] == "form,quantity,exact,approx,rule,status,note"
    assert lines[1].startswith("q(3,1),gprime,1 - e(1/3),")
    assert lines[2] == "q(9,1) + q(27,1),g,,,unsupported,unsupported,"
    assert len(lines) == 4


def test_text():
    lines = _sample().to_text().splitlines()
    assert lines[0].startswith("q(3,1)  gprime = 1 - e(1/3)  ≈ 1.5000000000-0.8660254038i")
    assert lines[0].endswith("[CyclicOdd2nd] ok")
    assert lines[2] == "q(8,1)  g = 0  [oracle] mismatch  (oracle 2*e(1/8))"
    assert lines[3] == "3 entries: 1 ok, 1 mismatch, 1 unsupported"
    assert Report().to_text() == "0 entries: none\n"


def test_render_dispatch():
    sample = _sample()
    assert sample.render(OutputFormat.JSON) == sample.to_json()
    assert sample.render("csv") == sample.to_csv()
    assert sample.render(OutputFormat.TEXT) == sample.to_text()


def test_table_rendering():
    rows = [
        TableRow("q(5,1)", 5, 4, sqrt_int(5), cyc(0, 1) * 0, "CyclicOdd / CyclicOdd2nd"),
        TableRow("V2", 4, 4, cyc(0, 1) * 0, cyc(0, 1) * 2, "TwoElemNoU / TwoElem2nd"),
    ]
    text = report.render_table(rows, OutputFormat.TEXT).splitlines()
    assert text[0].split() == list(report.TABLE_FIELDS)
    assert text[2].split()[:5] == ["V2", "4", "4", "0", "0.0000000000"]
    cells = json.loads(report.render_table(rows, OutputFormat.JSON))
    assert cells[1]["Gprime_exact"] == "2"
    assert cells[0]["|A|"] == "5"
    csv_lines = report.render_table(rows, OutputFormat.CSV).splitlines()
    assert csv_lines[0] == ",".join(report.TABLE_FIELDS)
    assert csv_lines[2] == "V2,4,4,0,0.0000000000,2,2.0000000000,TwoElemNoU / TwoElem2nd"
