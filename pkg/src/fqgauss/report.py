"""Report entries and their text, JSON and CSV renderings"""
import csv
import dataclasses
import io
import json
from typing import Any, Dict, Iterable, List, Sequence

from .enums import ExitCode, OutputFormat, Status
from .exactmath import CycNum

ORACLE = "oracle"

ENTRY_FIELDS = ("form", "quantity", "exact", "approx", "rule", "status", "note")

TABLE_FIELDS = (
    "form",
    "|A|",
    "sigma",
    "G_exact",
    "G_approx",
    "Gprime_exact",
    "Gprime_approx",
    "rule",
)


def format_complex(value: complex, digits: int = 10) -> str:
    """A decimal rendering with a fixed number of digits and without negative zeros"""
    real = round(value.real, digits) + 0.0
    imag = round(value.imag, digits) + 0.0
    if imag == 0:
        return f"{real:.{digits}f}"
    return f"{real:.{digits}f}{imag:+.{digits}f}i"


@dataclasses.dataclass(frozen=True)
class ReportEntry:
    """One line of a report

    :param form: The form the entry is about, as written by the user or the sweep
    :param quantity: What was computed, for example ``g`` or ``dim``
    :param exact: The exact value, cyclotomic values in the form ``c_0 + c_1*e(1/L) + ...``
    :param approx: A decimal approximation, empty where none makes sense
    :param rule: The closed formula used, or ``oracle`` for values from the enumeration
    :param status: ok, mismatch, unsupported or skipped
    :param note: Free text, for mismatches the value of the other side
    """

    form: str
    quantity: str
    exact: str
    approx: str = ""
    rule: str = ORACLE
    status: Status = Status.OK
    note: str = ""

    @classmethod
    def for_value(
        cls,
        form: str,
        quantity: str,
        value: CycNum,
        rule: str = ORACLE,
        status: Status = Status.OK,
        note: str = "",
    ) -> "ReportEntry":
        approx = format_complex(value.to_complex())
        return cls(form, quantity, value.render(), approx, rule, status, note)

    def as_dict(self) -> Dict[str, str]:
        values = dataclasses.asdict(self)
        values["status"] = Status(self.status).value
        return values

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "ReportEntry":
        values = dict(values)
        values["status"] = Status(values["status"])
        return cls(**{name: values[name] for name in ENTRY_FIELDS})


@dataclasses.dataclass
class Report:
    """An ordered collection of report entries

    The exit code is :attr:`ExitCode.MISMATCH` as soon as one entry is a mismatch, entries which
    are unsupported or skipped do not change it.
    """

    entries: List[ReportEntry] = dataclasses.field(default_factory=list)

    def add(self, entry: ReportEntry) -> None:
        self.entries.append(entry)

    def extend(self, entries: Iterable[ReportEntry]) -> None:
        self.entries.extend(entries)

    def counts(self) -> Dict[str, int]:
        counts = {status.value: 0 for status in Status}
        for entry in self.entries:
            counts[Status(entry.status).value] += 1
        return counts

    @property
    def exit_code(self) -> ExitCode:
        if any(entry.status == Status.MISMATCH for entry in self.entries):
            return ExitCode.MISMATCH
        return ExitCode.OK

    def to_json(self) -> str:
        payload = {
            "entries": [entry.as_dict() for entry in self.entries],
            "exit_code": int(self.exit_code),
            "summary": self.counts(),
        }
        return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        payload = json.loads(text)
        return cls([ReportEntry.from_dict(values) for values in payload["entries"]])

    def to_csv(self) -> str:
        return _csv_text(ENTRY_FIELDS, (entry.as_dict() for entry in self.entries))

    def to_text(self) -> str:
        lines = []
        for entry in self.entries:
            line = f"{entry.form}  {entry.quantity} = {entry.exact}"
            if entry.approx:
                line += f"  ≈ {entry.approx}"
            line += f"  [{entry.rule}] {Status(entry.status).value}"
            if entry.note:
                line += f"  ({entry.note})"
            lines.append(line)
        summary = ", ".join(f"{count} {name}" for name, count in self.counts().items() if count)
        lines.append(f"{len(self.entries)} entries: {summary or 'none'}")
        return "\n".join(lines) + "\n"

    def render(self, output_format: OutputFormat) -> str:
        output_format = OutputFormat(output_format)
        if output_format == OutputFormat.JSON:
            return self.to_json()
        if output_format == OutputFormat.CSV:
            return self.to_csv()
        return self.to_text()


@dataclasses.dataclass(frozen=True)
class TableRow:
    """One row of the ``table`` command"""

    form: str
    order: int
    sigma: int
    first: CycNum
    second: CycNum
    rule: str

    def cells(self) -> Dict[str, str]:
        return {
            "form": self.form,
            "|A|": str(self.order),
            "sigma": str(self.sigma),
            "G_exact": self.first.render(),
            "G_approx": format_complex(self.first.to_complex()),
            "Gprime_exact": self.second.render(),
            "Gprime_approx": format_complex(self.second.to_complex()),
            "rule": self.rule,
        }


def render_table(rows: Sequence[TableRow], output_format: OutputFormat) -> str:
    output_format = OutputFormat(output_format)
    cells = [row.cells() for row in rows]
    if output_format == OutputFormat.JSON:
        return json.dumps(cells, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if output_format == OutputFormat.CSV:
        return _csv_text(TABLE_FIELDS, cells)
    widths = {
        name: max([len(name)] + [len(row[name]) for row in cells]) for name in TABLE_FIELDS
    }
    lines = ["  ".join(name.ljust(widths[name]) for name in TABLE_FIELDS).rstrip()]
    for row in cells:
        lines.append("  ".join(row[name].ljust(widths[name]) for name in TABLE_FIELDS).rstrip())
    return "\n".join(lines) + "\n"


def _csv_text(fields: Sequence[str], rows: Iterable[Dict[str, str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([row[name] for name in fields])
    return buffer.getvalue()
