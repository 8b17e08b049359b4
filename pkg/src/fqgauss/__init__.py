"""Equivariant Gauss sums of finite quadratic forms"""
from typing import Iterable, List, Mapping, Optional, Sequence, Union

from . import closedform, exceptions, gauss, orthogroup, sweeps, tools, weil
from .enums import Family, GaussKind, Quantity, Status, WeilQuantity
from .exactmath import CycNum
from .fqm import FqForm
from .report import Report, ReportEntry, TableRow
from .weil import HalfWeight

__all__ = ["FqForm", "CycNum", "GaussKind", "Report", "Workbench"]


class Workbench:
    def __init__(
        self,
        max_order: Optional[int] = None,
        search_budget: Optional[int] = None,
        workers: Optional[int] = None,
        environ: Optional[Mapping[str, str]] = None,
    ):
        """
        Evaluate, compare and tabulate equivariant Gauss sums under one set of resource limits

        Included modules:
          - :mod:`fqm` - Finite quadratic forms, their elements and the block grammar
          - :mod:`orthogroup` - The orthogonal group O(A) and its orbits
          - :mod:`gauss` - The equivariant Gauss sums computed by enumeration
          - :mod:`closedform` - The closed formulas and their dispatcher
          - :mod:`weil` - The Weil representation and the dimension formula
          - :mod:`sweeps` - The verification families comparing both sides

        Every value which is not given is read from the environment, see
        :meth:`tools.Limits.from_environment`.

        :param max_order: The largest group order which may be enumerated
        :type max_order: int
        :param search_budget: The maximal number of partial assignments of the isometry search
        :type search_budget: int
        :param workers: The number of processes used by :meth:`verify`
        :type workers: int
        :param environ: The environment to read the defaults from, :data:`os.environ` if omitted
        :type environ: Mapping[str, str]
        :raise ValueError: A limit is below 1 or an environment variable is not a positive integer
        """
        self.limits: tools.Limits = tools.Limits.from_environment(environ).override(
            max_order=max_order, search_budget=search_budget, workers=workers
        )
        """
        The limits passed to every enumerating operation
        """

    def parse(self, text: str) -> FqForm:
        """Parse a form expression, see :func:`fqm.parse_form` for the grammar"""
        return FqForm.parse(text)

    def evaluate(
        self, text: str, quantities: Iterable[Union[Quantity, str]] = (Quantity.G,)
    ) -> Report:
        """
        Compute quantities of a form by enumeration

        :param text: The form expression
        :param quantities: The quantities, in the order they shall be reported
        :return: One entry per quantity, all of them computed by the oracle
        :raise FormSyntaxError: The expression could not be parsed
        :raise DegenerateFormError: A Gauss sum or the group of a degenerate form was requested
        :raise EnumerationCapError: The form is larger than the enumeration cap
        """
        form = self.parse(text)
        report = Report()
        for quantity in quantities:
            report.add(self._quantity(text, form, Quantity(quantity)))
        return report

    def _quantity(self, text: str, form: FqForm, quantity: Quantity) -> ReportEntry:
        name = quantity.value
        if quantity == Quantity.G:
            return ReportEntry.for_value(
                text, name, gauss.equivariant_gauss(form, limits=self.limits).value
            )
        if quantity == Quantity.GPRIME:
            return ReportEntry.for_value(
                text, name, gauss.equivariant_gauss2(form, limits=self.limits).value
            )
        if quantity in (Quantity.CLASSICAL, Quantity.CLASSICAL2):
            kind = GaussKind.FIRST if quantity == Quantity.CLASSICAL else GaussKind.SECOND
            value = gauss.classical_gauss(form, kind, self.limits).value
            return ReportEntry.for_value(text, name, value)
        if quantity == Quantity.SIGNATURE:
            return ReportEntry(text, name, str(gauss.signature(form, self.limits)))
        if quantity == Quantity.ORBITS:
            partition = orthogroup.orbits(form, limits=self.limits)
            sizes = ",".join(str(size) for size in partition.sizes)
            return ReportEntry(text, name, str(len(partition)), note=f"sizes {sizes}")
        group = orthogroup.orthogonal_group(form, self.limits)
        return ReportEntry(text, name, str(group.order))

    def closed(self, text: str, kind: Union[GaussKind, str] = GaussKind.FIRST) -> Report:
        """
        Evaluate the closed formula for G(A, O(A)) or G'(A, O(A))

        Shapes without a formula are reported with the status ``unsupported``, they do not
        raise.
        """
        kind = GaussKind(kind)
        verdict = closedform.eval_closed(text, kind, self.limits)
        quantity = "g" if kind == GaussKind.FIRST else "gprime"
        if not verdict.supported:
            entry = ReportEntry(text, quantity, "", rule=verdict.rule, status=Status.UNSUPPORTED)
        else:
            entry = ReportEntry.for_value(text, quantity, verdict.value, verdict.rule)
        return Report([entry])

    def verify(
        self, family: Union[Family, str], bounds: Optional[sweeps.Bounds] = None
    ) -> Report:
        """Run a verification family, see :mod:`sweeps`"""
        return sweeps.verify(Family(family), bounds, self.limits)

    def weil(
        self,
        text: str,
        what: Union[WeilQuantity, str] = WeilQuantity.DIM,
        weight: Optional[str] = None,
        word: str = "S",
    ) -> Report:
        """
        Compute data of the Weil representation of a form

        :param text: The form expression
        :param what: ``dim`` for the dimension of the O(A)-invariant forms of the given weight,
            ``traces`` for the traces of ρ(S) and ρ(ST) on the invariant vectors and ``matrix``
            for the matrix of a word in S, T and Z
        :param weight: The weight, ``"7"``, ``"15/2"`` or ``"7.5"``. Needed for ``dim`` only
        :param word: The word whose matrix is printed by ``matrix``
        :raise InvalidParameterError: The weight is missing or below 2
        :raise WordSyntaxError: The word could not be parsed
        """
        form = self.parse(text)
        what = WeilQuantity(what)
        if what == WeilQuantity.DIM:
            if weight is None:
                raise exceptions.InvalidParameterError("The dimension needs a weight")
            return Report([self._dimension(text, form, HalfWeight.parse(weight))])
        if what == WeilQuantity.TRACES:
            traces = weil.trace_identities(form, self.limits)
            status = Status.OK if traces.check else Status.MISMATCH
            note = "" if traces.check else "differs from the Gauss sum expression"
            return Report(
                [
                    ReportEntry.for_value(text, "tr S", traces.tr_s, status=status, note=note),
                    ReportEntry.for_value(text, "tr ST", traces.tr_st, status=status, note=note),
                ]
            )
        matrix = weil.rho_word(form, word, self.limits)
        report = Report()
        for i, label in enumerate(matrix.basis_labels):
            row = "; ".join(matrix.entry(i, j).render() for j in range(matrix.shape[1]))
            report.add(ReportEntry(text, f"{word}[{','.join(map(str, label))}]", row))
        return report

    def _dimension(self, text: str, form: FqForm, weight: HalfWeight) -> ReportEntry:
        dimension = weil.dim_invariant_forms(form, weight, self.limits)
        notes = []
        if (weight.twice_l - gauss.signature(form, self.limits)) % 4:
            notes.append("2l - sigma is not divisible by 4")
        elif weight.twice_l == 4:
            notes.append("per printed formula")
        return ReportEntry(text, f"dim l={weight}", str(dimension), note="; ".join(notes))

    def table(self, texts: Sequence[str]) -> List[TableRow]:
        """Signature, both Gauss sums and the closed formula rules of several forms"""
        rows = []
        for text in texts:
            form = self.parse(text)
            rules = [
                closedform.eval_closed(text, kind, self.limits).rule
                for kind in (GaussKind.FIRST, GaussKind.SECOND)
            ]
            rows.append(
                TableRow(
                    text,
                    form.order,
                    gauss.signature(form, self.limits),
                    gauss.equivariant_gauss(form, limits=self.limits).value,
                    gauss.equivariant_gauss2(form, limits=self.limits).value,
                    " / ".join(rules),
                )
            )
        return rows
