"""Kinds, block and rule names, report statuses and command line choices"""
from enum import Enum, IntEnum


class GaussKind(str, Enum):
    """The two kinds of equivariant Gauss sums"""

    FIRST = "first"
    """G(A, Γ): the orbit pairing of a representative with itself"""

    SECOND = "second"
    """G'(A, Γ): the orbit pairing weighted by e(-q(x))"""


class BlockKind(str, Enum):
    """The standard blocks accepted by the form grammar"""

    CYCLIC = "q"
    HYPERBOLIC_ODD = "U"
    ANISOTROPIC_ODD = "N"
    HYPERBOLIC_TWO = "U2"
    ANISOTROPIC_TWO = "V2"
    RAW = "gram"


class RuleId(str, Enum):
    """
    The closed formulas known to the dispatcher. Each member names exactly one statement
    """

    CYCLIC_ODD = "CyclicOdd"
    ELEM_ODD_ISO = "ElemOddIso"
    ELEM_ODD_ANISO = "ElemOddAniso"
    PRODUCT_ODD = "ProductOdd"
    CYCLIC_TWO = "CyclicTwo"
    TWO_ELEM_WITH_U = "TwoElemWithU"
    TWO_ELEM_NO_U = "TwoElemNoU"
    PRODUCT_TWO_K4 = "ProductTwoK4"
    PRODUCT_TWO_K3 = "ProductTwoK3"
    PRODUCT_TWO_K2 = "ProductTwoK2"
    CYCLIC_ODD_2ND = "CyclicOdd2nd"
    CYCLIC_TWO_2ND = "CyclicTwo2nd"
    ELEM_ODD_ISO_2ND = "ElemOddIso2nd"
    ELEM_ODD_ANISO_2ND = "ElemOddAniso2nd"
    TWO_ELEM_2ND = "TwoElem2nd"
    PRODUCT_2ND = "Product2nd"
    REMARK_2ND = "Remark2nd"


class Quantity(str, Enum):
    """Quantities the ``eval`` command can compute with the oracle"""

    G = "g"
    GPRIME = "gprime"
    CLASSICAL = "classical"
    CLASSICAL2 = "classical2"
    SIGNATURE = "signature"
    ORBITS = "orbits"
    AUTORDER = "autorder"


class WeilQuantity(str, Enum):
    """Quantities the ``weil`` command can compute"""

    DIM = "dim"
    TRACES = "traces"
    MATRIX = "matrix"


class Family(str, Enum):
    """The verification sweeps"""

    CYCLIC_ODD = "cyclic-odd"
    CYCLIC_TWO = "cyclic-two"
    ELEM_ODD = "elem-odd"
    ELEM_TWO = "elem-two"
    PRODUCT_ODD = "product-odd"
    PRODUCT_TWO = "product-two"
    SECOND_KIND = "second-kind"
    LOCALIZATION = "localization"
    WEIL = "weil"
    ALL = "all"


class Status(str, Enum):
    """Outcome of a single report entry"""

    OK = "ok"
    MISMATCH = "mismatch"
    UNSUPPORTED = "unsupported"
    SKIPPED = "skipped"


class OutputFormat(str, Enum):
    """Output formats of the command line interface"""

    TEXT = "text"
    JSON = "json"
    CSV = "csv"


class ExitCode(IntEnum):
    """The exit codes of the command line interface"""

    OK = 0
    """Every computation and comparison succeeded"""

    MISMATCH = 1
    """At least one closed formula disagreed with the oracle"""

    INVALID_INPUT = 2
    """The form, the word or a parameter could not be parsed or validated"""

    RESOURCE_CAP = 3
    """The enumeration cap or the isometry search budget was exceeded"""


class Check(str, Enum):
    """What a verification case compares"""

    CLOSED = "closed"
    AUTORDER = "autorder"
    PRODUCT_FAILS = "product-fails"
    LOCALIZATION = "localization"
    ADDITIVITY = "additivity"
    WEIL = "weil"
