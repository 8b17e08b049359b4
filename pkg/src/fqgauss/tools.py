"""Resource limits, the logging setup and the ordered process fan-out shared by the package"""
import asyncio
import concurrent.futures
import dataclasses
import logging
import os
from typing import Callable, Iterable, List, Mapping, Optional, TypeVar

logger = logging.getLogger("fqgauss.tools")

DEFAULT_MAX_ORDER = 20000
DEFAULT_SEARCH_BUDGET = 10**7

_Item = TypeVar("_Item")
_Result = TypeVar("_Result")


@dataclasses.dataclass(frozen=True)
class Limits:
    """Resource limits shared by every enumerating operation

    :param max_order: The largest group order which may be enumerated element by element
    :type max_order: int
    :param search_budget: The maximal number of partial generator assignments the isometry
        search may visit
    :type search_budget: int
    :param workers: The number of processes used by the verification sweeps. ``1`` evaluates
        everything in the calling process
    :type workers: int
    :raise ValueError: One of the limits is below 1
    """

    max_order: int = DEFAULT_MAX_ORDER
    search_budget: int = DEFAULT_SEARCH_BUDGET
    workers: int = 1

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError(
                f"The maximal group order may not be below 1. Current value: {self.max_order}"
            )
        if self.search_budget < 1:
            raise ValueError(
                f"The search budget may not be below 1. Current value: {self.search_budget}"
            )
        if self.workers < 1:
            raise ValueError(f"The worker count may not be below 1. Current value: {self.workers}")

    @classmethod
    def from_environment(cls, environ: Optional[Mapping[str, str]] = None) -> "Limits":
        """Read the limits from ``FQGAUSS_MAX_ORDER``, ``FQGAUSS_SEARCH_BUDGET`` and
        ``FQGAUSS_WORKERS``

        Unset or empty variables fall back to the defaults.

        :param environ: The mapping to read from, defaults to :data:`os.environ`
        :return: The configured limits
        :rtype: Limits
        :raise ValueError: A variable is set but is not a positive integer
        """
        if environ is None:
            environ = os.environ
        return cls(
            max_order=_read_int(environ, "FQGAUSS_MAX_ORDER", DEFAULT_MAX_ORDER),
            search_budget=_read_int(environ, "FQGAUSS_SEARCH_BUDGET", DEFAULT_SEARCH_BUDGET),
            workers=_read_int(environ, "FQGAUSS_WORKERS", 1),
        )

    def override(
        self,
        max_order: Optional[int] = None,
        search_budget: Optional[int] = None,
        workers: Optional[int] = None,
    ) -> "Limits":
        """Return a copy in which every given (not ``None``) value replaces the current one"""
        changes = {
            "max_order": max_order,
            "search_budget": search_budget,
            "workers": workers,
        }
        return dataclasses.replace(self, **{k: v for k, v in changes.items() if v is not None})


def resolve_limits(limits: Optional[Limits]) -> Limits:
    """Use the given limits or, if there are none, the ones configured in the environment"""
    return limits if limits is not None else Limits.from_environment()


def _read_int(environ: Mapping[str, str], name: str, default: int) -> int:
    raw_value = environ.get(name, "").strip()
    if not raw_value:
        return default
    try:
        value = int(raw_value.replace("_", ""))
    except ValueError:
        raise ValueError(f"The {name} value must be an integer. Current value: {raw_value!r}")
    if value < 1:
        raise ValueError(f"The {name} value may not be below 1. Current value: {value}")
    return value


def configure_logging(verbosity: int) -> None:
    """Attach a stream handler to the package logger

    :param verbosity: ``0`` shows warnings, ``1`` informational messages and ``2`` or more
        debugging output
    """
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    package_logger = logging.getLogger("fqgauss")
    package_logger.setLevel(level)
    if not package_logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        package_logger.addHandler(handler)


async def gather_in_order(
    function: Callable[[_Item], _Result], items: Iterable[_Item], workers: int = 1
) -> List[_Result]:
    """Apply a function to every item and return the results in input order

    With more than one worker the calls run in a process pool, therefore the function and the
    items need to be picklable.

    :param function: The function which shall be applied
    :param items: The inputs
    :param workers: The number of worker processes
    :return: The results, in the order of ``items``
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        results = []
        for item in items:
            results.append(function(item))
            await asyncio.sleep(0)
        return results
    logger.debug("Distributing %d items over %d worker processes", len(items), workers)
    loop = asyncio.get_running_loop()
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [loop.run_in_executor(executor, function, item) for item in items]
        return list(await asyncio.gather(*futures))


def run_in_order(
    function: Callable[[_Item], _Result], items: Iterable[_Item], workers: int = 1
) -> List[_Result]:
    """Synchronous entry point for :func:`gather_in_order`"""
    return asyncio.run(gather_in_order(function, items, workers))
