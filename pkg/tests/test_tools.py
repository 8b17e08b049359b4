import logging

import pytest

from fqgauss import tools


def test_default_limits():
    limits = tools.Limits()
    assert limits.max_order == tools.DEFAULT_MAX_ORDER
    assert limits.search_budget == tools.DEFAULT_SEARCH_BUDGET
    assert limits.workers == 1


def test_limits_from_environment():
    environ = {"FQGAUSS_MAX_ORDER": "5_000", "FQGAUSS_SEARCH_BUDGET": " ", "FQGAUSS_WORKERS": "4"}
    limits = tools.Limits.from_environment(environ)
    assert limits == tools.Limits(max_order=5000, workers=4)


def test_limits_from_process_environment(monkeypatch):
    monkeypatch.setenv("FQGAUSS_MAX_ORDER", "77")
    assert tools.resolve_limits(None).max_order == 77
    explicit = tools.Limits(max_order=5)
    assert tools.resolve_limits(explicit) is explicit


@pytest.mark.parametrize("value", ["many", "0", "-3", "1.5"])
def test_invalid_environment(value):
    with pytest.raises(ValueError) as info:
        tools.Limits.from_environment({"FQGAUSS_WORKERS": value})
    assert "FQGAUSS_WORKERS" in str(info.value)


def test_override():
    limits = tools.Limits().override(max_order=10, workers=None)
    assert limits.max_order == 10
    assert limits.workers == 1
    with pytest.raises(ValueError):
        limits.override(search_budget=0)


def test_limits_validation():
    with pytest.raises(ValueError):
        tools.Limits(max_order=0)
    with pytest.raises(ValueError):
        tools.Limits(workers=0)


def test_limits_are_hashable():
    assert len({tools.Limits(), tools.Limits(), tools.Limits(max_order=3)}) == 2


@pytest.mark.parametrize("workers", [1, 2])
def test_run_in_order(workers):
    assert tools.run_in_order(abs, [-3, 2, -1, 0], workers) == [3, 2, 1, 0]


def test_run_in_order_without_items():
    assert tools.run_in_order(abs, [], 3) == []


@pytest.mark.parametrize(
    "verbosity, level", [(0, logging.WARNING), (1, logging.INFO), (2, logging.DEBUG)]
)
def test_configure_logging(verbosity, level):
    package_logger = logging.getLogger("fqgauss")
    handlers = list(package_logger.handlers)
    try:
        tools.configure_logging(verbosity)
        assert package_logger.level == level
        assert len(package_logger.handlers) == max(1, len(handlers))
    finally:
        package_logger.handlers = handlers
        package_logger.setLevel(logging.NOTSET)
