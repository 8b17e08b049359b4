import logging

import pytest

from fqgauss import tools


@pytest.fixture
def limits() -> tools.Limits:
    """Default limits, independent of the environment of the test run"""
    return tools.Limits()


@pytest.fixture(autouse=True)
def _clean_environment(monkeypatch):
    for name in ("FQGAUSS_MAX_ORDER", "FQGAUSS_SEARCH_BUDGET", "FQGAUSS_WORKERS"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture(autouse=True)
def _reset_package_logger():
    """The command line attaches a handler bound to the stderr of the running test"""
    package_logger = logging.getLogger("fqgauss")
    handlers = list(package_logger.handlers)
    yield
    package_logger.handlers = handlers
    package_logger.setLevel(logging.NOTSET)
