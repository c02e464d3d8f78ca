import logging

import pytest

import partition_kit as pk
from partition_kit.tools import default_arg, trace

logger = logging.getLogger(__name__)


def test_default_arg():
    #
    # Thens
    #

    # Given values should pass through
    assert default_arg(3, 5) == 3

    # Missing values should fall back to default
    assert default_arg(None, 5) == 5

    # Missing values should fall back to default_factory
    assert default_arg(None, default_factory=list) == []


def test_trace(caplog: pytest.LogCaptureFixture):
    #
    # Givens
    #

    # I decorated a function with trace
    @trace(logger, logging.INFO)
    def double(x: int) -> int:
        return 2 * x

    #
    # Whens
    #

    # I call it
    with caplog.at_level(logging.INFO, logger=__name__):
        result = double(4)

    #
    # Thens
    #

    # result should be unchanged
    assert result == 8

    # timing should be logged under the function name
    assert any("double took" in record.message for record in caplog.records)


def test_executor():
    #
    # Thens
    #

    # executor should be a shared singleton
    assert pk.tools.executor() is pk.tools.executor()
