import logging

import pytest

from blowup_kit.loggers import (
    PACKAGE_LOGGER,
    configure_package_logging,
    make_standard_logger,
    package_loggers_at_level,
    standardize_log_level,
)


def test_make_standard_logger():
    logger = make_standard_logger("blowup_kit.test_make_standard_logger")
    logger.info("hello world!")
    assert logger.parent is not None
    assert logger.level == logging.NOTSET

    package = logging.getLogger(PACKAGE_LOGGER)
    assert len(package.handlers) == 1
    assert not package.propagate
    make_standard_logger("blowup_kit.another")
    assert len(package.handlers) == 1

    with pytest.raises(ValueError):
        make_standard_logger("")


@pytest.mark.parametrize(
    "input_,expected",
    [
        ("debug", logging.DEBUG),
        ("info", logging.INFO),
        ("WARNING", logging.WARNING),
        ("error", logging.ERROR),
        ("FATAL", logging.FATAL),
        (logging.DEBUG, logging.DEBUG),
        (logging.INFO, logging.INFO),
        (logging.WARNING, logging.WARNING),
        (logging.ERROR, logging.ERROR),
        (logging.FATAL, logging.FATAL),
    ],
)
def test_standardize_log_level(input_, expected):
    actual = standardize_log_level(input_)
    assert actual == expected


def test_standardize_log_level_fail():
    with pytest.raises(ValueError):
        standardize_log_level("infos")

    with pytest.raises(ValueError):
        standardize_log_level(-10)

    with pytest.raises(TypeError):
        standardize_log_level(None)  # type: ignore

    with pytest.raises(TypeError):
        standardize_log_level(True)  # type: ignore


def test_configure_package_logging():
    package = logging.getLogger(PACKAGE_LOGGER)
    previous = package.level
    try:
        assert configure_package_logging("debug") == logging.DEBUG
        assert make_standard_logger("blowup_kit.engine").isEnabledFor(logging.DEBUG)
        configure_package_logging(logging.ERROR)
        assert not make_standard_logger("blowup_kit.engine").isEnabledFor(logging.WARNING)
    finally:
        package.setLevel(previous)


def test_package_loggers_at_level():
    package = logging.getLogger(PACKAGE_LOGGER)
    module = make_standard_logger("blowup_kit.series")
    before = package.level
    with package_loggers_at_level("FATAL"):
        assert package.level == logging.FATAL
        assert not module.isEnabledFor(logging.ERROR)
    assert package.level == before

    with pytest.raises(RuntimeError):
        with package_loggers_at_level(logging.DEBUG):
            raise RuntimeError()
    assert package.level == before
