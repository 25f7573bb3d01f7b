import logging
import sys
from contextlib import contextmanager
from typing import Iterator, Literal, Sequence, Union, cast

__all__: Sequence[str] = (
    "LOG_FORMAT",
    "PACKAGE_LOGGER",
    "LogLevelStr",
    "LogLevelInt",
    "LogLevel",
    "make_standard_logger",
    "standardize_log_level",
    "configure_package_logging",
    "package_loggers_at_level",
)

LOG_FORMAT: str = "%(asctime)s %(levelname)s [%(name)s] [%(filename)s:%(lineno)d] - %(message)s"

PACKAGE_LOGGER: str = "blowup_kit"
"""Every module logger is a child of this name, so one level setting governs the library."""

LogLevelStr = Literal["DEBUG", "INFO", "WARNING", "ERROR", "FATAL"]
LogLevelInt = Literal[10, 20, 30, 40, 50]
LogLevel = Union[LogLevelStr, LogLevelInt]

# the Literal types above must agree with the stdlib's numbering
assert logging.DEBUG in LogLevelInt.__args__  # type: ignore
assert logging.INFO in LogLevelInt.__args__  # type: ignore
assert logging.WARNING in LogLevelInt.__args__  # type: ignore
assert logging.ERROR in LogLevelInt.__args__  # type: ignore
assert logging.FATAL in LogLevelInt.__args__  # type: ignore


def make_standard_logger(name: str) -> logging.Logger:
    """Logger for a library module: stderr only, level inherited from the package logger.

    Module loggers carry no level of their own (NOTSET). Use
    :func:`configure_package_logging` to change how chatty the whole library is.
    Stdout is never written to: the CLI reserves it for JSON reports.
    """
    if not isinstance(name, str) or len(name) == 0:
        raise ValueError("Name must be a non-empty string.")
    _ensure_package_handler()
    return logging.getLogger(name)


def _ensure_package_handler() -> None:
    root = logging.getLogger(PACKAGE_LOGGER)
    if not root.handlers:
        handler = logging.StreamHandler(stream=sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
        root.setLevel(logging.WARNING)
        root.propagate = False


def configure_package_logging(log_level: Union[LogLevel, str, int]) -> LogLevelInt:
    """Sets the level of the package logger and returns the canonical integer level."""
    level = standardize_log_level(log_level)
    _ensure_package_handler()
    logging.getLogger(PACKAGE_LOGGER).setLevel(level)
    return level


def standardize_log_level(log_level: Union[LogLevel, str, int]) -> LogLevelInt:
    """Converts string (or int) for log level into its canonical int representation.

    :raises ValueError On an unknown level name or number.
    :raises TypeError On anything that is neither a str nor an int.
    """
    if isinstance(log_level, str):
        name = log_level.upper()
        if name not in LogLevelStr.__args__ or name not in logging._nameToLevel:  # type: ignore
            raise ValueError(f"Unrecognized logging level (str): {name}, from known {LogLevelStr}")
        return cast(LogLevelInt, logging._nameToLevel[name])
    if isinstance(log_level, int) and not isinstance(log_level, bool):
        if log_level not in LogLevelInt.__args__:  # type: ignore
            raise ValueError(
                f"Unrecognized logging level (int): {log_level}, from known {LogLevelInt}"
            )
        return cast(LogLevelInt, log_level)
    raise TypeError(
        f"Expecting either int or str for log level ({LogLevel}), but found {type(log_level)}"
    )


@contextmanager  # type: ignore
def package_loggers_at_level(new_level: LogLevel) -> Iterator[None]:
    """Temporarily sets the package logger's level, restoring the previous one on exit."""
    _ensure_package_handler()
    root = logging.getLogger(PACKAGE_LOGGER)
    previous = root.level
    root.setLevel(standardize_log_level(new_level))
    try:
        yield
    finally:
        root.setLevel(previous)
