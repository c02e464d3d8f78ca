from concurrent.futures import ThreadPoolExecutor
from functools import wraps
import logging
from logging import Logger
from time import perf_counter_ns as timer
from typing import Callable, ParamSpec, TypeVar, cast

__all__ = [
    "Stopwatch",
    "default_arg",
    "executor",
    "trace",
]

T = TypeVar("T")
P = ParamSpec("P")
R = TypeVar("R")


def default_arg(
    v: T | None,
    default: T | None = None,
    default_factory: Callable[[], T] | None = None,
) -> T:
    """Populate default parameters."""
    if v is not None:
        return v

    if default is None and default_factory is not None:
        return default_factory()

    return cast(T, default)


_executor = None


def executor() -> ThreadPoolExecutor:
    """Global executor shared by parallel seed loops."""
    global _executor  # noqa: PLW0603
    if _executor is None:
        _executor = ThreadPoolExecutor(thread_name_prefix="partition-kit")
    return _executor


class Stopwatch:
    """Wall clock started on construction."""

    def __init__(self) -> None:
        self.start = timer()

    @property
    def elapsed_ms(self) -> float:
        return (timer() - self.start) / 1000000


def trace(logger: Logger, log_level: int | None = None) -> Callable[[Callable[P, R]], Callable[P, R]]:
    """Decorate function with time instrumentation."""
    # Defaults
    log_level = default_arg(log_level, logging.DEBUG)

    def decorator(f: Callable[P, R]) -> Callable[P, R]:
        @wraps(f)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
            stopwatch = Stopwatch()

            try:
                return f(*args, **kwargs)
            finally:
                logger.log(log_level, f"{f.__name__} took {stopwatch.elapsed_ms:0.1f} ms")

        return wrapper

    return decorator
