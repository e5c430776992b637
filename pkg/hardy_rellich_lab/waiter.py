# -*- coding: utf-8 -*-

import typing as T
import sys
import time

from .exc import ConvergenceError


class Waiter:
    """
    Bounded iteration loop with progress status. Iterative solvers run their
    sweeps inside a waiter so that a stalled loop ends with a
    :class:`~hardy_rellich_lab.exc.ConvergenceError` instead of spinning.

    Example:

    .. code-block:: python

        for attempt, elapsed in Waiter(max_attempts=500, timeout=10):
            if converged():
                break

    :param max_attempts: the loop raises once this many attempts were used up.
    :param timeout: optional wall clock budget in seconds.
    :param label: name of the loop, used in messages.
    :param indent: indent level for progress output.
    :param verbose: whether to print progress to stdout.
    """

    def __init__(
        self,
        max_attempts: int,
        timeout: T.Optional[T.Union[int, float]] = None,
        label: str = "iteration",
        indent: int = 0,
        verbose: bool = False,
    ):
        if max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")
        self.max_attempts = max_attempts
        self.timeout = timeout
        self.label = label
        self.tab = " " * indent
        self.verbose = verbose

    def __iter__(self) -> T.Iterator[T.Tuple[int, float]]:
        start = time.time()
        if self.verbose:  # pragma: no cover
            sys.stdout.write(
                f"{self.tab}start {self.label}, "
                f"at most {self.max_attempts} attempts.\n"
            )
            sys.stdout.flush()
        for attempt in range(1, self.max_attempts + 1):
            elapsed = time.time() - start
            if self.timeout is not None and elapsed > self.timeout:
                raise ConvergenceError(
                    f"{self.label} timed out in {self.timeout} seconds "
                    f"after {attempt - 1} attempts!"
                )
            if self.verbose:  # pragma: no cover
                sys.stdout.write(
                    f"\r{self.tab}on {attempt} th attempt, "
                    f"elapsed {elapsed:.1f} seconds ..."
                )
                sys.stdout.flush()
            yield attempt, elapsed
        raise ConvergenceError(
            f"{self.label} did not converge in {self.max_attempts} attempts!"
        )
