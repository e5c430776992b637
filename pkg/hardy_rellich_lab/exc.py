# -*- coding: utf-8 -*-

"""
Exception hierarchy. Every error raised on purpose by this package derives
from :class:`HardyRellichLabError` and from the closest builtin exception,
so ``except ValueError`` style handlers keep working.
"""

import typing as T


class HardyRellichLabError(Exception):
    """
    Base class of all errors raised by ``hardy_rellich_lab``.
    """


class WeightSyntaxError(HardyRellichLabError, ValueError):
    """
    The weight expression text can not be parsed.

    :param message: human readable reason.
    :param text: the full expression text.
    :param position: zero based character offset of the offending token.
    """

    def __init__(self, message: str, text: str = "", position: int = -1):
        self.text = text
        self.position = position
        if position >= 0:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)


class UnknownIdentifierError(WeightSyntaxError):
    pass


class UnboundParameterError(HardyRellichLabError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"parameter {name!r} is not bound")

    def __str__(self):
        return self.args[0]


class EvaluationError(HardyRellichLabError, ArithmeticError):
    """
    A weight can not be evaluated, e.g. division by zero or a negative base
    raised to a non integer power.

    :param r: the radius where evaluation failed, if known.
    """

    def __init__(self, message: str, r: T.Optional[float] = None):
        self.r = r
        if r is not None:
            message = f"{message} at r={r!r}"
        super().__init__(message)


class GridError(HardyRellichLabError, ValueError):
    pass


class CatalogError(HardyRellichLabError, KeyError):
    def __str__(self):
        return self.args[0]


class IndefiniteFormError(HardyRellichLabError, ValueError):
    pass


class ConvergenceError(HardyRellichLabError, RuntimeError):
    pass


class ProfileSupportError(HardyRellichLabError, ValueError):
    pass


class PreconditionError(HardyRellichLabError, ValueError):
    pass


class UsageError(HardyRellichLabError, ValueError):
    """
    Invalid command line arguments.
    """
