# -*- coding: utf-8 -*-


sympy_error = ImportError(
    "You don't have sympy installed. "
    "Please install it to use this feature. "
    "See https://pypi.org/project/sympy/ for more details"
)


class FakeSympy:  # pragma: no cover
    def Symbol(self, *args, **kwargs):
        raise sympy_error

    def Float(self, *args, **kwargs):
        raise sympy_error

    def exp(self, *args, **kwargs):
        raise sympy_error

    def log(self, *args, **kwargs):
        raise sympy_error


try:  # pragma: no cover
    import sympy

    has_sympy = True
except ImportError:  # pragma: no cover
    sympy = FakeSympy()
    has_sympy = False
