# -*- coding: utf-8 -*-

__version__ = "0.1.0"

if __name__ == "__main__":  # pragma: no cover
    print(__version__)
