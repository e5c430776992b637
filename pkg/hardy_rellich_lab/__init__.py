# -*- coding: utf-8 -*-

"""
Numerical laboratory for weighted Hardy, Hardy-Rellich and Rellich
inequalities: Bessel pair certification, admissibility conditions, sharp
constants per spherical-harmonic mode and symmetry breaking detection.
"""

from ._version import __version__

__short_description__ = "Numerical laboratory for weighted Hardy, Hardy-Rellich and Rellich inequalities."
__license__ = "MIT"
__author__ = "Sanhe Hu"
__author_email__ = "husanhe@gmail.com"
__maintainer__ = "Sanhe Hu"
__maintainer_email__ = "husanhe@email.com"
__github_username__ = "MacHu-GWU"

if __name__ == "__main__":  # pragma: no cover
    print(__version__)
