# -*- coding: utf-8 -*-

from pathlib import Path

dir_here = Path(__file__).absolute().parent
dir_project_root = dir_here.parent

# ------------------------------------------------------------------------------
# Coverage report written by ``tests.helper.run_cov_test``
# ------------------------------------------------------------------------------
dir_htmlcov = dir_project_root / "htmlcov"
path_cov_index_html = dir_htmlcov / "index.html"
