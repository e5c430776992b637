# -*- coding: utf-8 -*-

import sys
import subprocess
import webbrowser
from pathlib import Path

from ..paths import dir_project_root, dir_htmlcov, path_cov_index_html


def run_cov_test(
    script: str, module: str, preview: bool = False, is_folder: bool = False
):
    """
    Run the tests in ``script`` (or in its folder when ``is_folder``) with
    coverage measured on ``module`` and write the html report to ``htmlcov``.
    """
    target = str(Path(script).parent) if is_folder else script
    args = [
        sys.executable,
        "-m",
        "pytest",
        "-s",
        "--tb=native",
        f"--rootdir={dir_project_root}",
        f"--cov={module}",
        "--cov-report",
        "term-missing",
        "--cov-report",
        f"html:{dir_htmlcov}",
        target,
    ]
    subprocess.run(args, cwd=f"{dir_project_root}")
    if preview:  # pragma: no cover
        webbrowser.open(path_cov_index_html.as_uri())
