# -*- coding: utf-8 -*-

import json

import pytest

from hardy_rellich_lab.cli import (
    CSV_COLUMNS,
    EXIT_OK,
    EXIT_FAIL,
    EXIT_USAGE,
    EXIT_SOFTWARE,
    main,
)


def _json(capsys) -> dict:
    document = json.loads(capsys.readouterr().out)
    assert document["schema"] == 1
    return document


class TestOracle:
    def test_json(self, capsys):
        assert main(["oracle", "--problem", "hardy-rellich", "--N", "5"]) == EXIT_OK
        document = _json(capsys)
        assert document["command"] == "oracle"
        assert document["result"]["value"] == 6.25

    def test_text(self, capsys):
        code = main(["oracle", "--problem", "rellich", "--N", "5", "--format", "text"])
        assert code == EXIT_OK
        assert capsys.readouterr().out == "1.5625\n"

    def test_deterministic(self, capsys):
        argv = ["oracle", "--problem", "hardy", "--N", "7", "--k", "2"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first


class TestCatalog:
    def test_list(self, capsys):
        assert main(["catalog", "--list", "--format", "text"]) == EXIT_OK
        names = capsys.readouterr().out.split()
        assert names[0] == "hardy"
        assert "hr_brezis_vazquez" in names

    def test_entry(self, capsys):
        assert main(["catalog", "--name", "hardy_rellich", "--N", "5"]) == EXIT_OK
        result = _json(capsys)["result"]
        assert result["dim"] == 7
        assert result["name"] == "hardy_rellich"

    def test_csv_key_value_rows(self, capsys):
        assert main(["catalog", "--name", "hardy", "--N", "5", "--format", "csv"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "key,value"
        assert "dim,5" in lines


class TestCheckPair:
    def test_pair(self, capsys):
        code = main(["check-pair", "--dim", "5", "--W", "2.25/r^2", "--grid-M", "513"])
        assert code == EXIT_OK
        assert _json(capsys)["result"]["verdict"] == "pair"

    def test_not_pair(self, capsys):
        code = main(["check-pair", "--dim", "5", "--W", "3/r^2", "--grid-M", "513", "--format", "text"])
        assert code == EXIT_FAIL
        assert capsys.readouterr().out.startswith("NOT_PAIR")

    def test_second_order_pair_with_base_dimension(self, capsys):
        argv = ["check-pair", "--dim", "7", "--N", "5", "--W", "N^2/(4*r^2)", "--grid-M", "1025"]
        assert main(argv) == EXIT_OK
        assert _json(capsys)["result"]["verdict"] == "pair"

    def test_n_defaults_to_dim(self, capsys):
        argv = ["check-pair", "--dim", "7", "--W", "N^2/(4*r^2)", "--grid-M", "1025"]
        assert main(argv) == EXIT_FAIL

    def test_catalog_entry(self, capsys):
        argv = ["check-pair", "--name", "hardy_rellich", "--N", "5", "--grid-M", "1025"]
        assert main(argv) == EXIT_OK
        result = _json(capsys)["result"]
        assert result["d"] == 7
        assert result["verdict"] == "pair"


class TestCheckCond:
    def test_pointwise(self, capsys):
        assert main(["check-cond", "--id", "con2", "--N", "5"]) == EXIT_OK
        assert _json(capsys)["result"]["holds"] is True
        assert main(["check-cond", "--id", "con2", "--N", "4"]) == EXIT_FAIL

    def test_integral(self, capsys):
        argv = ["check-cond", "--id", "conm", "--N", "5", "--W", "N^2/(4*r^2)", "--grid-M", "513"]
        assert main(argv) == EXIT_OK
        assert _json(capsys)["result"]["margin"] > 0

    def test_con_needs_w(self, capsys):
        assert main(["check-cond", "--id", "con", "--N", "5"]) == EXIT_USAGE
        assert "--W" in capsys.readouterr().err

    @pytest.mark.parametrize("N", range(2, 9))
    def test_con2_exit_code(self, capsys, N):
        expected = EXIT_OK if N >= 5 else EXIT_FAIL
        assert main(["check-cond", "--id", "con2", "--N", str(N)]) == expected


class TestSpectral:
    def test_best_constant_csv(self, capsys):
        argv = ["best-constant", "--problem", "hardy", "--N", "5", "--grid-M", "513", "--format", "csv"]
        assert main(argv) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert lines[1].startswith("hardy,5,0,2.2")

    def test_mode_scan(self, capsys):
        argv = ["mode-scan", "--problem", "hardy", "--N", "5", "--kmax", "2", "--grid-M", "257", "--format", "csv"]
        assert main(argv) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 4

    def test_mode_scan_json_is_reproducible(self, capsys):
        argv = [
            "mode-scan", "--problem", "hardy", "--N", "5", "--kmax", "2",
            "--grid-M", "257", "--workers", "2", "--format", "json",
        ]
        assert main(argv) == EXIT_OK
        first = capsys.readouterr().out
        assert main(argv) == EXIT_OK
        second = capsys.readouterr().out
        assert first.encode("utf-8") == second.encode("utf-8")
        assert json.loads(first)["command"] == "mode-scan"

    def test_symmetry(self, capsys):
        argv = ["symmetry", "--problem", "hardy-rellich", "--N", "5", "--kmax", "2", "--grid-M", "1025", "--format", "text"]
        assert main(argv) == EXIT_OK
        assert capsys.readouterr().out.startswith("RADIAL OPTIMAL: argmin k=0")

    def test_equiv_check(self, capsys):
        argv = ["equiv-check", "--W", "1/r^2", "--N", "5", "--grid-M", "1025"]
        assert main(argv) == EXIT_OK
        result = _json(capsys)["result"]
        assert result["R"] == "inf"
        assert result["rel_diff"] < 1e-2

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        argv = ["oracle", "--problem", "hardy", "--N", "5", "--output", str(path)]
        assert main(argv) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert json.loads(path.read_text())["result"]["value"] == 2.25


class TestErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["unknown"],
            ["oracle", "--problem", "hardy"],
            ["oracle", "--problem", "hardy", "--N", "0"],
            ["best-constant", "--problem", "hardy", "--N", "5", "--W", "1/(r"],
            ["best-constant", "--problem", "hardy", "--N", "5", "--W", "x/r"],
            ["best-constant", "--problem", "hardy", "--N", "5", "--grid-M", "2"],
            ["best-constant", "--problem", "hardy", "--N", "5", "--tol", "0"],
            ["catalog"],
            ["catalog", "--name", "nope", "--N", "5"],
            ["catalog", "--name", "hardy"],
            ["catalog", "--name", "ckn_blt1", "--N", "5"],
            ["check-pair", "--dim", "5", "--W", "1/r^2", "--R", "-1"],
            ["check-pair", "--name", "hardy"],
            ["check-pair", "--dim", "5"],
            ["best-constant", "--problem", "hardy", "--N", "5", "--grid-M", "8"],
        ],
    )
    def test_usage(self, capsys, argv):
        assert main(argv) == EXIT_USAGE
        assert capsys.readouterr().err.startswith("hrlab: usage error:")

    def test_help(self, capsys):
        assert main(["--help"]) == EXIT_OK
        assert "best-constant" in capsys.readouterr().out

    def test_computation_failure(self, capsys):
        argv = ["best-constant", "--problem", "hardy-rellich", "--N", "5", "--W", "N+2-r^2", "--grid-M", "129"]
        assert main(argv) == EXIT_SOFTWARE
        assert capsys.readouterr().err.startswith("hrlab: computation failed:")


if __name__ == "__main__":
    from hardy_rellich_lab.tests import run_cov_test

    run_cov_test(__file__, "hardy_rellich_lab.cli", preview=False)
