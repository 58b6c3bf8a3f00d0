import io
import json

import pytest

from futakizero.cli import main


def run_cli(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


class TestVerify:
    def test_single_case_full_cone(self):
        code, out = run_cli(["verify", "2.24"])
        assert code == 0
        assert "case=2.24 verdict=full_cone fixed_dim=2 certificate=sigma+tau" in out

    def test_unknown_family_is_usage_error(self, capsys):
        code, _ = run_cli(["verify", "no-such-family"])
        assert code == 2
        assert "unknown family" in capsys.readouterr().err

    def test_exceptional_case_dimension(self):
        code, out = run_cli(["verify", "3.19"])
        assert code == 0
        assert "verdict=subcone fixed_dim=2" in out

    def test_family_selector_picks_both_members(self):
        code, out = run_cli(["verify", "3.10"])
        assert code == 0
        assert "case=3.10-a0" in out and "case=3.10-a" in out

    def test_all_records_verify(self):
        code, out = run_cli(["verify", "--all"])
        assert code == 0
        assert "34 case records, 0 mismatches" in out

    def test_json_lines_stream(self):
        code, out = run_cli(["verify", "2.24", "--format", "json-lines"])
        assert code == 0
        row = json.loads(out.splitlines()[0])
        assert list(row)[:4] == ["case", "verdict", "fixed_dim", "certificate"]
        assert row["case"] == "2.24"
        assert row["consistent"] is True

    def test_mismatch_exits_one(self, tmp_path, catalog):
        from futakizero.catalog import default_catalog_text
        broken = default_catalog_text().replace(
            'expected = subcone(2)\naut = C* x PGL2, plus an involution\n'
            'ambient = x0 x1 x2 x3 x4\nvariety = x0^2 + x1*x2 + x3*x4\n'
            'center = ideal(x0, x1, x2, x4)',
            'expected = subcone(3)\naut = C* x PGL2, plus an involution\n'
            'ambient = x0 x1 x2 x3 x4\nvariety = x0^2 + x1*x2 + x3*x4\n'
            'center = ideal(x0, x1, x2, x4)', 1)
        assert broken != default_catalog_text()
        path = tmp_path / "broken.cat"
        path.write_text(broken)
        code, out = run_cli(["--catalog", str(path), "verify", "3.19"])
        assert code == 1
        assert "MISMATCH" in out

    def test_bad_catalog_exits_two(self, tmp_path, capsys):
        path = tmp_path / "bad.cat"
        path.write_text("version = 1\n[case \"x\"]\nnot a pair\n")
        code, _ = run_cli(["--catalog", str(path), "verify", "--all"])
        assert code == 2


class TestToric:
    def test_futaki_symmetric_hexagon(self):
        code, out = run_cli(["toric", "futaki", "--family", "s6",
                             "--params", "a=1,b=1,c=1"])
        assert code == 0
        assert out.strip() == "(0, 0)"

    def test_futaki_rectangle(self):
        code, out = run_cli(["toric", "futaki", "--family", "p1xp1",
                             "--params", "a=2,b=5"])
        assert code == 0
        assert out.strip() == "(0, 0)"

    def test_out_of_region_exit_three(self, capsys):
        code, _ = run_cli(["toric", "futaki", "--family", "s6",
                           "--params", "a=2,b=2,c=2"])
        assert code == 3
        assert "region" in capsys.readouterr().err

    def test_scan_output_shape(self):
        code, out = run_cli(["toric", "scan", "--family", "s6", "--step", "1/2"])
        assert code == 0
        lines = out.splitlines()
        grid = [l for l in lines if " -> " in l]
        assert grid and all(l.endswith(("zero", "nonzero")) for l in grid)
        assert any(l.startswith("locus: c = 3 - a - b :: confirmed") for l in lines)
        assert any(l.startswith("locus: a = b = c :: confirmed") for l in lines)
        assert any(l.startswith("locus: coverage :: exact") for l in lines)

    def test_scan_classification_for_two_line_blowup(self):
        code, out = run_cli(["toric", "scan", "--family", "bl2lines-p3",
                             "--step", "1/2"])
        assert code == 0
        assert "locus: a = b :: confirmed" in out
        assert "locus: classification ::" in out


class TestReport:
    def test_exception_list_footer(self):
        code, out = run_cli(["report"])
        assert code == 0
        assert ("theorem-1 exception list (computed): "
                "3.9 3.13 3.19 3.20 4.2 4.4 4.7 5.3") in out
        assert "audit row 3.25: adjoint=unsolvable;toric=locus_and_more" in out

    def test_json_lines_rows(self):
        code, out = run_cli(["report", "--format", "json-lines"])
        assert code == 0
        lines = out.splitlines()
        rows = [json.loads(l) for l in lines]
        assert [r["case"] for r in rows[:-1]] == [
            "2.20", "2.21", "2.22", "2.24", "2.27", "2.29", "2.32", "2.34",
            "3.5", "3.8", "3.9", "3.10-a0", "3.10-a", "3.12", "3.13", "3.15",
            "3.17", "3.19", "3.20", "3.25", "3.27", "4.2", "4.3", "4.4", "4.6",
            "4.7", "4.13", "5.1", "5.3", "6.1", "7.1", "8.1", "9.1", "10.1"]
        footer = rows[-1]
        assert footer["exception_families"] == [
            "3.9", "3.13", "3.19", "3.20", "4.2", "4.4", "4.7", "5.3"]

    def test_single_family_report(self):
        code, out = run_cli(["report", "2.24"])
        assert code == 0
        rows = [l for l in out.splitlines() if l.startswith("2.24")]
        assert len(rows) == 1


class TestDeterminism:
    def test_repeated_runs_byte_identical(self):
        first = run_cli(["report", "--jobs", "8"])
        second = run_cli(["report", "--jobs", "2"])
        assert first == second

    def test_verify_deterministic(self):
        assert run_cli(["verify", "--all"]) == run_cli(["verify", "--all"])


class TestCatalogCommand:
    def test_validate_ok(self):
        code, out = run_cli(["catalog", "validate"])
        assert code == 0
        assert out.strip() == "catalog OK: 34 records, 0 findings"

    def test_env_var_overrides_default(self, tmp_path, monkeypatch):
        path = tmp_path / "env.cat"
        path.write_text("version = 1\n")
        monkeypatch.setenv("FUTAKIZERO_CATALOG", str(path))
        code, _ = run_cli(["catalog", "validate"])
        assert code == 2

    def test_validate_reports_findings(self, tmp_path):
        from futakizero.catalog import default_catalog_text
        broken = default_catalog_text().replace(
            "weights(1, -1, 1, -1, 0)", "weights(1, -1, 0, 0, 0)")
        path = tmp_path / "broken.cat"
        path.write_text(broken)
        code, out = run_cli(["--catalog", str(path), "catalog", "validate"])
        assert code == 2
        assert "finding:" in out
