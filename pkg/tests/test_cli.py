import json

import pytest

import hesskit.reports
from hesskit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


class TestVerifyProp:
    def test_closed_form_id(self, capsys):
        code, doc = run(capsys, "verify", "prop", "--id", "2.7",
                        "--r", "2", "--k", "2", "--h", "1")
        assert code == 0
        assert doc["matches"] and doc["constant"] == "-96"

    def test_pair_id_scans_all_m_by_default(self, capsys):
        code, doc = run(capsys, "verify", "prop", "--id", "2.8",
                        "--r", "2", "--k", "2")
        assert code == 0
        assert doc["passed"] and len(doc["reports"]) == 2

    def test_single_m(self, capsys):
        code, doc = run(capsys, "verify", "prop", "--id", "2.15",
                        "--r", "2", "--k", "2", "--m", "1")
        assert code == 0
        assert doc["c1"] == "-144"

    def test_m_rejected_for_closed_form(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "prop", "--id", "2.7", "--r", "2", "--k", "2",
                  "--m", "1"])
        assert exc.value.code == 2

    def test_double_line_needs_two_quadric_factors(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "prop", "--id", "2.16", "--r", "2", "--k", "1"])
        assert exc.value.code == 2


class TestRank:
    def test_injective_point(self, capsys):
        code, doc = run(capsys, "rank", "--point", "qk", "--d", "4")
        assert code == 0
        assert doc["passed"] and doc["claim"] == "injective"
        assert doc["rank"] == 14

    def test_no_claim_point(self, capsys):
        code, doc = run(capsys, "rank", "--point", "qkl", "--d", "3")
        assert code == 0
        assert doc["claim"] == "no-claim" and not doc["injective"]

    def test_parity_mismatch(self):
        with pytest.raises(SystemExit) as exc:
            main(["rank", "--point", "qk", "--d", "5"])
        assert exc.value.code == 2


class TestScan:
    def test_default_window(self, capsys):
        code, doc = run(capsys, "scan", "--condition", "evenA")
        assert code == 0
        assert doc["violations"] == [[7, 3], [12, 4]]
        assert "curve_bridge" not in doc

    def test_curve_bridge_reported(self, capsys):
        code, doc = run(capsys, "scan", "--condition", "odd")
        assert code == 0
        assert doc["clean"]
        assert doc["curve_bridge"] == {"curve": "curve-one",
                                       "consistent": True}
        code, doc = run(capsys, "scan", "--condition", "evenB",
                        "--kmin", "2", "--kmax", "50")
        assert code == 0
        assert doc["violations"] == [[2, 2]]
        assert doc["curve_bridge"]["curve"] == "curve-two"

    def test_window_validation(self):
        with pytest.raises(SystemExit) as exc:
            main(["scan", "--condition", "odd", "--kmin", "5", "--kmax", "2"])
        assert exc.value.code == 2


class TestCurvesAndLimits:
    def test_family_verify(self, capsys):
        code, doc = run(capsys, "curves", "verify", "--family", "2",
                        "--bound", "500")
        assert code == 0
        assert doc["passed"] and doc["omega_match"]

    def test_tiny_bound_rejected(self):
        with pytest.raises(SystemExit) as exc:
            main(["curves", "verify", "--family", "1", "--bound", "5"])
        assert exc.value.code == 2

    def test_named_fixture(self, capsys):
        code, doc = run(capsys, "limit", "--fixture", "quartic-powers")
        assert code == 0
        assert doc["status"] == "divisible"

    def test_unknown_fixture(self, capsys):
        assert main(["limit", "--fixture", "no-such-family"]) == 3

    def test_random_family(self, capsys):
        code, doc = run(capsys, "limit", "--d", "5", "--seed", "4")
        assert code == 0
        assert doc["status"] != "not-divisible"

    def test_fixture_and_degree_are_exclusive(self):
        with pytest.raises(SystemExit) as exc:
            main(["limit", "--fixture", "quartic-powers", "--d", "5"])
        assert exc.value.code == 2


class TestCertify:
    def test_even_low_degree(self, capsys):
        code, doc = run(capsys, "certify", "--d", "4")
        assert code == 0
        assert doc["pass"] and doc["branch"] == "evenA-via-2.9"
        assert not doc["excluded"]

    def test_excluded_degree(self, capsys):
        code, doc = run(capsys, "certify", "--d", "5")
        assert code == 0
        assert doc["pass"] and doc["excluded"]
        assert doc["branch"] == "excluded" and doc["reason"]

    def test_degree_floor(self):
        with pytest.raises(SystemExit) as exc:
            main(["certify", "--d", "3"])
        assert exc.value.code == 2


class TestSuiteAndConfig:
    def test_filtered_run_is_deterministic(self, capsys):
        code = main(["suite", "--filter", "closed-forms"])
        first = capsys.readouterr().out
        assert code == 0
        assert main(["suite", "--filter", "closed-forms"]) == 0
        assert capsys.readouterr().out == first
        doc = json.loads(first)
        assert list(doc["entries"]) == ["closed-forms"]
        assert doc["entries"]["closed-forms"]["passed"]
        assert "timings" not in doc and "jobs" not in doc["suite"]

    def test_config_supplies_defaults_and_flags_win(self, tmp_path, capsys):
        cfg = tmp_path / "scan.cfg"
        cfg.write_text("kmax = 6\n# comment line\nseed = 1\n")
        code, doc = run(capsys, "--config", str(cfg), "scan",
                        "--condition", "evenA")
        assert code == 0
        assert doc["kmax"] == 6 and doc["clean"]
        code, doc = run(capsys, "--config", str(cfg), "scan",
                        "--condition", "evenA", "--kmax", "20")
        assert doc["kmax"] == 20 and not doc["clean"]

    def test_unknown_config_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("bond = 12\n")
        with pytest.raises(SystemExit) as exc:
            main(["--config", str(cfg), "scan", "--condition", "odd"])
        assert exc.value.code == 2

    def test_corrupted_fixture_detected(self, capsys, monkeypatch):
        monkeypatch.setattr(hesskit.reports, "EXPECTED_FIXTURE_DIGEST",
                            "0" * 64)
        assert main(["suite", "--filter", "closed-forms"]) == 3
