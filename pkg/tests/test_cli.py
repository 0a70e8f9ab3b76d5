import io
import json

import pytest

from qfi_bottleneck.cli import (ConfigError, load_config, main, merge_flags,
                                parse_grid)


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


class TestHelpers:
    def test_parse_grid(self):
        assert parse_grid("12x24") == [12, 24]
        assert parse_grid("3X4") == [3, 4]
        with pytest.raises(ConfigError):
            parse_grid("3y4")
        with pytest.raises(ConfigError):
            parse_grid("0x4")

    def test_load_config_missing_file(self):
        with pytest.raises(ConfigError):
            load_config("/does/not/exist.json")

    def test_load_config_rejects_non_object(self, tmp_path):
        path = write_config(tmp_path, [1, 2, 3])
        with pytest.raises(ConfigError, match="object"):
            load_config(path)


class TestExitCodes:
    def test_success_writes_csv(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"t22": 0.5, "t33": 0.3,
                                      "alpha_points": 11})
        out = tmp_path / "report.csv"
        code = main(["appendix-b", "--config", cfg, "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == \
            "row,input_label,target,value,max_dev_regular,flagged_count,pass"
        assert len(lines) == 7
        assert capsys.readouterr().out == ""

    def test_stdout_default(self, capsys):
        code = main(["contour", "--alpha-points", "5"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("t_plus,alpha,gap,flag")

    def test_byte_identical_reruns(self, tmp_path):
        cfg = write_config(tmp_path, {
            "generator": {"type": "case", "t1": 0.5, "t2": 0.5},
            "probe": {"type": "named", "label": "case_iii", "theta": 0.4},
        })
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["qfi", "--config", cfg, "--alpha-points", "17",
                     "--out", str(a)]) == 0
        assert main(["qfi", "--config", cfg, "--alpha-points", "17",
                     "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_json_format(self, tmp_path):
        cfg = write_config(tmp_path, {"t22": 0.5, "t33": 0.3,
                                      "alpha_points": 11})
        out = tmp_path / "report.json"
        code = main(["appendix-b", "--config", cfg, "--format", "json",
                     "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert set(doc) == {"columns", "rows", "meta"}
        assert doc["meta"]["violations"] == 0

    def test_violations_exit_one(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"trials": 3, "seed": 0})
        out = tmp_path / "report.csv"
        code = main(["conjecture", "--config", cfg, "--out", str(out)])
        assert code == 1
        assert "violations: 3" in capsys.readouterr().err
        # The report itself is still written.
        assert len(out.read_text().splitlines()) == 4

    def test_malformed_json_exit_two(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code = main(["qfi", "--config", str(path)])
        assert code == 2
        assert "config error" in capsys.readouterr().err

    def test_validation_exit_two_names_field(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "generator": {"type": "case", "t1": 0.5},
            "probe": {"type": "named", "label": "eq29"},
        })
        code = main(["qfi", "--config", cfg])
        assert code == 2
        err = capsys.readouterr().err
        assert "config error" in err and "t2" in err

    def test_bad_seed_exit_two(self, capsys):
        code = main(["contour", "--seed", "-1"])
        assert code == 2
        assert "seed" in capsys.readouterr().err
        assert main(["contour", "--seed", str(2 ** 64)]) == 2

    def test_bad_grid_exit_two(self, capsys):
        code = main(["optimize", "--grid", "axb"])
        assert code == 2
        assert "grid" in capsys.readouterr().err

    def test_numeric_exit_three(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {
            "generator": {"type": "case", "t1": 0.5, "t2": 0.0},
            "probe": {"type": "amplitudes", "re": [0.25] * 16,
                      "im": [0.0] * 16},
        })
        code = main(["qfi", "--config", cfg])
        assert code == 3
        assert "numeric error" in capsys.readouterr().err

    def test_unreachable_server_exit_three(self, capsys):
        code = main(["contour", "--alpha-points", "5",
                     "--server", "http://127.0.0.1:1"])
        assert code == 3
        assert "numeric error" in capsys.readouterr().err


class TestConfigMerging:
    def test_stdin_config(self, monkeypatch, capsys):
        doc = json.dumps({"t22": 0.5, "t33": 0.3, "alpha_points": 11})
        monkeypatch.setattr("sys.stdin", io.StringIO(doc))
        assert main(["appendix-b", "--config", "-"]) == 0
        assert capsys.readouterr().out.count("\n") == 7

    def test_flags_override_config(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"t22": 0.5, "t33": 0.3,
                                      "alpha_points": 11})
        assert main(["appendix-b", "--config", cfg,
                     "--alpha-points", "21"]) == 0
        capsys.readouterr()

        class Args:
            seed = 7
            alpha_points = 21
            grid = "2x3"

        merged = merge_flags({"seed": 1, "alpha_points": 11}, Args)
        assert merged == {"seed": 7, "alpha_points": 21, "grid": [2, 3]}

    def test_missing_required_fields_without_config(self, capsys):
        # No config means an empty request; required fields surface as 422.
        code = main(["appendix-b"])
        assert code == 2
        err = capsys.readouterr().err
        assert "t22" in err or "t33" in err
