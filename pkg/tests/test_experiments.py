import numpy as np
import pytest

from qfi_bottleneck import experiments
from qfi_bottleneck.generators import (case_full_qfi_max, make_case,
                                       make_tensor)
from qfi_bottleneck.probes import haar_probe, named_probe


def regular_rows(columns, rows):
    flag = columns.index("flag")
    return [r for r in rows if r[flag] == ""]


class TestRunQfi:
    def test_constant_curve_with_closed_form(self):
        cols, rows, meta = experiments.run_qfi(
            make_case(0.5, 0.0), named_probe("case_i", theta=0.3, phi=0.0),
            alpha_points=41)
        assert cols == ["alpha", "j_b", "j_bf", "gap", "closed_form", "flag"]
        assert len(rows) == 41
        assert meta["violations"] == 0
        reg = regular_rows(cols, rows)
        assert reg
        for r in reg:
            assert r[4] == 4.0
            assert abs(r[1] - 4.0) < 1e-9
            assert r[3] == pytest.approx(r[2] - r[1])

    def test_closed_form_gated_off_outside_regime(self):
        # case i's constant curve needs t2 = 0 and phi in {0, pi}.
        p = named_probe("case_i", theta=0.3, phi=0.0)
        cols, _, _ = experiments.run_qfi(make_case(0.5, 0.3), p, alpha_points=11)
        assert "closed_form" not in cols
        p = named_probe("case_i", theta=0.3, phi=0.7)
        cols, _, _ = experiments.run_qfi(make_case(0.5, 0.0), p, alpha_points=11)
        assert "closed_form" not in cols

    def test_case_ii_regime(self):
        p = named_probe("case_ii", theta=np.pi / 4, branch=+1)
        cols, rows, meta = experiments.run_qfi(make_case(0.0, 0.8), p,
                                               alpha_points=41)
        assert "closed_form" in cols
        target = 4.0 * (1.0 + 0.64)
        for r in regular_rows(cols, rows):
            assert r[4] == pytest.approx(target)
            assert abs(r[1] - target) < 1e-9
        # Off the balanced angle the formula does not apply.
        p = named_probe("case_ii", theta=0.3, branch=+1)
        cols, _, _ = experiments.run_qfi(make_case(0.0, 0.8), p, alpha_points=11)
        assert "closed_form" not in cols

    def test_case_iii_singular_cells_flagged(self):
        p = named_probe("case_iii", theta=0.0, pair=+1, branch=+1)
        cols, rows, _ = experiments.run_qfi(make_case(0.5, 0.5), p,
                                            alpha_points=21)
        flag = cols.index("flag")
        cf = cols.index("closed_form")
        singular = [r for r in rows if r[flag] == "singular"]
        assert singular
        assert all(r[cf] is None for r in singular)

    def test_rejects_two_copy_probe(self):
        with pytest.raises(ValueError, match="2-qubit"):
            experiments.run_qfi(make_case(0.5, 0.5), haar_probe(4, 0))

    def test_meta_fields(self):
        _, _, meta = experiments.run_qfi(make_case(1.0, 0.5), haar_probe(2, 4),
                                         alpha_points=21)
        assert meta["j_bf"] == pytest.approx(case_full_qfi_max(1.0, 0.5))
        assert isinstance(meta["flagged_alphas"], list)
        assert meta["modal_rank"] in (1, 2)


class TestRunContour:
    def test_shape_and_meta(self):
        cols, rows, meta = experiments.run_contour(alpha_points=31)
        assert cols == ["t_plus", "alpha", "gap", "flag"]
        assert len(rows) == 13 * 31
        assert len(meta["peak_counts"]) == 13
        assert meta["violations"] == 0
        assert meta["theta"] == pytest.approx(np.pi / 4)

    def test_zero_coupling_slice_has_zero_gap(self):
        cols, rows, _ = experiments.run_contour(alpha_points=31)
        flag = cols.index("flag")
        for r in rows:
            if r[0] == 0.0 and r[flag] == "":
                assert abs(r[2]) < 1e-10


class TestRunOptimize:
    def test_row_schema_and_meta(self):
        g = make_tensor((0, 0, 1), 0.3, (0, 0, 1), 0.8)
        cols, rows, meta = experiments.run_optimize(g, 0.4, grid=(3, 4))
        assert cols == ["alpha", "value", "ceiling", "reached_fraction"]
        (alpha, value, ceiling, frac), = rows
        assert alpha == 0.4
        assert frac == pytest.approx(value / ceiling)
        assert value <= ceiling + 1e-9
        assert len(meta["best_probe"]["re"]) == 4
        assert len(meta["best_probe"]["im"]) == 4
        assert meta["violations"] == 0


class TestRunTwoCopy:
    def test_rejects_single_copy_probe(self):
        with pytest.raises(ValueError, match="4-qubit"):
            experiments.run_two_copy(make_case(0.5, 0.5), haar_probe(2, 0))

    def test_upsilon_tensor_closed_form(self):
        g = make_tensor((0, 0, 1), 0.0, (0, 0, 1), 0.5)
        cols, rows, meta = experiments.run_two_copy(
            g, named_probe("upsilon_tensor"), alpha_points=21)
        assert "closed_form" in cols
        cf = cols.index("closed_form")
        target = 16.0 * 1.5 ** 2
        for r in regular_rows(cols, rows):
            assert r[cf] == pytest.approx(target)
            assert abs(r[1] - target) < 1e-8
        assert meta["violations"] == 0

    def test_upsilon_tensor_gate_on_sign(self):
        g = make_tensor((0, 0, 1), 0.0, (0, 0, 1), -0.5)
        cols, _, _ = experiments.run_two_copy(
            g, named_probe("upsilon_tensor", t2_sign=+1.0), alpha_points=11)
        assert "closed_form" not in cols

    def test_upsilon_case_iii_matches_closed_form(self):
        g = make_case(0.5, 0.5)
        cols, rows, _ = experiments.run_two_copy(
            g, named_probe("upsilon_case_iii"), alpha_points=41)
        cf = cols.index("closed_form")
        for r in regular_rows(cols, rows):
            assert abs(r[1] - r[cf]) < 1e-8


class TestRunContinuity:
    def test_small_run_passes(self):
        cols, rows, meta = experiments.run_continuity(state_trials=20,
                                                      generator_trials=10,
                                                      seed=0)
        assert cols == ["kind", "trial", "lhs", "rhs", "margin", "eps", "pass"]
        assert meta["violations"] == 0
        assert meta["min_margin"] >= -1e-9
        assert meta["path_monotone"] is True
        kinds = {r[0] for r in rows}
        assert kinds == {"state", "generator", "path"}
        assert all(r[6] for r in rows)

    def test_deterministic(self):
        out1 = experiments.run_continuity(state_trials=5, generator_trials=5,
                                          seed=3, path_check=False)
        out2 = experiments.run_continuity(state_trials=5, generator_trials=5,
                                          seed=3, path_check=False)
        assert out1 == out2

    def test_empty_run_has_null_margin(self):
        _, rows, meta = experiments.run_continuity(state_trials=0,
                                                   generator_trials=0,
                                                   path_check=False)
        assert rows == []
        assert meta["min_margin"] is None


class TestGeneratorHash:
    def test_stable_and_distinct(self):
        c = np.arange(16.0).reshape(4, 4)
        h1 = experiments.generator_hash(c)
        assert h1 == experiments.generator_hash(c.copy())
        assert len(h1) == 16
        assert h1 != experiments.generator_hash(c + 1e-6)
        # Below the rounding resolution the id is insensitive to noise.
        assert h1 == experiments.generator_hash(c + 1e-14)


class TestRunConjecture:
    def test_deterministic_and_consistent(self):
        cols, rows, meta = experiments.run_conjecture(trials=5, seed=0)
        cols2, rows2, meta2 = experiments.run_conjecture(trials=5, seed=0)
        assert (cols, rows, meta) == (cols2, rows2, meta2)
        assert cols == ["trial", "generator_hash", "reached_fraction", "pass"]
        assert len(rows) == 5
        fracs = [r[2] for r in rows]
        assert all(0.0 < f <= 1.0 + 1e-9 for f in fracs)
        assert meta["min_fraction"] == min(fracs)
        assert meta["passed"] + len(meta["failed_trials"]) == 5
        assert meta["violations"] == len(meta["failed_trials"])
        assert [r[0] for r in rows if not r[3]] == meta["failed_trials"]


class TestRunAppendixB:
    def test_all_rows_pass(self):
        for t22, t33 in ((0.5, 0.3), (2.0, 2.0), (1.0, -1.0)):
            cols, rows, meta = experiments.run_appendix_b(t22, t33,
                                                          alpha_points=41)
            assert meta["violations"] == 0
            assert len(rows) == 6
            for r in rows:
                assert r[6] is True
                assert r[4] <= 1e-6

    def test_targets_match_formulas(self):
        _, rows, _ = experiments.run_appendix_b(0.5, 0.3, alpha_points=11)
        expected = [4 * 1.3 ** 2, 4 * 0.7 ** 2, 4 * 0.8 ** 2, 4 * 0.2 ** 2,
                    4 * 1.5 ** 2, 4 * 0.5 ** 2]
        assert [r[2] for r in rows] == pytest.approx(expected)
