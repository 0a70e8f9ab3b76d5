import json
import math

import pytest

from qfi_bottleneck.output import format_cell, report_to_csv, report_to_json


class TestFormatCell:
    def test_float_has_17_significant_digits(self):
        assert format_cell(math.pi) == "3.1415926535897931"
        assert format_cell(4.0) == "4"
        assert format_cell(0.1) == "0.10000000000000001"

    def test_roundtrip_exact(self):
        for x in (math.pi, 1e-300, 12.96, 2 / 3):
            assert float(format_cell(x)) == x

    def test_special_spellings(self):
        assert format_cell(None) == "nan"
        assert format_cell(True) == "true"
        assert format_cell(False) == "false"
        assert format_cell("rank") == "rank"
        assert format_cell(7) == "7"


class TestCsv:
    def test_layout(self):
        text = report_to_csv(["a", "b"], [[1.0, "x"], [None, True]])
        assert text == "a,b\n1,x\nnan,true\n"


class TestJson:
    def test_canonical_document(self):
        text = report_to_json(["a"], [[0.5]], {"z": 1, "violations": 0})
        assert text.endswith("\n")
        assert " " not in text.strip()
        doc = json.loads(text)
        assert doc == {"columns": ["a"], "rows": [[0.5]],
                       "meta": {"z": 1, "violations": 0}}
        # Keys are sorted for byte-stable output.
        assert text.index('"columns"') < text.index('"meta"') < text.index('"rows"')

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            report_to_json(["a"], [[float("nan")]], {})
