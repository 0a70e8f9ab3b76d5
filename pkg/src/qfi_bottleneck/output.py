"""Deterministic report serialization: CSV tables and JSON documents."""

import io
import json


def format_cell(x):
    """17 significant digits for floats; fixed spellings for the rest."""
    if x is None:
        return "nan"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return "%.17g" % x
    return str(x)


def report_to_csv(columns, rows):
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(format_cell(x) for x in row) + "\n")
    return buf.getvalue()


def report_to_json(columns, rows, meta):
    doc = {"columns": list(columns), "rows": [list(r) for r in rows],
           "meta": meta}
    return json.dumps(doc, sort_keys=True, separators=(",", ":"),
                      allow_nan=False) + "\n"
