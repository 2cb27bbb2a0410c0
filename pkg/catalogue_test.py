# catalogue_test.py
import os
import re

from cli import SuiteOptions, run_suite
from reduction import IDENTITY_CATALOGUE, anchor_for

_DOC = os.path.join(os.path.dirname(os.path.abspath(__file__)), "docs", "identity_catalogue.md")
_ROW = re.compile(r"^\| `([^`]+)` \| `(.*)` \|$")


def _doc_rows() -> dict[str, str]:
    with open(_DOC, encoding="utf-8") as f:
        matches = (_ROW.match(line.rstrip("\n")) for line in f)
        return {m.group(1): m.group(2) for m in matches if m}


def test_doc_table_matches_the_catalogue():
    assert _doc_rows() == IDENTITY_CATALOGUE


def test_every_emitted_row_has_a_catalogue_anchor(s1):
    doc = run_suite(s1, SuiteOptions(samples=10))
    for record in doc.records:
        assert record.anchor == anchor_for(record.check_id)
        prefix = record.check_id.split(".")[0]
        assert record.check_id in IDENTITY_CATALOGUE or prefix == "points"
    emitted = {r.check_id for r in doc.records}
    assert {k for k in IDENTITY_CATALOGUE if k != "points.analysis"} <= emitted
