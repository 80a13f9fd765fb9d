"""The recorded reference values agree with the published tables.

Parses the LaTeX tables in paper.md (repository root) when it is present.
"""
import re
from pathlib import Path

import pytest

from corpsim import reference

PAPER = Path(__file__).resolve().parents[1] / "paper.md"
pytestmark = pytest.mark.skipif(not PAPER.exists(), reason="paper.md not available")


def table_rows(label: str) -> dict[str, list[str]]:
    text = PAPER.read_text(encoding="utf-8")
    block = text[:text.index(f"\\label{{{label}}}")]
    block = block[block.rindex("\\begin{table"):]
    rows = {}
    for line in block.splitlines():
        if "&" not in line or not line.rstrip().endswith("\\\\"):
            continue
        cells = [re.sub(r"\\textbf\{([^}]*)\}", r"\1", c).replace("\\%", "").replace(",", "").strip()
                 for c in line.rstrip()[:-2].split("&")]
        rows[cells[0]] = cells[1:]
    return rows


def numbers(rows, keys):
    return {k: tuple(float(x) for x in rows[k]) for k in keys}


def test_table1():
    rows = table_rows("tab:1")
    assert {k: tuple(int(x) for x in v) for k, v in rows.items() if k in reference.TABLE1} == reference.TABLE1
    assert tuple(int(x) for x in rows["Total"]) == reference.TABLE1_TOTAL


def test_table2():
    rows = table_rows("tab:2")
    rows.pop("Country")
    assert {k: tuple(int(x) for x in v) for k, v in rows.items()} == reference.TABLE2
    # the per-country listing sums to the Spanish totals
    assert tuple(map(sum, zip(*reference.TABLE2.values()))) == reference.TABLE1["spa"][1:]


@pytest.mark.parametrize("label,table", [("tab:3", reference.TABLE3), ("tab:4", reference.TABLE4),
                                         ("tab:12", reference.TABLE5)])
def test_numeric_tables(label, table):
    assert numbers(table_rows(label), table) == table


def test_table6():
    rows = table_rows("tab:13")
    got = {("all" if k == "All" else k): (float(v[0]), v[1]) for k, v in rows.items()
           if k == "All" or k in reference.LANGUAGES}
    assert got == reference.TABLE6


def test_text_values():
    text = PAPER.read_text(encoding="utf-8")
    for low_code, low, high_codes, high in reference.CROSS_REGISTER_RANGES.values():
        assert f"{low:.2f} (" in text and f"{low_code})" in text
        assert f"{high:.2f} (" in text and all(c in text for c in high_codes)
    m = reference.COUNTRY_MAP
    assert f"is {m['mean']}." in text
    assert f"({m['in_band']} out of {m['n_countries']})" in text
    assert f"{m['band'][0]:.2f} to {m['band'][1]:.2f}" in text
    assert f"{m['n_countries']} countries. Of these, {m['multi_language_countries']} are" in text


def test_compare_table():
    rows = [{"language": "eng", "word": 93.0, "char": 98.9}, {"language": "xxx", "word": 1.0}]
    out = reference.compare_table("table4", rows)
    assert [(r["column"], r["within"]) for r in out] == [("word", True), ("char", True)]
    out = reference.compare_table("table6", [{"language": "all", "rho": 0.40}])
    assert out[0]["within"] is False
