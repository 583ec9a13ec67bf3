from hitballs.report import FIELDS, BenchRow, read_csv, render_csv


def test_header_always_emitted():
    assert render_csv([]) == ",".join(FIELDS) + "\n"


def test_floats_fixed_precision_and_roundtrip():
    row = BenchRow("tz-build", "g", 4, 3, 2, 1, 2, 9, 1 / 3, 100.0, 0.09, "ok", "", 7)
    text = render_csv([row])
    assert "0.333333" in text and "100.000000" in text
    back = read_csv(text)[0]
    assert back["command"] == "tz-build" and back["elapsed_ms"] == "" and back["seed"] == "7"
