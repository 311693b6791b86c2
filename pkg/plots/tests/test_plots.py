from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from plots import (main, performance_series, read_csv,
                   render_performance_plot, render_scaling_plot,
                   scaling_series)

HERE = Path(__file__).resolve().parent
RATIO_CSV = HERE / "fixtures" / "ratio_fixture.csv"
SCALING_CSV = HERE / "fixtures" / "scaling_fixture.csv"


def pixels(path) -> np.ndarray:
    with Image.open(path) as img:
        return np.asarray(img.convert("RGBA"))


def test_performance_fixture_matches_reference(tmp_path):
    out = tmp_path / "perf.png"
    render_performance_plot(RATIO_CSV, out)
    assert np.array_equal(pixels(out), pixels(HERE / "reference" / "performance.png"))


def test_scaling_fixture_matches_reference(tmp_path):
    out = tmp_path / "scaling.png"
    render_scaling_plot(SCALING_CSV, out)
    assert np.array_equal(pixels(out), pixels(HERE / "reference" / "scaling.png"))


def test_rendering_is_deterministic(tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    render_performance_plot(RATIO_CSV, a)
    render_performance_plot(RATIO_CSV, b)
    assert a.read_bytes() == b.read_bytes()


def test_performance_series_values():
    series = performance_series(read_csv(RATIO_CSV))
    assert series["alg-a"] == [0.0, 0.0]
    assert series["alg-b"] == pytest.approx([1 / 6, 1 / 6])


def test_performance_curves_monotone_in_unit_interval(tmp_path):
    rows = read_csv(RATIO_CSV)
    rows.append({"algorithm": "alg-b", "instance": "inst-3", "k": "2",
                 "ratio": "1.0"})  # failed instance renders at the top
    csv_path = tmp_path / "ratios.csv"
    csv_path.write_text("algorithm,instance,k,ratio\n" + "".join(
        f"{r['algorithm']},{r['instance']},{r['k']},{r['ratio']}\n"
        for r in rows))
    series = performance_series(read_csv(csv_path))
    for vals in series.values():
        assert vals == sorted(vals)
        assert all(0.0 <= v <= 1.0 for v in vals)
    assert series["alg-b"][-1] == 1.0
    render_performance_plot(csv_path, tmp_path / "fig.png")


def test_scaling_series_sorted_by_pes():
    series = scaling_series(read_csv(SCALING_CSV), "total_ms")
    assert list(series) == ["synthetic-a", "synthetic-b"]
    assert series["synthetic-a"] == [(1, 1600.0), (2, 800.0), (4, 400.0),
                                     (8, 200.0), (16, 100.0)]


def test_scaling_alternative_time_column(tmp_path):
    render_scaling_plot(SCALING_CSV, tmp_path / "c.png",
                        time_column="construction_ms")


def test_missing_columns_error(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("foo,bar\n1,2\n")
    with pytest.raises(ValueError, match="missing columns"):
        render_performance_plot(bad, tmp_path / "x.png")
    with pytest.raises(ValueError, match="missing columns"):
        render_scaling_plot(bad, tmp_path / "x.png")


def test_empty_csv_nonzero_exit(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("algorithm,instance,k,ratio\n")
    rc = main(["--kind", "performance", "--in", str(empty),
               "--out", str(tmp_path / "x.png")])
    assert rc != 0
    assert "error" in capsys.readouterr().err


def test_cli_smoke(tmp_path):
    assert main(["--kind", "performance", "--in", str(RATIO_CSV),
                 "--out", str(tmp_path / "p.png"), "--title", "quality"]) == 0
    assert main(["--kind", "scaling", "--in", str(SCALING_CSV),
                 "--out", str(tmp_path / "s.png")]) == 0
    assert (tmp_path / "p.png").exists() and (tmp_path / "s.png").exists()
