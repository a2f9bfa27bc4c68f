import csv
import json

import numpy as np
import pytest

from ocens.harness import cli
from ocens.harness.config import ACTUAL_BEST, ENSEMBLES, RANDOM, TUPSO, ConfigError, load_config
from ocens.harness.reports import read_raw, report_from_files
from ocens.harness.runner import run_experiment, two_class_metrics
from ocens.harness.synth import TWO_GAUSSIAN, UNIFORM_RING, gen_synthetic, sample_synthetic

MEMBERS = """
[member:PGA]
algorithm = PGA
p_alpha = 0.05

[member:DENS]
algorithm = DENSITY_AGG
psi = harmonic
s = 0.02
"""


def small_config(tmp_path, seed=3, extra=""):
    gen_synthetic(TWO_GAUSSIAN, 40, 40, 4, 5.0, 0, tmp_path / "g.csv")
    text = f"""
[experiment]
seed = {seed}
k_inner = 3
output_dir = out

[dataset:g]
path = g.csv
class_column = class
{MEMBERS}{extra}"""
    path = tmp_path / "exp.ini"
    path.write_text(text)
    return path


def test_synth_shapes_and_labels(tmp_path):
    X, labels = sample_synthetic(UNIFORM_RING, 20, 30, 3, 4.0, 1)
    assert X.shape == (50, 3) and labels.count("normal") == 20
    np.testing.assert_allclose(np.linalg.norm(X[20:], axis=1), 4.0)
    p = gen_synthetic(TWO_GAUSSIAN, 20, 20, 2, 1.0, 1, tmp_path / "s.csv")
    with open(p) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x0", "x1", "class"] and len(rows) == 41
    with pytest.raises(ValueError):
        sample_synthetic("spiral", 20, 20, 2, 1.0, 0)


def test_load_config(tmp_path):
    cfg = load_config(small_config(tmp_path))
    assert [m.name for m in cfg.members] == ["PGA", "DENS"]
    assert cfg.members[0].params == {"p_alpha": 0.05}
    assert cfg.datasets[0].path == tmp_path / "g.csv"
    assert cfg.output_dir == tmp_path / "out"
    assert cfg.methods == ["PGA", "DENS", *ENSEMBLES]


@pytest.mark.parametrize("body, match", [
    ("[experiment]\nmetric = AUC\n[dataset:a]\npath = a.csv\n", "metric"),
    ("[experiment]\nseed = 1\n", "dataset"),
    ("[dataset:a]\n", "path"),
    ("[dataset:a]\npath = a.csv\n[member:X]\nalgorithm = KMEANS\n", "KMEANS"),
    ("[dataset:a]\npath = a.csv\n[weird]\n", "unknown config section"),
    ("[dataset:a]\npath = a.csv\n[experiment]\nensembles = TUPSO, bagging\n", "bagging"),
])
def test_config_errors(tmp_path, body, match):
    p = tmp_path / "bad.ini"
    p.write_text(body)
    with pytest.raises(ConfigError, match=match):
        load_config(p)


def test_two_class_metrics():
    f, ocf_v, acc, oca_v, tpr = two_class_metrics([1, 1, 0, 1], [1, 1, 1, 0], 0.5)
    assert tpr == pytest.approx(2 / 3) and acc == 0.5
    assert f == pytest.approx(2 * (2 / 3) * (2 / 3) / (4 / 3))
    assert ocf_v == pytest.approx((4 / 9) / 0.75)
    assert oca_v == pytest.approx(1 - (0.75 - 0.5 + 2 * (1 / 3) * 0.5))


def test_run_small_experiment(tmp_path):
    cfg = load_config(small_config(tmp_path))
    report = run_experiment(cfg)
    assert not report.failures and not report.partial
    assert len(report.rows) == report.expected_cells == len(cfg.methods) * 10
    by = {}
    for r in report.rows:
        by.setdefault(r.method, []).append(r.auc)
    assert all(0 <= a <= 1 for v in by.values() for a in v)
    picked = report.metadata["baselines"]["g"]
    assert by[RANDOM] == by[picked[RANDOM]]
    assert by[ACTUAL_BEST] == by[picked[ACTUAL_BEST]]
    assert len(by[TUPSO]) == 10


def test_cli_run_report_and_exit_codes(tmp_path, capsys):
    path = small_config(tmp_path)
    assert cli.main(["run", str(path)]) == cli.EXIT_OK
    out = tmp_path / "out"
    for name in ("raw_results.csv", "member_metrics.csv", "run_meta.json", "tables.md",
                 "stats.md"):
        assert (out / name).exists(), name
    meta = json.loads((out / "run_meta.json").read_text())
    assert meta["failures"] == [] and "pipeline" in meta
    tables = (out / "tables.md").read_text()
    assert "Average Rank" in tables and "TUPSO" in tables

    rows = read_raw(out / "raw_results.csv")
    assert len(rows) == len(report_from_files(out / "raw_results.csv").rows)
    assert cli.main(["report", str(out / "raw_results.csv"), str(tmp_path / "again")]) == 0
    assert (tmp_path / "again" / "tables.md").read_text() == tables

    bad = tmp_path / "bad.ini"
    bad.write_text("[experiment]\nseed = -1\n[dataset:a]\npath = a.csv\n")
    assert cli.main(["run", str(bad)]) == cli.EXIT_CONFIG
    assert cli.main(["report", str(tmp_path / "missing.csv"), str(tmp_path)]) == cli.EXIT_DATA


def test_cli_partial_and_missing_dataset(tmp_path):
    path = small_config(tmp_path, extra="\n[dataset:gone]\npath = nowhere.csv\n")
    assert cli.main(["run", str(path)]) == cli.EXIT_PARTIAL
    meta = json.loads((tmp_path / "out" / "run_meta.json").read_text())
    assert meta["failures"][0][0] == "gone"
    assert "n/a" in (tmp_path / "out" / "tables.md").read_text()


def test_cli_synth_and_list(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert cli.main(["synth", "uniform-ring", "--n-pos", "20", "--n-neg", "20",
                     "--dim", "2", "--out", str(out)]) == 0
    assert out.exists()
    assert cli.main(["synth", "two-gaussian", "--n-pos", "2", "--out", str(out)]) == cli.EXIT_CONFIG
    capsys.readouterr()
    assert cli.main(["list-methods"]) == 0
    listed = capsys.readouterr().out
    assert all(m in listed for m in ENSEMBLES)
