"""End-to-end command flows in temporary directories."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from friendsim.cli import main
from friendsim.forms import load_bundle

FRAGMENT = Path(__file__).parent / "data" / "collected_fragment.tsv"


def cli(*args):
    """Run the CLI in-process, returning the SystemExit code."""
    with pytest.raises(SystemExit) as exc:
        main([str(a) for a in args])
    return exc.value.code


@pytest.fixture(scope="module")
def graph_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("graphs") / "g.tsv"
    code = cli(
        "gen-graph", "--members", 300, "--mean-degree", 14, "--interaction-rate", 6,
        "--seed", 11, "--out", path,
    )
    assert code == 0
    return path


def test_gen_graph_writes_versioned_file(graph_file):
    head = graph_file.read_text().splitlines()[0]
    assert head == "# friendsim-graph v1"


def test_simulate_writes_one_form_per_visit(graph_file, tmp_path):
    out = tmp_path / "sim"
    code = cli(
        "simulate", "--graph", graph_file, "--profile", "linkedin-like",
        "--seed", 5, "--visits", 3, "--out", out,
    )
    assert code == 0
    files = sorted(out.glob("*.tsv"))
    assert len(files) == 3
    text = files[0].read_text()
    assert text.startswith("# friendsim simulate v1")
    assert "# profile.name = linkedin-like" in text
    assert "# seed = 5" in text


def test_simulate_determinism_across_processes(graph_file, tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        proc = subprocess.run(
            [sys.executable, "-m", "friendsim.cli", "simulate",
             "--graph", str(graph_file), "--profile", "facebook-like",
             "--seed", "9", "--visits", "2", "--out", str(out)],
            capture_output=True,
        )
        assert proc.returncode == 0, proc.stderr.decode()
        outs.append(out)
    files_a, files_b = (sorted(o.glob("*.tsv")) for o in outs)
    assert [f.name for f in files_a] == [f.name for f in files_b]
    for fa, fb in zip(files_a, files_b):
        assert fa.read_bytes() == fb.read_bytes()


def test_simulate_seed_changes_composition(graph_file, tmp_path):
    texts = []
    for seed in (1, 2):
        out = tmp_path / f"s{seed}"
        assert cli("simulate", "--graph", graph_file, "--seed", seed,
                   "--visits", 1, "--out", out) == 0
        texts.append(sorted(out.glob("*.tsv"))[0].read_text())
    names_a = {l.split("\t")[1] for l in texts[0].splitlines() if l and l[0].isdigit()}
    names_b = {l.split("\t")[1] for l in texts[1].splitlines() if l and l[0].isdigit()}
    assert names_a != names_b


def test_simulate_with_overrides_and_receiver(graph_file, tmp_path):
    out = tmp_path / "o"
    code = cli(
        "simulate", "--graph", graph_file, "--seed", 3, "--visits", 1,
        "--receiver", 7, "--set", "churn_fraction=0.1", "--set", "pool_size=60",
        "--out", out,
    )
    assert code == 0
    text = sorted(out.glob("*.tsv"))[0].read_text()
    assert "# override churn_fraction = 0.1" in text
    assert "# receiver = 7" in text


def test_parallel_seeds_fan_out(graph_file, tmp_path):
    out = tmp_path / "fan"
    code = cli(
        "simulate", "--graph", graph_file, "--seed", 40, "--visits", 1,
        "--parallel-seeds", 2, "--out", out,
    )
    assert code == 0
    assert (out / "seed-40").is_dir() and (out / "seed-41").is_dir()
    assert len(list((out / "seed-40").glob("*.tsv"))) == 1


def test_ingest_fragment(tmp_path):
    indir = tmp_path / "forms"
    indir.mkdir()
    (indir / "fragment.tsv").write_text(FRAGMENT.read_text())
    bundle = tmp_path / "bundle.json"
    assert cli("ingest", "--input", indir, "--out", bundle) == 0
    forms = load_bundle(bundle)
    assert len(forms) == 1
    assert len(forms[0].rows) == 3
    assert forms[0].rows[0].name == "John Doe"


def test_analyze_simulated_facebook_sample(graph_file, tmp_path):
    simdir = tmp_path / "sim"
    assert cli("simulate", "--graph", graph_file, "--profile", "facebook-like",
               "--seed", 2, "--visits", 5, "--out", simdir) == 0
    out = tmp_path / "report"
    assert cli("analyze", "--input", simdir, "--graph", graph_file,
               "--receiver", 0, "--out", out) == 0
    assert (out / "histogram_shared_connections.csv").exists()
    assert (out / "histogram_degree.csv").exists()
    report = json.loads((out / "trend_report.json").read_text())
    assert set(report["variables"]) == {"degree", "shared_connections", "known"}
    # a facebook-like sample peaks at a low shared-connections value
    csv_lines = (out / "histogram_shared_connections.csv").read_text().splitlines()
    csv_rows = [l for l in csv_lines if not l.startswith("#")][1:]
    counts = {int(r.split(",")[0]): int(r.split(",")[1]) for r in csv_rows}
    mode = max(counts, key=counts.get)
    assert mode <= 3
    location = json.loads((out / "location_report.json").read_text())
    assert location["receiver"] == 0
    assert (out / "location_report.txt").exists()


def test_analyze_accepts_bundle(tmp_path):
    indir = tmp_path / "forms"
    indir.mkdir()
    (indir / "f.tsv").write_text(FRAGMENT.read_text())
    bundle = tmp_path / "b.json"
    assert cli("ingest", "--input", indir, "--out", bundle) == 0
    out = tmp_path / "rep"
    assert cli("analyze", "--input", bundle, "--out", out) == 0
    # 3 rows is below the trend classifier's minimum, reported as such
    report = json.loads((out / "trend_report.json").read_text())
    assert report["variables"]["degree"] is None


def test_validate_self_comparison(graph_file, tmp_path):
    simdir = tmp_path / "sim"
    assert cli("simulate", "--graph", graph_file, "--profile", "linkedin-like",
               "--seed", 4, "--visits", 4, "--out", simdir) == 0
    out = tmp_path / "val"
    assert cli("validate", "--simulated", simdir, "--observed", simdir, "--out", out) == 0
    doc = json.loads((out / "similarity_report.json").read_text())
    for variable in doc["variables"]:
        assert variable["tv_distance"] == 0.0
        assert variable["trends_agree"] in (True, None)
    assert doc["churn"]["simulated"] == doc["churn"]["observed"]


def test_errors_name_stage_and_exit_nonzero(tmp_path, capsys):
    assert cli("simulate", "--graph", tmp_path / "missing.tsv",
               "--out", tmp_path / "x") == 1
    err = capsys.readouterr().err
    assert "error [simulate]" in err
    assert cli("ingest", "--input", tmp_path / "nodir", "--out", tmp_path / "b.json") == 1
    err = capsys.readouterr().err
    assert "error [ingest]" in err
    assert cli("simulate", "--graph", tmp_path / "missing.tsv", "--profile", "nope",
               "--out", tmp_path / "y") == 1


def test_unknown_profile_is_diagnosed(graph_file, tmp_path, capsys):
    assert cli("simulate", "--graph", graph_file, "--profile", "orkut-like",
               "--out", tmp_path / "z") == 1
    assert "orkut-like" in capsys.readouterr().err
