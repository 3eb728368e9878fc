import json
import time

import pytest

from linfbound.bounds import Method, baseline_bound
from linfbound.cli import main
from linfbound.config import parse_kv
from linfbound.distributions import InvalidArgument


@pytest.fixture
def counts_file(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("symbol,count\na,3\nb,1\n", encoding="utf-8")
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


class TestBounds:
    def test_baseline_pass_through(self, capsys, counts_file):
        code, out, _ = run(capsys, "bounds", counts_file, "--delta", "0.05", "--method", "baseline")
        assert code == 0
        assert json.loads(out)[0]["radius"] == baseline_bound(4, 0.05).radius

    def test_precondition_exit_code(self, capsys, counts_file):
        code, _, err = run(capsys, "bounds", counts_file, "--method", "th3")
        assert code == 2
        assert "n >= 81" in err

    def test_all_methods(self, capsys, counts_file):
        code, out, _ = run(capsys, "bounds", counts_file, "--method", "all")
        assert code == 0
        assert [r["method"] for r in json.loads(out)] == [m.value for m in Method]

    def test_csv_format(self, capsys, counts_file):
        code, out, _ = run(capsys, "--format", "csv", "bounds", counts_file, "--method", "baseline,th2")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("method,radius") and len(lines) == 3

    def test_env_format(self, capsys, counts_file, monkeypatch):
        monkeypatch.setenv("LINF_FORMAT", "csv")
        code, out, _ = run(capsys, "bounds", counts_file, "--method", "baseline")
        assert code == 0 and out.startswith("method,")

    def test_bad_delta(self, capsys, counts_file):
        code, _, err = run(capsys, "bounds", counts_file, "--delta", "1.5")
        assert code == 2 and "delta" in err


def test_binom_ci_closed_form(capsys):
    code, out, _ = run(capsys, "binom-ci", 0, 10, "--delta", "0.05")
    assert code == 0
    d = json.loads(out)
    assert d["clopper-pearson"]["upper"] == pytest.approx(1 - 0.025**0.1, abs=1e-10)
    assert "skipped" in d["thulin"]


def test_verify_theory(capsys, tmp_path):
    code, out, _ = run(capsys, "--out", tmp_path, "verify-theory")
    assert code == 0
    names = {c["name"] for c in json.loads(out)["checks"]}
    assert {"f_argmax_10_200_is_33", "f_le_81_over_2", "kl_limit_within_0.1_at_1e7", "argmax_variance"} <= names
    assert (tmp_path / "manifest.json").exists()


def test_smoke_preset_fast_and_deterministic(capsys, tmp_path):
    t0 = time.perf_counter()
    code, _, _ = run(capsys, "--out", tmp_path / "a", "--threads", 1, "coverage", "--preset", "smoke")
    assert code == 0
    assert time.perf_counter() - t0 < 5
    run(capsys, "--out", tmp_path / "b", "--threads", 2, "coverage", "--preset", "smoke")
    svg_a = sorted((tmp_path / "a").glob("*.svg"))
    svg_b = sorted((tmp_path / "b").glob("*.svg"))
    assert len(svg_a) == 1 and svg_a[0].name == svg_b[0].name
    assert svg_a[0].read_bytes() == svg_b[0].read_bytes()
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    h = manifest["configs"][0]["hash"]
    assert manifest["artifacts"] and all(h in a for a in manifest["artifacts"])


def test_coverage_config_file(capsys, tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("# small run\nlabel = tiny\ndistribution = uniform(5)\nn = 50, 100\n"
                   "delta = 1/n^2\nmethods = baseline, th2, th4\nreps = 30\n", encoding="utf-8")
    code, _, _ = run(capsys, "--out", tmp_path / "o", "--format", "csv", "coverage", cfg)
    assert code == 0
    csvs = list((tmp_path / "o").glob("tiny-*.csv"))
    rows = csvs[0].read_text().splitlines()[1:]
    deltas = {r.split(",")[1]: r.split(",")[2] for r in rows}
    assert deltas["50"] == repr(1 / 2500) and deltas["100"] == repr(1e-4)
    assert any("skipped" in r for r in rows)


def test_topk_census(capsys, tmp_path):
    code, _, _ = run(capsys, "--out", tmp_path, "topk", "--preset", "fig3-census", "--reps", 20)
    assert code == 0
    js = json.loads(next(tmp_path.glob("fig3-census-*.json")).read_text())
    assert js["references"][0]["selective_lb"] > 0


def test_ingest(capsys, tmp_path):
    corpus = tmp_path / "c.txt"
    corpus.write_text("To be, to be. Don't", encoding="utf-8")
    code, out, _ = run(capsys, "--out", tmp_path / "o", "ingest", corpus, "--mode", "corpus")
    assert code == 0
    assert json.loads(out)["entries"] == 3


def test_config_grammar_errors():
    with pytest.raises(InvalidArgument, match="unknown key"):
        parse_kv("colour = blue")
    with pytest.raises(InvalidArgument, match=":2:"):
        parse_kv("n = 10\njust text")
