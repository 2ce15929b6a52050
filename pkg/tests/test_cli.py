"""End-to-end CLI behaviour, including suite determinism."""

import json

from mbgram.cli import main, run_suite


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCommands:
    def test_enumerate_text(self, capsys):
        code, out, _ = run_cli(capsys, "enumerate", "--n", "2", "--stratum", "one")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "(1 2)(3)(4)"
        assert lines[-1] == "# 4 diagrams"

    def test_enumerate_json(self, capsys):
        code, out, _ = run_cli(capsys, "enumerate", "--n", "1", "--stratum", "zero",
                               "--format", "json")
        assert code == 0
        rows = [json.loads(line) for line in out.strip().split("\n")]
        assert rows[0] == {"chords": [[1, 2]], "fixed": [], "n": 1}

    def test_pair_text(self, capsys):
        code, out, _ = run_cli(capsys, "pair", "--m1", "(2 5)(3 4)(1)(6)",
                               "--m2", "(6 1)(2)(3)(4)(5)")
        assert code == 0
        assert "<m1, m2> = x*y" in out

    def test_pair_json_trace(self, capsys):
        code, out, _ = run_cli(capsys, "pair", "--m1", "(1 2)", "--m2", "(2 1)",
                               "--format", "json")
        assert code == 0
        trace = json.loads(out)
        assert trace["value"] == "z"
        assert trace["components"][0]["psi"] in (2, -2)

    def test_pair_rejects_invalid(self, capsys):
        code, _, err = run_cli(capsys, "pair", "--m1", "(1 4)(2)(3)",
                               "--m2", "(1 2)(3)(4)")
        assert code == 2
        assert "not a valid diagram" in err

    def test_cheb_show(self, capsys):
        code, out, _ = run_cli(capsys, "cheb", "--kind", "T", "--n", "17")
        assert code == 0
        assert out.startswith("T_17 = d^17")

    def test_cheb_verify(self, capsys):
        code, out, _ = run_cli(capsys, "cheb", "verify", "--id", "Cor2_6",
                               "--kmax", "5", "--json")
        assert code == 0
        report = json.loads(out)
        assert report["status"] == "PASS"

    def test_gram_and_det(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "gram", "--n", "2", "--variant", "tilde",
                               "--cache-dir", str(tmp_path))
        assert code == 0
        assert "4x4" in out
        code, out, _ = run_cli(capsys, "det", "--n", "2", "--variant", "tilde",
                               "--cache-dir", str(tmp_path), "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["backend"] == "bareiss"
        assert payload["det"]["terms"] == [[1, 4, 0, 0, 0, 0], [-4, 2, 0, 0, 0, 0]]

    def test_verify_conjecture(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "verify", "--conjecture", "C3_5", "--n", "2",
                               "--cache-dir", str(tmp_path), "--format", "json")
        assert code == 0
        assert json.loads(out)["status"] == "PASS"

    def test_verify_theorem(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "verify", "--theorem", "3.6", "--n", "2",
                               "--cache-dir", str(tmp_path), "--format", "json")
        assert code == 0
        assert json.loads(out)["status"] == "PASS"

    def test_verify_identity(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--identity", "Lemma2_5",
                               "--max-index", "8", "--format", "json")
        assert code == 0
        assert json.loads(out)["status"] == "PASS"


class TestSuite:
    def test_quick_suite_passes(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "suite", "--profile", "quick",
                               "--cache-dir", str(tmp_path))
        assert code == 0
        assert "failed=0" in out
        assert (tmp_path / "reports.jsonl").exists()

    def test_reports_are_deterministic(self, tmp_path):
        code1, reports1 = run_suite("quick", cache_dir=tmp_path / "a", seed=123)
        code2, reports2 = run_suite("quick", cache_dir=tmp_path / "b", seed=123)
        assert code1 == code2 == 0
        lines1 = [r.canonical_json() for r in reports1]
        lines2 = [r.canonical_json() for r in reports2]
        assert lines1 == lines2

    def test_outcomes_independent_of_jobs(self, tmp_path):
        _, reports1 = run_suite("quick", jobs=1, cache_dir=tmp_path / "j1", seed=5)
        _, reports2 = run_suite("quick", jobs=2, cache_dir=tmp_path / "j2", seed=5)
        assert [r.canonical_json() for r in reports1] == \
               [r.canonical_json() for r in reports2]

    def test_warm_cache_matches_cold(self, tmp_path):
        _, cold = run_suite("quick", cache_dir=tmp_path, seed=3)
        _, warm = run_suite("quick", cache_dir=tmp_path, seed=3)
        assert [r.canonical_json() for r in cold] == \
               [r.canonical_json() for r in warm]
