import json
import subprocess
import sys
from pathlib import Path

import pytest

from pupsec.cli import main
from pupsec.errors import ScanError
from pupsec.harness import (
    GroundTruthEntry,
    RunConfig,
    evaluate,
    load_ground_truth,
    metrics_to_dict,
    scan,
)
from pupsec.rules import WeaknessCategory

from conftest import CORPUS, CORPUS_TRUTH, FIXTURES, WEAKNESS_SUITE


def run_scan(inputs, **kwargs):
    return scan(RunConfig(inputs=tuple(str(i) for i in inputs), **kwargs))


# -- scan ------------------------------------------------------------------------


def test_taint_and_pattern_counts_on_hash_fixture_pair():
    pair = [WEAKNESS_SUITE / "sha1_password_file.pp", WEAKNESS_SUITE / "sha1_unused.pp"]
    taint = run_scan(pair, mode="taint")
    pattern = run_scan(pair, mode="pattern")
    assert len(taint.findings) == 1
    assert len(pattern.findings) == 2


def test_empty_directory_scan(tmp_path):
    report = run_scan([tmp_path])
    assert report.findings == ()
    assert report.stats.total_resources == 0


def test_parse_error_skip_policy(tmp_path):
    good = tmp_path / "good.pp"
    good.write_text("$x = 'ok'\nfile { 'f': content => $x }\n")
    bad = tmp_path / "bad.pp"
    bad.write_text("$x = = broken")
    report = run_scan([tmp_path], on_parse_error="skip")
    assert len(report.skipped) == 1
    assert report.skipped[0][0].endswith("bad.pp")
    assert report.stats.total_resources == 1


def test_parse_error_abort_policy(tmp_path):
    (tmp_path / "bad.pp").write_text("$x = = broken")
    with pytest.raises(ScanError):
        run_scan([tmp_path], on_parse_error="abort")


def test_unsupported_construct_is_skippable(tmp_path):
    (tmp_path / "heredoc.pp").write_text("$x = @(EOT)\ntext\nEOT\n")
    report = run_scan([tmp_path], on_parse_error="skip")
    assert len(report.skipped) == 1


def test_missing_input_raises():
    with pytest.raises(FileNotFoundError):
        run_scan(["does/not/exist"])


def test_mode_subset_on_fixture_tree():
    taint = run_scan([FIXTURES], mode="taint")
    pattern = run_scan([FIXTURES], mode="pattern")
    taint_keys = {
        (f.manifest_path, f.category, f.weakness_location.line) for f in taint.findings
    }
    pattern_keys = {
        (f.manifest_path, f.category, f.weakness_location.line) for f in pattern.findings
    }
    assert taint_keys <= pattern_keys


def test_parallelism_does_not_change_output():
    runs = []
    for jobs in (1, 8):
        report = run_scan([FIXTURES], jobs=jobs)
        from pupsec.report import render_report

        runs.append(render_report(list(report.findings), report.stats, "json"))
    assert runs[0] == runs[1]


def test_pattern_mode_findings_have_no_sink():
    report = run_scan([CORPUS], mode="pattern")
    assert report.findings
    assert all(f.sink is None and f.path == () for f in report.findings)


def test_text_report_names_resource_attribute_and_category():
    from pupsec.report import render_report

    report = run_scan([WEAKNESS_SUITE / "sha1_password_file.pp"])
    text = render_report(list(report.findings), report.stats, "text").decode()
    finding_line = text.splitlines()[0]
    assert "file_line" in finding_line
    assert ".line" in finding_line
    assert "weak_crypto_algorithm" in finding_line


# -- evaluation -------------------------------------------------------------------


def test_load_ground_truth_resolves_paths_and_validates():
    truth = load_ground_truth(str(CORPUS_TRUTH))
    assert len(truth) == 12
    assert all(Path(t.manifest_path).is_absolute() for t in truth)
    assert {t.category for t in truth} == {
        WeaknessCategory.EMPTY_PASSWORD,
        WeaknessCategory.HARD_CODED_SECRET,
        WeaknessCategory.INVALID_IP_BINDING,
        WeaknessCategory.HTTP_WITHOUT_TLS,
        WeaknessCategory.WEAK_CRYPTO_ALGORITHM,
        WeaknessCategory.ADMIN_BY_DEFAULT,
    }


def test_load_ground_truth_rejects_duplicates(tmp_path):
    f = tmp_path / "truth.csv"
    f.write_text("manifest_path,category,line\nx.pp,empty_password,3\nx.pp,empty_password,3\n")
    with pytest.raises(ValueError):
        load_ground_truth(str(f))


def test_load_ground_truth_rejects_unknown_category(tmp_path):
    f = tmp_path / "truth.csv"
    f.write_text("manifest_path,category,line\nx.pp,bogus,3\n")
    with pytest.raises(ValueError):
        load_ground_truth(str(f))


def test_evaluate_arithmetic():
    # 9 true findings plus one extra, nothing missed
    report_findings = [("m.pp", "hard_coded_secret", i) for i in range(1, 11)]
    truth = [
        GroundTruthEntry(str(Path("m.pp").resolve()), WeaknessCategory.HARD_CODED_SECRET, i)
        for i in range(1, 10)
    ]

    class FakeReport:
        findings = tuple(
            type(
                "F",
                (),
                {
                    "manifest_path": m,
                    "category": WeaknessCategory(c),
                    "weakness_location": type("L", (), {"line": line})(),
                },
            )()
            for m, c, line in report_findings
        )

    metrics = evaluate(FakeReport(), truth)
    assert metrics.overall.tp == 9
    assert metrics.overall.fp == 1
    assert metrics.overall.fn == 0
    assert metrics.overall.precision == pytest.approx(0.90)
    assert metrics.overall.recall == pytest.approx(1.0)
    assert metrics.overall.f_measure == pytest.approx(0.947, abs=0.001)


def test_evaluate_identity_is_perfect():
    report = run_scan([CORPUS], mode="taint")
    truth = [
        GroundTruthEntry(
            str(Path(f.manifest_path).resolve()), f.category, f.weakness_location.line
        )
        for f in report.findings
    ]
    metrics = evaluate(report, truth)
    assert metrics.overall.precision == 1.0
    assert metrics.overall.recall == 1.0
    assert metrics.overall.f_measure == 1.0


def test_metrics_na_when_no_predictions():
    report = run_scan([WEAKNESS_SUITE / "sha1_unused.pp"], mode="taint")
    truth = load_ground_truth(str(CORPUS_TRUTH))
    metrics = evaluate(report, truth)
    assert metrics.overall.precision is None
    assert metrics.overall.recall == 0.0
    data = metrics_to_dict(metrics)
    assert data["overall"]["precision"] is None


# -- command line ------------------------------------------------------------------


def test_cli_scan_json(tmp_path, capsys):
    code = main(["scan", str(WEAKNESS_SUITE / "sha1_password_file.pp")])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["mode"] == "taint"
    assert len(doc["findings"]) == 1
    assert doc["findings"][0]["category"] == "weak_crypto_algorithm"
    assert doc["findings"][0]["sink"]["resource_type"] == "file_line"


def test_cli_fail_on_findings(tmp_path, capsys):
    code = main(["scan", str(WEAKNESS_SUITE), "--fail-on-findings"])
    assert code == 1
    code = main(["scan", str(tmp_path), "--fail-on-findings"])
    assert code == 0
    capsys.readouterr()


def test_cli_out_file_and_formats(tmp_path, capsys):
    for fmt in ("json", "text", "sarif"):
        out = tmp_path / f"report.{fmt}"
        code = main(["scan", str(CORPUS), "--format", fmt, "--out", str(out)])
        assert code == 0
        assert out.stat().st_size > 0
    capsys.readouterr()


def test_cli_ground_truth_evaluation(capsys):
    code = main([
        "scan", str(CORPUS),
        "--ground-truth", str(CORPUS_TRUTH),
        "--mode", "pattern",
    ])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["evaluation"]["overall"]["recall"] == 1.0
    assert doc["evaluation"]["overall"]["fp"] == 6


def test_cli_jobs_default_comes_from_environment(monkeypatch, capsys):
    seen = {}
    import pupsec.cli as cli_mod

    real_scan = cli_mod.scan

    def spy(config):
        seen["jobs"] = config.jobs
        return real_scan(config)

    monkeypatch.setattr(cli_mod, "scan", spy)
    monkeypatch.setenv("PUPSEC_JOBS", "3")
    assert main(["scan", str(CORPUS)]) == 0
    assert seen["jobs"] == 3
    # an explicit flag wins over the environment
    assert main(["scan", str(CORPUS), "--jobs", "2"]) == 0
    assert seen["jobs"] == 2
    capsys.readouterr()


def test_evaluate_reports_per_category_rows():
    report = run_scan([CORPUS], mode="pattern")
    truth = load_ground_truth(str(CORPUS_TRUTH))
    metrics = evaluate(report, truth)
    rows = metrics.per_category
    assert rows["empty_password"].tp == 2
    assert rows["empty_password"].fp == 0
    assert rows["invalid_ip_binding"].tp == 1
    assert rows["invalid_ip_binding"].fp == 2
    assert rows["admin_by_default"].recall == 1.0
    total_tp = sum(r.tp for r in rows.values())
    assert total_tp == metrics.overall.tp == 12


def test_cli_bad_input_exits_2(capsys):
    code = main(["scan", "no/such/path"])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_cli_abort_on_parse_error_exits_2(tmp_path, capsys):
    (tmp_path / "bad.pp").write_text("$x = = nope")
    code = main(["scan", str(tmp_path), "--on-parse-error", "abort"])
    assert code == 2
    capsys.readouterr()


def test_cli_entrypoint_via_module(tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "pupsec", "scan", str(WEAKNESS_SUITE / "sha1_unused.pp")],
        capture_output=True,
        cwd=str(Path(__file__).parent.parent),
        env={"PYTHONPATH": "src", "PATH": "/usr/bin:/bin:/usr/local/bin"},
    )
    assert result.returncode == 0
    doc = json.loads(result.stdout)
    assert doc["findings"] == []
