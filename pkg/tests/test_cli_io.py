import json
import subprocess
import sys

import pytest

from steinerlab.cli import main
from steinerlab.jumping import LocusReport, enumerate_locus
from steinerlab.pipeline import EXIT_CODES, PipelineError, run_pipeline
from steinerlab.reports import RunManifest, canonical_json, export_report, file_digest, read_json
from steinerlab.schwarzenberger import binary_mult_datum
from steinerlab.tangent import classify_maximal


def test_canonical_json_sorted_and_stable():
    text = canonical_json({"b": 1, "a": [1, {"d": 2, "c": "3/4"}]})
    assert text.index('"a"') < text.index('"b"') and text.index('"c"') < text.index('"d"')
    assert canonical_json(json.loads(text)) == text


def test_locus_json_export_is_lossless(tmp_path):
    rep = enumerate_locus(binary_mult_datum(2, 2), 3, witnesses=2)
    path = tmp_path / "r.json"
    text = export_report(rep, "json", path)
    assert LocusReport.from_json(read_json(path)) == rep
    assert export_report(LocusReport.from_json(json.loads(text)), "json") == text


def test_locus_csv_has_one_row_per_stratum():
    rep = enumerate_locus(binary_mult_datum(2, 2), 3)
    lines = export_report(rep, "csv").strip().splitlines()
    assert lines[0] == "label,q,fiber_dim,sigma_count,jumping"
    assert len(lines) == 1 + len(rep.strata)


def test_verdict_markdown_table():
    d = binary_mult_datum(1, 2)
    v = classify_maximal(d, [enumerate_locus(d, q) for q in (2, 3)])
    md = export_report(v, "markdown")
    assert md.startswith("| key | value |") and "| case | CaseI |" in md


def test_unknown_format_rejected():
    with pytest.raises(ValueError):
        export_report([], "xml")


def test_manifest_roundtrip(tmp_path):
    f = tmp_path / "x.txt"
    f.write_text("abc")
    m = RunManifest("pipeline", seed=7)
    m.add_input(f)
    assert m.inputs[0][1] == file_digest(f) and file_digest(f).startswith("sha256:")
    assert RunManifest.from_json(m.to_json()).to_json() == m.to_json()


CLASSICAL = {"seed": 0, "primes": [2, 3, 5], "witnesses": 8, "data": [{"family": "binary", "a": 1, "n": 2}]}


def test_pipeline_summary_row(tmp_path):
    res = run_pipeline(CLASSICAL, tmp_path / "out", workers=1)
    row = res.rows[0]
    assert (row["t0"], row["lower_bound"], row["estimated_dim"], row["upper_bound"], row["verdict"]) == \
        (4, 1, 1, 1, "CaseI")
    summary = read_json(tmp_path / "out" / "summary.json")
    assert summary == res.rows
    manifest = read_json(tmp_path / "out" / "manifest.json")
    names = [n for n, _ in manifest["outputs"]]
    assert "summary.csv" in names and "00-binary-a-1-n-2/verdict.json" in names


def test_pipeline_segre_is_trivial(tmp_path):
    cfg = {"primes": [2, 3], "data": [{"family": "segre", "s": 2, "h0": 3, "pad": 2}]}
    row = run_pipeline(cfg, tmp_path).rows[0]
    assert (row["t"], row["t0"], row["verdict"]) == (8, 6, "Trivial")


def test_pipeline_is_deterministic_across_workers(tmp_path):
    outs = []
    for w in (1, 8):
        run_pipeline(CLASSICAL, tmp_path / str(w), workers=w)
        outs.append({p.relative_to(tmp_path / str(w)): p.read_bytes()
                     for p in sorted((tmp_path / str(w)).rglob("*")) if p.is_file()})
    assert outs[0] == outs[1]


def test_corrupted_datum_fails_in_validate_stage(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"field": "Q", "s": 2, "t": 4}')
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"primes": [2, 3], "data": [{"datum": "bad.json"}]}))
    with pytest.raises(PipelineError) as info:
        run_pipeline(cfg, tmp_path / "out")
    assert info.value.stage == "validate"
    assert main(["pipeline", str(cfg), "--out", str(tmp_path / "out2")]) == EXIT_CODES["validate"]


def test_failing_probe_reports_witness(tmp_path):
    d = binary_mult_datum(1, 2).to_json()
    d["phi"]["entries"] = [["0"] * 4 for _ in range(6)]
    (tmp_path / "zero.json").write_text(json.dumps(d))
    with pytest.raises(PipelineError) as info:
        run_pipeline({"primes": [2, 3], "data": [{"datum": str(tmp_path / "zero.json")}]}, tmp_path / "o")
    assert info.value.stage == "validate" and info.value.witness == [["1", "0", "0"]]


def test_stage_codes_are_distinct():
    assert len(set(EXIT_CODES.values())) == len(EXIT_CODES)
    assert main(["construct", "--family", "random", "--p", "3"]) == EXIT_CODES["construct"]


def test_cli_round_trip(tmp_path, capsys):
    d, r = tmp_path / "d.json", tmp_path / "r.json"
    assert main(["construct", "--family", "binary", "--a", "1", "--n", "2", "--field", "Q", "--out", str(d)]) == 0
    assert main(["validate", "--datum", str(d)]) == 0
    assert main(["locus", "--datum", str(d), "--primes", "2,3,5", "--witnesses", "8", "--out", str(r)]) == 0
    reports = [str(tmp_path / f"r_q{q}.json") for q in (2, 3, 5)]
    t = tmp_path / "t.json"
    assert main(["tangent", "--datum", str(d), "--pair", reports[1], "--out", str(t)]) == 0
    assert all(x["tangent_dim"] == "1" for x in read_json(t))
    v = tmp_path / "v.json"
    assert main(["classify", "--datum", str(d), "--locus", ",".join(reports), "--tangents", str(t),
                 "--out", str(v)]) == 0
    assert read_json(v)["case"] == "CaseI"


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "steinerlab", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "steinerlab" in out.stdout


def test_acceptance_filter_and_perturbed_golden(tmp_path, capsys):
    gold = tmp_path / "gold.json"
    assert main(["acceptance", "--filter", "classical", "--write-golden", str(gold)]) == 0
    table = capsys.readouterr().out
    assert "3/3 passed" in table
    data = read_json(gold)
    assert set(data) == {"1", "2", "8"}
    data["1"]["jtilde_counts"][0] = 4
    gold.write_text(canonical_json(data))
    assert main(["acceptance", "--filter", "1", "--golden", str(gold)]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "-    4," in out and "+    3," in out
