import json
import subprocess
import sys

import pytest

from mills import millschain
from mills.cli import main
from mills.constant import reference_digits
from mills.millschain import MillsChain


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_chain_extend_prints_offsets(capsys, tmp_path):
    path = tmp_path / "c.json"
    code, doc = run_json(capsys, "chain", "extend", "--steps", "4", "--chain-file", str(path))
    assert code == 0
    assert doc["result"]["offsets"] == ["3", "30", "6", "80"]
    assert doc["schema"] == "mills-cli/1" and doc["config"]["prp_rounds"] == 5
    # resumes from the saved file
    code, doc = run_json(capsys, "chain", "extend", "--steps", "1", "--chain-file", str(path))
    assert doc["result"]["offsets"][-1] == "12"
    assert MillsChain.load(path).offsets == (3, 30, 6, 80, 12)


def test_chain_text_output(capsys):
    code, out, _ = run(capsys, "chain", "extend", "--steps", "3")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("# chain extend | prp_rounds=5")
    assert "a_3 = 6  (b_4: 10 digits)" in lines


def test_verify_reference_chain(capsys):
    code, out, _ = run(capsys, "chain", "verify", "--prp-rounds", "1")
    assert code == 0 and "verify: ok (0 violations)" in out


def test_verify_bad_chain_exits_1(capsys, tmp_path):
    path = tmp_path / "bad.json"
    MillsChain.from_terms([2, 11, 1363]).save(path)
    code, out, _ = run(capsys, "chain", "verify", "--chain-file", str(path))
    assert code == 1 and "term-not-prime" in out


def test_corrupted_chain_file_exits_2(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"format": "mills-chain", "version": 1, "offsets": [')
    code, _, err = run(capsys, "chain", "show", "--chain-file", str(path))
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "digits", "10", "--chain-file", str(tmp_path / "missing.json"))
    assert code == 2


def test_show_terms(capsys, tmp_path):
    path = tmp_path / "c.json"
    MillsChain.from_terms([2, 11, 1361]).save(path)
    code, out, _ = run(capsys, "chain", "show", "--terms", "--chain-file", str(path))
    assert code == 0 and "b_3 = 1361" in out


def test_digits_check_600(capsys, tmp_path):
    target = tmp_path / "digits.txt"
    code, out, _ = run(capsys, "digits", "600", "--check")
    assert code == 0 and reference_digits()[:601] in out
    assert "check: ok (601 characters agree" in out
    # the leading 1 counts, so 601 digits cover every tabulated place
    code, out, _ = run(capsys, "digits", "601", "--check", "--output", str(target))
    assert code == 0 and "check: ok (602 characters agree" in out
    header, body = target.read_text().splitlines()
    assert header.startswith("# depth=8") and body == reference_digits()


def test_digits_depth4(capsys, tmp_path):
    path = tmp_path / "c4.json"
    MillsChain(offsets=(3, 30, 6)).save(path)
    code, doc = run_json(capsys, "digits", "10", "--chain-file", str(path))
    assert code == 0 and doc["result"]["digits"].startswith("1.306377883")
    assert doc["result"]["depth"] == 4


def test_digits_short_chain_flagged(capsys, tmp_path):
    path = tmp_path / "c2.json"
    MillsChain(offsets=(3,)).save(path)
    code, out, _ = run(capsys, "digits", "600", "--check", "--chain-file", str(path))
    assert code == 1 and "SHORT" in out and "shortfall" in out
    code, doc = run_json(capsys, "digits", "600", "--chain-file", str(path))
    assert code == 0 and doc["result"]["short"]


def test_digits_grouped(capsys):
    code, out, _ = run(capsys, "digits", "100", "--grouped")
    assert "1.3063778838 6308069046" in out


def test_gaps_maximal_and_export(capsys, tmp_path):
    export = tmp_path / "gaps.txt"
    code, doc = run_json(capsys, "gaps", "maximal", "--limit", "1400", "--export", str(export))
    assert [r["p"] for r in doc["result"]["records"]] == [2, 3, 7, 23, 89, 113, 523, 887, 1129, 1327]
    code, out, _ = run(capsys, "gaps", "verify-table", str(export), "--scan-limit", "1400")
    assert code == 0 and "10 rows verified" in out
    export.write_text("# p gap ratio\n2 1\n3 2\n7 5\n")
    code, out, _ = run(capsys, "gaps", "verify-table", str(export))
    assert code == 1


def test_gaps_ratio_sup_bound(capsys):
    code, out, _ = run(capsys, "gaps", "ratio-sup", "--hi", "100000", "--bound", "0.92064")
    assert code == 0 and "below 0.92064: yes" in out
    code, _, _ = run(capsys, "gaps", "ratio-sup", "--hi", "100000", "--bound", "0.5")
    assert code == 1


def test_gaps_schoenfeld(capsys):
    code, doc = run_json(capsys, "gaps", "schoenfeld", "--x", "2657", "10000")
    assert code == 0 and all(r["passed"] for r in doc["result"]["rows"])
    code, _, _ = run(capsys, "gaps", "schoenfeld", "--x", "100")
    assert code == 1


def test_honaker_search(capsys):
    code, doc = run_json(capsys, "honaker", "search", "--hi", "100000")
    assert code == 0 and doc["result"]["count"] == 3
    assert doc["result"]["tuples"][2] == {"primes": [61, 67, 71], "k": 3, "l": 2, "witness": 61}
    code, out, _ = run(capsys, "honaker", "threshold", "--M", "0.92064")
    assert code == 0 and "p <= 1414" in out


def test_cubes_check(capsys):
    code, doc = run_json(capsys, "cubes", "check", "--max-x", "500")
    assert code == 0 and doc["result"]["checked"] == 500 and doc["result"]["failures"] == []


def test_lemma_xc(capsys):
    code, doc = run_json(capsys, "lemma", "xc", "--x", "2", "--c", "3")
    assert code == 0 and doc["result"]["holds"]
    code, _, _ = run(capsys, "lemma", "xc", "--x", "0.5", "--c", "3")
    assert code == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["digits"])
    assert info.value.code == 2
    code, _, _ = run(capsys, "gaps", "maximal", "--limit", "10", "--threads", "0")
    assert code == 2


def test_window_exhausted_exit_code(capsys, monkeypatch):
    def boom(*a, **kw):
        raise millschain.WindowExhausted(1)

    monkeypatch.setattr(millschain, "extend", boom)
    code, _, err = run(capsys, "chain", "extend", "--steps", "1")
    assert code == 1 and "NO PRIME" in err


def test_json_output_reproducible():
    cmd = [sys.executable, "-m", "mills", "chain", "extend", "--steps", "6", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd + ["--threads", "2"], capture_output=True, check=True).stdout
    c = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == c
    strip = lambda raw: {k: v for k, v in json.loads(raw).items() if k != "config"}  # noqa: E731
    assert strip(a) == strip(b)


def test_interrupted_extend_keeps_old_file(capsys, tmp_path, monkeypatch):
    path = tmp_path / "c.json"
    run(capsys, "chain", "extend", "--steps", "2", "--chain-file", str(path))
    before = path.read_text()

    def interrupted(src, dst):
        raise KeyboardInterrupt

    monkeypatch.setattr(millschain.os, "replace", interrupted)
    with pytest.raises(KeyboardInterrupt):
        main(["chain", "extend", "--steps", "1", "--chain-file", str(path)])
    assert path.read_text() == before
    assert list(tmp_path.iterdir()) == [path]
