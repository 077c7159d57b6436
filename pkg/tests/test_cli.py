import json
import subprocess
import sys

import pytest

import order4_formulas
from cumulantkit.cli import main

MOMENTS = str(order4_formulas.FIXTURES / "order4_moments.json")
CUMULANTS = order4_formulas.FIXTURES / "order4_cumulants.json"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.mark.parametrize("kind,n,count", [("all", 4, 15), ("nc", 4, 14), ("interval", 4, 8), ("monotone", 3, 12)])
def test_partition_counts(capsys, kind, n, count):
    code, out, _ = run(capsys, "partitions", "--n", str(n), "--kind", kind, "--count-only")
    assert code == 0 and out.strip() == str(count)


def test_partition_listing(capsys):
    code, out, _ = run(capsys, "partitions", "--n", "2", "--kind", "monotone")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(rows) == 3


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["partitions", "--n", "0"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["verify", "--suite", "nope"])
    assert info.value.code == 2
    capsys.readouterr()


def test_enumeration_cap(capsys, monkeypatch):
    monkeypatch.setenv("CUMULANTKIT_MAX_N", "4")
    code, _, err = run(capsys, "partitions", "--n", "5", "--count-only")
    assert code == 2 and "error" in err


def test_order4_formulas_regression(capsys, tmp_path):
    out_path = tmp_path / "k.json"
    code, _, _ = run(capsys, "cumulants", "--flavor", "monotone", "--moments", MOMENTS, "--out", str(out_path))
    assert code == 0
    assert json.loads(out_path.read_text()) == json.loads(CUMULANTS.read_text())


@pytest.mark.parametrize("flavor", ["tensor", "free", "boolean", "monotone"])
def test_methods_agree(capsys, flavor):
    code, out, _ = run(capsys, "cumulants", "--flavor", flavor, "--moments", MOMENTS, "--method", "both")
    assert code == 0 and out.strip() == "pass"


def test_variance_table(capsys, tmp_path):
    path = write(tmp_path, "m.json", {"num_vars": 1, "max_len": 2, "moments": {"1": "1", "1,1": "1"}})
    code, out, _ = run(capsys, "cumulants", "--flavor", "free", "--moments", path)
    assert code == 0
    assert out.splitlines()[-1].split() == ["1,1", "0"]


def test_depth_error(capsys, tmp_path):
    path = write(tmp_path, "m.json", {"num_vars": 1, "max_len": 2, "moments": {"1": "1", "1,1": "2"}})
    code, _, err = run(capsys, "cumulants", "--flavor", "tensor", "--moments", path, "--max-order", "3")
    assert code == 3 and "insufficient moment data" in err


def test_bad_file(capsys, tmp_path):
    path = write(tmp_path, "m.json", {"num_vars": 1, "max_len": 2, "moments": {"1": "1"}})
    code, _, err = run(capsys, "cumulants", "--flavor", "tensor", "--moments", path)
    assert code == 3 and "1,1" in err
    code, _, _ = run(capsys, "cumulants", "--flavor", "tensor", "--moments", str(tmp_path / "absent.json"))
    assert code == 3


def test_moments_round_trip(capsys, tmp_path):
    out_path = tmp_path / "m.json"
    code, _, _ = run(capsys, "moments", "--cumulants", str(CUMULANTS), "--out", str(out_path))
    assert code == 0
    assert json.loads(out_path.read_text()) == json.loads(open(MOMENTS).read())


def test_mixed_moment(capsys, tmp_path):
    x = write(tmp_path, "x.json", {"num_vars": 1, "max_len": 2, "moments": {"1": "3", "1,1": "5"}})
    y = write(tmp_path, "y.json", {"num_vars": 1, "max_len": 1, "moments": {"1": "2"}})
    base = ["mixed-moment", "--family", f"1={x}", "--family", f"2={y}"]
    expected = {"tensor": "10", "boolean": "18", "monotone": "10", "free": "10"}
    for flavor, value in expected.items():
        code, out, _ = run(capsys, *base, "--flavor", flavor, "--word", "1:1,2:1,1:1")
        assert code == 0 and out.strip() == value
    word_file = write(tmp_path, "w.json", {"word": [{"label": 1, "var": 1}, {"label": 2, "var": 1}]})
    code, out, _ = run(capsys, *base, "--flavor", "boolean", "--word-file", word_file)
    assert out.strip() == "6"
    code, _, _ = run(capsys, *base, "--flavor", "tensor", "--word", "2:1,2:1")
    assert code == 3
    code, _, _ = run(capsys, *base, "--flavor", "tensor", "--word", "1:1,3:1")
    assert code == 2
    code, _, _ = run(capsys, *base, "--flavor", "tensor", "--word", "1-1")
    assert code == 2


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "mk3", "--flavor", "monotone", "--trials", "1", "--json")
    report = json.loads(out)
    assert code == 0 and report["status"] == "pass"
    assert any("1/2" in c["detail"] for c in report["checks"])
    code, out, _ = run(capsys, "verify", "--suite", "muraki", "--degree", "3", "--trials", "2")
    assert code == 0 and "pass" in out
    code, out, _ = run(capsys, "verify", "--suite", "counts", "--n", "5")
    assert code == 0


def test_verify_is_deterministic():
    cmd = [sys.executable, "-m", "cumulantkit", "verify", "--suite", "consistency", "--degree", "3", "--json"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b and json.loads(a)["status"] == "pass"


def test_threads_match_serial(capsys):
    _, serial, _ = run(capsys, "verify", "--suite", "ode", "--degree", "3", "--trials", "2", "--json")
    _, par, _ = run(capsys, "verify", "--suite", "ode", "--degree", "3", "--trials", "2", "--threads", "2", "--json")
    assert serial == par
