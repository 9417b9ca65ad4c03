import csv
import io
import json
import subprocess
import sys

import pytest

from dctri import dc_triangulator as dc
from dctri.cli import EXIT_INPUT, EXIT_OK, EXIT_RETRY, EXIT_VERIFY, main
from dctri.dc_triangulator import GenericFunctional


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


def run(argv, capsys):
    rc = main(argv)
    return rc, capsys.readouterr().out


@pytest.fixture
def u24(tmp_path):
    return write(tmp_path, "uniform_2_4.json", {"uniform": {"r": 2, "n": 4}})


def test_triangulate_and_verify(tmp_path, u24, capsys):
    out = str(tmp_path / "t.json")
    rc, _ = run(["triangulate", u24, "--seed", "7", "-o", out], capsys)
    assert rc == EXIT_OK
    data = json.loads(open(out).read())
    assert len(data["cells"]) == 4 and data["report"]["volume"] == 4
    assert data["metadata"]["seed"] == 7
    cert = data["certificate"]
    assert cert["epsilon"] and len(cert["heights"]) == len(data["points"])
    rc, text = run(["verify", out], capsys)
    assert rc == EXIT_OK and json.loads(text)["passed"]


def test_single_segment(tmp_path, capsys):
    path = write(tmp_path, "u_1_2.json", {"n": 2, "bases": [[1], [2]]})
    rc, text = run(["triangulate", path], capsys)
    assert rc == EXIT_OK and len(json.loads(text)["cells"]) == 1


def test_independence_flag(tmp_path, capsys):
    path = write(tmp_path, "rank_u23.subm.json", {"matroid_rank": {"uniform": {"r": 2, "n": 3}}})
    rc, text = run(["triangulate", path, "--independence"], capsys)
    data = json.loads(text)
    assert rc == EXIT_OK
    assert len(data["cells"]) == 5 and len(data["points"]) == 7
    assert data["metadata"]["lifted"] is True


def test_submodular_input(tmp_path, capsys):
    seg = {"n": 2, "values": {"": 0, "1": 2, "2": 2, "12": 2}}
    rc, text = run(["triangulate", write(tmp_path, "seg.json", seg)], capsys)
    assert rc == EXIT_OK and len(json.loads(text)["cells"]) == 2


@pytest.mark.parametrize(
    "content",
    ["{not json", {"n": 4, "bases": [[1, 2], [3, 4]]}, {"what": 1}, {"n": 2, "values": {"": 0, "1": 1}}],
)
def test_invalid_input_exit_code(tmp_path, content, capsys):
    rc, _ = run(["triangulate", write(tmp_path, "bad.json", content)], capsys)
    assert rc == EXIT_INPUT


def test_missing_file(capsys):
    assert run(["verify", "/nonexistent/file.json"], capsys)[0] == EXIT_INPUT


def test_corrupted_cell_fails_verify(tmp_path, u24, capsys):
    out = str(tmp_path / "t.json")
    assert run(["triangulate", u24, "-o", out], capsys)[0] == EXIT_OK
    data = json.loads(open(out).read())
    c = data["cells"][0]
    data["cells"][0] = [c[0], c[0]] + c[2:]
    rc, text = run(["verify", write(tmp_path, "bad.json", data)], capsys)
    report = json.loads(text)
    assert rc == EXIT_VERIFY and not report["passed"] and report["failures"]


def test_uncertified(tmp_path, u24, capsys):
    out = str(tmp_path / "t.json")
    assert run(["triangulate", u24, "--no-certificate", "-o", out], capsys)[0] == EXIT_OK
    assert "certificate" not in json.loads(open(out).read())
    rc, text = run(["verify", out], capsys)
    assert rc == EXIT_VERIFY
    assert json.loads(text)["regular_certified"] == "unverifiable"
    rc, text = run(["verify", out, "--allow-uncertified"], capsys)
    assert rc == EXIT_OK and json.loads(text)["warning"]


def test_retry_cap_exit_code(u24, monkeypatch, capsys):
    monkeypatch.setattr(
        dc, "make_generic_functional", lambda m, t: GenericFunctional(tuple([1] * m))
    )
    assert run(["triangulate", u24], capsys)[0] == EXIT_RETRY


def test_outputs_byte_identical(tmp_path, u24, capsys):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    run(["triangulate", u24, "--seed", "3", "-o", a], capsys)
    run(["triangulate", u24, "--seed", "3", "-o", b], capsys)
    assert open(a, "rb").read() == open(b, "rb").read()


def test_corpus_csv(capsys):
    rc, text = run(["corpus", "--family", "uniform", "--max-n", "5"], capsys)
    assert rc == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 15
    for row in rows:
        assert row["cells"] == row["volume"]
        assert sum(map(int, row["h_vector"].split())) == int(float(row["cells"]))
        assert row["wall_time"] == ""
    by_name = {r["matroid"]: r for r in rows}
    assert float(by_name["U(2,4)"]["volume"]) == 4
    assert all(float(by_name[f"U(1,{n})"]["cells"]) == 1 for n in range(1, 6))


def test_corpus_thread_count_does_not_change_output(capsys):
    _, one = run(["corpus", "--family", "graphic", "--max-n", "5", "--threads", "1"], capsys)
    _, two = run(["corpus", "--family", "graphic", "--max-n", "5", "--threads", "2"], capsys)
    assert one == two


def test_corpus_timing_column(capsys):
    _, text = run(["corpus", "--family", "uniform", "--max-n", "2", "--timing"], capsys)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert all(float(r["wall_time"]) >= 0 for r in rows)


def test_hstar_dice_flagcheck(tmp_path, u24, capsys):
    rc, text = run(["hstar", u24], capsys)
    assert rc == EXIT_OK and json.loads(text)["h_star"] == [1, 2, 1, 0]
    pi3 = {"n": 3, "values": {"": 0, "1": 2, "2": 2, "3": 2, "12": 3, "13": 3, "23": 3, "123": 3}}
    rc, text = run(["dice", write(tmp_path, "pi3.json", pi3)], capsys)
    assert rc == EXIT_OK and len(json.loads(text)["cells"]) == 6
    rc, text = run(["flagcheck", u24], capsys)
    assert rc == EXIT_OK and json.loads(text)["flag_status"] in ("flag", "not_flag")


def test_module_entry_point(u24):
    proc = subprocess.run(
        [sys.executable, "-m", "dctri", "hstar", u24], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["volume"] == 4
