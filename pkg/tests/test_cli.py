import io
import json
import subprocess
import sys

import pytest

from mers.catalog import build, catalog
from mers.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_list_table():
    code, text = run("list", "--rank", "2")
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0].startswith("| name | quotient | reduced | tiers")
    assert len(lines) == 2 + 41
    assert "| CvC(2)diamond | CvC | False | 2,1 |" in text


def test_list_csv_and_json():
    code, text = run("list", "--rank", "1", "--format", "csv")
    assert code == 0 and text.splitlines()[0] == "name,quotient,reduced,tiers,short,middle,long"
    code, text = run("list", "--rank", "1", "--format", "json")
    assert len(json.loads(text)) == 32


def test_verify_all():
    code, text = run("verify", "--all", "--rank", "2", "--oracle", "3")
    assert code == 0
    assert text.strip().endswith("41/41 entries verified")


def test_iso_verify_paper():
    code, text = run("iso", "--verify-paper", "--rank", "3")
    assert code == 0 and text.strip().endswith("14/14 verified")
    code, text = run("iso", "--verify-paper", "--rank", "1", "--format", "json")
    data = json.loads(text)
    assert len(data) == 11 and all(d["verified"] for d in data)
    assert {"lhs", "rhs", "matrix", "verified"} <= set(data[0])


def test_iso_pair():
    code, text = run("iso", "--rank", "2", "--lhs", "CvC(2)*1'", "--rhs", "CvC(2)*1", "--group", "unmarked")
    assert code == 0 and "e_i -> e_i + b" in text
    code, _ = run("iso", "--rank", "2", "--lhs", "BCC(1)", "--rhs", "CvC(1)")
    assert code == 1
    code, _ = run("iso", "--rank", "2")
    assert code == 2


@pytest.mark.parametrize("group,rank,count", [("unmarked", 2, 21), ("unmarked", 3, 20), ("marked", 2, 35), ("marked", 3, 34)])
def test_dedup(group, rank, count):
    code, text = run("dedup", "--group", group, "--rank", str(rank))
    assert code == 0 and text.strip().endswith(f"{count} classes")


def test_dedup_json():
    code, text = run("dedup", "--group", "unmarked", "--rank", "2", "--format", "json")
    data = json.loads(text)
    assert len(data) == 21 and all(set(d) == {"key", "members"} for d in data)


def test_quotient():
    code, text = run("quotient", "--type", "BC(2,2)sigma1", "--rank", "2")
    assert code == 0 and "| BBv | True |" in text
    code, text = run("quotient", "--type", "BCC(4)", "--rank", "2", "--format", "json")
    assert json.loads(text)[0]["type"] == "BCC"


@pytest.mark.parametrize(
    "argv,expect",
    [
        (("classify", "--rank", "2"), "35 classes; bijection with catalog: True"),
        (("classify", "--rank", "2", "--filter", "reduced-R-non-reduced-quotient"), "6 classes; bijection with catalog: True"),
        (("classify", "--rank", "1"), "27 classes; bijection with catalog: True"),
        (("classify", "--rank", "1", "--filter", "reduced-R-non-reduced-quotient"), "5 classes; bijection with catalog: True"),
        (("classify", "--rank", "3", "--guided"), "34 classes; bijection with catalog: True"),
    ],
)
def test_classify(argv, expect):
    code, text = run(*argv)
    assert code == 0 and text.strip().splitlines()[-1] == expect


def test_classify_json_is_descriptor_array(tmp_path):
    path = tmp_path / "found.json"
    code, text = run("classify", "--rank", "2", "--filter", "reduced-R-non-reduced-quotient", "--format", "json", "-o", str(path))
    assert code == 0
    data = json.loads(text)
    assert json.loads(path.read_text()) == data
    names = {d["name"] for d in data}
    assert names == {R.name for R in catalog(2, "reduced")}


def test_classify_guard_exits_2():
    code, _ = run("classify", "--rank", "2", "--modulus", "8")
    assert code == 2


def test_build_window():
    code, text = run("build", "--type", "BCC(1)", "--rank", "1", "--window", "1")
    d = json.loads(text)
    assert code == 0 and d["name"] == "BCC(1)"
    # short roots: 2 x 9 translations; long roots: 2 x 9 as well
    assert len(d["window"]["roots"]) == 36


@pytest.mark.parametrize("name", [R.name for R in catalog(2)])
def test_build_verify_round_trip(tmp_path, name):
    path = tmp_path / "d.json"
    assert run("build", "--type", name, "--rank", "2", "-o", str(path))[0] == 0
    code_file, text_file = run("verify", "--file", str(path), "--oracle", "2", "--format", "json")
    code_type, text_type = run("verify", "--type", name, "--rank", "2", "--oracle", "2", "--format", "json")
    assert code_file == code_type == 0
    assert json.loads(text_file) == json.loads(text_type)


def test_verify_failure_exits_1(tmp_path):
    bad = build("BCC(1)", 2).to_descriptor()
    bad["classes"]["long"] = {"modulus": [4, 1], "residues": [[1, 0]]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, text = run("verify", "--file", str(path))
    assert code == 1 and "0/1 entries verified" in text


CORRUPTIONS = [
    "",
    "{",
    "null",
    '{"rank": 2}',
    '{"rank": 2, "classes": {"short": {"modulus": [3, 1], "residues": [[0, 0]]}, "middle": null, "long": {"modulus": [1, 1], "residues": [[0, 0]]}}}',
    '{"rank": 2, "classes": {"short": {"modulus": [2, 2], "residues": [[7, 0]]}, "middle": null, "long": {"modulus": [1, 1], "residues": [[0, 0]]}}}',
    '{"rank": 2, "classes": {"short": {"modulus": [2, 2]}, "middle": null, "long": {"modulus": [1, 1], "residues": [[0, 0]]}}}',
]


@pytest.mark.parametrize("text", CORRUPTIONS)
def test_corrupted_files_exit_2(tmp_path, text):
    path = tmp_path / "c.json"
    path.write_text(text)
    assert run("verify", "--file", str(path))[0] == 2
    assert run("quotient", "--file", str(path))[0] == 2


def test_truncated_golden_file_exits_2(tmp_path):
    from mers.catalog import golden_path

    text = golden_path(2).read_text()
    path = tmp_path / "t.json"
    path.write_text(text[: len(text) // 2])
    assert run("verify", "--file", str(path))[0] == 2
    assert run("verify", "--file", str(tmp_path / "missing.json"))[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ("build", "--type", "BCC(3)", "--rank", "2"),
        ("build", "--type", "BBv(1)", "--rank", "1"),
        ("verify", "--type", "BBv(2)*", "--rank", "3"),
        ("quotient", "--type", "nope", "--rank", "2"),
        ("verify", "--type", "BCC(1)"),
        ("list", "--rank", "0"),
    ],
)
def test_usage_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mers", "dedup", "--group", "unmarked", "--rank", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip().endswith("21 classes")
