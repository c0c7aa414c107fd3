import json
import shutil

import pytest

from galab.cli import Report, build_parser, corpus_dir, corpus_run, main, parse_spec, run
from galab.errors import ParseError
from galab.poly import SemanticError

QUADRIC_SPEC = """ring: B
vars: x, y, z
relations:
derivation:
  d(x) = 0
  d(y) = -2*z
  d(z) = x^2
kernel_gens: x, x^2*y + z^2
assert: factorial, faithfully_flat
"""


def args(*argv):
    return build_parser().parse_args(list(argv) + ["--spec", "-"])


def test_parse_example_spec():
    spec = parse_spec(QUADRIC_SPEC)
    assert spec.vars == ("x", "y", "z") and spec.relations == []
    assert spec.label == "B"
    assert spec.a_names == ("x", "a2")
    assert spec.assertions["factorial"] and spec.assertions["faithfully_flat"]
    assert not spec.assertions["free_action"]


def test_missing_image():
    with pytest.raises(SemanticError, match="missing image for x"):
        parse_spec("vars: x, y\nderivation:\n")


def test_negative_exponent_position():
    with pytest.raises(ParseError) as e:
        parse_spec("vars: x, y, z\nderivation:\n  d(x) = 0\n  d(y) = z^-1\n  d(z) = 0\n")
    assert e.value.line == 4 and e.value.column == 12
    assert not isinstance(e.value, SemanticError)


def test_unknown_variable_in_image_is_semantic():
    with pytest.raises(SemanticError) as e:
        parse_spec("vars: x\nderivation:\n  d(x) = q\n")
    assert (e.value.line, e.value.column) == (3, 10)


def test_unknown_block():
    with pytest.raises(ParseError) as e:
        parse_spec("vars: x\nderivations:\n")
    assert "derivation:" in e.value.expected


def test_comments_options_primes():
    spec = parse_spec("""# header comment
vars: x, y   # two variables
derivation:
  d(x) = 0
  d(y) = x
kernel_gens: x
assert: primes(x, x + 1), irreducible
options:
  kernel_bound = 4
  assume_irreducible = true
""")
    assert len(spec.primes) == 2 and spec.assertions["irreducible"]
    assert spec.options == {"kernel_bound": 4, "assume_irreducible": True}


def test_check_on_example(capsys):
    rep = run(QUADRIC_SPEC, "check", args("check"))
    s = rep.sections
    assert s["lnd"]["verdict"] == "YES"
    assert s["irreducible"]["verdict"] == "YES"
    assert s["fixed_locus"]["generators"] == ["2*z", "x^2"] and not s["fixed_locus"]["free"]


def test_report_round_trip():
    rep = run(QUADRIC_SPEC, "kernel", args("kernel", "--bound", "3"))
    back = Report.from_json(rep.to_json())
    assert back.body() == rep.body()
    assert "timing" not in json.loads(rep.body_json())


def test_body_is_deterministic():
    a = run(QUADRIC_SPEC, "plinth", args("plinth", "--bound", "3")).body_json()
    b = run(QUADRIC_SPEC, "plinth", args("plinth", "--bound", "3")).body_json()
    assert a == b


def test_text_rendering():
    text = run(QUADRIC_SPEC, "kernel", args("kernel", "--bound", "3")).to_text()
    assert "kernel.generators: x, x^2*y + z^2" in text


@pytest.mark.parametrize("spec,argv,code", [
    ("branched_quadric.spec", ["check"], 0),
    ("branched_quadric.spec", ["bundle"], 2),  # --alpha missing
    ("not_lnd.spec", ["check"], 0),
    ("not_lnd.spec", ["kernel", "--bound", "2"], 3),
    ("inconsistent.spec", ["check"], 2),
    ("koras_russell_line.spec", ["tower", "--prime", "x"], 3),
])
def test_exit_codes(spec, argv, code, capsys):
    assert main(argv + ["--spec", str(corpus_dir() / spec)]) == code


def test_exit_code_for_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.spec"
    bad.write_text("vars: x\nderivation:\n  d(x) = x^-2\n")
    assert main(["check", "--spec", str(bad)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_exit_code_for_resource_cap(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("GALAB_CAPS", "degree=3")
    spec = tmp_path / "big.spec"
    spec.write_text("vars: x, y\nderivation:\n  d(x) = 0\n  d(y) = x^5\n")
    code = main(["check", "--spec", str(spec)])
    assert code == 4


def test_json_output_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["bundle", "--alpha", "x", "--format", "json", "--out", str(out),
                 "--spec", str(corpus_dir() / "koras_russell_line.spec")]) == 0
    data = json.loads(out.read_text())
    assert data["body"]["sections"]["criterion"]["verdict"] == "TRIVIAL"
    assert "seconds" in data["timing"]


def test_corpus_matches_golden():
    results = corpus_run()
    assert results and all(status == "match" for _, status in results)


def test_corpus_is_idempotent_and_order_independent(tmp_path):
    root = tmp_path / "corpus"
    shutil.copytree(corpus_dir(), root)
    manifest = json.loads((root / "manifest.json").read_text())
    manifest["entries"].reverse()
    (root / "manifest.json").write_text(json.dumps(manifest))
    before = {p.name: p.read_text() for p in (root / "golden").iterdir()}
    first = corpus_run(root=root)
    second = corpus_run(root=root)
    assert sorted(first) == sorted(second)
    assert all(status == "match" for _, status in first)
    assert before == {p.name: p.read_text() for p in (root / "golden").iterdir()}
    # a single entry alone gives the same verdicts as inside the full run
    alone = corpus_run(only=["modification_cubic"], root=root)
    assert set(alone) <= set(first)
