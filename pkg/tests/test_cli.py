import io
import json
import os
import subprocess
import sys

import pytest

from provlogic.cli import read_corpus, run

CORPUS = os.path.join(os.path.dirname(__file__), "data", "corpus.tsv")


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_decide_prints_verdict():
    assert call("decide", "--logic", "GL", "[]([]p -> p) -> []p") == (0, "PROVABLE\n")
    assert call("decide", "--logic", "GL", "[]p -> p") == (0, "REFUTED\n")


def test_decide_pl():
    assert call("decide", "--pl", "Sigma1(HA,N)", "[](p \\/ q) -> ([]p \\/ []q)") == (0, "PROVABLE\n")


def test_quiet_exit_codes():
    assert call("decide", "--quiet", "--logic", "GL", "[]([]p -> p) -> []p") == (10, "")
    assert call("decide", "--quiet", "--logic", "GL", "~[]false") == (11, "")


def test_evidence_includes_trace_and_countermodel():
    code, out = call("decide", "--evidence", "--logic", "GL", "~[]false")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "REFUTED"
    doc = json.loads(lines[-1])
    assert doc["formula"] == "~[]false" and doc["designated"] == 0


def test_parse_error_exit_and_caret(capsys):
    code, out = call("decide", "--logic", "GL", "p -> & q")
    assert code == 2 and out == ""
    err = capsys.readouterr().err.splitlines()
    assert err[0] == "p -> & q" and err[1].index("^") == 5


def test_unsupported_logic_exit(capsys):
    assert call("decide", "--logic", "S5", "p")[0] == 3
    assert call("decide", "--pl", "PL(HA,HA)", "p")[0] == 3
    assert "unsupported" in capsys.readouterr().err


def test_resource_exit():
    code, _ = call("decide", "--logic", "iK4", "--budget", "1",
                   "[]([]([]p -> p) -> [](q -> p)) -> ([](q \\/ p) -> []p) \\/ ~~[]q")
    assert code == 4


def test_translate():
    assert call("translate", "--kind", "box-down", "[]p") == (0, "[](p /\\ []p)\n")
    assert call("translate", "--kind", "neg-up", "p") == (0, "~~p\n")


def test_classify_lists_every_logic():
    code, out = call("classify", "p -> []p")
    rows = dict(line.split("\t") for line in out.splitlines())
    assert code == 0 and len(rows) == 25
    assert rows["GL"] == "REFUTED" and rows["iGLCT"] == "PROVABLE"


def test_countermodel_export_is_stable():
    code, one = call("countermodel", "--logic", "GL", "~[]false")
    _, two = call("countermodel", "--logic", "GL", "~[]false")
    assert code == 0 and one == two
    doc = json.loads(one)
    assert len(doc["nodes"]) >= 1 and doc["frame_class"] == ["Classical", "SemiPerfect"]
    code, dot = call("countermodel", "--logic", "GL", "--format", "dot", "[](p \\/ q) -> []p \\/ []q")
    assert code == 0 and dot.startswith("digraph") and dot.endswith("}\n")
    assert "dashed" in dot
    assert call("countermodel", "--logic", "GL", "p -> p")[0] == 1


def test_trace():
    code, out = call("trace", "--pl", "Sigma1(HA,PA)", "p")
    rows = [line.split("\t") for line in out.splitlines()]
    assert code == 0 and [r[0] for r in rows] == ["Sigma1(HA,HA)", "Sigma1(HA,N)"]
    assert call("trace", "--pl", "Sigma1(HA,N)", "p") == (0, "")


def test_oracle_subcommand():
    code, out = call("oracle", "--logic", "GL", "--max-nodes", "3", "--depth", "2", "[]p -> p")
    assert code == 0
    assert "engine\tREFUTED" in out and "consistent\tyes" in out


def test_corpus_file():
    assert len(read_corpus(CORPUS)) == 14
    code, out = call("corpus", CORPUS)
    assert code == 0 and out.endswith("14/14 passed\n")


def test_corpus_reports_mismatch(tmp_path):
    f = tmp_path / "bad.tsv"
    f.write_text("# wrong on purpose\nGL\t[]p -> p\tPROVABLE\n", encoding="utf-8")
    code, out = call("corpus", str(f))
    assert code == 1 and out.startswith("FAIL")
    f.write_text("GL\tp\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_corpus(str(f))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "provlogic", "decide", "--logic", "GLS", "[]p -> p"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "PROVABLE\n"
