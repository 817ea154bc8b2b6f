import json

import pytest

from spicalc.cli import main


@pytest.fixture
def spi(capsys):
    def call(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err
    return call


def write(tmp_path, name, text):
    f = tmp_path / name
    f.write_text(text)
    return f


def test_check_ok(spi, corpus_dir):
    code, _, err = spi("check", corpus_dir / "server_client.spi")
    assert code == 0 and "ok" in err


def test_syntax_error_has_position(spi, tmp_path):
    f = write(tmp_path, "bad.spi", "main = emit s ||;\n")
    code, _, err = spi("check", f)
    assert code == 1
    assert f"{f}:1:" in err


def test_type_error(spi, tmp_path):
    f = write(tmp_path, "ill.spi", "signal s : Sig(Nat);\nmain = emit s [0];\n")
    code, _, err = spi("check", f)
    assert code == 1 and "type error" in err


def test_missing_file(spi, tmp_path):
    assert spi("check", tmp_path / "nope.spi")[0] == 1


def test_bisim_exit_codes(spi, corpus_dir):
    code, out, _ = spi("bisim", corpus_dir / "delayed_choice.spi", corpus_dir / "delayed_match.spi")
    assert code == 2 and json.loads(out)["verdict"] == "distinguished"
    code, out, _ = spi("bisim", corpus_dir / "delayed_choice.spi", corpus_dir / "delayed_match.spi",
                       "--relaxed-N")
    assert code == 0 and json.loads(out)["variant"] == "standard+relaxed-N"
    code, _, _ = spi("bisim", corpus_dir / "tau_choice.spi", corpus_dir / "zero.spi")
    assert code == 0


def test_bisim_inconclusive(spi, corpus_dir):
    code, out, _ = spi("bisim", corpus_dir / "delayed_choice.spi", corpus_dir / "delayed_match.spi",
                       "--max-states", 2)
    assert code == 3 and json.loads(out)["verdict"] == "inconclusive"


def test_file_against_itself(spi, corpus_dir):
    f = corpus_dir / "server_client.spi"
    assert spi("bisim", f, f)[0] == 0


def test_barbed_unsupported(spi, corpus_dir):
    code, out, _ = spi("bisim", corpus_dir / "omega.spi", corpus_dir / "zero.spi",
                       "--variant", "barbed")
    assert code == 3 and json.loads(out)["verdict"] == "unsupported"


def test_analyze(spi, corpus_dir):
    code, out, _ = spi("analyze", corpus_dir / "choice_cycle.spi",
                       "--properties", "reactive,confluent")
    doc = json.loads(out)
    assert code == 0
    assert {k: v["status"] for k, v in doc["properties"].items()} == \
        {"reactive": "fails", "confluent": "fails"}


def test_analyze_unknown_property(spi, corpus_dir):
    assert spi("analyze", corpus_dir / "zero.spi", "--properties", "speed")[0] == 1


def test_run_trace(spi, corpus_dir):
    code, out, _ = spi("run", corpus_dir / "server_client.spi", "--instants", 3)
    assert code == 0
    assert json.loads(out)["instants"][1]["emitted"] == [["t", "2"]]


def test_run_divergence_fails(spi, corpus_dir):
    code, _, err = spi("run", corpus_dir / "omega.spi")
    assert code == 1 and "hint" in err


def test_lts_formats(spi, corpus_dir, tmp_path):
    code, out, _ = spi("lts", corpus_dir / "choice_cycle.spi")
    assert code == 0 and json.loads(out)["states"]
    target = tmp_path / "g.dot"
    assert spi("lts", corpus_dir / "choice_cycle.spi", "--format", "dot", "-o", target)[0] == 0
    assert target.read_text().startswith("digraph")


def test_nonpositive_bound_is_rejected(spi, corpus_dir):
    with pytest.raises(SystemExit) as e:
        spi("lts", corpus_dir / "zero.spi", "--max-states", 0)
    assert e.value.code == 2


def test_corpus_command(spi, corpus_dir):
    code, out, _ = spi("corpus", "--dir", corpus_dir)
    assert code == 0 and "PASS" in out
