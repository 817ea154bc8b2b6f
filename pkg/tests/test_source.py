import pytest

from spicalc.source import load
from spicalc.syntax.parser import SpiSyntaxError


def test_same_file_twice_shares_helpers(corpus_dir):
    f = corpus_dir / "server_client.spi"
    ld = load(f, f)
    p, q = ld.programs
    assert p == q
    assert len(ld.defs.threads) == len(load(f).defs.threads)


def test_conflicting_threads(corpus_dir):
    with pytest.raises(SpiSyntaxError, match="conflicting definitions of B"):
        load(corpus_dir / "persistence.spi", corpus_dir / "persistence_ordered.spi")


def test_alphabet_file(tmp_path, corpus_dir):
    alpha = tmp_path / "alpha.spi"
    alpha.write_text("input t : 7;\n")
    ld = load(corpus_dir / "server_client.spi", alphabet_file=alpha)
    assert {str(v.name) for v in ld.defs.inputs["t"]} == {"5", "7"}


def test_alphabet_file_rejects_threads(tmp_path, corpus_dir):
    alpha = tmp_path / "alpha.spi"
    alpha.write_text("T() = 0;\n")
    with pytest.raises(SpiSyntaxError):
        load(corpus_dir / "zero.spi", alphabet_file=alpha)


def test_main_required(tmp_path):
    f = tmp_path / "lib.spi"
    f.write_text("T() = 0;\n")
    with pytest.raises(SpiSyntaxError):
        load(f)
    assert load(f, require_main=False).main is None
