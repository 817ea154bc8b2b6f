import pytest

from spicalc.corpus import CORPUS_DIR
from spicalc.syntax.parser import parse, parse_program


@pytest.fixture
def corpus_dir():
    return CORPUS_DIR


@pytest.fixture
def prog():
    """Parse ``(decls, program_text)`` into ``(program, defs)``."""
    def make(text, decls=""):
        _, defs = parse(decls) if decls else parse("")
        return parse_program(text, defs), defs
    return make


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
