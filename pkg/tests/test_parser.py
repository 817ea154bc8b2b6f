import pytest

from spicalc.syntax.ast import (
    Call, Con, Deref, Emit, MatchSig, MatchVal, New, Nil, Par, PCon, Present, Var,
)
from spicalc.syntax.parser import SpiSyntaxError, merge_defs, parse, parse_program, tokenize
from spicalc.syntax.printer import pretty


def test_emit_defaults_to_unit():
    p = parse_program("emit s")
    assert p == Emit("s", Con("*"))


def test_present_with_continuation_args():
    main, defs = parse("B(l : List(Nat)) = 0;\nmain = present s(x) { emit t x } else B(!s);")
    assert isinstance(main, Present)
    assert main.cont == Call("B", (Deref("s"),))
    assert main.body == Emit("t", Var("x"))


def test_if_is_signal_match():
    p = parse_program("if a = b { emit a } else { 0 }")
    assert p == MatchSig("a", "b", Emit("a", Con("*")), Nil())


def test_parallel_and_new():
    p = parse_program("new s, t in (emit s || emit t)")
    assert isinstance(p, New) and isinstance(p.body, New)
    assert isinstance(p.body.body, Par)


def test_match_with_list_pattern():
    _, defs = parse("")
    p = parse_program("match [0; 1] with x :: rest -> emit a x | _ -> 0", defs)
    assert isinstance(p, MatchVal)
    assert isinstance(p.pattern, PCon) and p.pattern.name == "cons"


def test_tau_prefix_desugars_to_trivial_match():
    p = parse_program("tau.emit a")
    assert isinstance(p, MatchVal)
    assert p.subject == Con("*") and p.orelse == Nil()


def test_choice_desugars_to_competing_values():
    p = parse_program("emit a + emit b")
    assert isinstance(p, New)
    text = pretty(p)
    assert "emit" in text and "present" in text


def test_pause_lifts_body_into_thread():
    main, defs = parse("signal a : Sig(1);\nmain = pause.(emit a || emit a);")
    lifted = [n for n in defs.threads if n.startswith("_Pause")]
    assert len(lifted) == 1
    assert isinstance(main, New)


def test_pause_of_call_needs_no_thread():
    main, defs = parse("A() = 0;\nmain = pause.A();")
    assert not [n for n in defs.threads if n.startswith("_")]


def test_generated_names_do_not_collide():
    _, defs = parse("signal a : Sig(1);\nmain = pause.(emit a || emit a);")
    before = set(defs.threads)
    parse_program("pause.(emit a || 0)", defs)
    after = set(defs.threads)
    assert before < after


def test_syntax_error_reports_position():
    with pytest.raises(SpiSyntaxError) as info:
        parse("main = emit ;\n")
    line, col, _ = info.value.errors[0]
    assert (line, col) == (1, 13)


def test_errors_are_collected_per_declaration():
    with pytest.raises(SpiSyntaxError) as info:
        parse("A() = emit ;\nB() = present ;\nmain = 0;")
    assert len(info.value.errors) == 2


def test_reserved_prefixes_rejected():
    with pytest.raises(SpiSyntaxError, match="reserved"):
        parse("main = emit _x;")


def test_unknown_thread_rejected():
    with pytest.raises(SpiSyntaxError, match="undefined thread"):
        parse("main = Nope();")


def test_deref_only_in_continuations():
    with pytest.raises(SpiSyntaxError):
        parse("main = emit s !s;")


def test_match_subject_variable_not_free_in_first_branch():
    with pytest.raises(SpiSyntaxError):
        parse("A(x : Nat) = match x with 0 -> emit s x | _ -> 0;\nmain = 0;")


def test_constructor_arity_checked():
    with pytest.raises(SpiSyntaxError):
        parse("type T = c(Nat);\nmain = emit s c;")


def test_comments_and_unicode_tau():
    toks = tokenize("τ.0 // trailing\n# another\n")
    assert [t.text for t in toks[:-1]] == ["τ", ".", "0"]


def test_merge_defs_detects_conflicts():
    _, a = parse("A() = 0;")
    _, b = parse("A() = emit s;")
    with pytest.raises(SpiSyntaxError, match="conflicting"):
        merge_defs(a, b)
    _, c = parse("B() = 0;")
    assert set(merge_defs(a, c).threads) == {"A", "B"}


def test_printer_round_trip():
    src = "new s in (emit s 0 || present s(x) { emit t x } else 0)"
    p = parse_program(src)
    assert parse_program(pretty(p)) == p
