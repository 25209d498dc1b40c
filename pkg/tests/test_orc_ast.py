import random

from orcline.orc_ast import (
    SIGNAL, STOP, Asymmetric, Otherwise, Parallel, Program, Sequential,
    Signal, SiteCall, SiteSpec, Stop, Var, free_vars, render_value,
    substitute,
)

from generators import random_expr


def test_signal_is_a_singleton_value():
    assert SIGNAL == Signal()
    assert hash(SIGNAL) == hash(Signal())
    assert repr(SIGNAL) == "signal"
    assert SIGNAL != 0 and SIGNAL != "signal"


def test_render_value_forms():
    assert render_value(SIGNAL) == "signal"
    assert render_value(True) == "true"
    assert render_value(False) == "false"
    assert render_value(-3) == "-3"
    assert render_value("a\"b") == '"a\\"b"'
    assert render_value((1, "x")) == '(1,"x")'


def test_substitute_replaces_free_variable_in_args():
    e = SiteCall("M", (Var("x"), 1, Var("y")))
    assert substitute(e, "x", 5) == SiteCall("M", (5, 1, Var("y")))


def test_substitute_respects_sequential_shadowing():
    # x is rebound on the right of >x>, so only the left occurrence goes.
    e = Sequential(SiteCall("M", (Var("x"),)), "x",
                   SiteCall("N", (Var("x"),)))
    got = substitute(e, "x", 9)
    assert got.left == SiteCall("M", (9,))
    assert got.right == SiteCall("N", (Var("x"),))


def test_substitute_respects_asymmetric_shadowing():
    # x is bound on the LEFT of <x<; the right side keeps its own x.
    e = Asymmetric(SiteCall("M", (Var("x"),)), "x",
                   SiteCall("N", (Var("x"),)))
    got = substitute(e, "x", 9)
    assert got.left == SiteCall("M", (Var("x"),))
    assert got.right == SiteCall("N", (9,))


def test_substitute_binderless_forms_do_not_shadow():
    e = Sequential(SiteCall("M", (Var("x"),)), None,
                   SiteCall("N", (Var("x"),)))
    got = substitute(e, "x", 2)
    assert got == Sequential(SiteCall("M", (2,)), None, SiteCall("N", (2,)))


def test_free_vars():
    e = Parallel(
        Sequential(SiteCall("M", (Var("a"),)), "b",
                   SiteCall("N", (Var("b"), Var("c")))),
        Otherwise(SiteCall("P", (Var("a"),)), SiteCall("Q", ())))
    assert free_vars(e) == {"a", "c"}


def test_substitute_closes_generated_expressions():
    rng = random.Random(11)
    for _ in range(200):
        e = random_expr(rng, scope=("z",))
        closed = substitute(e, "z", 1)
        assert "z" not in free_vars(closed)


def test_substituting_an_unused_name_is_identity():
    rng = random.Random(12)
    for _ in range(200):
        e = random_expr(rng)
        assert substitute(e, "nosuch", 1) == e


def test_program_copies_its_environments():
    defs = {}
    sites = {"M": SiteSpec()}
    p = Program(SiteCall("M", ()), defs, sites)
    sites["N"] = SiteSpec()
    assert "N" not in p.site_env


def test_stop_is_shared():
    assert STOP == Stop()
    assert isinstance(STOP, Stop)
