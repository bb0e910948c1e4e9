import itertools

import pytest
from hypothesis import given, settings

from specforge import syntax as sx
from specforge.errors import ParseError, TranslateError
from specforge.evaluator import evaluate
from specforge.session import base_world
from specforge.syntax import NIL, T, App, Pair, Quote, Sym, Var

from strategies import sexprs

A, B, C = Sym("A"), Sym("B"), Sym("C")


def test_read_dotted_tail():
    assert sx.read("(b c . a)") == [Pair(B, Pair(C, A))]


def test_read_empty_list_is_nil():
    assert sx.read("()") == [NIL]


def test_read_quote_sugar():
    assert sx.read("'(a b)") == [sx.lisp_list([sx.QUOTE, sx.lisp_list([A, B])])]


def test_symbols_upcased_and_interned():
    assert sx.read_one("foo") is Sym("FOO")
    assert Sym("nil") is NIL


def test_read_integers():
    assert sx.read("0 -7 +3 1+") == [0, -7, 3, Sym("1+")]


def test_comments_skipped():
    assert sx.read("; hi\n(a ; there\n b)") == [sx.lisp_list([A, B])]


@pytest.mark.parametrize("text,line,col", [
    ("(a b", 1, 1),
    ("a)", 1, 2),
    ("(a .)", 1, 5),
    ("\n  (a . b c)", 2, 10),
    ('(a "s")', 1, 4),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as info:
        sx.read(text)
    assert (info.value.line, info.value.col) == (line, col)


def test_read_located_positions():
    located = sx.read_located("(a)\n  b")
    assert [(l, c) for _, l, c in located] == [(1, 1), (2, 3)]


def test_show_left_nested_pairs():
    v = Pair(Pair(A, B), C)
    assert sx.show(v) == "((A . B) . C)"
    assert sx.show(NIL) == "NIL"
    assert sx.show(sx.read_one("(quote x)")) == "'X"


@settings(max_examples=1000)
@given(sexprs)
def test_read_show_roundtrip(v):
    assert sx.read(sx.show(v)) == [v]


def test_translate_and_stores_if():
    w = base_world()
    form = sx.read_one("(and (list-domainp xs) (consp xs))")
    t = sx.translate(w, form, unknown_ok=True)
    assert sx.show(sx.term_to_sexpr(t)) == "(IF (LIST-DOMAINP XS) (CONSP XS) 'NIL)"


def test_translate_constants_self_quote():
    w = base_world()
    assert sx.translate(w, 0) == Quote(0)
    assert sx.translate(w, NIL) == Quote(NIL)
    assert sx.translate(w, Sym(":K")) == Quote(Sym(":K"))


def test_or_matches_truth_table():
    w = base_world()
    term = sx.translate(w, sx.read_one("(or a b)"))
    assert sx.show(sx.term_to_sexpr(term)) == "(IF A A B)"
    for a, b in itertools.product([T, NIL, 3], repeat=2):
        expected = a if a is not NIL else b
        assert evaluate(w, term, {A: a, B: b}) == expected


def test_cond_and_list_expand():
    w = base_world()
    t = sx.translate(w, sx.read_one("(cond ((consp x) 1) (t (list x 2)))"))
    assert sx.show(sx.term_to_sexpr(t)) == "(IF (CONSP X) '1 (CONS X (CONS '2 'NIL)))"


@pytest.mark.parametrize("text", [
    "(no-such-fn x)",
    "(car x y)",
    "((lambda (a) (cons a b)) x)",
    "((lambda (a a) a) x y)",
    "(if x y)",
])
def test_translate_rejects(text):
    with pytest.raises(TranslateError):
        sx.translate(base_world(), sx.read_one(text))


def test_untranslate_resugars():
    t = App(sx.IF, (Var(A), App(sx.IF, (Var(B), Var(C), sx.QNIL)), sx.QNIL))
    assert sx.show(sx.untranslate(t)) == "(AND A B C)"
    t = App(sx.IF, (Var(A), Var(A), Var(B)))
    assert sx.show(sx.untranslate(t)) == "(OR A B)"
    assert sx.untranslate(Var(A)) is A


def test_untranslate_stored_theorem(monoid_session):
    w = monoid_session.world
    formula = w.theorem(Sym("SG-FOLDR1-CLOSED")).formula
    assert sx.show(sx.untranslate(formula)) == (
        "(IMPLIES (AND (SG-LIST-DOMAINP XS) (CONSP XS)) (SG-C-DOMAINP (SG-C-FOLDR1 XS)))")


def test_translate_untranslate_roundtrip_corpus(monoid_session, members_session):
    for w in (monoid_session.world, members_session.world):
        bodies = [f.body for f in w.functions() if f.body is not None]
        bodies += [t.formula for t in w.theorems()]
        assert len(bodies) > 5
        for b in bodies:
            assert sx.translate(w, sx.untranslate(b)) == b


def test_free_vars_first_occurrence():
    t = sx.translate(base_world(), sx.read_one("(cons y (cons x y))"))
    assert sx.free_vars(t) == [Sym("Y"), Sym("X")]


def test_pretty_breaks_long_forms():
    v = sx.read_one("(equal (c-foldr x xs) (if (consp xs) (c-binary-function (car xs) "
                    "(c-foldr x (cdr xs))) x))")
    out = sx.pretty(v, width=40)
    assert len(out.splitlines()) > 1
    assert sx.read_one(out) == v
