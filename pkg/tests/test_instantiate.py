import pytest

from specforge import syntax as sx
from specforge.check import BY_CHECK
from specforge.errors import ObligationError, SubstitutionError
from specforge.instantiate import (Justification, build_substitution, definstance_obligations,
                                   instance_of_defspec)
from specforge.session import LoadError, Session, corpus_text
from specforge.subst import SKIP, FnSubst, instantiate_formula, parse_rename
from specforge.syntax import Sym
from specforge.world import DefThm


def session_until(stop_text):
    """Replay closed_monoid up to (not including) the first form whose text starts so."""
    s = Session()
    for form in sx.read(corpus_text("closed_monoid.gsl")):
        if sx.show(form).startswith(stop_text):
            break
        s.submit(form)
    return s


def test_binary_with_prefix_c():
    s = session_until("(INSTANCE-OF-DEFSPEC BINARY C)")
    subst = build_substitution(s.world, Sym("BINARY"), Sym("C"))
    assert [(o.name, t.name) for o, t in subst] == [
        ("BINARY-FUNCTION", "C-BINARY-FUNCTION"), ("FOLDR", "C-FOLDR"),
        ("FOLDR1", "C-FOLDR1"), ("FOLDL", "C-FOLDL")]


def test_semigroup_with_renaming_constant():
    s = session_until("(INSTANCE-OF-DEFSPEC SEMIGROUP MON")
    w = s.world
    rename = parse_rename(w, w.constant(Sym("*MONOID-RENAMING*")))
    subst = build_substitution(w, Sym("SEMIGROUP"), Sym("MON"), rename)
    assert subst[Sym("SG-C-FOLDR")] is Sym("MON-FOLDR")
    assert subst[Sym("FOLDR1-IS-FOLDL")] is Sym("MON-FOLDR1-IS-FOLDL")


def test_obligation_over_sg_names():
    s = session_until("(INSTANCE-OF-DEFSPEC CLOSED-BINOP SG)")
    w = s.world
    subst = build_substitution(w, Sym("CLOSED-BINOP"), Sym("SG"))
    (ob,) = definstance_obligations(w, Sym("CLOSED-BINOP"), subst)
    assert ob == w.theorem(Sym("SEMIGROUP-IS-A-CLOSED-BINOP-0")).formula
    assert definstance_obligations(w, Sym("BINARY"), FnSubst()) == []


def test_copied_theorems_are_substituted_originals(monoid_session):
    w = monoid_session.world
    copies = [t for t in w.theorems() if isinstance(t.justification, Justification)]
    assert len(copies) > 10
    for thm in copies:
        origin = w.theorem(thm.justification.origin)
        expected = instantiate_formula(w, origin.formula, thm.justification.subst)
        assert thm.formula == expected
        assert thm.justification.check == "NOT RE-CHECKED"


def test_instance_record(monoid_session):
    w = monoid_session.world
    inst = w.events[w.decode_logical_name(Sym("INT-MONOID"))]
    assert inst.spec is Sym("MONOID")
    assert [m.method for m in inst.methods] == [BY_CHECK] * 5
    assert inst.subst[Sym("MON-ID")] is Sym("ZERO-FN")


def test_two_prefixes_coexist_same_prefix_collides():
    s = session_until("(INSTANCE-OF-DEFSPEC BINARY CONS")
    s.execute("(instance-of-defspec binary p1 '((binary-function cons)))")
    s.execute("(instance-of-defspec binary p2 '((binary-function cons)))")
    assert s.world.function(Sym("P1-FOLDR")) and s.world.function(Sym("P2-FOLDR"))
    with pytest.raises(SubstitutionError):
        s.execute("(instance-of-defspec binary p1 '((binary-function cons)))")


def test_skip_entry():
    s = session_until("(INSTANCE-OF-DEFSPEC CLOSED-BINOP SG)")
    w = s.world
    rename = parse_rename(w, sx.read_one("((foldr1-closed))"))
    subst = build_substitution(w, Sym("CLOSED-BINOP"), Sym("SG"), rename)
    assert subst[Sym("FOLDR1-CLOSED")] is SKIP
    w2 = instance_of_defspec(w, Sym("CLOSED-BINOP"), Sym("SG"), rename)
    origins = [t.justification.origin for t in w2.theorems()[len(w.theorems()):]]
    assert Sym("FOLDR1-CLOSED") not in origins and Sym("CLOSED-BINOP-CLOSED") in origins
    assert w2.function(Sym("SG-C-FOLDR1")) is not None


def test_skip_only_for_theorems():
    s = session_until("(INSTANCE-OF-DEFSPEC CLOSED-BINOP SG)")
    with pytest.raises(SubstitutionError):
        s.execute("(instance-of-defspec closed-binop sg '((c-foldr)))")
    with pytest.raises(SubstitutionError):
        s.execute("(instance-of-defspec closed-binop sg '((c-domainp)))")


def test_target_arity_and_existence_checked(monoid_session):
    w = monoid_session.world
    with pytest.raises(SubstitutionError):
        build_substitution(w, Sym("BINARY"), Sym("Q"),
                           parse_rename(w, sx.read_one("((binary-function car))")))
    with pytest.raises(SubstitutionError):
        build_substitution(w, Sym("BINARY"), Sym("Q"),
                           parse_rename(w, sx.read_one("((binary-function nope))")))


def test_failing_obligation_has_counterexample(monoid_session):
    w = monoid_session.world
    rename = parse_rename(w, sx.read_one(
        "((mon-domainp integerp) (mon-binop cons) (mon-id zero-fn))"))
    with pytest.raises(ObligationError) as info:
        instance_of_defspec(w, Sym("MONOID"), Sym("BAD"), rename)
    assert info.value.counterexample
    w2 = instance_of_defspec(w, Sym("MONOID"), Sym("BAD"), rename, assume=True)
    assert w2.function(Sym("BAD-FOLD")) is not None


def test_paranoid_flags_bad_copy(monoid_session):
    # with obligations assumed, paranoid re-checking catches a false copy
    w = monoid_session.world
    rename = parse_rename(w, sx.read_one(
        "((mon-domainp integerp) (mon-binop cons) (mon-id zero-fn))"))
    with pytest.raises(Exception) as info:
        instance_of_defspec(w, Sym("MONOID"), Sym("BAD"), rename, assume=True, paranoid=True)
    assert "paranoid" in str(info.value)


def test_members_copy_threads_extra_formal(members_session):
    w = members_session.world
    assert w.formals_of(Sym("SUBSET-EQUAL")) == (Sym("LST"), Sym("Y"))
    thm = w.theorem(Sym("MEMBERS-PREDICATE-LISTP-CONS"))
    assert sx.show(sx.untranslate(thm.formula)) == (
        "(IMPLIES (AND (MEMBER-EQUAL X Y) (SUBSET-EQUAL XS Y)) (SUBSET-EQUAL (CONS X XS) Y))")


def test_members_bad_aborts_with_copyfun():
    s = Session()
    with pytest.raises(LoadError) as info:
        s.load_text(corpus_text("members_bad.gsl"))
    assert "(XS)" in str(info.value) and "(LST)" in str(info.value)
    assert info.value.line == 10


def test_copied_theorem_classes_follow_substitution(fresh_session):
    fresh_session.load_text("""
(defspec pick ((pick-fn (x) t)) (local (defun pick-fn (x) x)))
(defun twice (x) (pick-fn (pick-fn x)))
(defthm twice-ok (equal (twice x) (pick-fn (pick-fn x)))
  :rule-classes ((:rewrite :corollary (equal (twice y) (pick-fn (pick-fn y))))))
(instance-of-defspec pick id '((pick-fn car)))
""")
    assert fresh_session.classes_of(Sym("ID-TWICE-OK")) == (
        "((:REWRITE :COROLLARY (EQUAL (ID-TWICE Y) (CAR (CAR Y)))))")
    thm = fresh_session.world.theorem(Sym("ID-TWICE-OK"))
    assert isinstance(thm, DefThm) and thm.justification.obligation is Sym("ID-PICK")
