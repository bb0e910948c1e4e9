"""The logical world: an immutable, ordered database of admitted events."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import syntax as sx
from .errors import AdmissionError, SpecforgeError, TranslateError
from .syntax import App, IF, LambdaApp, Quote, Sym, Var

REWRITE = Sym(":REWRITE")
TYPE_PRESCRIPTION = Sym(":TYPE-PRESCRIPTION")
FORWARD_CHAINING = Sym(":FORWARD-CHAINING")
RULE_KINDS = (REWRITE, TYPE_PRESCRIPTION, FORWARD_CHAINING)

_RESERVED = frozenset(sx.BUILTIN_ARITY) | sx.MACROS | {sx.IF, sx.QUOTE, sx.LAMBDA, sx.T, sx.NIL}


# ---------------------------------------------------------------------------
# events

@dataclass(frozen=True)
class RuleClass:
    kind: Sym
    # (attribute keyword, tuple of terms)
    attributes: tuple = ()

    def terms(self):
        for _, ts in self.attributes:
            yield from ts


DEFAULT_CLASSES = (RuleClass(REWRITE),)


@dataclass(frozen=True)
class Signature:
    fn: Sym
    formals: tuple
    output: Sym = sx.T


@dataclass(frozen=True)
class DefUn:
    name: Sym
    formals: tuple
    body: object
    doc: Optional[str] = None


@dataclass(frozen=True)
class DefThm:
    name: Sym
    formula: object
    classes: tuple = DEFAULT_CLASSES
    justification: object = None


@dataclass(frozen=True)
class DefConst:
    name: Sym
    value: object


@dataclass(frozen=True)
class DefSpec:
    name: Sym
    signatures: tuple
    local: tuple = ()
    exported: tuple = ()


@dataclass(frozen=True)
class Instance:
    spec: Sym
    name: Sym
    subst: object
    methods: tuple = ()


@dataclass(eq=False)
class FunInfo:
    name: Sym
    formals: tuple
    body: object  # None for abstract (signature) functions
    ordinal: int
    doc: Optional[str] = None
    compiled: object = field(default=None, repr=False)

    @property
    def abstract(self) -> bool:
        return self.body is None

    def key(self):
        return (self.name, self.formals, self.body, self.ordinal, self.doc)


def event_names(event) -> list:
    """All names an event introduces into the flat namespace."""
    if isinstance(event, DefSpec):
        return [event.name] + [s.fn for s in event.signatures]
    return [event.name]


# ---------------------------------------------------------------------------
# world

class World:
    """Persistent world value.  ``admit`` returns a new world."""

    def __init__(self):
        self.events: tuple = ()
        self._pos: dict = {}
        self._fns: dict = {}
        self._thms: dict = {}
        self._specs: dict = {}
        self._consts: dict = {}

    def __len__(self):
        return len(self.events)

    # -- construction -------------------------------------------------------

    def _extend(self, event) -> "World":
        new = World()
        ordinal = len(self.events)
        new.events = self.events + (event,)
        new._pos = dict(self._pos)
        new._fns = dict(self._fns)
        new._thms = dict(self._thms)
        new._specs = dict(self._specs)
        new._consts = dict(self._consts)
        for name in event_names(event):
            new._pos[name] = ordinal
        if isinstance(event, DefUn):
            new._fns[event.name] = FunInfo(event.name, event.formals, event.body,
                                           ordinal, event.doc)
        elif isinstance(event, DefThm):
            new._thms[event.name] = event
        elif isinstance(event, DefConst):
            new._consts[event.name] = event.value
        elif isinstance(event, DefSpec):
            new._specs[event.name] = event
            for sig in event.signatures:
                new._fns[sig.fn] = FunInfo(sig.fn, sig.formals, None, ordinal)
        return new

    @classmethod
    def from_events(cls, events) -> "World":
        w = cls()
        for ev in events:
            w = w._extend(ev)
        return w

    def rebuild(self) -> "World":
        return World.from_events(self.events)

    def index_snapshot(self):
        """Comparable view of all indices (for rebuild-equivalence checks)."""
        return (
            dict(self._pos),
            {k: v.key() for k, v in self._fns.items()},
            dict(self._thms),
            dict(self._specs),
            dict(self._consts),
        )

    def admit(self, event, *, universe=None, assume=False) -> "World":
        """Validate ``event`` against this world and return the extended world.

        DefThm formulas are bounded-checked unless ``assume``; a failing check
        raises AdmissionError carrying the counterexample.  Theorems whose
        check is inconclusive (abstract functions, fuel) are admitted.
        """
        for name in event_names(event):
            self._check_fresh(name)
        if isinstance(event, DefUn):
            sx.check_formals(event.formals)
            self._check_term(event.body, self_fn=(event.name, len(event.formals)))
            loose = [v for v in sx.free_vars(event.body) if v not in event.formals]
            if loose:
                raise AdmissionError(
                    f"body of {event.name.name} mentions free variable(s) "
                    f"{sx.show(sx.lisp_list(loose))}")
        elif isinstance(event, DefThm):
            self._check_term(event.formula)
            for rc in event.classes:
                if rc.kind not in RULE_KINDS:
                    raise AdmissionError(f"unknown rule class {rc.kind.name}")
                for t in rc.terms():
                    self._check_term(t)
            if not assume:
                from .check import Fail, check_formula
                verdict = check_formula(self, event.formula, universe)
                if isinstance(verdict, Fail):
                    raise AdmissionError(
                        f"theorem {event.name.name} fails bounded check: "
                        f"counterexample {verdict.describe()}",
                        counterexample=verdict.binding)
        elif isinstance(event, DefConst):
            if not sx._const_symbol(event.name):
                raise AdmissionError(
                    f"constant name {event.name.name} must be wrapped in asterisks")
        elif isinstance(event, DefSpec):
            for sig in event.signatures:
                sx.check_formals(sig.formals, "signature")
        elif isinstance(event, Instance):
            if event.spec not in self._specs:
                raise AdmissionError(f"unknown defspec {event.spec.name}")
        else:
            raise AdmissionError(f"not an event: {event!r}")
        if isinstance(event, DefSpec):
            w = self._extend(event)
            for thm in event.exported:
                w = w.admit(thm, universe=universe, assume=True)
            return w
        return self._extend(event)

    def _check_fresh(self, name):
        if not isinstance(name, Sym):
            raise AdmissionError(f"event name must be a symbol, got {sx.show(name)}")
        if name in _RESERVED or name.is_keyword:
            raise AdmissionError(f"{name.name} is a reserved symbol")
        if name in self._pos:
            raise AdmissionError(
                f"name {name.name} is already in use (event {self._pos[name]})")

    def _check_term(self, term, self_fn=None):
        def walk(t):
            if isinstance(t, App):
                if t.fn is IF:
                    n = 3
                elif self_fn is not None and t.fn is self_fn[0]:
                    n = self_fn[1]
                else:
                    n = self.arity(t.fn)
                    if n is None:
                        n = sx.BUILTIN_ARITY.get(t.fn)
                    if n is None:
                        raise AdmissionError(f"unknown function {t.fn.name}")
                if n != len(t.args):
                    raise AdmissionError(
                        f"{t.fn.name} takes {n} argument(s), called with {len(t.args)}")
                for a in t.args:
                    walk(a)
            elif isinstance(t, LambdaApp):
                if len(t.params) != len(t.args):
                    raise AdmissionError("lambda arity mismatch")
                walk(t.body)
                for a in t.args:
                    walk(a)
        walk(term)

    # -- queries ------------------------------------------------------------

    def arity(self, name) -> Optional[int]:
        info = self._fns.get(name)
        return None if info is None else len(info.formals)

    def constant(self, name):
        return self._consts.get(name)

    def function(self, name) -> Optional[FunInfo]:
        return self._fns.get(name)

    def functions(self):
        return list(self._fns.values())

    def is_function(self, name) -> bool:
        return name in self._fns or name in sx.BUILTIN_ARITY

    def formals_of(self, name) -> tuple:
        info = self._fns.get(name)
        if info is not None:
            return info.formals
        n = sx.BUILTIN_ARITY.get(name)
        if n is None:
            raise SpecforgeError(f"unknown function {name.name}")
        return tuple(Sym(f"X{i}") for i in range(n)) if n > 1 else (Sym("X"),)

    def decode_logical_name(self, name) -> int:
        try:
            return self._pos[name]
        except KeyError:
            raise SpecforgeError(f"unknown logical name {sx.show(name)}") from None

    def def_body(self, name):
        info = self._fns.get(name)
        if info is None:
            raise SpecforgeError(f"{sx.show(name)} is not a defined function")
        if info.abstract:
            raise SpecforgeError(f"{name.name} is an abstract function with no visible body")
        return info.formals, info.body

    def theorem(self, name) -> DefThm:
        thm = self._thms.get(name)
        if thm is None:
            raise SpecforgeError(f"{sx.show(name)} is not a theorem")
        return thm

    def theorem_of(self, name):
        thm = self.theorem(name)
        return thm.formula, thm.classes

    def theorems(self):
        return [ev for ev in self.events if isinstance(ev, DefThm)]

    def spec(self, name) -> DefSpec:
        spec = self._specs.get(name)
        if spec is None:
            raise SpecforgeError(f"{sx.show(name)} is not a defspec")
        return spec

    def symbol_lemmas(self, sym) -> list:
        out = []
        for thm in self.theorems():
            terms = [thm.formula]
            for rc in thm.classes:
                terms.extend(rc.terms())
            if any(mentions(t, sym) for t in terms):
                out.append(thm.name)
        return out

    def definition_rule(self, name):
        """The defining equation ``(EQUAL (F . formals) body)`` in normal form."""
        formals, body = self.def_body(name)
        return App(Sym("EQUAL"), (App(name, tuple(Var(f) for f in formals)),
                                  normalize_body(body)))

    def dump(self) -> str:
        """Debug listing of the world: one landmark line per event."""
        lines = []
        for i, ev in enumerate(self.events):
            kind = type(ev).__name__.upper()
            if isinstance(ev, DefUn):
                detail = sx.show(sx.lisp_list(ev.formals))
            elif isinstance(ev, DefThm):
                detail = sx.show(sx.term_to_sexpr(ev.formula))
            elif isinstance(ev, DefSpec):
                detail = sx.show(sx.lisp_list(
                    [sx.lisp_list([s.fn, sx.lisp_list(s.formals), s.output])
                     for s in ev.signatures]))
            elif isinstance(ev, DefConst):
                detail = sx.show(ev.value)
            else:
                detail = ev.spec.name
            lines.append(f"(EVENT-LANDMARK {i} {kind} {ev.name.name} {detail})")
        return "\n".join(lines)


def mentions(term, sym) -> bool:
    if isinstance(term, Var):
        return term.name is sym
    if isinstance(term, Quote):
        return False
    if isinstance(term, App):
        return term.fn is sym or any(mentions(a, sym) for a in term.args)
    return (sym in term.params or mentions(term.body, sym)
            or any(mentions(a, sym) for a in term.args))


_NOT = Sym("NOT")
_CONSP = Sym("CONSP")
_NEGATED_CONSP = (Sym("ATOM"), Sym("ENDP"))


def normalize_body(term):
    """Display normalization for definitions.

    ``(ATOM x)``/``(ENDP x)`` become ``(NOT (CONSP x))`` and an IF whose test
    is a negation has its branches swapped.
    """
    if isinstance(term, App):
        args = tuple(normalize_body(a) for a in term.args)
        if term.fn in _NEGATED_CONSP:
            return App(_NOT, (App(_CONSP, args),))
        if term.fn is IF:
            c, a, b = args
            while isinstance(c, App) and c.fn is _NOT:
                c, a, b = c.args[0], b, a
            return App(IF, (c, a, b))
        return App(term.fn, args)
    if isinstance(term, LambdaApp):
        return LambdaApp(term.params, normalize_body(term.body),
                         tuple(normalize_body(a) for a in term.args))
    return term


def parse_rule_classes(world, form) -> tuple:
    """Parse a ``:rule-classes`` value such as ``(:rewrite (:forward-chaining :trigger-terms (..)))``."""
    if form is sx.NIL:
        return ()
    items = [form] if isinstance(form, Sym) else sx.to_list(form, "rule-classes")
    out = []
    for item in items:
        if isinstance(item, Sym):
            out.append(RuleClass(item))
            continue
        parts = sx.to_list(item, "rule class")
        kind, rest = parts[0], parts[1:]
        if len(rest) % 2:
            raise TranslateError(f"odd keyword list in rule class {sx.show(item)}")
        attrs = []
        for key, val in zip(rest[::2], rest[1::2]):
            if key is Sym(":TRIGGER-TERMS"):
                terms = tuple(sx.translate(world, t) for t in sx.to_list(val))
            else:
                terms = (sx.translate(world, val),)
            attrs.append((key, terms))
        out.append(RuleClass(kind, tuple(attrs)))
    return tuple(out)


def rule_classes_sexpr(classes):
    out = []
    for rc in classes:
        parts = [rc.kind]
        for key, terms in rc.attributes:
            parts.append(key)
            vals = [sx.untranslate(t) for t in terms]
            parts.append(sx.lisp_list(vals) if key is Sym(":TRIGGER-TERMS") else vals[0])
        out.append(sx.lisp_list(parts))
    return sx.lisp_list(out)


# ---------------------------------------------------------------------------
# surface event parsing

DECLARE = Sym("DECLARE")
RULE_CLASSES = Sym(":RULE-CLASSES")


def parse_defun(world, form) -> DefUn:
    """``(defun name (formals...) [(declare ...)...] body)``"""
    parts = sx.to_list(form, "defun")
    if len(parts) < 4 or not isinstance(parts[1], Sym):
        raise TranslateError(f"malformed defun {sx.show(form)}")
    name = parts[1]
    formals = tuple(sx.to_list(parts[2], "formals"))
    sx.check_formals(formals)
    rest = [p for p in parts[3:] if not (isinstance(p, sx.Pair) and p.car is DECLARE)]
    if len(rest) != 1:
        raise TranslateError(f"defun {name.name} must have exactly one body form")
    body = sx.translate(world, rest[0], arities={name: len(formals)})
    return DefUn(name, formals, body)


def parse_defthm(world, form) -> DefThm:
    """``(defthm name formula [:rule-classes classes])``"""
    parts = sx.to_list(form, "defthm")
    if len(parts) not in (3, 5) or not isinstance(parts[1], Sym):
        raise TranslateError(f"malformed defthm {sx.show(form)}")
    formula = sx.translate(world, parts[2])
    classes = DEFAULT_CLASSES
    if len(parts) == 5:
        if parts[3] is not RULE_CLASSES:
            raise TranslateError(f"unknown defthm keyword {sx.show(parts[3])}")
        classes = parse_rule_classes(world, parts[4])
    return DefThm(parts[1], formula, classes)
