"""S-expression data, the reader and printer, and the surface <-> core term translation.

Two value layers live here:

* ``SExpr`` -- interned symbols (``Sym``), Python ints, and ``Pair`` cells.
  ``NIL`` is both the empty list and false; ``T`` is true.
* ``Term`` -- macro-free core forms (``Var``, ``Quote``, ``App``, ``LambdaApp``)
  produced by :func:`translate` and re-sugared by :func:`untranslate`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import ParseError, TranslateError


class Sym:
    """An interned, upper-cased symbol.  ``Sym("foo") is Sym("FOO")``."""

    __slots__ = ("name",)
    _table: dict = {}

    def __new__(cls, name: str):
        name = name.upper()
        sym = cls._table.get(name)
        if sym is None:
            sym = object.__new__(cls)
            sym.name = name
            cls._table[name] = sym
        return sym

    def __reduce__(self):
        return (Sym, (self.name,))

    def __repr__(self):
        return self.name

    def __hash__(self):
        return hash(self.name)

    def __lt__(self, other):
        return self.name < other.name

    @property
    def is_keyword(self) -> bool:
        return self.name.startswith(":")


class Pair:
    """A cons cell.  Treated as immutable."""

    __slots__ = ("car", "cdr")

    def __init__(self, car, cdr):
        self.car = car
        self.cdr = cdr

    def __eq__(self, other):
        a, b = self, other
        while isinstance(a, Pair):
            if not isinstance(b, Pair):
                return False
            if a.car is not b.car and a.car != b.car:
                return False
            a, b = a.cdr, b.cdr
        return type(a) is type(b) and a == b

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        h = 17
        x = self
        while isinstance(x, Pair):
            h = (h * 31 + hash(x.car)) & 0xFFFFFFFFFFFF
            x = x.cdr
        return h ^ hash(x)

    def __repr__(self):
        return show(self)


SExpr = Union[Sym, int, Pair]

NIL = Sym("NIL")
T = Sym("T")
QUOTE = Sym("QUOTE")
LAMBDA = Sym("LAMBDA")
IF = Sym("IF")
AND = Sym("AND")
OR = Sym("OR")
COND = Sym("COND")
LIST = Sym("LIST")
CONS = Sym("CONS")

MACROS = frozenset({AND, OR, COND, LIST})

# Builtin function signatures; implementations live in the evaluator.
BUILTIN_ARITY = {
    Sym(name): n
    for name, n in [
        ("CONS", 2), ("CAR", 1), ("CDR", 1), ("CONSP", 1), ("ATOM", 1),
        ("ENDP", 1), ("NULL", 1), ("EQUAL", 2), ("NOT", 1), ("IMPLIES", 2),
        ("INTEGERP", 1), ("+", 2), ("MEMBER-EQUAL", 2),
    ]
}


def is_atom(x) -> bool:
    return not isinstance(x, Pair)


def lisp_list(items: Iterable, tail=NIL):
    items = list(items)
    out = tail
    for item in reversed(items):
        out = Pair(item, out)
    return out


def iter_list(x) -> Iterator:
    """Iterate the cars of a list, ignoring any non-NIL final tail."""
    while isinstance(x, Pair):
        yield x.car
        x = x.cdr


def is_proper_list(x) -> bool:
    while isinstance(x, Pair):
        x = x.cdr
    return x is NIL


def to_list(x, what="list") -> list:
    if not is_proper_list(x):
        raise TranslateError(f"expected a proper {what}, got {show(x)}")
    return list(iter_list(x))


# ---------------------------------------------------------------------------
# reader

_TOKEN_RE = re.compile(r"""\s+|;[^\n]*|(?P<open>\()|(?P<close>\))|(?P<quote>')|(?P<atom>[^\s();']+)""")
_INT_RE = re.compile(r"[+-]?\d+\Z")
_ILLEGAL = set('"`,#|\\')


def _tokenize(text: str):
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # pragma: no cover - the pattern matches any char
            raise ParseError("unreadable input", line, pos - line_start + 1)
        col = pos - line_start + 1
        kind = m.lastgroup
        if kind is not None:
            yield kind, m.group(kind), line, col
        chunk = m.group(0)
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()


def _atom(tok, line, col):
    if _INT_RE.match(tok):
        return int(tok)
    if tok == ".":
        raise ParseError("unexpected dot", line, col)
    if any(c in _ILLEGAL for c in tok):
        raise ParseError(f"illegal atom {tok!r}", line, col)
    return Sym(tok)


def read(text: str) -> list:
    """Parse every s-expression in ``text``."""
    return [form for form, _, _ in read_located(text)]


def read_located(text: str) -> list:
    """Like :func:`read` but yields ``(form, line, column)`` triples."""
    tokens = list(_tokenize(text))
    end = (text.count("\n") + 1, len(text) - text.rfind("\n"))
    pos = 0

    def parse_one():
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of input", *end)
        kind, tok, line, col = tokens[pos]
        pos += 1
        if kind == "quote":
            return lisp_list([QUOTE, parse_one()])
        if kind == "close":
            raise ParseError("unbalanced ')'", line, col)
        if kind == "atom":
            return _atom(tok, line, col)
        items, tail = [], NIL
        while True:
            if pos >= len(tokens):
                raise ParseError("unbalanced '(' opened", line, col)
            k, t, l2, c2 = tokens[pos]
            if k == "close":
                pos += 1
                return lisp_list(items, tail)
            if k == "atom" and t == ".":
                if not items:
                    raise ParseError("dot with no preceding element", l2, c2)
                pos += 1
                tail = parse_one()
                if pos >= len(tokens) or tokens[pos][0] != "close":
                    at = tokens[pos][2:] if pos < len(tokens) else end
                    raise ParseError("expected ')' after dotted tail", *at)
                pos += 1
                return lisp_list(items, tail)
            items.append(parse_one())

    out = []
    while pos < len(tokens):
        line, col = tokens[pos][2:]
        out.append((parse_one(), line, col))
    return out


def read_one(text: str):
    forms = read(text)
    if len(forms) != 1:
        raise ParseError(f"expected exactly one form, got {len(forms)}", 1, 1)
    return forms[0]


# ---------------------------------------------------------------------------
# printer

def show(value) -> str:
    """Canonical single-line rendering; ``read(show(v)) == [v]``."""
    if isinstance(value, Sym):
        return value.name
    if isinstance(value, int):
        return str(value)
    if (value.car is QUOTE and isinstance(value.cdr, Pair)
            and value.cdr.cdr is NIL):
        return "'" + show(value.cdr.car)
    parts = []
    x = value
    while isinstance(x, Pair):
        parts.append(show(x.car))
        x = x.cdr
    if x is not NIL:
        parts.append(".")
        parts.append(show(x))
    return "(" + " ".join(parts) + ")"


def pretty(value, width: int = 72, indent: int = 0) -> str:
    """Multi-line rendering: arguments aligned under the first one."""
    flat = show(value)
    if indent + len(flat) <= width or not isinstance(value, Pair) \
            or not is_proper_list(value) or flat.startswith("'"):
        return flat
    items = list(iter_list(value))
    head = items[0]
    if isinstance(head, Pair):
        inner = indent + 1
        lines = [pretty(x, width, inner) for x in items]
        return "(" + ("\n" + " " * inner).join(lines) + ")"
    head_s = show(head)
    if len(items) == 1:
        return "(" + head_s + ")"
    inner = indent + len(head_s) + 2
    if head is LAMBDA or head is IF and inner > width // 2:
        inner = indent + 4
    args = [pretty(x, width, inner) for x in items[1:]]
    return "(" + head_s + " " + ("\n" + " " * inner).join(args) + ")"


# ---------------------------------------------------------------------------
# core terms

@dataclass(frozen=True)
class Var:
    name: Sym

    def __repr__(self):
        return self.name.name


@dataclass(frozen=True)
class Quote:
    value: object

    def __repr__(self):
        return "'" + show(self.value)


@dataclass(frozen=True)
class App:
    fn: Sym
    args: tuple = ()

    def __repr__(self):
        return show(term_to_sexpr(self))


@dataclass(frozen=True)
class LambdaApp:
    params: tuple
    body: object
    args: tuple

    def __repr__(self):
        return show(term_to_sexpr(self))


Term = Union[Var, Quote, App, LambdaApp]

QNIL = Quote(NIL)
QT = Quote(T)


def self_evaluating(x) -> bool:
    return isinstance(x, int) or x is T or x is NIL or (
        isinstance(x, Sym) and x.is_keyword)


def free_vars(term) -> list:
    """Free variables in first-occurrence order."""
    out: list = []
    seen: set = set()

    def walk(t, bound):
        if isinstance(t, Var):
            if t.name not in bound and t.name not in seen:
                seen.add(t.name)
                out.append(t.name)
        elif isinstance(t, App):
            for a in t.args:
                walk(a, bound)
        elif isinstance(t, LambdaApp):
            walk(t.body, frozenset(t.params))
            for a in t.args:
                walk(a, bound)

    walk(term, frozenset())
    return out


def called_fns(term) -> list:
    """Function symbols in head positions, first-occurrence order."""
    out: list = []
    seen: set = set()

    def walk(t):
        if isinstance(t, App):
            if t.fn not in seen:
                seen.add(t.fn)
                out.append(t.fn)
            for a in t.args:
                walk(a)
        elif isinstance(t, LambdaApp):
            walk(t.body)
            for a in t.args:
                walk(a)

    walk(term)
    return out


def term_to_sexpr(term):
    """Raw display of a core term (what ``:trans`` prints)."""
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Quote):
        return lisp_list([QUOTE, term.value])
    if isinstance(term, App):
        return lisp_list([term.fn, *map(term_to_sexpr, term.args)])
    lam = lisp_list([LAMBDA, lisp_list(term.params), term_to_sexpr(term.body)])
    return lisp_list([lam, *map(term_to_sexpr, term.args)])


def _const_symbol(sym: Sym) -> bool:
    return len(sym.name) > 2 and sym.name[0] == "*" and sym.name[-1] == "*"


def translate(world, form, *, arities=None, unknown_ok=False):
    """Expand macros and check arities, producing a core term.

    ``world`` supplies ``arity(sym)`` and ``constant(sym)`` (it may be None).
    ``arities`` adds extra known functions, e.g. a defun's own name while its
    body is translated.  With ``unknown_ok`` unknown heads are accepted at
    whatever arity they are used.
    """
    extra = arities or {}

    def arity_of(fn):
        if fn in extra:
            return extra[fn]
        if fn in BUILTIN_ARITY:
            return BUILTIN_ARITY[fn]
        return world.arity(fn) if world is not None else None

    def tr(x):
        if isinstance(x, int):
            return Quote(x)
        if isinstance(x, Sym):
            if self_evaluating(x):
                return Quote(x)
            if _const_symbol(x):
                value = world.constant(x) if world is not None else None
                if value is None:
                    raise TranslateError(f"unknown constant {x.name}")
                return Quote(value)
            return Var(x)
        args = to_list(x.cdr, "argument list")
        head = x.car
        if isinstance(head, Pair):
            return tr_lambda(head, args)
        if not isinstance(head, Sym):
            raise TranslateError(f"illegal function position in {show(x)}")
        if head is QUOTE:
            if len(args) != 1:
                raise TranslateError(f"QUOTE takes one argument: {show(x)}")
            return Quote(args[0])
        if head is IF:
            if len(args) != 3:
                raise TranslateError(f"IF takes 3 arguments: {show(x)}")
            return App(IF, tuple(map(tr, args)))
        if head in MACROS:
            return tr(expand_macro(head, args))
        if head is LAMBDA:
            raise TranslateError(f"unapplied lambda {show(x)}")
        n = arity_of(head)
        if n is None:
            if not unknown_ok:
                raise TranslateError(f"unknown function {head.name} in {show(x)}")
        elif n != len(args):
            raise TranslateError(
                f"{head.name} takes {n} argument(s) but is given {len(args)} in {show(x)}")
        return App(head, tuple(map(tr, args)))

    def tr_lambda(lam, args):
        parts = to_list(lam, "lambda")
        if len(parts) != 3 or parts[0] is not LAMBDA:
            raise TranslateError(f"malformed lambda {show(lam)}")
        params = tuple(to_list(parts[1], "lambda parameter list"))
        check_formals(params, "lambda")
        if len(params) != len(args):
            raise TranslateError(
                f"lambda {show(lam)} takes {len(params)} argument(s), given {len(args)}")
        body = tr(parts[2])
        loose = [v for v in free_vars(body) if v not in params]
        if loose:
            raise TranslateError(
                f"lambda body mentions free variable(s) {show(lisp_list(loose))} "
                f"not among its parameters")
        return LambdaApp(params, body, tuple(map(tr, args)))

    return tr(form)


def check_formals(params, what="function"):
    for p in params:
        if not isinstance(p, Sym) or self_evaluating(p) or _const_symbol(p):
            raise TranslateError(f"illegal {what} parameter {show(p)}")
    if len(set(params)) != len(params):
        raise TranslateError(f"duplicate {what} parameters {show(lisp_list(params))}")


def expand_macro(head, args):
    """One step of expansion for AND, OR, COND and LIST."""
    if head is AND:
        if not args:
            return T
        if len(args) == 1:
            return args[0]
        return lisp_list([IF, args[0], lisp_list([AND, *args[1:]]), lisp_list([QUOTE, NIL])])
    if head is OR:
        if not args:
            return NIL
        if len(args) == 1:
            return args[0]
        return lisp_list([IF, args[0], args[0], lisp_list([OR, *args[1:]])])
    if head is LIST:
        if not args:
            return NIL
        return lisp_list([CONS, args[0], lisp_list([LIST, *args[1:]])])
    # COND
    if not args:
        return NIL
    clause = to_list(args[0], "COND clause")
    rest = lisp_list([COND, *args[1:]])
    if len(clause) == 1:
        return lisp_list([OR, clause[0], rest])
    if len(clause) != 2:
        raise TranslateError(f"COND clause must have one or two elements: {show(args[0])}")
    if clause[0] is T:
        return clause[1]
    return lisp_list([IF, clause[0], clause[1], rest])


def untranslate(term):
    """Display form: ``(IF a b 'NIL)`` becomes AND, ``(IF a a b)`` becomes OR."""
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Quote):
        if self_evaluating(term.value):
            return term.value
        return lisp_list([QUOTE, term.value])
    if isinstance(term, LambdaApp):
        lam = lisp_list([LAMBDA, lisp_list(term.params), untranslate(term.body)])
        return lisp_list([lam, *map(untranslate, term.args)])
    if term.fn is IF and len(term.args) == 3:
        c, a, b = term.args
        if b == QNIL:
            parts = [c]
            while isinstance(a, App) and a.fn is IF and a.args[2] == QNIL:
                parts.append(a.args[0])
                a = a.args[1]
            parts.append(a)
            return lisp_list([AND, *map(untranslate, parts)])
        if c == a:
            parts = [c]
            while isinstance(b, App) and b.fn is IF and b.args[0] == b.args[1]:
                parts.append(b.args[0])
                b = b.args[2]
            parts.append(b)
            return lisp_list([OR, *map(untranslate, parts)])
    return lisp_list([term.fn, *map(untranslate, term.args)])
