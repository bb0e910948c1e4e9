"""Event processing shared by the batch loader and the REPL."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import syntax as sx
from .analyze import dep_graph_dot, derived_funs, derived_thms
from .check import DEFAULT_UNIVERSE, Fail, Universe, check_formula
from .errors import AdmissionError, CopyFunError, ParseError, SpecforgeError, TranslateError
from .evaluator import DEFAULT_FUEL, evaluate
from .instantiate import copied_segment, instance_of_defspec
from .spec import admit_defspec, parse_signatures, spec_functions
from .subst import FnSubst, parse_rename, replacefns
from .syntax import Sym
from .world import (DefConst, World, parse_defthm, parse_defun, rule_classes_sexpr)

PROMPT = "specforge !> "

DEFUN = Sym("DEFUN")
DEFTHM = Sym("DEFTHM")
DEFCONST = Sym("DEFCONST")
DEFSPEC = Sym("DEFSPEC")
INSTANCE_OF_DEFSPEC = Sym("INSTANCE-OF-DEFSPEC")
IS_A = Sym("IS-A")
SET_UNIVERSE = Sym("SET-UNIVERSE")
REWRITE = Sym(":REWRITE")


def corpus_text(name: str) -> str:
    return resources.files("specforge").joinpath("corpus", name).read_text(encoding="utf-8")


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("specforge").joinpath("corpus", name)))


@functools.lru_cache(maxsize=None)
def base_world() -> World:
    """The prelude world: the BINARY defspec and FOLDR, FOLDR1, FOLDL."""
    session = Session(World())
    session.load_text(corpus_text("prelude.gsl"))
    return session.world


class LoadError(SpecforgeError):
    def __init__(self, message, line=None, col=None, counterexample=None, cause=None):
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.col = col
        self.counterexample = counterexample
        self.cause = cause


@dataclass
class Session:
    """A world threaded through a sequence of events and commands."""

    world: World = None
    universe: Universe = DEFAULT_UNIVERSE
    paranoid: bool = False
    assume: bool = False
    fuel: int = DEFAULT_FUEL
    report: list = field(default_factory=list)

    def __post_init__(self):
        if self.world is None:
            self.world = base_world()
        if self.fuel != self.universe.fuel:
            self.universe = self.universe.with_fuel(self.fuel)

    # -- events -------------------------------------------------------------

    def load_text(self, text: str) -> list:
        """Admit every form of ``text`` in order; returns the report lines."""
        start = len(self.report)
        for form, line, col in sx.read_located(text):
            try:
                self.submit(form)
            except SpecforgeError as e:
                message = f"Error in COPYFUN: {e}" if isinstance(e, CopyFunError) else str(e)
                raise LoadError(message, line, col,
                                getattr(e, "counterexample", None), e) from e
        return self.report[start:]

    def load(self, path) -> list:
        return self.load_text(Path(path).read_text(encoding="utf-8"))

    def submit(self, form) -> str:
        """Process one event or bare expression and return its report line."""
        head = form.car if isinstance(form, sx.Pair) else None
        handler = {
            DEFUN: self._defun,
            DEFTHM: self._defthm,
            DEFCONST: self._defconst,
            DEFSPEC: self._defspec,
            INSTANCE_OF_DEFSPEC: self._instance,
            SET_UNIVERSE: self._set_universe,
            IS_A: self._stray_is_a,
        }.get(head, self._expression)
        line = handler(form)
        self.report.append(line)
        return line

    def _defun(self, form):
        ev = parse_defun(self.world, form)
        self.world = self.world.admit(ev, universe=self.universe)
        return f"DEFUN {ev.name.name}: admitted"

    def _defthm(self, form):
        ev = parse_defthm(self.world, form)
        if self.assume:
            self.world = self.world.admit(ev, assume=True)
            return f"DEFTHM {ev.name.name}: admitted (assumed)"
        verdict = check_formula(self.world, ev.formula, self.universe)
        if isinstance(verdict, Fail):
            raise AdmissionError(
                f"theorem {ev.name.name} fails bounded check: counterexample "
                f"{verdict.describe()}", counterexample=verdict.binding)
        self.world = self.world.admit(ev, assume=True)
        return f"DEFTHM {ev.name.name}: admitted (check {verdict})"

    def _defconst(self, form):
        parts = sx.to_list(form, "defconst")
        if len(parts) != 3 or not isinstance(parts[1], Sym):
            raise TranslateError(f"malformed defconst {sx.show(form)}")
        value = evaluate(self.world, sx.translate(self.world, parts[2]), fuel=self.fuel)
        self.world = self.world.admit(DefConst(parts[1], value))
        return f"DEFCONST {parts[1].name}: admitted"

    def read_rename(self, world, form) -> FnSubst:
        value = evaluate(world, sx.translate(world, form), fuel=self.fuel)
        return parse_rename(world, value)

    def _defspec(self, form):
        parts = sx.to_list(form, "defspec")
        if len(parts) < 3 or not isinstance(parts[1], Sym):
            raise TranslateError(f"malformed defspec {sx.show(form)}")
        name = parts[1]
        sigs = parse_signatures(parts[2])
        self.world = admit_defspec(self.world, name, sigs, parts[3:],
                                   universe=self.universe, assume=self.assume,
                                   read_rename=self.read_rename)
        exported = [t.name.name for t in self.world.spec(name).exported]
        return (f"DEFSPEC {name.name}: admitted; signatures "
                f"({' '.join(s.fn.name for s in sigs)}); exported ({' '.join(exported)})")

    def _instance(self, form):
        parts = sx.to_list(form, "instance-of-defspec")
        if len(parts) not in (3, 4) or not all(isinstance(p, Sym) for p in parts[1:3]):
            raise TranslateError(f"malformed instance-of-defspec {sx.show(form)}")
        spec, prefix = parts[1], parts[2]
        rename = self.read_rename(self.world, parts[3]) if len(parts) == 4 else FnSubst()
        before = self.world
        self.world = instance_of_defspec(before, spec, prefix, rename,
                                         universe=self.universe, paranoid=self.paranoid,
                                         assume=self.assume)
        inst, funs, thms = copied_segment(before, self.world)
        lines = [f"INSTANCE-OF-DEFSPEC {spec.name} {prefix.name}: instance {inst.name.name}"]
        for m in inst.methods:
            lines.append(f"  obligation {m}")
        lines.append(f"  functions ({' '.join(f.name.name for f in funs)})")
        lines.append(f"  theorems ({' '.join(t.name.name for t in thms)})")
        if self.paranoid:
            for t in thms:
                lines.append(f"  {t.name.name}: {t.justification.check}")
        return "\n".join(lines)

    def _set_universe(self, form):
        parts = sx.to_list(form, "set-universe")
        if len(parts) != 2:
            raise TranslateError("set-universe takes one list of values")
        values = parts[1]
        if isinstance(values, sx.Pair) and values.car is sx.QUOTE:
            values = values.cdr.car
        try:
            self.universe = Universe(tuple(sx.to_list(values, "universe")), self.fuel)
        except ValueError as e:
            raise TranslateError(str(e)) from None
        return f"SET-UNIVERSE: {len(self.universe.values)} values"

    def _stray_is_a(self, form):
        raise AdmissionError("is-a may only appear inside a defspec")

    def _expression(self, form):
        term = sx.translate(self.world, form)
        return sx.show(evaluate(self.world, term, fuel=self.fuel))

    # -- colon commands -----------------------------------------------------

    def execute(self, text: str) -> str:
        """One REPL input: a colon command, an event, or an expression."""
        stripped = text.strip()
        if not stripped:
            return ""
        if stripped.startswith(":"):
            cmd, _, rest = stripped.partition(" ")
            return self.command(cmd.upper(), rest.strip())
        return "\n".join(self.submit(f) for f in sx.read(stripped))

    def command(self, cmd: str, rest: str) -> str:
        if cmd == ":PF":
            return self.pf(sx.read_one(rest))
        if cmd == ":TRANS":
            term = sx.translate(self.world, sx.read_one(rest))
            return sx.show(sx.term_to_sexpr(term))
        if cmd == ":REPLACEFNS":
            pairs, terms = sx.read(rest)
            return self.replacefns_command(pairs, terms)
        if cmd == ":SYMBOL-LEMMAS":
            names = self.world.symbol_lemmas(sx.read_one(rest))
            return sx.show(sx.lisp_list(names))
        if cmd == ":DEPS":
            return self.deps(sx.read_one(rest))
        if cmd == ":DOT":
            spec_text, _, path = rest.partition(" ")
            spec = sx.read_one(spec_text)
            Path(path.strip()).write_text(
                dep_graph_dot(self.world, spec_functions(self.world, spec)))
            return f"wrote {path.strip()}"
        if cmd == ":WORLD":
            return self.world.dump()
        if cmd == ":HELP":
            return HELP
        raise SpecforgeError(f"unknown command {cmd}")

    def pf(self, name) -> str:
        if isinstance(name, sx.Pair):
            parts = sx.to_list(name)
            if len(parts) != 2 or parts[0] is not REWRITE:
                raise SpecforgeError(f"cannot print rune {sx.show(name)}")
            name = parts[1]
        if self.world.function(name) is not None:
            return sx.pretty(sx.untranslate(self.world.definition_rule(name)))
        formula, classes = self.world.theorem_of(name)
        return sx.pretty(sx.untranslate(formula))

    def replacefns_command(self, pairs, terms) -> str:
        subst = FnSubst((p[0], p[1]) for p in (sx.to_list(x) for x in sx.iter_list(pairs)))
        core = [sx.translate(self.world, t, unknown_ok=True) for t in sx.to_list(terms)]
        out = replacefns(subst, core)
        return sx.show(sx.lisp_list([sx.term_to_sexpr(t) for t in out]))

    def deps(self, spec) -> str:
        roots = spec_functions(self.world, spec)
        funs = derived_funs(self.world, roots)
        thms = derived_thms(self.world, roots + funs)
        return (f"functions {sx.show(sx.lisp_list(funs))}\n"
                f"theorems {sx.show(sx.lisp_list(thms))}")

    def classes_of(self, name) -> str:
        return sx.show(rule_classes_sexpr(self.world.theorem_of(name)[1]))


HELP = """\
:pf NAME               print a theorem, or the defining equation of a function
:trans FORM            print the macro-free translation of FORM
:replacefns PAIRS TERMS  rename function symbols in TERMS
:symbol-lemmas SYM     theorems mentioning SYM
:deps SPEC             functions and theorems derived from SPEC
:dot SPEC FILE         write the dependency graph of SPEC as DOT
:world                 list the admitted events
:q                     quit"""


def repl_command(session: Session, text: str) -> str:
    """Run one REPL input, reporting errors instead of raising."""
    try:
        return session.execute(text)
    except ParseError as e:
        return f"Parse error: {e}"
    except SpecforgeError as e:
        return f"Error: {e}"
