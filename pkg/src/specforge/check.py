"""Bounded-exhaustive checking of universally quantified formulas.

A Pass means no counterexample exists over the finite universe; it is
evidence, not proof.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import syntax as sx
from .errors import EvalError, ObligationError
from .evaluator import DEFAULT_FUEL, Machine, compile_term
from .syntax import NIL, App, LambdaApp, Quote, Var


@dataclass(frozen=True)
class Universe:
    values: tuple
    fuel: int = DEFAULT_FUEL

    def __post_init__(self):
        if not self.values:
            raise ValueError("universe must be non-empty")
        if len(set(self.values)) != len(self.values):
            raise ValueError("universe values must be distinct")
        if self.fuel <= 0:
            raise ValueError("fuel must be positive")

    def with_fuel(self, fuel):
        return Universe(self.values, fuel)


DEFAULT_UNIVERSE = Universe(tuple(sx.read(
    "NIL T A B 0 1 2 -1 (A) (A B) (0 1) (A . B)")))


class Verdict:
    pass


@dataclass(frozen=True)
class Pass(Verdict):
    def __str__(self):
        return "PASS"


@dataclass(frozen=True)
class Fail(Verdict):
    binding: dict

    def describe(self):
        if not self.binding:
            return "(no free variables)"
        return ", ".join(f"{k.name}={sx.show(v)}" for k, v in self.binding.items())

    def __str__(self):
        return f"FAIL {self.describe()}"


@dataclass(frozen=True)
class Unknown(Verdict):
    reason: str

    def __str__(self):
        return f"UNKNOWN ({self.reason})"


def reaches_abstract(world, term, fnbind=None) -> bool:
    """Does evaluating ``term`` possibly call an unbound abstract function?"""
    fnbind = fnbind or {}
    seen = set()
    todo = list(sx.called_fns(term))
    while todo:
        fn = todo.pop()
        if fn in seen:
            continue
        seen.add(fn)
        info = world.function(fn)
        if info is None:
            continue
        if info.abstract:
            target = fnbind.get(fn)
            if target is None:
                return True
            todo.extend([target] if isinstance(target, sx.Sym) else sx.called_fns(target.body))
        else:
            todo.extend(sx.called_fns(info.body))
    return False


def check_formula(world, formula, universe=None) -> Verdict:
    """Evaluate ``formula`` under every assignment of universe values.

    Variables are enumerated alphabetically; the last variable varies fastest.
    """
    universe = universe or DEFAULT_UNIVERSE
    if reaches_abstract(world, formula):
        return Unknown("abstract-function")
    variables = sorted(sx.free_vars(formula))
    code = compile_term(formula)
    for values in itertools.product(universe.values, repeat=len(variables)):
        env = dict(zip(variables, values))
        try:
            result = code(dict(env), Machine(world, universe.fuel))
        except RecursionError:
            return Unknown("fuel-exhausted")
        except EvalError as e:
            return Unknown(e.reason)
        if result is NIL:
            return Fail(env)
    return Pass()


# ---------------------------------------------------------------------------
# alpha matching

def alpha_match(a, b) -> bool:
    """Equal up to a consistent bijective renaming of free variables."""
    fwd, back = {}, {}

    def walk(x, y, bound):
        if type(x) is not type(y):
            return False
        if isinstance(x, Var):
            if x.name in bound or y.name in bound:
                return x.name is y.name
            if fwd.setdefault(x.name, y.name) is not y.name:
                return False
            return back.setdefault(y.name, x.name) is x.name
        if isinstance(x, Quote):
            return x.value == y.value
        if isinstance(x, App):
            return (x.fn is y.fn and len(x.args) == len(y.args)
                    and all(walk(p, q, bound) for p, q in zip(x.args, y.args)))
        if isinstance(x, LambdaApp):
            return (x.params == y.params and len(x.args) == len(y.args)
                    and walk(x.body, y.body, frozenset(x.params))
                    and all(walk(p, q, bound) for p, q in zip(x.args, y.args)))
        return False

    return walk(a, b, frozenset())


BY_THEOREM = "BY-THEOREM"
BY_CHECK = "BY-CHECK"
ASSUMED = "ASSUMED"


@dataclass(frozen=True)
class Discharge:
    obligation: object
    method: str
    detail: str = ""

    def __str__(self):
        text = sx.show(sx.untranslate(self.obligation))
        return f"{self.method}{' ' + self.detail if self.detail else ''}: {text}"


def discharge(world, obligations, universe=None, *, assume=False) -> list:
    """Discharge each obligation by a matching theorem or by bounded checking.

    Returns one Discharge record per obligation; raises ObligationError on the
    first obligation neither method settles (unless ``assume``).
    """
    universe = universe or DEFAULT_UNIVERSE
    theorems = world.theorems()
    out = []
    for ob in obligations:
        match = next((t for t in theorems if alpha_match(t.formula, ob)), None)
        if match is not None:
            out.append(Discharge(ob, BY_THEOREM, match.name.name))
            continue
        verdict = check_formula(world, ob, universe)
        if isinstance(verdict, Pass):
            out.append(Discharge(ob, BY_CHECK, "PASS"))
            continue
        if assume:
            out.append(Discharge(ob, ASSUMED, str(verdict)))
            continue
        text = sx.show(sx.untranslate(ob))
        cex = verdict.binding if isinstance(verdict, Fail) else None
        raise ObligationError(
            f"cannot discharge obligation {text}: no matching theorem; "
            f"{BY_CHECK} gave {verdict}", obligation=ob, counterexample=cex)
    return out


def is_executable(world, term) -> bool:
    return not reaches_abstract(world, term)

