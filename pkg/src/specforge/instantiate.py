"""The instance-of-defspec pipeline.

1. Build the substitution and discharge the instance obligations.
2. Copy every derived function, in world order.
3. Copy every derived theorem with a recorded justification.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import syntax as sx
from .analyze import derived_funs, derived_thms
from .check import DEFAULT_UNIVERSE, Fail, check_formula, discharge, is_executable
from .errors import AdmissionError, SubstitutionError
from .spec import complete_spec_renaming, constraints_of, prefixed, spec_functions
from .subst import (SKIP, FnSubst, LambdaTarget, _self_lambda, apply_fnsubst, call_target,
                    copy_function, instantiate_formula, validate_lambda)
from .syntax import App, Sym
from .world import DefThm, DefUn, Instance, RuleClass


@dataclass(frozen=True)
class Justification:
    """Why a copied theorem holds: functional instance of ``origin``."""
    origin: Sym
    subst: FnSubst
    obligation: Sym
    check: str = "NOT RE-CHECKED"


def _arity(world, fn):
    n = world.arity(fn)
    return sx.BUILTIN_ARITY.get(fn) if n is None else n


def _check_target_body(world, fn, body, new_fns):
    def walk(t):
        if isinstance(t, App):
            if t.fn is not sx.IF and t.fn not in new_fns:
                n = _arity(world, t.fn)
                if n is None:
                    raise SubstitutionError(
                        f"lambda target for {fn.name} calls undefined {t.fn.name}")
                if n != len(t.args):
                    raise SubstitutionError(
                        f"lambda target for {fn.name} calls {t.fn.name} with "
                        f"{len(t.args)} argument(s); it takes {n}")
            for x in t.args:
                walk(x)
        elif isinstance(t, sx.LambdaApp):
            walk(t.body)
            for x in t.args:
                walk(x)
    walk(body)


def build_substitution(world, spec, prefix, rename=None, upto=None) -> FnSubst:
    """Total substitution over spec functions, derived functions and derived theorems."""
    rename = rename or FnSubst()
    roots = spec_functions(world, spec)
    funs = derived_funs(world, roots, upto)
    thms = derived_thms(world, roots + funs, upto)

    spec_part = complete_spec_renaming(world, spec, prefix, rename)
    entries = list(spec_part)
    for fn, target in spec_part:
        want = len(world.formals_of(fn))
        if isinstance(target, LambdaTarget):
            validate_lambda(world.formals_of(fn), target)
            continue
        have = _arity(world, target)
        if have is None:
            raise SubstitutionError(
                f"{fn.name} maps to {target.name}, which is not defined")
        if have != want:
            raise SubstitutionError(
                f"{fn.name} takes {want} argument(s) but {target.name} takes {have}")

    fresh = set()

    def claim(name, old):
        if name in fresh or world.is_function(name) or name in world._pos \
                or name in sx.MACROS or name is sx.IF:
            raise SubstitutionError(
                f"target name {name.name} for {old.name} is already in use")
        fresh.add(name)

    new_fns = set()
    for fn in funs:
        target = rename.get(fn) or prefixed(prefix, fn)
        if target is SKIP:
            raise SubstitutionError(f"function {fn.name} cannot be skipped")
        if isinstance(target, LambdaTarget):
            old = world.function(fn)
            new_name, _ = _self_lambda(DefUn(fn, old.formals, old.body), target)
            claim(new_name, fn)
            new_fns.add(new_name)
        else:
            claim(target, fn)
            new_fns.add(target)
        entries.append((fn, target))
    for fn, target in entries[:len(spec_part)]:
        if isinstance(target, LambdaTarget):
            _check_target_body(world, fn, target.body, new_fns)
    for thm in thms:
        target = rename.get(thm) or prefixed(prefix, thm)
        if isinstance(target, LambdaTarget):
            raise SubstitutionError(f"theorem {thm.name} cannot map to a lambda")
        if target is not SKIP:
            claim(target, thm)
        entries.append((thm, target))
    return FnSubst(entries)


def definstance_obligations(world, spec, subst) -> list:
    """Constraints of ``spec`` restated over the instance functions."""
    fns = set(spec_functions(world, spec))
    spec_subst = FnSubst((o, t) for o, t in subst if o in fns)
    return [instantiate_formula(world, c, spec_subst) for c in constraints_of(world, spec)]


def _copy_classes(world, classes, subst):
    out = []
    for rc in classes:
        attrs = tuple((key, tuple(apply_fnsubst(world, t, subst) for t in terms))
                      for key, terms in rc.attributes)
        out.append(RuleClass(rc.kind, attrs))
    return tuple(out)


def instance_of_defspec(world, spec, prefix, rename=None, *, universe=None,
                        paranoid=False, assume=False):
    """Instantiate ``spec`` and everything derived from it; returns the new world."""
    universe = universe or DEFAULT_UNIVERSE
    world.spec(spec)
    upto = len(world.events) - 1
    subst = build_substitution(world, spec, prefix, rename, upto)
    roots = spec_functions(world, spec)
    funs = derived_funs(world, roots, upto)
    thms = derived_thms(world, roots + funs, upto)

    # (1) instance obligation
    obligations = definstance_obligations(world, spec, subst)
    methods = discharge(world, obligations, universe, assume=assume)
    instance_name = prefixed(prefix, spec)
    world = world.admit(Instance(spec, instance_name, subst, tuple(methods)))

    # (2) functions
    for fn in funs:
        info = world.function(fn)
        old = DefUn(fn, info.formals, info.body, info.doc)
        copy = copy_function(world, old, subst)
        world = world.admit(copy, universe=universe, assume=True)
        extras = copy.formals[len(old.formals):]
        if extras and isinstance(subst[fn], Sym):
            subst = subst.updated(fn, call_target(old.formals, copy.name, extras))

    # (3) theorems
    for name in thms:
        target = subst[name]
        if target is SKIP:
            continue
        thm = world.theorem(name)
        formula = instantiate_formula(world, thm.formula, subst)
        classes = _copy_classes(world, thm.classes, subst)
        verdict = "NOT RE-CHECKED"
        if paranoid and is_executable(world, formula):
            result = check_formula(world, formula, universe)
            if isinstance(result, Fail):
                raise AdmissionError(
                    f"paranoid check of {target.name} (copied from {name.name}) failed: "
                    f"counterexample {result.describe()}", counterexample=result.binding)
            verdict = "PARANOID " + str(result)
        just = Justification(name, subst, instance_name, verdict)
        world = world.admit(DefThm(target, formula, classes, just), assume=True)
    return world


def copied_segment(before, after):
    """Events added by an instantiation, split into (instance, defuns, defthms)."""
    new = after.events[len(before.events):]
    inst = next((e for e in new if isinstance(e, Instance)), None)
    return (inst, [e for e in new if isinstance(e, DefUn)],
            [e for e in new if isinstance(e, DefThm)])


def paranoid_verdicts(world):
    """Re-check every justified theorem whose functions are all executable."""
    out = []
    for thm in world.theorems():
        if thm.justification is None or not is_executable(world, thm.formula):
            continue
        out.append((thm.name, check_formula(world, thm.formula)))
    return out

