"""Abstract specifications: admission with hidden witnesses, constraints, is-a."""

from __future__ import annotations

from . import syntax as sx
from .check import Fail, check_formula
from .errors import AdmissionError, SubstitutionError
from .subst import FnSubst, LambdaTarget, SKIP, replacefns
from .syntax import Sym
from .world import DefSpec, DefThm, Signature, parse_defthm, parse_defun

LOCAL = Sym("LOCAL")
DEFUN = Sym("DEFUN")
DEFTHM = Sym("DEFTHM")
IS_A = Sym("IS-A")


def prefixed(prefix: Sym, name: Sym) -> Sym:
    return Sym(f"{prefix.name}-{name.name}")


def parse_signatures(form) -> tuple:
    """``((fn (x y) t) ...)``"""
    sigs = []
    for item in sx.to_list(form, "signature list"):
        parts = sx.to_list(item, "signature")
        if len(parts) != 3 or not isinstance(parts[0], Sym):
            raise AdmissionError(f"malformed signature {sx.show(item)}")
        formals = tuple(sx.to_list(parts[1], "signature formals"))
        sx.check_formals(formals, "signature")
        if parts[2] is not sx.T:
            raise AdmissionError(f"signature output must be T: {sx.show(item)}")
        sigs.append(Signature(parts[0], formals))
    return tuple(sigs)


def admit_defspec(world, name, signatures, body_forms, *, universe=None, assume=False,
                  read_rename=None):
    """Admit a defspec.

    Local witnesses are admitted only in a scratch world, where the exported
    theorems are bounded-checked against them.  The visible world receives the
    abstract signatures and the exported theorems, never the witness bodies.
    ``read_rename(scratch_world, form)`` evaluates is-a rename arguments.
    """
    sig_names = [s.fn for s in signatures]
    if len(set(sig_names)) != len(sig_names):
        raise AdmissionError(f"defspec {name.name} declares a function twice")
    for fn in [name] + sig_names:
        world._check_fresh(fn)
    by_name = {s.fn: s for s in signatures}
    scratch = world
    local, exported, witnessed = [], [], set()
    visible = set(sig_names)

    def export(thm):
        nonlocal scratch
        hidden = [fn for fn in sx.called_fns(thm.formula)
                  if fn not in visible and fn not in sx.BUILTIN_ARITY
                  and fn is not sx.IF and world.function(fn) is None]
        if hidden:
            raise AdmissionError(
                f"exported theorem {thm.name.name} mentions local function(s) "
                f"{sx.show(sx.lisp_list(hidden))}")
        if not assume:
            verdict = check_formula(scratch, thm.formula, universe)
            if isinstance(verdict, Fail):
                raise AdmissionError(
                    f"exported theorem {thm.name.name} of {name.name} fails against the "
                    f"witnesses: counterexample {verdict.describe()}",
                    counterexample=verdict.binding)
        scratch = scratch.admit(thm, assume=True)
        exported.append(thm)

    for form in body_forms:
        head = form.car if isinstance(form, sx.Pair) else None
        if head is LOCAL:
            inner = sx.to_list(form, "local")
            if len(inner) != 2 or not isinstance(inner[1], sx.Pair) or inner[1].car is not DEFUN:
                raise AdmissionError(f"only local defuns are supported: {sx.show(form)}")
            ev = parse_defun(scratch, inner[1])
            sig = by_name.get(ev.name)
            if sig is not None:
                if len(sig.formals) != len(ev.formals):
                    raise AdmissionError(
                        f"witness {ev.name.name} takes {len(ev.formals)} argument(s) but "
                        f"the signature declares {len(sig.formals)}")
                witnessed.add(ev.name)
            scratch = scratch.admit(ev)
            local.append(ev)
        elif head is DEFTHM:
            export(parse_defthm(scratch, form))
        elif head is IS_A:
            parts = sx.to_list(form, "is-a")
            if len(parts) not in (4, 5):
                raise AdmissionError(f"malformed is-a {sx.show(form)}")
            rename = FnSubst()
            if len(parts) == 5:
                rename = read_rename(scratch, parts[4])
            for thm in is_a_expand(scratch, parts[1], parts[2], parts[3], rename):
                export(thm)
        else:
            raise AdmissionError(
                f"defspec body may contain only local defuns, defthms and is-a: {sx.show(form)}")
    missing = [fn for fn in sig_names if fn not in witnessed]
    if missing:
        raise AdmissionError(
            f"defspec {name.name} has no local witness for {sx.show(sx.lisp_list(missing))}")
    event = DefSpec(name, tuple(signatures), tuple(local), tuple(exported))
    return world.admit(event, universe=universe, assume=True)


def spec_functions(world, spec) -> list:
    return [s.fn for s in world.spec(spec).signatures]


def constraints_of(world, spec) -> list:
    """Exported theorem formulas of ``spec``, in declaration order."""
    return [world.theorem(t.name).formula for t in world.spec(spec).exported]


def complete_spec_renaming(world, spec, prefix, rename) -> FnSubst:
    """Map every function of ``spec``: explicit entries first, else PREFIX-NAME."""
    entries = []
    for sig in world.spec(spec).signatures:
        target = rename.get(sig.fn) if rename is not None else None
        if target is None:
            target = prefixed(prefix, sig.fn)
        if target is SKIP:
            raise SubstitutionError(f"spec function {sig.fn.name} cannot be skipped")
        entries.append((sig.fn, target))
    return FnSubst(entries)


def is_a_expand(world, spec, prefix, base_name, rename=None) -> list:
    """Restate each constraint of ``spec`` over the enclosing spec's functions."""
    subst = complete_spec_renaming(world, spec, prefix, rename)
    for fn, target in subst:
        if isinstance(target, LambdaTarget):
            raise SubstitutionError(
                f"is-a cannot map {fn.name} to a lambda; mixed is-a substitutions are "
                f"not supported")
        want = len(world.formals_of(fn))
        have = world.arity(target)
        if have is None:
            have = sx.BUILTIN_ARITY.get(target)
        if have is None:
            raise SubstitutionError(
                f"is-a {spec.name}: {fn.name} maps to undefined function {target.name}")
        if have != want:
            raise SubstitutionError(
                f"is-a {spec.name}: {target.name} takes {have} argument(s), "
                f"{fn.name} takes {want}")
    constraints = constraints_of(world, spec)
    formulas = replacefns(subst, constraints)
    return [DefThm(Sym(f"{base_name.name}-{i}"), f) for i, f in enumerate(formulas)]
