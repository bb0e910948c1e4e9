"""Functional substitution on core terms.

Only function-head positions are rewritten; variables live in a separate
namespace and are never touched.  Lambda targets let a substituted function
take extra arguments, which become trailing formals of each copied caller.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import syntax as sx
from .errors import CopyFunError, SubstitutionError
from .syntax import App, LambdaApp, Quote, Sym, Var
from .world import DefUn


@dataclass(frozen=True)
class LambdaTarget:
    params: tuple
    body: object

    def extra_vars(self) -> list:
        return [v for v in sx.free_vars(self.body) if v not in self.params]

    def to_sexpr(self):
        return sx.lisp_list([sx.LAMBDA, sx.lisp_list(self.params), sx.untranslate(self.body)])

    def __repr__(self):
        return sx.show(self.to_sexpr())


class _Skip:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = object.__new__(cls)
        return cls._instance

    def __repr__(self):
        return "SKIP"


SKIP = _Skip()


class FnSubst:
    """Ordered map from old function/theorem names to targets.

    A target is a ``Sym``, a ``LambdaTarget``, or ``SKIP``.
    """

    def __init__(self, entries=()):
        entries = tuple(entries)
        self._map = {}
        for old, target in entries:
            if old in self._map:
                raise SubstitutionError(f"{old.name} is mapped twice")
            if not (isinstance(target, (Sym, LambdaTarget)) or target is SKIP):
                raise SubstitutionError(f"bad target for {old.name}: {target!r}")
            self._map[old] = target
        self.entries = entries

    def __contains__(self, name):
        return name in self._map

    def __getitem__(self, name):
        return self._map[name]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return isinstance(other, FnSubst) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def get(self, name, default=None):
        return self._map.get(name, default)

    def names(self) -> list:
        return [old for old, _ in self.entries]

    def updated(self, old, target) -> "FnSubst":
        if old not in self._map:
            return FnSubst(self.entries + ((old, target),))
        return FnSubst((o, target if o is old else t) for o, t in self.entries)

    def to_sexpr(self):
        items = []
        for old, target in self.entries:
            if target is SKIP:
                items.append(sx.lisp_list([old]))
            elif isinstance(target, LambdaTarget):
                items.append(sx.lisp_list([old, target.to_sexpr()]))
            else:
                items.append(sx.lisp_list([old, target]))
        return sx.lisp_list(items)

    def __repr__(self):
        return f"FnSubst({sx.show(self.to_sexpr())})"


def parse_rename(world, value) -> FnSubst:
    """Read a rename list: ``(old new)``, ``(old)`` or ``(old (lambda params body))``."""
    entries = []
    for item in sx.to_list(value, "rename list"):
        parts = sx.to_list(item, "rename entry") if isinstance(item, sx.Pair) else None
        if not parts or not isinstance(parts[0], Sym) or len(parts) > 2:
            raise SubstitutionError(f"malformed rename entry {sx.show(item)}")
        old = parts[0]
        if len(parts) == 1:
            entries.append((old, SKIP))
            continue
        target = parts[1]
        if isinstance(target, Sym):
            entries.append((old, target))
            continue
        lam = sx.to_list(target, "lambda")
        if len(lam) != 3 or lam[0] is not sx.LAMBDA:
            raise SubstitutionError(f"malformed rename target {sx.show(target)}")
        params = tuple(sx.to_list(lam[1], "lambda parameter list"))
        sx.check_formals(params, "lambda")
        body = sx.translate(world, lam[2], unknown_ok=True)
        entries.append((old, LambdaTarget(params, body)))
    return FnSubst(entries)


# ---------------------------------------------------------------------------

def _rename_heads(term, mapping):
    if isinstance(term, App):
        fn = mapping.get(term.fn, term.fn)
        return App(fn, tuple(_rename_heads(a, mapping) for a in term.args))
    if isinstance(term, LambdaApp):
        return LambdaApp(term.params, _rename_heads(term.body, mapping),
                         tuple(_rename_heads(a, mapping) for a in term.args))
    return term


def replacefns(subst, terms) -> list:
    """Simultaneously rename function heads in ``terms`` (name targets only)."""
    mapping = {}
    for old, target in subst:
        if not isinstance(target, Sym):
            raise SubstitutionError(
                f"replacefns accepts name targets only; {old.name} maps to {target!r}")
        mapping[old] = target
    return [_rename_heads(t, mapping) for t in terms]


def validate_lambda(old_formals, target: LambdaTarget):
    if tuple(target.params) != tuple(old_formals):
        lam = sx.show(target.to_sexpr())
        raise CopyFunError(
            f"The lambda construct {lam} takes as input "
            f"{sx.show(sx.lisp_list(target.params))}, which should be an exact match "
            f"of the original arguments of the original function: "
            f"{sx.show(sx.lisp_list(old_formals))}")
    return True


def subst_vars(term, mapping):
    """Replace free variables; lambda bodies are closed and left alone."""
    if isinstance(term, Var):
        return mapping.get(term.name, term)
    if isinstance(term, App):
        return App(term.fn, tuple(subst_vars(a, mapping) for a in term.args))
    if isinstance(term, LambdaApp):
        return LambdaApp(term.params, term.body,
                         tuple(subst_vars(a, mapping) for a in term.args))
    return term


def lambda_extras(world, term, subst, skip=None) -> list:
    """Extra variables contributed by lambda targets called in ``term``."""
    out = []
    for fn in sx.called_fns(term):
        if fn is skip:
            continue
        target = subst.get(fn)
        if isinstance(target, LambdaTarget):
            for v in target.extra_vars():
                if v not in out:
                    out.append(v)
    return out


def apply_fnsubst(world, term, subst, self_call=None):
    """Apply ``subst`` to ``term``, inlining lambda targets.

    ``self_call`` is ``(old, new, extra_vars)``: calls to ``old`` become calls
    to ``new`` with the extra variables appended.
    """
    names = {o: t for o, t in subst if isinstance(t, Sym)}

    def inline(fn, target, args):
        validate_lambda(world.formals_of(fn), target)
        for g in sx.called_fns(target.body):
            inner = subst.get(g)
            if isinstance(inner, LambdaTarget):
                raise CopyFunError(
                    f"lambda target for {fn.name} calls {g.name}, which is itself "
                    f"replaced by a lambda; nested argument addition is not supported")
            if inner is SKIP:
                raise CopyFunError(f"{g.name} is marked skip but is called by a lambda target")
        body = _rename_heads(target.body, names)
        return subst_vars(body, dict(zip(target.params, args)))

    def walk(t):
        if isinstance(t, (Var, Quote)):
            return t
        if isinstance(t, LambdaApp):
            body = walk(t.body)
            args = tuple(walk(a) for a in t.args)
            loose = [v for v in sx.free_vars(body) if v not in t.params]
            if loose:
                # thread extra variables through the (closed) lambda
                return LambdaApp(t.params + tuple(loose), body,
                                 args + tuple(Var(v) for v in loose))
            return LambdaApp(t.params, body, args)
        args = tuple(walk(a) for a in t.args)
        if self_call is not None and t.fn is self_call[0]:
            return App(self_call[1], args + tuple(Var(v) for v in self_call[2]))
        target = subst.get(t.fn)
        if target is None:
            return App(t.fn, args)
        if isinstance(target, Sym):
            return App(target, args)
        if target is SKIP:
            raise CopyFunError(f"{t.fn.name} is marked skip but is a called function")
        return inline(t.fn, target, args)

    return walk(term)


def instantiate_formula(world, formula, subst):
    """Substitute into a theorem formula; lambda extras become free variables."""
    extras = lambda_extras(world, formula, subst)
    clash = [v for v in extras if v in sx.free_vars(formula)]
    if clash:
        raise CopyFunError(
            f"extra lambda variable(s) {sx.show(sx.lisp_list(clash))} clash with "
            f"variables of {sx.show(sx.untranslate(formula))}")
    return apply_fnsubst(world, formula, subst)


def _self_lambda(old, target):
    validate_lambda(old.formals, target)
    body = target.body
    n = len(old.formals)
    if (not isinstance(body, App) or len(body.args) < n
            or any(not (isinstance(a, Var) and a.name is f)
                   for a, f in zip(body.args, old.formals))):
        raise CopyFunError(
            f"lambda target {target!r} for {old.name.name} must call the new function "
            f"on {sx.show(sx.lisp_list(old.formals))} followed by extra variables")
    extra = body.args[n:]
    names = [a.name for a in extra if isinstance(a, Var)]
    if len(names) != len(extra) or len(set(names)) != len(names) \
            or any(v in old.formals for v in names):
        raise CopyFunError(
            f"lambda target {target!r} for {old.name.name} may only append distinct "
            f"fresh variables")
    return body.fn, names


def copy_function(world, old: DefUn, subst: FnSubst, new_name=None) -> DefUn:
    """Copy ``old`` under ``subst`` as a new definition.

    The copy's name comes from the entry for ``old`` (a name, or a lambda whose
    body calls the new function) or from ``new_name``.
    """
    target = subst.get(old.name)
    self_extras = None
    if isinstance(target, LambdaTarget):
        derived_name, self_extras = _self_lambda(old, target)
        if new_name is not None and new_name is not derived_name:
            raise CopyFunError(
                f"new name {new_name.name} disagrees with lambda target {target!r}")
        new_name = derived_name
    elif isinstance(target, Sym):
        new_name = new_name or target
    elif target is SKIP:
        raise CopyFunError(f"function {old.name.name} cannot be skipped")
    if new_name is None:
        raise CopyFunError(f"no new name for {old.name.name}")

    for fn in sx.called_fns(old.body):
        info = world.function(fn)
        if fn is not old.name and fn not in subst and info is not None and info.abstract:
            raise CopyFunError(
                f"{old.name.name} calls abstract function {fn.name}, which the "
                f"substitution does not map")

    extras = lambda_extras(world, old.body, subst, skip=old.name)
    if self_extras is not None:
        missing = [v for v in extras if v not in self_extras]
        if missing:
            raise CopyFunError(
                f"lambda target {target!r} for {old.name.name} does not pass "
                f"extra variable(s) {sx.show(sx.lisp_list(missing))}")
        extras = self_extras
    clash = [v for v in extras if v in old.formals]
    if clash:
        raise CopyFunError(
            f"extra lambda variable(s) {sx.show(sx.lisp_list(clash))} clash with the "
            f"formals {sx.show(sx.lisp_list(old.formals))} of {old.name.name}")
    body = apply_fnsubst(world, old.body, subst, self_call=(old.name, new_name, extras))
    return DefUn(new_name, old.formals + tuple(extras), body, old.doc)


def call_target(old_formals, new_name, extras):
    """Substitution target for callers of a copied function that gained formals."""
    if not extras:
        return new_name
    return LambdaTarget(tuple(old_formals),
                        App(new_name, tuple(Var(v) for v in (*old_formals, *extras))))
