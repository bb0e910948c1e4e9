"""Fuel-bounded call-by-value interpreter for core terms.

Terms are compiled to nested Python closures once; defined-function bodies
cache their closure on the world's function record.
"""

from __future__ import annotations

from .errors import EvalError
from .syntax import BUILTIN_ARITY, IF, NIL, T, LambdaApp, Pair, Quote, Sym, Var

DEFAULT_FUEL = 10000


def _truth(b):
    return T if b else NIL


def _car(x):
    return x.car if isinstance(x, Pair) else NIL


def _cdr(x):
    return x.cdr if isinstance(x, Pair) else NIL


def _plus(a, b):
    # non-integers count as 0 (the host logic's completion of +)
    return (a if isinstance(a, int) else 0) + (b if isinstance(b, int) else 0)


def _member_equal(x, lst):
    while isinstance(lst, Pair):
        if lst.car == x:
            return lst
        lst = lst.cdr
    return NIL


BUILTINS = {
    Sym("CONS"): Pair,
    Sym("CAR"): _car,
    Sym("CDR"): _cdr,
    Sym("CONSP"): lambda x: _truth(isinstance(x, Pair)),
    Sym("ATOM"): lambda x: _truth(not isinstance(x, Pair)),
    Sym("ENDP"): lambda x: _truth(not isinstance(x, Pair)),
    Sym("NULL"): lambda x: _truth(x is NIL),
    Sym("NOT"): lambda x: _truth(x is NIL),
    Sym("EQUAL"): lambda x, y: _truth(x is y or (type(x) is type(y) and x == y)),
    Sym("IMPLIES"): lambda p, q: _truth(p is NIL or q is not NIL),
    Sym("INTEGERP"): lambda x: _truth(isinstance(x, int)),
    Sym("+"): _plus,
    Sym("MEMBER-EQUAL"): _member_equal,
}
assert set(BUILTINS) == set(BUILTIN_ARITY)


def compile_term(term):
    """Compile a core term into ``f(env, machine) -> value``."""
    if isinstance(term, Quote):
        value = term.value
        return lambda env, m: value
    if isinstance(term, Var):
        name = term.name

        def var(env, m):
            try:
                return env[name]
            except KeyError:
                raise EvalError(f"unbound variable {name.name}", "unbound-variable") from None
        return var
    if isinstance(term, LambdaApp):
        params = term.params
        body = compile_term(term.body)
        argfs = [compile_term(a) for a in term.args]
        return lambda env, m: body(dict(zip(params, [f(env, m) for f in argfs])), m)
    argfs = [compile_term(a) for a in term.args]
    fn = term.fn
    if fn is IF:
        c, a, b = argfs
        return lambda env, m: a(env, m) if c(env, m) is not NIL else b(env, m)
    impl = BUILTINS.get(fn)
    if impl is not None:
        if len(argfs) != BUILTIN_ARITY[fn]:
            raise EvalError(f"{fn.name} called with {len(argfs)} argument(s)", "arity")
        if len(argfs) == 1:
            (a,) = argfs
            return lambda env, m: impl(a(env, m))
        a, b = argfs
        return lambda env, m: impl(a(env, m), b(env, m))
    return lambda env, m: m.call(fn, [f(env, m) for f in argfs])


class Machine:
    """Per-evaluation state: remaining fuel and abstract-function redirections."""

    def __init__(self, world, fuel=DEFAULT_FUEL, fnbind=None, outer_env=None):
        self.world = world
        self.fuel = fuel
        self.fnbind = fnbind or {}
        self.outer_env = outer_env or {}
        self._lambdas = {}

    def call(self, name, args):
        impl = BUILTINS.get(name)
        if impl is not None:
            if len(args) != BUILTIN_ARITY[name]:
                raise EvalError(f"{name.name} called with {len(args)} argument(s)", "arity")
            return impl(*args)
        info = self.world.function(name) if self.world is not None else None
        if info is None:
            raise EvalError(f"undefined function {name.name}", "undefined-function")
        if len(args) != len(info.formals):
            raise EvalError(f"{name.name} called with {len(args)} argument(s)", "arity")
        if info.body is None:
            return self._call_abstract(name, args)
        self.fuel -= 1
        if self.fuel < 0:
            raise EvalError(f"fuel exhausted in {name.name}", "fuel-exhausted")
        code = info.compiled
        if code is None:
            code = info.compiled = compile_term(info.body)
        return code(dict(zip(info.formals, args)), self)

    def _call_abstract(self, name, args):
        target = self.fnbind.get(name)
        if target is None:
            raise EvalError(f"cannot evaluate abstract function {name.name}",
                            "abstract-function")
        if isinstance(target, Sym):
            return self.call(target, args)
        if len(target.params) != len(args):
            raise EvalError(f"binding for {name.name} takes {len(target.params)} argument(s)",
                            "arity")
        code = self._lambdas.get(id(target))
        if code is None:
            code = self._lambdas[id(target)] = (target, compile_term(target.body))
        env = dict(self.outer_env)
        env.update(zip(target.params, args))
        return code[1](env, self)

    def run(self, term, env):
        try:
            return compile_term(term)(dict(env), self)
        except RecursionError:
            raise EvalError("evaluation nested too deeply", "fuel-exhausted") from None


def evaluate(world, term, env=None, fuel=DEFAULT_FUEL):
    """Evaluate ``term`` under ``env``; abstract calls raise EvalError."""
    return Machine(world, fuel).run(term, env or {})


def eval_with_bindings(world, term, env, fnbind, fuel=DEFAULT_FUEL):
    """Evaluate with abstract functions redirected through ``fnbind``.

    ``fnbind`` maps abstract names to a function symbol or to a lambda target
    (anything with ``params`` and ``body``); a lambda's extra free variables
    are read from ``env``.
    """
    env = dict(env or {})
    return Machine(world, fuel, fnbind, env).run(term, env)


def eval_call(world, fn, args, fuel=DEFAULT_FUEL, fnbind=None, env=None):
    """Apply a named function to argument values."""
    m = Machine(world, fuel, fnbind, env)
    try:
        return m.call(fn, list(args))
    except RecursionError:
        raise EvalError("evaluation nested too deeply", "fuel-exhausted") from None

