"""Discovery of the functions and theorems an instantiation has to copy."""

from __future__ import annotations

from . import syntax as sx
from .world import DefThm, DefUn


def _defuns(world, upto):
    return [ev for ev in world.events[:upto + 1] if isinstance(ev, DefUn)]


def derived_funs(world, roots, upto=None) -> list:
    """Definitions at or before ``upto`` that transitively call a root.

    Repeats passes over the world until the discovered set stops growing.
    """
    upto = len(world.events) - 1 if upto is None else upto
    roots = set(roots)
    found = set()
    defuns = _defuns(world, upto)
    grew = True
    while grew:
        grew = False
        for ev in defuns:
            if ev.name in found or ev.name in roots:
                continue
            if any(fn in roots or fn in found for fn in sx.called_fns(ev.body)
                   if fn is not ev.name):
                found.add(ev.name)
                grew = True
    return [ev.name for ev in defuns if ev.name in found]


def theorem_fns(thm) -> set:
    fns = set(sx.called_fns(thm.formula))
    for rc in thm.classes:
        for t in rc.terms():
            fns.update(sx.called_fns(t))
    return fns


def derived_thms(world, fns, upto=None) -> list:
    """Theorems at or before ``upto`` whose formula or rule classes call any of ``fns``."""
    upto = len(world.events) - 1 if upto is None else upto
    fns = set(fns)
    return [ev.name for ev in world.events[:upto + 1]
            if isinstance(ev, DefThm) and theorem_fns(ev) & fns]


def dependency_edges(world, roots, upto=None) -> tuple:
    """Caller -> callee edges among ``roots`` and their derived functions."""
    nodes = list(roots) + derived_funs(world, roots, upto)
    members = set(nodes)
    edges = []
    for name in nodes:
        info = world.function(name)
        if info is None or info.abstract:
            continue
        for callee in sx.called_fns(info.body):
            if callee in members:
                edges.append((name, callee))
    return nodes, edges


def _quote(sym):
    return '"' + sym.name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dep_graph_dot(world, roots, upto=None, name="deps") -> str:
    nodes, edges = dependency_edges(world, roots, upto)
    lines = [f"digraph {name} {{"]
    root_set = set(roots)
    for n in nodes:
        shape = "box" if n in root_set else "ellipse"
        lines.append(f"  {_quote(n)} [shape={shape}];")
    for a, b in edges:
        lines.append(f"  {_quote(a)} -> {_quote(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
