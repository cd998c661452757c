"""Nominal subtyping over ground types.

``s`` is a subtype of ``t`` when they are the same type, when ``s`` is
``Null``, when ``t`` is ``Object``, or when repeatedly replacing the
head class by its substituted superclass starting from ``s`` reaches
``t``. Type arguments are invariant: ``C<s> <: C<t>`` needs ``s = t``.
The walk terminates because the extends relation is acyclic and each
step is determined by the head class alone.

The module also enumerates ground types up to a nesting depth and can
export the induced subtype graph as DOT text; the graph is an artifact
for inspection, the decision procedure itself never consults it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

from .classtable import ClassTable, superclass_of
from .errors import DfbError
from .syntax import App, NULL, OBJECT, TypeExpr, Var, render


class IllFormedType(DfbError):
    def __init__(self, t: TypeExpr, detail: str):
        super().__init__(f"ill-formed type {render(t)}: {detail}")
        self.type = t
        self.detail = detail


def well_formed(table: ClassTable, t: TypeExpr) -> bool:
    """True when ``t`` is ground with known heads at correct arities."""
    if isinstance(t, Var):
        return False
    if t.name not in table:
        return False
    if len(t.args) != table.arity(t.name):
        return False
    return all(well_formed(table, a) for a in t.args)


def require_well_formed(table: ClassTable, t: TypeExpr) -> None:
    if isinstance(t, Var):
        raise IllFormedType(t, "type variables are not ground")
    if t.name not in table:
        raise IllFormedType(t, f"unknown class {t.name}")
    expected = table.arity(t.name)
    if len(t.args) != expected:
        raise IllFormedType(
            t, f"class {t.name} expects {expected} argument(s), got {len(t.args)}"
        )
    for a in t.args:
        require_well_formed(table, a)


def superclass_chain(table: ClassTable, t: TypeExpr) -> Iterator[TypeExpr]:
    """Successive superclasses of ``t``, ending with Object; empty for Null."""
    assert isinstance(t, App)
    cur = t
    while cur.name not in ("Object", "Null"):
        cur = superclass_of(table, cur.name, cur.args)
        yield cur


def is_subtype(table: ClassTable, s: TypeExpr, t: TypeExpr) -> bool:
    require_well_formed(table, s)
    require_well_formed(table, t)
    if s == t:
        return True
    if s == NULL:
        return True
    if t == OBJECT:
        return True
    return any(sup == t for sup in superclass_chain(table, s))


def is_interval(table: ClassTable, a: TypeExpr, b: TypeExpr) -> bool:
    """Whether the interval notation ``a .. b`` denotes anything: ``a <: b``."""
    return is_subtype(table, a, b)


def enumerate_ground(table: ClassTable, depth: int) -> frozenset[TypeExpr]:
    """All ground types over ``table`` whose nesting depth is at most ``depth``.

    Nullary applications have depth 0; ``C<ts>`` has depth one more than
    its deepest argument. For a table of k unary classes the counts obey
    n(d+1) = 2 + k * n(d) with n(0) = 2, the 2 being Null and Object.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    base = {NULL, OBJECT}
    generic: list[tuple[str, int]] = []
    for name in table.names():
        arity = table.arity(name)
        if arity == 0:
            base.add(App(name))
        else:
            generic.append((name, arity))
    current: set[TypeExpr] = set(base)
    for _ in range(depth):
        grown = set(base)
        for name, arity in generic:
            for args in product(current, repeat=arity):
                grown.add(App(name, args))
        current = grown
    return frozenset(current)


@dataclass(frozen=True)
class GroundGraph:
    """The declared-subtype graph over an enumerated node set."""

    nodes: frozenset[TypeExpr]
    edges: frozenset[tuple[TypeExpr, TypeExpr]]


def ground_graph(table: ClassTable, depth: int) -> GroundGraph:
    """Edges: each node to its nearest enumerated superclass, Null to minimals.

    A direct superclass can exceed the depth budget (its rendering may
    nest deeper than the node itself), so each node links to the first
    type on its superclass chain that made it into the node set; Object
    always does. Reachability then matches ``is_subtype`` restricted to
    the nodes.
    """
    nodes = enumerate_ground(table, depth)
    edges: set[tuple[TypeExpr, TypeExpr]] = set()
    for t in nodes:
        if t == NULL or t == OBJECT:
            continue
        for sup in superclass_chain(table, t):
            if sup in nodes:
                edges.add((t, sup))
                break
    has_incoming = {dst for _, dst in edges}
    for t in nodes:
        if t != NULL and t not in has_incoming:
            edges.add((NULL, t))
    return GroundGraph(nodes, frozenset(edges))


def export_graph(table: ClassTable, depth: int) -> str:
    """Render the ground subtype graph as deterministic DOT text."""
    graph = ground_graph(table, depth)
    lines = ["digraph subtyping {"]
    for node in sorted(graph.nodes, key=render):
        lines.append(f'  "{render(node)}";')
    for src, dst in sorted(graph.edges, key=lambda e: (render(e[0]), render(e[1]))):
        lines.append(f'  "{render(src)}" -> "{render(dst)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
