"""Class tables: declaration collection, checking, and substitution.

The table closes a parsed program over the two built-in classes:
``Object`` (top, default superclass, no superclass of its own) and
``Null`` (bottom, never declarable, banned from extends clauses).

Bound expressions may mention the declared parameters and the declaring
class itself; classes may reference each other in any order. Only the
extends relation must be acyclic. Absent bounds normalize to ``Null``
(lower) and ``Object`` (upper), an absent extends clause to ``Object``.

A declaration whose parameter carries the same bound below and above,
with that bound mentioning the parameter, is accepted but flagged: by
antisymmetry any argument would have to equal a type that properly
contains it, so no finite argument can ever satisfy the class.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DfbError
from .syntax import (
    App,
    ClassDecl,
    NULL,
    OBJECT,
    Program,
    TypeExpr,
    Var,
    free_vars,
    render,
)

BUILTIN_CLASSES = ("Null", "Object")


class DuplicateClass(DfbError):
    def __init__(self, name: str):
        super().__init__(f"class {name} is already defined")
        self.name = name


class UnknownClass(DfbError):
    def __init__(self, name: str, site: str = ""):
        where = f" in {site}" if site else ""
        super().__init__(f"unknown class {name}{where}")
        self.name = name
        self.site = site


class ArityMismatch(DfbError):
    def __init__(self, name: str, expected: int, got: int, site: str = ""):
        where = f" in {site}" if site else ""
        super().__init__(
            f"class {name} expects {expected} type argument(s), got {got}{where}"
        )
        self.name = name
        self.expected = expected
        self.got = got
        self.site = site


class CircularInheritance(DfbError):
    def __init__(self, cycle: tuple[str, ...]):
        path = " -> ".join(cycle + (cycle[0],))
        super().__init__(f"circular inheritance: {path}")
        self.cycle = cycle


class UnboundVariable(DfbError):
    def __init__(self, name: str, site: str = ""):
        where = f" in {site}" if site else ""
        super().__init__(f"unbound type variable {name}{where}")
        self.name = name
        self.site = site


class InvalidExtends(DfbError):
    pass


class NoSuperclass(DfbError):
    def __init__(self, name: str):
        super().__init__(f"class {name} has no superclass")
        self.name = name


@dataclass(frozen=True)
class Diagnostic:
    """A non-fatal finding attached to a declaration."""

    severity: str
    class_name: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: class {self.class_name}: {self.message}"


@dataclass(frozen=True)
class ClassInfo:
    """One class as the checker sees it, bounds and superclass normalized."""

    name: str
    param_names: tuple[str, ...]
    lowers: tuple[TypeExpr, ...]
    uppers: tuple[TypeExpr, ...]
    extends_clause: TypeExpr | None  # None only for Object and Null

    @property
    def arity(self) -> int:
        return len(self.param_names)


_OBJECT_INFO = ClassInfo("Object", (), (), (), None)
_NULL_INFO = ClassInfo("Null", (), (), (), None)


@dataclass(frozen=True)
class ClassTable:
    """All classes of a program, keyed by name, plus build-time warnings."""

    infos: dict[str, ClassInfo]
    warnings: tuple[Diagnostic, ...] = ()

    def __contains__(self, name: str) -> bool:
        return name in self.infos

    def info(self, name: str) -> ClassInfo:
        try:
            return self.infos[name]
        except KeyError:
            raise UnknownClass(name) from None

    def arity(self, name: str) -> int:
        return self.info(name).arity

    def names(self) -> tuple[str, ...]:
        return tuple(sorted(self.infos))


def _mentions(expr: TypeExpr, var: str) -> bool:
    return var in free_vars(expr)


def _site(decl: ClassDecl, detail: str) -> str:
    where = f"class {decl.name}, {detail}"
    if decl.pos is not None:
        where += f" (line {decl.pos[0]})"
    return where


def _check_expr(
    expr: TypeExpr,
    scope: frozenset[str],
    arities: dict[str, int],
    site: str,
) -> None:
    if isinstance(expr, Var):
        if expr.name not in scope:
            raise UnboundVariable(expr.name, site)
        return
    if expr.name not in arities:
        raise UnknownClass(expr.name, site)
    expected = arities[expr.name]
    if len(expr.args) != expected:
        raise ArityMismatch(expr.name, expected, len(expr.args), site)
    for arg in expr.args:
        _check_expr(arg, scope, arities, site)


def build_table(program: Program) -> ClassTable:
    """Check a program's declarations and assemble its class table.

    The result is the same whatever the declaration order: forward and
    mutual references are fine, and warnings come out sorted by class
    name.
    """
    decls: dict[str, ClassDecl] = {}
    for decl in program.decls:
        if decl.name in BUILTIN_CLASSES or decl.name in decls:
            raise DuplicateClass(decl.name)
        decls[decl.name] = decl

    arities = {name: len(decl.params) for name, decl in decls.items()}
    arities["Object"] = 0
    arities["Null"] = 0

    infos: dict[str, ClassInfo] = {"Object": _OBJECT_INFO, "Null": _NULL_INFO}
    warnings: list[Diagnostic] = []

    for name, decl in decls.items():
        scope = frozenset(p.name for p in decl.params)
        lowers: list[TypeExpr] = []
        uppers: list[TypeExpr] = []
        for param in decl.params:
            lower = param.lower if param.lower is not None else NULL
            upper = param.upper if param.upper is not None else OBJECT
            _check_expr(lower, scope, arities,
                        _site(decl, f"lower bound of {param.name}"))
            _check_expr(upper, scope, arities,
                        _site(decl, f"upper bound of {param.name}"))
            lowers.append(lower)
            uppers.append(upper)
            if (lower == upper and isinstance(lower, App)
                    and _mentions(lower, param.name)):
                warnings.append(Diagnostic(
                    "warning", name,
                    f"useless declaration: no finite type argument can satisfy "
                    f"{param.name}, whose lower and upper bounds are both "
                    f"{render(lower)}"))

        extends_clause = decl.extends_clause
        if extends_clause is None:
            extends_clause = OBJECT
        if isinstance(extends_clause, Var):
            raise InvalidExtends(
                f"{_site(decl, 'extends clause')}: a type variable cannot "
                f"be extended")
        if extends_clause.name == "Null":
            raise InvalidExtends(
                f"{_site(decl, 'extends clause')}: Null cannot be extended")
        _check_expr(extends_clause, scope, arities, _site(decl, "extends clause"))
        infos[name] = ClassInfo(
            name,
            tuple(p.name for p in decl.params),
            tuple(lowers),
            tuple(uppers),
            extends_clause,
        )

    _check_acyclic(decls, infos)
    warnings.sort(key=lambda d: (d.class_name, d.message))
    return ClassTable(infos, tuple(warnings))


def _check_acyclic(decls: dict[str, ClassDecl],
                   infos: dict[str, ClassInfo]) -> None:
    # Each class has exactly one superclass edge, so following it either
    # reaches Object or revisits a node, which pins down the cycle.
    state: dict[str, int] = {}  # 1 = on current path, 2 = done
    for start in decls:
        if state.get(start) == 2:
            continue
        path: list[str] = []
        cur = start
        while True:
            if cur == "Object" or state.get(cur) == 2:
                break
            if state.get(cur) == 1:
                cycle = tuple(path[path.index(cur):])
                raise CircularInheritance(cycle)
            state[cur] = 1
            path.append(cur)
            cur = infos[cur].extends_clause.name  # type: ignore[union-attr]
        for node in path:
            state[node] = 2


def substitute(expr: TypeExpr, mapping: dict[str, TypeExpr]) -> TypeExpr:
    """Replace variables in ``expr`` simultaneously according to ``mapping``."""
    if isinstance(expr, Var):
        try:
            return mapping[expr.name]
        except KeyError:
            raise UnboundVariable(expr.name) from None
    if not expr.args:
        return expr
    return App(expr.name, tuple(substitute(a, mapping) for a in expr.args))


def _mapping_for(table: ClassTable, name: str,
                 args: tuple[TypeExpr, ...]) -> tuple[ClassInfo, dict[str, TypeExpr]]:
    info = table.info(name)
    if len(args) != info.arity:
        raise ArityMismatch(name, info.arity, len(args))
    return info, dict(zip(info.param_names, args))


def superclass_of(table: ClassTable, name: str,
                  args: tuple[TypeExpr, ...] = ()) -> TypeExpr:
    """The direct superclass of ``name<args>`` with arguments substituted in.

    ``Object`` has none, and ``Null`` sits below everything rather than
    on a declared chain; both raise :class:`NoSuperclass`.
    """
    info, mapping = _mapping_for(table, name, tuple(args))
    if info.extends_clause is None:
        raise NoSuperclass(name)
    return substitute(info.extends_clause, mapping)


def bounds_of(table: ClassTable, name: str,
              args: tuple[TypeExpr, ...] = ()) -> list[tuple[TypeExpr, TypeExpr]]:
    """Per-parameter (lower, upper) bounds of ``name``, instantiated at ``args``.

    The substitution is simultaneous, so a bound that mentions several
    parameters sees all of ``args`` at once.
    """
    info, mapping = _mapping_for(table, name, tuple(args))
    return [
        (substitute(lo, mapping), substitute(hi, mapping))
        for lo, hi in zip(info.lowers, info.uppers)
    ]
