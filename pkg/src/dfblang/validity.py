"""Deciding whether ground type arguments satisfy declared bounds.

Two gates apply to an instantiation ``C<A1, .., Ak>``:

* admittable: every argument is a ground, arity-correct type over the
  table. Bounds play no part.
* valid: admittable, and each argument sits between its substituted
  bounds, ``Li[A/T] <: Ai <: Ui[A/T]``.

Validity of ``C<As>`` costs exactly 2k subtype queries. The bound
instantiations themselves (``Enum<Color>`` when checking ``Color``
against ``class Enum<T extends Enum<T>>``) are never validity-checked
in turn: in the bound-declaration context an admittable argument is
already valid, so there is nothing left to recurse on. Every subtype
query performed is recorded in the verdict's log with the instantiation
that triggered it, which is how tests observe that no bound-side
re-check ever happens and that the query count stays at most
2 * (number of applications) * (maximum arity) for a full deep check.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .classtable import ClassTable, bounds_of
from .errors import DfbError
from .subtyping import is_subtype, well_formed
from .syntax import App, TypeExpr, Var, render


class NotAdmittable(DfbError):
    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class Status(enum.Enum):
    VALID = "valid"
    INVALID = "invalid"
    ADMITTABLE = "admittable"


class Context(enum.Enum):
    """Where an instantiation is being judged.

    Bounds declared on a parameter list are read in BOUND context, where
    admittable arguments count as valid outright; everything else is
    ORDINARY context, where bounds are actually enforced.
    """

    ORDINARY = "ordinary"
    BOUND = "bound"


@dataclass(frozen=True)
class QueryRecord:
    """One subtype query, tagged with the instantiation that issued it."""

    left: TypeExpr
    right: TypeExpr
    subject: TypeExpr
    origin: str  # Context value of the judgement that asked

    def as_dict(self) -> dict[str, str]:
        return {
            "left": render(self.left),
            "right": render(self.right),
            "subject": render(self.subject),
            "origin": self.origin,
        }


@dataclass(frozen=True)
class Verdict:
    status: Status
    reasons: tuple[str, ...] = ()
    query_log: tuple[QueryRecord, ...] = ()

    def __post_init__(self) -> None:
        if self.status is Status.INVALID:
            assert self.reasons, "an invalid verdict must carry reasons"
        else:
            assert not self.reasons, "only invalid verdicts carry reasons"

    @property
    def is_valid(self) -> bool:
        return self.status is Status.VALID


def is_admittable(table: ClassTable, class_name: str,
                  args: tuple[TypeExpr, ...]) -> bool:
    """Ground and arity-correct, bounds ignored.

    The class itself must exist; problems with the arguments make the
    answer False rather than an error.
    """
    info = table.info(class_name)
    if len(args) != info.arity:
        return False
    return all(well_formed(table, a) for a in args)


def is_valid_argument(
    table: ClassTable,
    class_name: str,
    args: tuple[TypeExpr, ...],
    context: Context = Context.ORDINARY,
) -> Verdict:
    """Judge the arguments of a single instantiation against its bounds.

    All parameters are checked even after a failure, so the verdict
    reports every violated bound. In BOUND context the bounds are not
    consulted at all and the verdict is ADMITTABLE with an empty log.
    """
    args = tuple(args)
    if not is_admittable(table, class_name, args):
        raise NotAdmittable(
            f"{render(App(class_name, args))} is not admittable: arguments "
            f"must be ground, arity-correct types over the table"
        )
    if context is Context.BOUND:
        return Verdict(Status.ADMITTABLE)
    subject = App(class_name, args)
    info = table.info(class_name)
    log: list[QueryRecord] = []
    reasons: list[str] = []
    for pname, arg, (lo, hi) in zip(
        info.param_names, args, bounds_of(table, class_name, args)
    ):
        log.append(QueryRecord(lo, arg, subject, context.value))
        if not is_subtype(table, lo, arg):
            reasons.append(
                f"{render(lo)} is not a subtype of {render(arg)} "
                f"(lower bound of {pname} in {class_name})"
            )
        log.append(QueryRecord(arg, hi, subject, context.value))
        if not is_subtype(table, arg, hi):
            reasons.append(
                f"{render(arg)} is not a subtype of {render(hi)} "
                f"(upper bound of {pname} in {class_name})"
            )
    status = Status.INVALID if reasons else Status.VALID
    return Verdict(status, tuple(reasons), tuple(log))


def check_type(table: ClassTable, t: TypeExpr) -> Verdict:
    """Validate a ground type and, recursively, its argument subterms.

    Arguments appear in ordinary context, so each nested instantiation
    is judged once, outermost first, left to right. Bound instantiations
    produced along the way are exempt and contribute nothing to the log.
    """
    if isinstance(t, Var):
        raise NotAdmittable(f"{render(t)} is a type variable, not a ground type")
    reasons: list[str] = []
    log: list[QueryRecord] = []
    valid = True

    def walk(node: App) -> None:
        nonlocal valid
        verdict = is_valid_argument(table, node.name, node.args)
        valid = valid and verdict.is_valid
        reasons.extend(verdict.reasons)
        log.extend(verdict.query_log)
        for arg in node.args:
            assert isinstance(arg, App)  # ground, checked above
            walk(arg)

    walk(t)
    status = Status.VALID if valid else Status.INVALID
    return Verdict(status, tuple(reasons), tuple(log))
