"""Machine values.

Values of negative type (functions, records, suspensions) hold unevaluated
bodies; values of positive type are built from other values.  Each value
reads back as an expression, which is how the state typing checks them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..syntax import (DownI, Expr, Inj, Lam, Pair, Record, Susp, Unit)


@dataclass(frozen=True)
class LamV:
    var: str
    body: Expr


@dataclass(frozen=True)
class RecordV:
    fields: tuple[tuple[str, Expr], ...]

    def field(self, label: str) -> Expr | None:
        for l, e in self.fields:
            if l == label:
                return e
        return None


@dataclass(frozen=True)
class SuspV:
    hi: str
    lo: str
    body: Expr


@dataclass(frozen=True)
class PairV:
    left: "Value"
    right: "Value"


@dataclass(frozen=True)
class UnitV:
    pass


@dataclass(frozen=True)
class InjV:
    label: str
    body: "Value"


@dataclass(frozen=True)
class DownV:
    hi: str
    lo: str
    body: "Value"


Value = Union[LamV, RecordV, SuspV, PairV, UnitV, InjV, DownV]
VALUE_TYPES = (LamV, RecordV, SuspV, PairV, UnitV, InjV, DownV)


def value_to_expr(v: Value) -> Expr:
    if isinstance(v, LamV):
        return Lam(v.var, v.body)
    if isinstance(v, RecordV):
        return Record(v.fields)
    if isinstance(v, SuspV):
        return Susp(v.body, v.hi, v.lo)
    if isinstance(v, PairV):
        return Pair(value_to_expr(v.left), value_to_expr(v.right))
    if isinstance(v, UnitV):
        return Unit()
    if isinstance(v, InjV):
        return Inj(v.label, value_to_expr(v.body))
    if isinstance(v, DownV):
        return DownI(value_to_expr(v.body), v.hi, v.lo)
    raise TypeError(f"not a value: {v!r}")


def format_value(v: Value) -> str:
    from ..frontend import print_expr
    return print_expr(value_to_expr(v))
