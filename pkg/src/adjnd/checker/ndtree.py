"""Natural deduction derivation trees, one node per rule application."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from ..syntax import Context, Expr, Type

CHECK = "<="
SYNTH = "=>"


@dataclass(frozen=True, eq=False)
class NDNode:
    rule: str
    ctx: Context
    expr: Expr
    type: Type
    direction: str
    premises: tuple["NDNode", ...] = ()

    def walk(self) -> Iterator["NDNode"]:
        yield self
        for p in self.premises:
            yield from p.walk()

    def size(self) -> int:
        return sum(1 for _ in self.walk())


def format_nd(d: NDNode, indent: int = 0) -> str:
    from ..frontend import print_expr, print_type, print_context
    pad = "  " * indent
    line = f"{pad}{d.rule}: {print_context(d.ctx)} |- {print_expr(d.expr)} {d.direction} {print_type(d.type)}"
    return "\n".join([line] + [format_nd(p, indent + 1) for p in d.premises])
