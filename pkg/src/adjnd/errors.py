"""Exception hierarchy shared by every layer of the toolchain.

User-facing failures (bad input, ill-typed programs, budget exhaustion) derive
from ``UserError``; broken internal invariants derive from ``InvariantError``.
The CLI maps the first family to exit code 1 and the second to exit code 2.
"""

from __future__ import annotations


class AdjError(Exception):
    """Root of all errors raised by the package."""


class UserError(AdjError):
    pass


class InvariantError(AdjError):
    pass


# mode theories

class DuplicateMode(UserError):
    def __init__(self, name: str):
        super().__init__(f"mode {name} declared more than once")
        self.name = name


class UnknownMode(UserError):
    def __init__(self, name: str):
        super().__init__(f"unknown mode {name}")
        self.name = name


class MonotonicityViolation(UserError):
    def __init__(self, hi: str, lo: str):
        super().__init__(f"{hi} >= {lo} but the structural properties of {hi} do not include those of {lo}")
        self.hi = hi
        self.lo = lo


# types and signatures

class ShiftOrderViolation(UserError):
    pass


class ModeMismatch(UserError):
    pass


class UnknownTypeName(UserError):
    pass


class UnknownAtom(UserError):
    pass


class NonContractive(UserError):
    def __init__(self, name: str):
        super().__init__(f"type {name} is not contractive")
        self.name = name


class IllTypedDefinition(UserError):
    def __init__(self, name: str, inner: Exception):
        super().__init__(f"definition {name}: {type(inner).__name__}: {inner}")
        self.name = name
        self.inner = inner


class SyntaxErrorAt(UserError):
    def __init__(self, line: int, col: int, expected: str):
        super().__init__(f"{line}:{col}: syntax error, expected {expected}")
        self.line = line
        self.col = col
        self.expected = expected


# context algebra and checking

class MismatchedTypes(InvariantError):
    """The same variable appears with two different types in a merge."""


class TypeCheckError(UserError):
    rule = "?"

    def __init__(self, msg: str, rule: str | None = None):
        if rule is not None:
            self.rule = rule
        super().__init__(f"[{self.rule}] {msg}")


class TypeMismatch(TypeCheckError):
    pass


class UnusedLinearVariable(TypeCheckError):
    def __init__(self, var: str, rule: str | None = None):
        super().__init__(f"variable {var} is not used and its mode does not admit weakening", rule)
        self.var = var


class JoinConflict(TypeCheckError):
    def __init__(self, var: str, rule: str | None = None):
        super().__init__(f"variable {var} is used in one branch only and its mode does not admit weakening", rule)
        self.var = var


class IndependenceViolation(TypeCheckError):
    def __init__(self, var: str, have: str, need: str, rule: str | None = None):
        super().__init__(f"variable {var} has mode {have}, which is not >= {need}", rule)
        self.var = var


class MergeUndefined(TypeCheckError):
    def __init__(self, var: str, rule: str | None = None):
        super().__init__(f"variable {var} is used more than once and its mode does not admit contraction", rule)
        self.var = var


class UnknownVariable(TypeCheckError):
    pass


class UnknownLabel(TypeCheckError):
    pass


class NotSynthesizable(TypeCheckError):
    pass


class ArityMismatch(TypeCheckError):
    pass


class UnknownDefinition(TypeCheckError):
    pass


# sequent calculus

class RuleViolation(InvariantError):
    def __init__(self, path: str, msg: str):
        super().__init__(f"at {path or 'root'}: {msg}")
        self.path = path


class InvalidInput(UserError):
    pass


class BudgetExceeded(UserError):
    pass


# machine

class StuckState(InvariantError):
    pass


class UnboundVariable(InvariantError):
    pass


class DeadCodeReached(InvariantError):
    pass


class BlackHole(UserError):
    """A call-by-need thunk was demanded while it was being evaluated."""


class IllTypedState(InvariantError):
    pass
