"""Run-time witnesses for the garbage, strictness and dead code theorems."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ..modes import ModeTheory
from .state import PROV, Binding


@dataclass
class MonitorReport:
    name: str
    passed: bool
    violations: list[str] = field(default_factory=list)

    def line(self) -> str:
        verdict = "pass" if self.passed else "fail"
        tail = "" if self.passed else " " + "; ".join(self.violations)
        return f"monitor.{self.name}={verdict}{tail}"


def monitor_garbage(env: Iterable[Binding], t: ModeTheory) -> MonitorReport:
    """No binding of a linear mode (neither weakening nor contraction) is left."""
    bad = [str(b) for b in env if t.is_linear(b.mode)]
    return MonitorReport("garbage", not bad, bad)


def monitor_strictness(env: Iterable[Binding], t: ModeTheory) -> MonitorReport:
    """Every binding whose mode lacks weakening has been read: it is a
    provisional value.  That also rules out strict thunks that were never
    forced."""
    bad = [str(b) for b in env if not t.W(b.mode) and b.kind != PROV]
    return MonitorReport("strictness", not bad, bad)


def monitor_deadcode(modes: Iterable[str], r: str, t: ModeTheory) -> MonitorReport:
    """Every state evaluated or returned at a mode ``m >= r``."""
    bad = []
    for i, m in enumerate(modes):
        if not t.geq(m, r):
            bad.append(f"state {i} at mode {m}")
            if len(bad) >= 5:
                break
    return MonitorReport("deadcode", not bad, bad)


MONITORS = {"g": "garbage", "s": "strictness", "d": "deadcode"}
