"""Command-line driver: ``adjnd check|run|normalize|erase FILE``.

Reports are line-oriented ``key=value`` text on stdout; diagnostics go to
stderr.  Exit status 0 means success, 1 a problem with the input (syntax,
typing, budget), 2 a broken internal invariant (checker disagreement,
failed theorem monitor, ill-typed machine state).
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import AdjError, BudgetExceeded, InvariantError, UserError
from .modes import PRESETS

EXIT_OK, EXIT_USER, EXIT_INTERNAL = 0, 1, 2


@dataclass
class RunReport:
    outcome: str
    steps: int | None = None
    value: str | None = None
    type: str | None = None
    strategy: str | None = None
    census: dict[str, int] = field(default_factory=dict)
    monitors: list = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    error: str | None = None

    def lines(self) -> list[str]:
        out = [f"outcome={self.outcome}"]
        for key in ("value", "type", "strategy", "steps", "error"):
            v = getattr(self, key)
            if v is not None:
                out.append(f"{key}={v}")
        if self.outcome == "value":
            out.append(f"env.total={sum(self.census.values())}")
            for k in sorted(self.census):
                out.append(f"env.{k}={self.census[k]}")
        out += [m.line() for m in self.monitors]
        out += self.notes
        return out


def _load(args):
    from .frontend import parse
    text = Path(args.file).read_text(encoding="utf-8")
    return parse(text, args.preset)


def _main_def(sf, args):
    name = args.main or sf.main
    if name is None:
        raise UserError("no main definition; use --main or a `main f` declaration")
    d = sf.signature.terms.get(name)
    if d is None:
        raise UserError(f"unknown definition {name}")
    return d


def cmd_check(args) -> int:
    from .checker.declarative import check_declarative
    from .frontend import print_context
    from .wellformed import wf_signature
    sf = _load(args)
    t = sf.theory
    sig = wf_signature(t, sf.signature)
    if args.emit_used:
        from .wellformed import check_definition
        for d in sf.signature.terms.values():
            out = check_definition(t, sf.signature, d)
            print(f"used.{d.name}={print_context(out.used)}")
    if args.oracle:
        for d in sf.signature.terms.values():
            if not check_declarative(t, sig, d.ctx, d.body, d.type):
                print(f"oracle.{d.name}=disagree", file=sys.stderr)
                print(f"error=oracle disagreement on {d.name}")
                return EXIT_INTERNAL
        print("oracle=agree")
    print(f"check=ok defs={len(sig.terms)} modes={','.join(t.modes)}")
    return EXIT_OK


def _census(env) -> dict[str, int]:
    return dict(Counter(f"{b.kind}.{b.mode}" for b in env))


def cmd_run(args) -> int:
    from .frontend import print_annotated_type
    from .machine import (CBV, format_value, monitor_deadcode, monitor_garbage,
                          monitor_strictness, run)
    from .syntax import Call, is_purely_positive
    from .wellformed import wf_signature
    sf = _load(args)
    t = sf.theory
    d = _main_def(sf, args)
    if len(d.ctx):
        raise UserError(f"{d.name} has hypotheses; run needs a definition with an empty context")
    wanted = _parse_monitors(args.monitors)
    sig = wf_signature(t, sf.signature)
    try:
        res = run(t, sig, Call(d.name, ()), d.type, args.strategy, args.budget,
                  blackhole=args.blackhole, debug=args.debug, trace=args.trace, check=False)
    except BudgetExceeded as exc:
        report = RunReport("budget", strategy=args.strategy, error=str(exc))
        print("\n".join(report.lines()))
        return EXIT_USER
    if res.trace:
        print("\n".join(res.trace))
    report = RunReport("value", res.steps, format_value(res.value), print_annotated_type(res.type, t),
                       res.strategy, _census(res.env))
    applies = is_purely_positive(d.type, sig)
    for key in wanted:
        if key == "g":
            report.monitors.append(monitor_garbage(res.env, t))
        elif key == "s":
            report.monitors.append(monitor_strictness(res.env, t))
        else:
            report.monitors.append(monitor_deadcode(res.modes, d.type.mode, t))
    if res.strategy == CBV and res.preevaluated_calls:
        report.notes.append(f"note.call_arguments_preevaluated={res.preevaluated_calls}")
    if wanted and not applies:
        report.notes.append("note.monitors_apply_to_purely_positive_results=no")
    print("\n".join(report.lines()))
    if all(m.passed for m in report.monitors):
        return EXIT_OK
    return EXIT_INTERNAL if applies else EXIT_USER


def _parse_monitors(spec: str | None) -> list[str]:
    from .machine import MONITORS
    if not spec:
        return []
    out = []
    for part in spec.split(","):
        key = part.strip()
        key = next((k for k, v in MONITORS.items() if key in (k, v)), None)
        if key is None:
            raise UserError(f"unknown monitor {part!r}; expected some of g,s,d")
        if key not in out:
            out.append(key)
    return out


def cmd_normalize(args) -> int:
    from .checker.algorithmic import check_algorithmic
    from .checker.ndtree import format_nd
    from .ctxops import covers
    from .frontend import print_expr
    from .seqcalc import is_verification, normalize_term
    from .wellformed import wf_signature
    sf = _load(args)
    t = sf.theory
    d = _main_def(sf, args)
    sig = wf_signature(t, sf.signature)
    e, nd = normalize_term(t, sig, d.ctx, d.body, d.type)
    out = check_algorithmic(t, sig, d.ctx, e, d.type)
    if not covers(t, d.ctx, out.used):
        raise InvariantError("the normal form does not use its context as required")
    if not is_verification(nd, sig):
        raise InvariantError("the normal form is not a verification")
    print(f"normalized={print_expr(e, theory=t)}")
    print("verification=yes")
    if args.emit_derivation:
        print(format_nd(nd))
    return EXIT_OK


def cmd_erase(args) -> int:
    from .machine import erasure_harness
    from .syntax import Call
    sf = _load(args)
    t = sf.theory
    d = _main_def(sf, args)
    if len(d.ctx):
        raise UserError(f"{d.name} has hypotheses; erase needs a definition with an empty context")
    rep = erasure_harness(t, sf.signature, Call(d.name, ()), d.type, args.target_mode,
                          args.strategy, args.budget)
    print("\n".join(rep.lines()))
    return EXIT_OK if rep.agree else EXIT_INTERNAL


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adjnd", description="Adjoint natural deduction toolchain.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file")
        sp.add_argument("--preset", choices=sorted(PRESETS),
                        help="mode theory for files without mode declarations")

    c = sub.add_parser("check", help="check every definition")
    common(c)
    c.add_argument("--oracle", action="store_true", help="also run the declarative checker and compare")
    c.add_argument("--emit-used", action="store_true", help="print the hypotheses each definition uses")
    c.set_defaults(fn=cmd_check)

    r = sub.add_parser("run", help="run a closed definition on the abstract machine")
    common(r)
    r.add_argument("--main")
    r.add_argument("--strategy", choices=["cbv", "cbneed"], default="cbv")
    r.add_argument("--trace", action="store_true")
    r.add_argument("--budget", type=int, help="step budget (default $ADJND_BUDGET or 10^6)")
    r.add_argument("--monitors", help="comma-separated: g (garbage), s (strictness), d (dead code)")
    r.add_argument("--blackhole", action="store_true", help="bind thunks under evaluation to a black hole")
    r.add_argument("--debug", action="store_true", help="type every state and check canonical forms")
    r.set_defaults(fn=cmd_run)

    n = sub.add_parser("normalize", help="normalize a definition's body to a verification")
    common(n)
    n.add_argument("--main")
    n.add_argument("--emit-derivation", action="store_true")
    n.set_defaults(fn=cmd_normalize)

    e = sub.add_parser("erase", help="compare a run with its erasure below a target mode")
    common(e)
    e.add_argument("--main")
    e.add_argument("--target-mode")
    e.add_argument("--strategy", choices=["cbv", "cbneed"], default="cbv")
    e.add_argument("--budget", type=int)
    e.set_defaults(fn=cmd_erase)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    except UserError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USER
    except InvariantError as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except AdjError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
