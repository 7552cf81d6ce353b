"""Acceptance run: ten criteria at their stated bounds.

Each criterion is a function returning ``(ok, detail)``.  The tests assert
them; ``conftest.py`` prints one verdict line per criterion after the run,
and ``python tests/test_acceptance.py`` prints the same lines directly.
"""

from __future__ import annotations

import random
import sys
import time
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from adjgen import (ENUM_PRESETS, Enumerator, ProgramGenerator, atom_signature,  # noqa: E402
                    contexts, corpus_files, load, types_up_to)
from laws import all_failures  # noqa: E402

from adjnd import ctxops  # noqa: E402
from adjnd.checker import (accepts, check_declarative, derive_declarative,  # noqa: E402
                           synth_declarative, type_equal)
from adjnd.errors import AdjError, StuckState  # noqa: E402
from adjnd.machine import (CBNEED, CBV, PLAIN, Binding, UnitV, erasure_harness,  # noqa: E402
                           monitor_deadcode, monitor_garbage, monitor_strictness, run)
from adjnd.modes import PRESETS  # noqa: E402
from adjnd.seqcalc import (has_atomic_ids, is_cut_free, is_verification,  # noqa: E402
                           normalize_full, subformula_violations, validate_seq)
from adjnd.syntax import (Annot, Atom, Call, Context, Down, Lolli, One, Plus,  # noqa: E402
                          Signature, Tensor, Up, With, is_purely_positive,
                          substitute, type_children)
from adjnd.wellformed import wf_signature  # noqa: E402

# stated bounds
EXPR_SIZE = 7
TYPE_SIZE = 4
MAX_HYPS = 2
RANDOM_PROGRAMS = 500
CUT_BUDGET = 10 ** 5
MIN_INSTANCES = 10 ** 4

RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str) -> tuple[bool, str]:
    RESULTS[n] = (ok, detail)
    return ok, detail


def verdict_line(n: int) -> str:
    ok, detail = RESULTS[n]
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


def verdict_lines() -> list[str]:
    return [verdict_line(n) for n in sorted(RESULTS)]


# ------------------------------------------------------ enumerated space

def hypothesis_contexts(t) -> list[Context]:
    """Up to two hypotheses over the size-1 pool, plus one over the size-3 pool.

    Two hypotheses drawn from the larger pool multiply the space by about
    fifty at no gain in rule coverage; a single richer hypothesis is what
    brings application, projection and force on variables into play."""
    small = types_up_to(t, 1, empties=True)
    big = types_up_to(t, 3, empties=True)
    seen, out = set(), []
    for g in contexts(t, small, MAX_HYPS) + contexts(t, big, 1):
        key = tuple(g)
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out


@lru_cache(maxsize=None)
def enumeration(name: str):
    """Every (context, expression, type) instance with both verdicts."""
    t = PRESETS[name]
    sig = atom_signature(t)
    en = Enumerator(t)
    goals = types_up_to(t, TYPE_SIZE, empties=True)
    rows = []
    for g in hypothesis_contexts(t):
        gamma = tuple((h.name, h.type) for h in g)
        for a in goals:
            for e in en.up_to(gamma, a, EXPR_SIZE):
                r = accepts(t, sig, g, e, a)
                d = check_declarative(t, sig, g, e, a)
                rows.append((g, e, a, r, d))
    return t, sig, rows


def criterion_1():
    t0 = time.time()
    total = bad = 0
    worst = ""
    for name in ENUM_PRESETS:
        t, sig, rows = enumeration(name)
        for g, e, a, r, d in rows:
            total += 1
            fault = None
            if (r is not None) != d:
                fault = f"algorithmic {'accepts' if r else 'rejects'}, declarative {'accepts' if d else 'rejects'}"
            elif r is not None:
                if not ctxops.covers(t, g, r.used):
                    fault = f"used {r.used} not covered"
                elif not all(check_declarative(t, sig, dd, e, a) for dd in ctxops.refinements(r.used)):
                    fault = f"a refinement of {r.used} is rejected"
            if fault:
                bad += 1
                worst = worst or f"{name}: {g} |- {e} : {a}: {fault}"
    secs = time.time() - t0
    ok = bad == 0 and total >= MIN_INSTANCES and secs < 300
    return record(1, ok, f"{total} instances, {bad} disagreements, {secs:.0f}s {worst}".rstrip())


def criterion_2():
    total = bad = 0
    for name in ENUM_PRESETS:
        t, sig, rows = enumeration(name)
        for g, e, a, r, d in rows:
            if len(g):
                continue
            total += 1
            if (r is not None and r.used == Context()) != d:
                bad += 1
    return record(2, bad == 0 and total > 0, f"{total} closed instances, {bad} exceptions")


# -------------------------------------------------------- normalization

def corpus_programs(rec: bool = False):
    for path in corpus_files(rec):
        sf = load(path)
        yield path, sf


CONNECTIVES = {"lolli": Lolli, "tensor": Tensor, "with": With, "plus": Plus, "one": One,
               "up": Up, "down": Down, "atom": Atom}


def _connectives(a, sig, seen):
    seen_kinds = set()
    todo = [a]
    while todo:
        b = todo.pop()
        b = sig.unfold(b)
        if b in seen:
            continue
        seen.add(b)
        for k, cls in CONNECTIVES.items():
            if isinstance(b, cls):
                seen_kinds.add(k)
        if isinstance(b, With) and not b.fields:
            seen_kinds.add("empty with")
        if isinstance(b, Plus) and not b.fields:
            seen_kinds.add("empty plus")
        todo.extend(type_children(b))
    return seen_kinds


@lru_cache(maxsize=None)
def normal_forms():
    out = []
    for path, sf in corpus_programs():
        t, sig = sf.theory, wf_signature(sf.theory, sf.signature)
        for d in sig.terms.values():
            try:
                nd = derive_declarative(t, sig, d.ctx, d.body, d.type)
                r = normalize_full(t, sig, nd, budget=CUT_BUDGET)
                out.append((path.name, d, t, sig, r, None))
            except AdjError as exc:
                out.append((path.name, d, t, sig, None, f"{type(exc).__name__}: {exc}"))
    return out


def criterion_3():
    forms = normal_forms()
    files = {f for f, *_ in forms}
    kinds: set[str] = set()
    bad = []
    for f, d, t, sig, r, err in forms:
        for h in d.ctx:
            kinds |= _connectives(h.type, sig, set())
        kinds |= _connectives(d.type, sig, set())
        if err is not None:
            bad.append(f"{f}:{d.name} {err}")
            continue
        if not is_verification(r.derivation, sig):
            bad.append(f"{f}:{d.name} not a verification")
        elif not check_declarative(t, sig, d.ctx, r.expr, d.type):
            bad.append(f"{f}:{d.name} does not re-check")
        elif r.cut_steps > CUT_BUDGET:
            bad.append(f"{f}:{d.name} used {r.cut_steps} cut steps")
    missing = sorted((set(CONNECTIVES) | {"empty with", "empty plus"}) - kinds)
    ok = not bad and not missing and len(files) >= 50
    steps = max((r.cut_steps for *_, r, e in forms if r is not None), default=0)
    detail = (f"{len(files)} programs, {len(forms)} definitions, {len(bad)} failures, "
              f"max cut steps {steps}, connectives missing: {missing or 'none'}")
    return record(3, ok, detail + (f" first: {bad[0]}" if bad else ""))


def criterion_4():
    forms = normal_forms()
    bad = []
    for f, d, t, sig, r, err in forms:
        if r is None:
            bad.append(f"{f}:{d.name} {err}")
            continue
        try:
            validate_seq(t, sig, r.cut_free)
            validate_seq(t, sig, r.long)
        except AdjError as exc:
            bad.append(f"{f}:{d.name} {exc}")
            continue
        if not is_cut_free(r.long):
            bad.append(f"{f}:{d.name} has a cut")
        elif not has_atomic_ids(sig, r.long):
            bad.append(f"{f}:{d.name} has a non-atomic identity")
        elif subformula_violations(sig, r.long):
            bad.append(f"{f}:{d.name} breaks the subformula property")
    return record(4, not bad, f"{len(forms)} derivations audited, {len(bad)} failures"
                  + (f" first: {bad[0]}" if bad else ""))


# ----------------------------------------------------------- the machine

def closed_programs():
    """Every corpus main definition: (label, theory, signature, expr, type)."""
    out = []
    for rec in (False, True):
        for path, sf in corpus_programs(rec):
            if sf.main is None:
                continue
            d = sf.signature.terms[sf.main]
            out.append((path.name, sf.theory, sf.signature, Call(d.name, ()), d.type))
    return out


@lru_cache(maxsize=None)
def random_programs():
    """RANDOM_PROGRAMS closed programs accepted by both checkers."""
    names = ENUM_PRESETS + ("s4", "lax")
    out = []
    seed = 0
    while len(out) < RANDOM_PROGRAMS:
        t = PRESETS[names[seed % len(names)]]
        rng = random.Random(seed)
        e, a = ProgramGenerator(t, rng, max_depth=4).program(rng.choice(t.modes))
        seed += 1
        sig = Signature()
        if check_declarative(t, sig, Context(), e, a) and accepts(t, sig, Context(), e, a) is not None:
            out.append((f"random#{seed - 1}", t, sig, e, a))
    return out


@lru_cache(maxsize=None)
def debug_runs():
    """Every corpus and random program under both strategies, typed after every step."""
    out = []
    for label, t, sig, e, a in closed_programs() + random_programs():
        for strategy in (CBV, CBNEED):
            try:
                res = run(t, sig, e, a, strategy, debug=True)
                out.append((label, t, sig, a, strategy, res, None))
            except AdjError as exc:
                out.append((label, t, sig, a, strategy, None, exc))
    return out


def criterion_5():
    t0 = time.time()
    runs = debug_runs()
    secs = time.time() - t0
    stuck = [f"{l}/{s}" for l, *_, s, _, exc in runs if isinstance(exc, StuckState)]
    other = [f"{l}/{s}: {type(exc).__name__}: {exc}" for l, *_, s, _, exc in runs
             if exc is not None and not isinstance(exc, StuckState)]
    steps = sum(res.steps for *_, res, _ in runs if res is not None)
    ok = not stuck and not other and secs < 600
    detail = (f"{len(runs)} runs ({len(random_programs())} random programs), {steps} typed states, "
              f"{len(stuck)} stuck, {len(other)} other failures, {secs:.0f}s")
    return record(5, ok, detail + (f" first: {(stuck + other)[0]}" if stuck or other else ""))


def criterion_6():
    checked = bad = 0
    for label, t, sig, a, strategy, res, exc in debug_runs():
        if res is None or not any(t.is_linear(m) for m in t.modes):
            continue
        if not is_purely_positive(a, wf_signature(t, sig)):
            continue
        checked += 1
        if not monitor_garbage(res.env, t).passed:
            bad += 1
    linear = PRESETS["linear"]
    control = not monitor_garbage([Binding("x", One("L"), PLAIN, UnitV())], linear).passed
    ok = bad == 0 and checked > 0 and control
    return record(6, ok, f"{checked} final environments, {bad} violations, "
                  f"negative control {'flagged' if control else 'missed'}")


def _has_strict_mode(t) -> bool:
    return any(t.C(m) and not t.W(m) for m in t.modes)


def criterion_7():
    checked = bad = thunks = 0
    for label, t, sig, a, strategy, res, exc in debug_runs():
        if res is None or not _has_strict_mode(t):
            continue
        checked += 1
        if not monitor_strictness(res.env, t).passed:
            bad += 1
        if strategy == CBNEED:
            thunks += sum(1 for b in res.env if b.is_thunk and t.C(b.mode) and not t.W(b.mode))
    ok = bad == 0 and thunks == 0 and checked > 0
    return record(7, ok, f"{checked} final environments with a strict mode, {bad} violations, "
                  f"{thunks} residual strict thunks")


def criterion_8():
    lnl = PRESETS["lnl"]
    traces = bad_trace = 0
    eligible = agree = dead = 0
    problems = []
    for label, t, sig, e, a in closed_programs():
        if t.modes != lnl.modes or t.sigma != lnl.sigma or t.order != lnl.order:
            continue
        if a.mode == "L":
            for strategy in (CBV, CBNEED):
                res = run(t, sig, e, a, strategy)
                traces += 1
                if not monitor_deadcode(res.modes, "L", t).passed:
                    bad_trace += 1
                    problems.append(f"{label}/{strategy} trace below L")
        if not is_purely_positive(a, wf_signature(t, sig)):
            continue
        for strategy in (CBV, CBNEED):
            eligible += 1
            rep = erasure_harness(t, sig, e, a, a.mode, strategy)
            agree += rep.agree
            if rep.error and rep.error.startswith("DeadCodeReached"):
                dead += 1
            if not rep.agree:
                problems.append(f"{label}/{strategy} {rep.error or 'values differ'}")
    ok = bad_trace == 0 and traces > 0 and eligible > 0 and agree == eligible and dead == 0
    detail = (f"{traces} traces at L, {bad_trace} below L; erasure {agree}/{eligible} agree, "
              f"{dead} DeadCodeReached")
    return record(8, ok, detail + (f" first: {problems[0]}" if problems else ""))


def criterion_9():
    t0 = time.time()
    checked = 0
    bad = []
    for name, t in PRESETS.items():
        n, fails = all_failures(t, 3)
        checked += n
        bad += [f"{name}: {m}" for m in fails]
    secs = time.time() - t0
    ok = not bad and secs < 60
    return record(9, ok, f"{checked} law instances over {len(PRESETS)} theories, {len(bad)} failures, {secs:.0f}s"
                  + (f" first: {bad[0]}" if bad else ""))


# -------------------------------------------------------------- substitution

SUBST_PER_TYPE = 6


@lru_cache(maxsize=None)
def synthesizers(name: str):
    """For each hypothesis type A, a few (Delta, s) with Delta |- s => A."""
    t = PRESETS[name]
    sig = atom_signature(t)
    en = Enumerator(t)
    out = {}
    for a in types_up_to(t, 3, empties=True):
        cands = []
        for g in [Context()] + [Context.of(("u", b)) for b in types_up_to(t, 1) + [a]]:
            gamma = tuple((h.name, h.type) for h in g)
            terms = [s for n in range(1, 4) for s, b in en.synth(gamma, n) if b == a]
            terms += [Annot(e, a) for e in en.up_to(gamma, a, 3)]
            for s in terms:
                nd = synth_declarative(t, sig, g, s)
                if nd is not None and type_equal(sig, nd.type, a) and ctxops.ctx_geq(t, g, a.mode):
                    cands.append((g, s))
        step = max(1, len(cands) // SUBST_PER_TYPE)
        out[a] = cands[::step][:SUBST_PER_TYPE]
    return out


def criterion_10():
    total = bad = 0
    worst = ""
    for name in ENUM_PRESETS:
        t, sig, rows = enumeration(name)
        pool = synthesizers(name)
        for g, e, c, r, d in rows:
            if not d or not len(g):
                continue
            x = list(g)[-1]
            rest = g.without(x.name)
            for delta, s in pool.get(x.type, ()):
                both = ctxops.merge(t, delta, rest)
                if both is None:
                    continue
                total += 1
                if not check_declarative(t, sig, both, substitute(e, {x.name: s}), c):
                    bad += 1
                    worst = worst or f"{name}: [{s}/{x.name}] in {g} |- {e} : {c}"
    ok = bad == 0 and total > 0
    return record(10, ok, f"{total} substitution instances, {bad} failures {worst}".rstrip())


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(criterion):
    ok, detail = criterion()
    assert ok, detail


if __name__ == "__main__":
    for i, c in enumerate(CRITERIA, 1):
        c()
        print(verdict_line(i), flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
