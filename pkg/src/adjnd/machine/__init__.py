"""The abstract machine: a global environment with provisional bindings, a
continuation stack, call-by-value and call-by-need strategies, state typing
and monitors for the garbage, strictness and dead code theorems."""

from .erasure import ErasureReport, erase, erase_signature, erasure_harness
from .monitors import (MONITORS, MonitorReport, monitor_deadcode,
                       monitor_garbage, monitor_strictness)
from .state import (CBNEED, CBV, DEFAULT_BUDGET, PLAIN, PROV, PROV_THUNK,
                    STRATEGIES, THUNK, AppArg, AppFun, Binding, CallArg,
                    DownF, Eval, Final, ForceF, InjF, Machine, MachineState,
                    MatchF, NeedBind, PairLeft, PairRight, ProjF, Ret,
                    RunResult, default_budget, initial_state, run, run_state,
                    step)
from .statetyping import check_canonical, typecheck_state
from .values import (DownV, InjV, LamV, PairV, RecordV, SuspV, UnitV, Value,
                     format_value, value_to_expr)

__all__ = [
    "ErasureReport", "erase", "erase_signature", "erasure_harness",
    "MONITORS", "MonitorReport", "monitor_deadcode", "monitor_garbage", "monitor_strictness",
    "CBNEED", "CBV", "DEFAULT_BUDGET", "PLAIN", "PROV", "PROV_THUNK", "STRATEGIES", "THUNK",
    "AppArg", "AppFun", "Binding", "CallArg", "DownF", "Eval", "Final", "ForceF", "InjF",
    "Machine", "MachineState", "MatchF", "NeedBind", "PairLeft", "PairRight", "ProjF", "Ret",
    "RunResult", "default_budget", "initial_state", "run", "run_state", "step",
    "check_canonical", "typecheck_state",
    "DownV", "InjV", "LamV", "PairV", "RecordV", "SuspV", "UnitV", "Value", "format_value",
    "value_to_expr",
]
