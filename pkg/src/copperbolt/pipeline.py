"""SAT + Coppersmith driver.

The solver searches over the multiplier encoding; whenever the lowest ``t``
bits of ``p`` are all assigned at a propagation fixpoint, the LSB oracle is
asked to complete ``p``. Success ends the search, failure becomes a blocking
clause over those ``t`` bits.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Iterable

from .cnfenc import CnfFormula, Leak, VarMap, add_leak_units, decode_int, encode_d_equation, encode_factoring
from .coppersmith import BoundTooSmall, Factors, LsbProblem, lsb_bound, recover_factor_lsb
from .satcore import AddClauses, Solver, SolverConfig, Terminate

__all__ = [
    "ThresholdExceedsK",
    "UnsatEncoding",
    "Timeout",
    "HybridConfig",
    "RunStats",
    "threshold_bits",
    "extract_low_bits",
    "blocking_clause",
    "coppersmith_callback",
    "CoppersmithOracle",
    "build_formula",
    "factor",
    "verify_factors",
    "result_record",
]

log = logging.getLogger(__name__)

METHODS = ("satcas", "sat")


class ThresholdExceedsK(ValueError):
    """The oracle would need every bit of p; the instance is too small."""


class UnsatEncoding(RuntimeError):
    """The formula has no model: inconsistent leaks or an encoding bug."""

    def __init__(self, msg: str, stats: RunStats | None = None):
        super().__init__(msg)
        self.stats = stats


class Timeout(RuntimeError):
    def __init__(self, msg: str, stats: RunStats | None = None):
        super().__init__(msg)
        self.stats = stats


@dataclass
class HybridConfig:
    theta: float = 0.6
    method: str = "satcas"
    use_d_encoding: bool = False
    seed: int = 0
    time_limit: float | None = None
    heuristic: str = "vsids"

    def __post_init__(self) -> None:
        if not 0.5 < self.theta <= 1:
            raise ValueError("theta must lie in (0.5, 1]")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")


@dataclass
class RunStats:
    callback_calls: int = 0
    oracle_calls: int = 0
    memo_hits: int = 0
    blocking_clauses: int = 0
    terminations: int = 0
    oracle_time: float = 0.0
    conflicts: int = 0
    decisions: int = 0
    wall_time: float = 0.0
    threshold: int | None = None
    # low-bit consistency of q at oracle calls (observational only)
    q_low_assigned: int = 0
    q_low_consistent: int = 0
    blocked_patterns: list[int] = field(default_factory=list, repr=False)

    @property
    def pruning_fraction(self) -> float | None:
        if not self.q_low_assigned:
            return None
        return self.q_low_consistent / self.q_low_assigned


def threshold_bits(k: int, N: int, theta: float = 0.6) -> int:
    """Number of low bits of ``p`` the oracle is invoked with.

    ``max(ceil(theta*k), k - floor(log2 X))`` so that the unknown high part of
    ``p`` always fits under the lattice bound ``X``.
    """
    X = lsb_bound(N)
    if X == 0:
        raise BoundTooSmall(f"N = {N} gives a zero root bound")
    frac = Fraction(theta).limit_denominator(10**6)
    t = max(math.ceil(frac * k), k - (X.bit_length() - 1))
    if t >= k:
        raise ThresholdExceedsK(f"threshold {t} >= k = {k}")
    return t


def _low_value(view: Any, bits: list[int], t: int) -> int | None:
    acc = 0
    for i, var in enumerate(bits[:t]):
        v = view.value(var)
        if v is None:
            return None
        if v:
            acc |= 1 << i
    return acc


def extract_low_bits(view: Any, varmap: VarMap, t: int) -> int | None:
    """Integer value of ``p``'s lowest ``t`` bits, or None if any is unassigned."""
    return _low_value(view, varmap.p_bits, t)


def blocking_clause(view: Any, varmap: VarMap, t: int) -> list[int]:
    """Clause falsified exactly by the current values of ``p``'s low ``t`` bits."""
    return [-var if view.value(var) else var for var in varmap.p_bits[:t]]


def _pattern_clause(p_check: int, varmap: VarMap, t: int) -> list[int]:
    return [-var if (p_check >> i) & 1 else var for i, var in enumerate(varmap.p_bits[:t])]


def coppersmith_callback(
    view: Any,
    varmap: VarMap,
    N: int,
    t: int,
    memo: set[int],
    stats: RunStats | None = None,
) -> AddClauses | Terminate | None:
    """One oracle step at a propagation fixpoint; returns the solver verdict."""
    p_check = extract_low_bits(view, varmap, t)
    if p_check is None:
        return None
    if stats is None:
        stats = RunStats()
    if p_check in memo:
        stats.memo_hits += 1
        stats.blocking_clauses += 1
        return AddClauses([_pattern_clause(p_check, varmap, t)])
    stats.oracle_calls += 1
    q_check = _low_value(view, varmap.q_bits, t)
    if q_check is not None:
        stats.q_low_assigned += 1
        if (p_check * q_check - N) % (1 << t) == 0:
            stats.q_low_consistent += 1
    start = time.perf_counter()
    try:
        outcome = recover_factor_lsb(LsbProblem(N, t, p_check))
    except (ValueError, ArithmeticError) as exc:
        log.warning("oracle failed on p_check=%x: %s", p_check, exc)
        return None
    finally:
        stats.oracle_time += time.perf_counter() - start
    if isinstance(outcome, Factors):
        stats.terminations += 1
        return Terminate((outcome.p, outcome.q))
    memo.add(p_check)
    stats.blocking_clauses += 1
    stats.blocked_patterns.append(p_check)
    return AddClauses([_pattern_clause(p_check, varmap, t)])


class CoppersmithOracle:
    """Solver callback bound to one instance; keeps the memo and counters.

    Reads the solver's literal value array directly and checks the highest
    watched bit first, since most fixpoints leave it unassigned.
    """

    def __init__(self, varmap: VarMap, N: int, t: int, stats: RunStats | None = None):
        self.varmap = varmap
        self.N = N
        self.t = t
        self.memo: set[int] = set()
        self.stats = stats or RunStats(threshold=t)
        self._lits = [2 * v for v in varmap.p_bits[:t]]

    def __call__(self, solver: Solver) -> AddClauses | Terminate | None:
        self.stats.callback_calls += 1
        val = solver.val
        lits = self._lits
        if val[lits[-1]] == 0:
            return None
        for lit in lits:
            if val[lit] == 0:
                return None
        return coppersmith_callback(solver, self.varmap, self.N, self.t, self.memo, self.stats)


def build_formula(N: int, k: int, leaks: Iterable[Leak] = (), use_d_encoding: bool = False) -> tuple[CnfFormula, VarMap]:
    cnf, varmap = encode_factoring(N, k)
    if use_d_encoding:
        encode_d_equation(cnf, varmap, N)
    add_leak_units(cnf, varmap, leaks)
    return cnf, varmap


def verify_factors(N: int, p: int, q: int) -> bool:
    return p * q == N and 1 < p <= q < N


def factor(
    N: int,
    k: int,
    leaks: Iterable[Leak] = (),
    config: HybridConfig | None = None,
) -> tuple[int, int, RunStats]:
    """Factor ``N`` (two ``k``-bit primes) given leaked bits.

    Raises:
        Timeout: the time limit elapsed.
        UnsatEncoding: the formula is unsatisfiable (leaks inconsistent with
            every factorization, or a bug); never silently ignored.
    """
    config = config or HybridConfig()
    wall_start = time.perf_counter()
    cnf, varmap = build_formula(N, k, leaks, config.use_d_encoding)
    solver = Solver(cnf.num_vars, cnf.clauses, SolverConfig(seed=config.seed, heuristic=config.heuristic))
    stats = RunStats()
    callback = None
    if config.method == "satcas":
        try:
            t = threshold_bits(k, N, config.theta)
        except (ThresholdExceedsK, BoundTooSmall) as exc:
            log.info("falling back to plain SAT: %s", exc)
        else:
            stats.threshold = t
            callback = CoppersmithOracle(varmap, N, t, stats)
    res = solver.solve(callback, time_limit=config.time_limit)
    stats.conflicts = res.stats["conflicts"]
    stats.decisions = res.stats["decisions"]
    stats.wall_time = time.perf_counter() - wall_start
    if res.status == "terminated":
        p, q = res.payload
    elif res.status == "sat":
        p = decode_int(res.model, varmap.p_bits)
        q = decode_int(res.model, varmap.q_bits)
        p, q = min(p, q), max(p, q)
    elif res.status == "unsat":
        raise UnsatEncoding(f"no model for N = {N:#x} with the given leaks", stats)
    else:
        raise Timeout(f"time limit {config.time_limit}s reached", stats)
    if not verify_factors(N, p, q):
        raise RuntimeError(f"solver returned a bad factorization {p} * {q} != {N}")
    return p, q, stats


def result_record(
    status: str,
    p: int | None,
    q: int | None,
    stats: RunStats | None,
    seed: int,
    method: str,
    **extra: Any,
) -> dict[str, Any]:
    """The per-run JSON record (keys in a fixed order)."""
    stats = stats or RunStats()
    rec = {
        "status": status,
        "p_hex": None if p is None else f"{p:x}",
        "q_hex": None if q is None else f"{q:x}",
        "wall_ms": round(stats.wall_time * 1000, 3),
        "oracle_calls": stats.oracle_calls,
        "oracle_ms": round(stats.oracle_time * 1000, 3),
        "blocking_clauses": stats.blocking_clauses,
        "conflicts": stats.conflicts,
        "decisions": stats.decisions,
        "seed": seed,
        "method": method,
    }
    rec.update(extra)
    return rec


def stats_dict(stats: RunStats) -> dict[str, Any]:
    d = asdict(stats)
    d.pop("blocked_patterns")
    return d
