"""Reference methods the hybrid solver is compared against.

* :func:`branch_and_prune` -- low-to-high bitwise reconstruction of ``(p, q)``
  (optionally ``d`` for e = 3), keeping every partial key that agrees with
  ``p*q = N mod 2^i`` and the leaked bits.
* :func:`brute_force_coppersmith` -- enumerate the unknown bits among the
  lowest ``t`` bits of ``p`` and run the LSB oracle on each guess.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable

from .cnfenc import Leak
from .coppersmith import Factors, LsbProblem, recover_factor_lsb
from .pipeline import Timeout, threshold_bits

__all__ = [
    "BranchExplosion",
    "NoSolution",
    "Exhausted",
    "Infeasible",
    "BnpResult",
    "BruteResult",
    "branch_and_prune",
    "brute_force_coppersmith",
]

DEFAULT_BRANCH_LIMIT = 1 << 22
DEFAULT_BRUTE_CAP = 30


class BranchExplosion(RuntimeError):
    def __init__(self, count: int, level: int):
        super().__init__(f"frontier reached {count} partial keys at depth {level}")
        self.count = count
        self.level = level


class NoSolution(RuntimeError):
    """Every partial key was pruned: the leaks are inconsistent."""


class Exhausted(RuntimeError):
    def __init__(self, calls: int):
        super().__init__(f"no guess of the low bits factored N ({calls} oracle calls)")
        self.calls = calls


class Infeasible(ValueError):
    def __init__(self, unknown: int, cap: int):
        super().__init__(f"{unknown} unknown low bits exceeds the cap of {cap}")
        self.unknown = unknown
        self.cap = cap


@dataclass
class BnpResult:
    p: int
    q: int
    peak_frontier: int
    levels_completed: int
    branches: int
    wall_time: float


@dataclass
class BruteResult:
    p: int
    q: int
    oracle_calls: int
    unknown_bits: int
    threshold: int
    wall_time: float
    oracle_time: float


def _leak_tables(leaks: Iterable[Leak]) -> dict[str, dict[int, int]]:
    tables: dict[str, dict[int, int]] = {"p": {}, "q": {}, "d": {}}
    for target, index, value in leaks:
        if target not in tables:
            raise ValueError(f"unknown leak target {target!r}")
        prev = tables[target].setdefault(index, value)
        if prev != value:
            raise NoSolution(f"{target} bit {index} leaked as both 0 and 1")
    return tables


def branch_and_prune(
    N: int,
    k: int,
    leaks: Iterable[Leak] = (),
    track_d: bool = False,
    branch_limit: int = DEFAULT_BRANCH_LIMIT,
    time_limit: float | None = None,
) -> BnpResult:
    """Breadth-first search over ``(p mod 2^i, q mod 2^i)`` for ``i = 1..k``.

    With ``track_d`` the partial ``d`` is carried one bit ahead (it is fixed
    mod ``2^(i+1)`` by ``3d = 2N + 3 - 2(p + q)``) and checked against the
    ``d`` leaks.

    Raises:
        BranchExplosion: the frontier grew past ``branch_limit``.
        NoSolution: the frontier emptied.
        Timeout: ``time_limit`` seconds elapsed.
    """
    start = time.perf_counter()
    tables = _leak_tables(leaks)
    lp, lq, ld = tables["p"], tables["q"], tables["d"]
    rhs = 2 * N + 3

    inv3 = pow(3, -1, 1 << (k + 2))

    def d_bit(p_low: int, q_low: int, j: int) -> int:
        # bit j of d is fixed once p and q are known mod 2^j
        return ((inv3 * (rhs - 2 * (p_low + q_low))) >> j) & 1

    if lp.get(0, 1) != 1 or lq.get(0, 1) != 1:
        raise NoSolution("a leak says p or q is even")
    frontier = [(1, 1)]
    if track_d and any(j in ld and ld[j] != d_bit(1, 1, j) for j in (0, 1)):
        raise NoSolution("d leaks contradict p0 = q0 = 1")
    peak = 1
    branches = 1
    for i in range(1, k):
        if time_limit is not None and time.perf_counter() - start > time_limit:
            raise Timeout(f"time limit {time_limit}s reached at depth {i}")
        bit = 1 << i
        nxt = []
        lpi, lqi = lp.get(i), lq.get(i)
        ldi = ld.get(i + 1) if track_d else None
        for p_low, q_low in frontier:
            c = ((N - p_low * q_low) >> i) & 1
            for pi in (0, 1):
                qi = c ^ pi
                if lpi is not None and lpi != pi:
                    continue
                if lqi is not None and lqi != qi:
                    continue
                np_, nq = p_low | (pi * bit), q_low | (qi * bit)
                if ldi is not None and d_bit(np_, nq, i + 1) != ldi:
                    continue
                nxt.append((np_, nq))
        frontier = nxt
        branches += len(frontier)
        if len(frontier) > peak:
            peak = len(frontier)
        if len(frontier) > branch_limit:
            raise BranchExplosion(len(frontier), i + 1)
        if not frontier:
            raise NoSolution(f"frontier emptied at depth {i + 1}")
    for p, q in frontier:
        if p * q == N and p > 1 and q > 1:
            return BnpResult(min(p, q), max(p, q), peak, k, branches, time.perf_counter() - start)
    raise NoSolution("no complete candidate multiplies to N")


def brute_force_coppersmith(
    N: int,
    k: int,
    leaks: Iterable[Leak] = (),
    theta: float = 0.6,
    cap: int = DEFAULT_BRUTE_CAP,
    time_limit: float | None = None,
) -> BruteResult:
    """Try every completion of the unleaked bits among ``p``'s low ``t`` bits.

    Guesses are visited in ascending numeric order; bit 0 is always 1.

    Raises:
        Infeasible: more than ``cap`` bits would have to be guessed.
        Exhausted: no guess yields a factor (the leaks are wrong).
        Timeout: ``time_limit`` seconds elapsed.
    """
    start = time.perf_counter()
    t = threshold_bits(k, N, theta)
    lp = _leak_tables(leaks)["p"]
    if lp.get(0, 1) != 1:
        raise Exhausted(0)
    base = 1
    unknown = []
    for i in range(1, t):
        if i in lp:
            base |= lp[i] << i
        else:
            unknown.append(i)
    if len(unknown) > cap:
        raise Infeasible(len(unknown), cap)
    calls = 0
    oracle_time = 0.0
    for x in range(1 << len(unknown)):
        guess = base
        for j, pos in enumerate(unknown):
            if (x >> j) & 1:
                guess |= 1 << pos
        if time_limit is not None and calls % 64 == 0 and time.perf_counter() - start > time_limit:
            raise Timeout(f"time limit {time_limit}s reached after {calls} oracle calls")
        calls += 1
        t0 = time.perf_counter()
        outcome = recover_factor_lsb(LsbProblem(N, t, guess))
        oracle_time += time.perf_counter() - t0
        if isinstance(outcome, Factors):
            return BruteResult(
                outcome.p, outcome.q, calls, len(unknown), t, time.perf_counter() - start, oracle_time
            )
    raise Exhausted(calls)
