"""Conflict-driven clause-learning SAT solver with an in-search callback.

Literals are stored internally as ``2*v`` (positive) and ``2*v + 1``
(negative), so negation is ``lit ^ 1``. Binary clauses live in their own
watch lists; longer clauses use two watched literals held at positions 0
and 1. Heuristics are the usual defaults: VSIDS-style activities with
exponential decay, phase saving, Luby restarts and LBD-based reduction of
the learned clause database.

A callback registered with :meth:`Solver.solve` runs at every conflict-free
propagation fixpoint above decision level 0. It may return ``None`` to let
search continue, :class:`AddClauses` to inject clauses (kept permanently),
or :class:`Terminate` to stop the search with a payload.
"""

from __future__ import annotations

import heapq
import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional, Sequence

__all__ = [
    "MalformedClause",
    "AddClauses",
    "Terminate",
    "SolveResult",
    "SolverConfig",
    "Solver",
    "solve",
    "check_model",
]


class MalformedClause(ValueError):
    pass


@dataclass(frozen=True)
class AddClauses:
    clauses: list[list[int]]


@dataclass(frozen=True)
class Terminate:
    payload: Any = None


Verdict = Optional[object]
Callback = Callable[["Solver"], Verdict]


@dataclass
class SolveResult:
    """``status`` is one of ``sat``, ``unsat``, ``terminated`` or ``unknown``."""

    status: str
    model: list[bool] | None = None
    payload: Any = None
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return self.status == "sat"


@dataclass
class SolverConfig:
    seed: int = 0
    heuristic: str = "vsids"
    var_decay: float = 0.95
    restart_base: int = 64
    reduce_first: int = 2000
    reduce_inc: int = 300
    default_phase: bool = False
    phase_saving: bool = True


def _luby(i: int) -> int:
    """i-th element (0-based) of the Luby sequence 1,1,2,1,1,2,4,..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i %= size
    return 1 << seq


class Solver:
    """One CDCL search over a fixed variable set.

    The instance is single-threaded; a callback gets the solver itself as a
    read-only view and must not call back into :meth:`solve`.
    """

    def __init__(self, num_vars: int, clauses: Iterable[Sequence[int]], config: SolverConfig | None = None):
        self.config = config or SolverConfig()
        if self.config.heuristic not in ("vsids", "ordered"):
            raise ValueError(f"unknown heuristic {self.config.heuristic!r}")
        self.num_vars = n = num_vars
        size = 2 * (n + 1)
        self.val = [0] * size
        self.level = [0] * (n + 1)
        self.reason: list[list[int] | None] = [None] * (n + 1)
        self.phase = [0 if self.config.default_phase else 1] * (n + 1)
        self.seen = [False] * (n + 1)
        self.activity = [0.0] * (n + 1)
        self.var_inc = 1.0
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.watches: list[list[list[int]]] = [[] for _ in range(size)]
        self.bin_watches: list[list[tuple[int, list[int]]]] = [[] for _ in range(size)]
        self.learnts: list[list[int]] = []
        self.lbd: dict[int, int] = {}
        self.permanent = 0
        self.ok = True
        self.stats = {
            "conflicts": 0,
            "decisions": 0,
            "propagations": 0,
            "restarts": 0,
            "learned": 0,
            "deleted": 0,
            "callback_calls": 0,
            "callback_clauses": 0,
        }
        if self.config.seed:
            rng = random.Random(self.config.seed)
            for v in range(1, n + 1):
                self.activity[v] = rng.random() * 1e-5
        self.heap_key: list[float | None] = [None] * (n + 1)
        self.heap: list[tuple[float, int]] = []
        for v in range(1, n + 1):
            self._heap_insert(v)
        self._units: list[int] = []
        for c in clauses:
            self._add_input_clause(c)

    # -- public views ---------------------------------------------------------

    def value(self, var: int) -> bool | None:
        v = self.val[2 * var]
        return None if v == 0 else v == 1

    def decision_level(self) -> int:
        return len(self.trail_lim)

    # -- clause storage -------------------------------------------------------

    def _to_internal(self, clause: Sequence[int]) -> list[int]:
        out: list[int] = []
        seen: set[int] = set()
        for lit in clause:
            lit = int(lit)
            if lit == 0 or abs(lit) > self.num_vars:
                raise MalformedClause(f"literal {lit} out of range 1..{self.num_vars}")
            ilit = 2 * lit if lit > 0 else -2 * lit + 1
            if ilit in seen:
                continue
            if ilit ^ 1 in seen:
                raise MalformedClause(f"tautological clause {list(clause)}")
            seen.add(ilit)
            out.append(ilit)
        if not out:
            raise MalformedClause("empty clause")
        return out

    def _attach(self, c: list[int]) -> None:
        if len(c) == 2:
            a, b = c
            self.bin_watches[a].append((b, c))
            self.bin_watches[b].append((a, c))
        else:
            self.watches[c[0]].append(c)
            self.watches[c[1]].append(c)

    def _add_input_clause(self, clause: Sequence[int]) -> None:
        c = self._to_internal(clause)
        if len(c) == 1:
            self._units.append(c[0])
        else:
            self._attach(c)

    # -- assignment -----------------------------------------------------------

    def _enqueue(self, lit: int, reason: list[int] | None) -> None:
        val = self.val
        val[lit] = 1
        val[lit ^ 1] = -1
        var = lit >> 1
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.trail.append(lit)

    def _cancel_until(self, lvl: int) -> None:
        trail_lim = self.trail_lim
        if len(trail_lim) <= lvl:
            return
        trail = self.trail
        lim = trail_lim[lvl]
        val, reason, phase = self.val, self.reason, self.phase
        heap_key, activity, heap = self.heap_key, self.activity, self.heap
        save = self.config.phase_saving
        for idx in range(len(trail) - 1, lim - 1, -1):
            lit = trail[idx]
            var = lit >> 1
            val[lit] = 0
            val[lit ^ 1] = 0
            reason[var] = None
            if save:
                phase[var] = lit & 1
            if heap_key[var] is None:
                a = activity[var]
                heap_key[var] = a
                heapq.heappush(heap, (-a, var))
        del trail[lim:]
        del trail_lim[lvl:]
        self.qhead = lim

    # -- heuristic ------------------------------------------------------------

    def _heap_insert(self, var: int) -> None:
        a = self.activity[var]
        self.heap_key[var] = a
        heapq.heappush(self.heap, (-a, var))

    def _rebuild_heap(self) -> None:
        val, act = self.val, self.activity
        self.heap = [(-act[v], v) for v in range(1, self.num_vars + 1) if val[2 * v] == 0]
        heapq.heapify(self.heap)
        self.heap_key = [None] * (self.num_vars + 1)
        for _, v in self.heap:
            self.heap_key[v] = act[v]

    def _bump(self, var: int) -> None:
        act = self.activity
        a = act[var] + self.var_inc
        act[var] = a
        if a > 1e100:
            for v in range(1, self.num_vars + 1):
                act[v] *= 1e-100
            self.var_inc *= 1e-100
            self._rebuild_heap()
            return
        if self.heap_key[var] is not None:
            self.heap_key[var] = a
            heapq.heappush(self.heap, (-a, var))

    def _pick_branch_lit(self) -> int:
        heap, val, act, heap_key = self.heap, self.val, self.activity, self.heap_key
        pop = heapq.heappop
        while heap:
            neg_a, var = pop(heap)
            if heap_key[var] is None or -neg_a != act[var]:
                continue
            heap_key[var] = None
            if val[2 * var] == 0:
                if len(heap) > 6 * self.num_vars:
                    self._rebuild_heap()
                return 2 * var + self.phase[var]
        return -1

    # -- propagation ----------------------------------------------------------

    def _propagate(self) -> list[int] | None:
        trail, val = self.trail, self.val
        watches, binw = self.watches, self.bin_watches
        reason, level = self.reason, self.level
        lvl = len(self.trail_lim)
        qhead = self.qhead
        confl = None
        start = qhead
        while qhead < len(trail):
            fl = trail[qhead] ^ 1
            qhead += 1
            for other, c in binw[fl]:
                v = val[other]
                if v == 1:
                    continue
                if v == 0:
                    val[other] = 1
                    val[other ^ 1] = -1
                    var = other >> 1
                    level[var] = lvl
                    reason[var] = c
                    trail.append(other)
                else:
                    confl = c
                    break
            if confl is not None:
                break
            ws = watches[fl]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                first = c[0]
                if first == fl:
                    first = c[1]
                    c[0] = first
                    c[1] = fl
                if val[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != -1:
                        c[1] = lk
                        c[k] = fl
                        watches[lk].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if val[first] == -1:
                        confl = c
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                    else:
                        val[first] = 1
                        val[first ^ 1] = -1
                        var = first >> 1
                        level[var] = lvl
                        reason[var] = c
                        trail.append(first)
            del ws[j:]
            if confl is not None:
                break
        self.stats["propagations"] += qhead - start
        self.qhead = qhead
        return confl

    # -- conflict analysis ----------------------------------------------------

    def _analyze(self, confl: list[int]) -> tuple[list[int], int, int]:
        """First-UIP learning. Returns (clause, backjump level, lbd)."""
        seen, level, reason, trail = self.seen, self.level, self.reason, self.trail
        cur = len(self.trail_lim)
        learnt = [0]
        path = 0
        p = -1
        idx = len(trail) - 1
        bump = self._bump
        while True:
            for q in confl:
                if q == p:
                    continue
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    bump(v)
                    if level[v] >= cur:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            seen[p >> 1] = False
            path -= 1
            if path == 0:
                break
            confl = reason[p >> 1]
        learnt[0] = p ^ 1

        # drop literals implied by the rest of the clause
        to_clear = learnt[1:]
        abstract = 0
        for q in to_clear:
            abstract |= 1 << (level[q >> 1] & 31)
        out = [learnt[0]]
        for q in learnt[1:]:
            if reason[q >> 1] is None or not self._redundant(q, abstract, to_clear):
                out.append(q)
        for q in to_clear:
            seen[q >> 1] = False

        if len(out) == 1:
            bt = 0
        else:
            best = 1
            for i in range(2, len(out)):
                if level[out[i] >> 1] > level[out[best] >> 1]:
                    best = i
            out[1], out[best] = out[best], out[1]
            bt = level[out[1] >> 1]
        lbd = len({level[q >> 1] for q in out})
        self.var_inc /= self.config.var_decay
        return out, bt, lbd

    def _redundant(self, lit: int, abstract: int, to_clear: list[int]) -> bool:
        """True if ``lit`` is implied by other literals already in the clause."""
        seen, level, reason = self.seen, self.level, self.reason
        stack = [lit]
        top = len(to_clear)
        while stack:
            xv = stack.pop() >> 1
            for q in reason[xv]:
                v = q >> 1
                if v == xv or seen[v] or level[v] == 0:
                    continue
                if reason[v] is not None and (1 << (level[v] & 31)) & abstract:
                    seen[v] = True
                    stack.append(q)
                    to_clear.append(q)
                    continue
                for extra in to_clear[top:]:
                    seen[extra >> 1] = False
                del to_clear[top:]
                return False
        return True

    # -- clause database ------------------------------------------------------

    def _reduce_db(self) -> None:
        reason, val = self.reason, self.val
        lbd = self.lbd
        keep: list[list[int]] = []
        cand: list[list[int]] = []
        for c in self.learnts:
            locked = reason[c[0] >> 1] is c and val[c[0]] == 1
            if locked or lbd[id(c)] <= 2:
                keep.append(c)
            else:
                cand.append(c)
        cand.sort(key=lambda c: lbd[id(c)])
        half = len(cand) // 2
        keep.extend(cand[:half])
        drop = cand[half:]
        if not drop:
            return
        dead = {id(c) for c in drop}
        for c in drop:
            del lbd[id(c)]
        for lit in {c[0] for c in drop} | {c[1] for c in drop}:
            self.watches[lit] = [c for c in self.watches[lit] if id(c) not in dead]
        self.learnts = keep
        self.stats["deleted"] += len(drop)

    # -- injected clauses -----------------------------------------------------

    def _add_clause_during_search(self, clause: Sequence[int]) -> tuple[bool, list[int] | None]:
        """Attach a callback clause.

        Returns ``(changed, conflict)``: whether the trail moved, and a
        clause to analyse if the new clause is falsified.
        """
        c = self._to_internal(clause)
        self.stats["callback_clauses"] += 1
        val, level = self.val, self.level
        if len(c) == 1:
            lit = c[0]
            if val[lit] == 1 and level[lit >> 1] == 0:
                return False, None
            self._cancel_until(0)
            if val[lit] == -1:
                self.ok = False
                return True, None
            if val[lit] == 0:
                self._enqueue(lit, None)
            return True, None

        def rank(lit: int) -> tuple[int, int]:
            v = val[lit]
            if v == 1:
                return (2, -level[lit >> 1])
            if v == 0:
                return (1, 0)
            return (0, level[lit >> 1])

        c.sort(key=rank, reverse=True)
        self.permanent += 1
        self._attach(c)
        lit0, lit1 = c[0], c[1]
        if val[lit0] == -1:
            # every literal is false: conflict at the highest level among them
            top = level[lit0 >> 1]
            if top == 0:
                self.ok = False
                return True, None
            self._cancel_until(top)
            return True, c
        if val[lit1] == -1:
            lvl1 = level[lit1 >> 1]
            if val[lit0] == 0 or level[lit0 >> 1] > lvl1:
                # the clause is unit below the current level; imply it there
                self._cancel_until(lvl1)
                if val[lit0] == 0:
                    self._enqueue(lit0, c)
                    return True, None
        return False, None

    # -- main loop ------------------------------------------------------------

    def _learn(self, confl: list[int]) -> None:
        clause, bt, lbd = self._analyze(confl)
        self._cancel_until(bt)
        if len(clause) == 1:
            self._enqueue(clause[0], None)
            return
        self._attach(clause)
        if len(clause) > 2:
            self.learnts.append(clause)
            self.lbd[id(clause)] = lbd
        self.stats["learned"] += 1
        self._enqueue(clause[0], clause)

    def _model(self) -> list[bool]:
        val = self.val
        return [False] + [val[2 * v] == 1 for v in range(1, self.num_vars + 1)]

    def solve(
        self,
        callback: Callback | None = None,
        time_limit: float | None = None,
        conflict_limit: int | None = None,
    ) -> SolveResult:
        stats = self.stats
        deadline = None if time_limit is None else time.perf_counter() + time_limit

        def done(status: str, **kw: Any) -> SolveResult:
            return SolveResult(status, stats=dict(stats), **kw)

        if not self.ok:
            return done("unsat")
        for lit in self._units:
            v = self.val[lit]
            if v == -1:
                self.ok = False
                return done("unsat")
            if v == 0:
                self._enqueue(lit, None)
        self._units = []

        ordered = self.config.heuristic == "ordered"
        restart_i = 0
        restart_budget = _luby(0) * self.config.restart_base
        conflicts_since_restart = 0
        next_reduce = self.config.reduce_first
        reduce_count = 0
        ticks = 0
        next_var = 1

        while True:
            confl = self._propagate()
            if confl is not None:
                stats["conflicts"] += 1
                conflicts_since_restart += 1
                if not self.trail_lim:
                    self.ok = False
                    return done("unsat")
                self._learn(confl)
                if conflict_limit is not None and stats["conflicts"] >= conflict_limit:
                    return done("unknown")
                continue

            # fixpoints above the root, plus a complete root-level assignment
            if callback is not None and (self.trail_lim or len(self.trail) == self.num_vars):
                stats["callback_calls"] += 1
                verdict = callback(self)
                if isinstance(verdict, Terminate):
                    return done("terminated", payload=verdict.payload)
                if isinstance(verdict, AddClauses) and verdict.clauses:
                    moved = False
                    for clause in verdict.clauses:
                        changed, conflict = self._add_clause_during_search(clause)
                        if not self.ok:
                            return done("unsat")
                        if conflict is not None:
                            stats["conflicts"] += 1
                            conflicts_since_restart += 1
                            self._learn(conflict)
                            changed = True
                        moved = moved or changed
                    if moved:
                        continue

            ticks += 1
            if deadline is not None and ticks & 255 == 0 and time.perf_counter() > deadline:
                return done("unknown")

            if conflicts_since_restart >= restart_budget:
                stats["restarts"] += 1
                restart_i += 1
                restart_budget = _luby(restart_i) * self.config.restart_base
                conflicts_since_restart = 0
                self._cancel_until(0)
                continue

            if stats["conflicts"] >= next_reduce:
                reduce_count += 1
                next_reduce = stats["conflicts"] + self.config.reduce_first + self.config.reduce_inc * reduce_count
                self._reduce_db()

            if ordered:
                val = self.val
                while next_var <= self.num_vars and val[2 * next_var] != 0:
                    next_var += 1
                lit = 2 * next_var + self.phase[next_var] if next_var <= self.num_vars else -1
            else:
                lit = self._pick_branch_lit()
            if lit < 0:
                return done("sat", model=self._model())
            stats["decisions"] += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, None)
            if ordered:
                next_var = 1


def solve(
    cnf: Any,
    callback: Callback | None = None,
    config: SolverConfig | None = None,
    time_limit: float | None = None,
    conflict_limit: int | None = None,
) -> SolveResult:
    """Solve a :class:`~copperbolt.cnfenc.CnfFormula` (or anything with
    ``num_vars`` and ``clauses``)."""
    solver = Solver(cnf.num_vars, cnf.clauses, config)
    return solver.solve(callback, time_limit=time_limit, conflict_limit=conflict_limit)


def check_model(cnf: Any, model: Sequence[bool]) -> bool:
    """True iff every clause of ``cnf`` has a literal made true by ``model``.

    ``model[v]`` is the value of variable ``v``; index 0 is ignored.
    """
    for clause in cnf.clauses:
        if not any(model[lit] if lit > 0 else not model[-lit] for lit in clause):
            return False
    return True
