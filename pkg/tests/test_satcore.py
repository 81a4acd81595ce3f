import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copperbolt.cnfenc import CnfFormula, add_leak_units, decode_int, encode_factoring
from copperbolt.satcore import (
    AddClauses,
    MalformedClause,
    Solver,
    SolverConfig,
    Terminate,
    check_model,
    solve,
)


def brute_sat(n, clauses):
    for bits in itertools.product([False, True], repeat=n):
        model = [False, *bits]
        if check_model(CnfFormula(n, clauses), model):
            return True
    return False


def pigeonhole(holes):
    pigeons = holes + 1
    var = lambda i, j: i * holes + j + 1  # noqa: E731
    clauses = [[var(i, j) for j in range(holes)] for i in range(pigeons)]
    for j in range(holes):
        for a, b in itertools.combinations(range(pigeons), 2):
            clauses.append([-var(a, j), -var(b, j)])
    return CnfFormula(pigeons * holes, clauses)


def test_trivial_cases():
    assert solve(CnfFormula(1, [[1], [-1]])).status == "unsat"
    res = solve(CnfFormula(2, [[1, 2]]))
    assert res.status == "sat" and check_model(CnfFormula(2, [[1, 2]]), res.model)
    assert solve(CnfFormula(3, [])).status == "sat"


def test_factor_35():
    cnf, vm = encode_factoring(35, 3)
    res = solve(cnf)
    assert res.status == "sat"
    assert {decode_int(res.model, vm.p_bits), decode_int(res.model, vm.q_bits)} == {5, 7}
    assert check_model(cnf, res.model)


def test_check_model_rejections():
    assert not check_model(CnfFormula(1, [[1]]), [False, False])
    cnf, vm = encode_factoring(35, 3)
    model = solve(cnf).model
    for v in range(1, cnf.num_vars + 1):
        flipped = list(model)
        flipped[v] = not flipped[v]
        # every variable is functionally determined, so any flip breaks a clause
        assert not check_model(cnf, flipped)


def test_malformed_clauses():
    with pytest.raises(MalformedClause):
        Solver(2, [[3]])
    with pytest.raises(MalformedClause):
        Solver(2, [[1, -1]])
    with pytest.raises(MalformedClause):
        Solver(2, [[]])
    with pytest.raises(ValueError):
        Solver(2, [[1]], SolverConfig(heuristic="lrb"))


@pytest.mark.parametrize("holes", [3, 4, 5])
def test_pigeonhole_unsat(holes):
    assert solve(pigeonhole(holes)).status == "unsat"


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=1, max_value=10), st.integers(min_value=0, max_value=2**32))
def test_random_3sat_matches_brute_force(n, seed):
    rng = random.Random(seed)
    m = rng.randint(1, 5 * n)
    clauses = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), min(3, n))
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    res = solve(CnfFormula(n, clauses), config=SolverConfig(seed=seed % 7))
    assert res.status == ("sat" if brute_sat(n, clauses) else "unsat")
    if res.sat:
        assert check_model(CnfFormula(n, clauses), res.model)


def test_larger_random_instances_and_heuristics():
    rng = random.Random(7)
    for trial in range(8):
        n = 60
        clauses = [[v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 3)] for _ in range(250)]
        cnf = CnfFormula(n, clauses)
        a = solve(cnf, config=SolverConfig(heuristic="vsids"))
        b = solve(cnf, config=SolverConfig(heuristic="ordered", restart_base=16, reduce_first=50, reduce_inc=10))
        assert a.status == b.status
        for r in (a, b):
            if r.sat:
                assert check_model(cnf, r.model)


def test_reduce_db_keeps_correctness():
    cnf = pigeonhole(6)
    res = solve(cnf, config=SolverConfig(reduce_first=20, reduce_inc=5, restart_base=8))
    assert res.status == "unsat"
    assert res.stats["deleted"] > 0


def test_same_seed_same_run():
    cnf, vm = encode_factoring(0xC5A7 * 0xF1D3, 16)
    add_leak_units(cnf, vm, [("p", i, (0xC5A7 >> i) & 1) for i in range(0, 16, 3)])
    runs = [solve(cnf, config=SolverConfig(seed=3)) for _ in range(2)]
    assert runs[0].model == runs[1].model
    assert runs[0].stats == runs[1].stats


def test_conflict_limit_gives_unknown():
    res = solve(pigeonhole(7), conflict_limit=10)
    assert res.status == "unknown" and res.stats["conflicts"] == 10


def test_time_limit_gives_unknown():
    res = solve(pigeonhole(9), time_limit=0.2)
    assert res.status == "unknown"


def test_callback_terminate():
    cnf, vm = encode_factoring(35, 3)
    res = solve(cnf, callback=lambda s: Terminate("stop"))
    assert res.status == "terminated" and res.payload == "stop"


def test_callback_clauses_are_enforced():
    # forbid p = 5 whenever it appears; the only remaining model has p = 7
    cnf, vm = encode_factoring(35, 3)
    seen = []

    def cb(s):
        vals = [s.value(v) for v in vm.p_bits]
        if None in vals:
            return None
        p = sum(1 << i for i, b in enumerate(vals) if b)
        seen.append(p)
        if p == 5:
            return AddClauses([[-v if (5 >> i) & 1 else v for i, v in enumerate(vm.p_bits)]])
        return None

    res = solve(cnf, callback=cb)
    assert res.status == "sat"
    assert decode_int(res.model, vm.p_bits) == 7
    assert check_model(cnf, res.model)


def test_callback_can_make_formula_unsat():
    cnf, vm = encode_factoring(35, 3)

    def cb(s):
        vals = [s.value(v) for v in vm.p_bits]
        if None in vals:
            return None
        return AddClauses([[-v if s.value(v) else v for v in vm.p_bits]])

    res = solve(cnf, callback=cb)
    assert res.status == "unsat"
    assert res.stats["callback_clauses"] >= 2


def test_callback_clause_with_true_and_false_literals():
    # clause whose literals are a mix of assigned values must not break watches
    rng = random.Random(11)
    n = 30
    clauses = [[v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 3)] for _ in range(90)]
    base = CnfFormula(n, clauses)
    extra = [[v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), rng.randint(1, 4))] for _ in range(40)]
    pending = list(extra)

    def cb(s):
        if pending:
            return AddClauses([pending.pop()])
        return None

    res = solve(base, callback=cb)
    full = CnfFormula(n, clauses + extra)
    assert res.status == ("sat" if solve(full).sat else "unsat")
    if res.sat:
        assert check_model(full, res.model)


def test_callback_skips_partial_root_fixpoints():
    cnf = CnfFormula(3, [[1], [2]])
    calls = []
    res = solve(cnf, callback=lambda s: calls.append((s.decision_level(), s.value(3))))
    assert res.sat
    assert calls and all(level > 0 for level, _ in calls)


def test_callback_can_veto_root_model():
    cnf = CnfFormula(2, [[1], [2]])
    calls = []

    def cb(s):
        calls.append(s.decision_level())
        return AddClauses([[-1, -2]])

    assert solve(cnf, callback=cb).status == "unsat"
    assert calls == [0]


def test_leaked_factoring_with_vsids():
    p, q = 0xF1D3, 0xC5A7
    N = p * q
    cnf, vm = encode_factoring(N, 16)
    rng = random.Random(1)
    leaks = [("p", i, (p >> i) & 1) for i in rng.sample(range(16), 8)]
    leaks += [("q", i, (q >> i) & 1) for i in rng.sample(range(16), 8)]
    add_leak_units(cnf, vm, leaks)
    res = solve(cnf)
    assert res.sat
    assert decode_int(res.model, vm.p_bits) * decode_int(res.model, vm.q_bits) == N
