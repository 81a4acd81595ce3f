import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import enumerate_models, make_key
from copperbolt.cnfenc import (
    BadBitlength,
    CnfFormula,
    ConflictingLeak,
    add_leak_units,
    d_tilde,
    decode_int,
    encode_d_equation,
    encode_factoring,
    fixed_high_bits_of_d,
    read_dimacs,
    truth_assignment,
    write_dimacs,
)
from copperbolt.numtheory import isqrt, mod_inverse
from copperbolt.satcore import check_model, solve


def factor_pairs(N, k):
    return {
        (a, b)
        for a in range(2 ** (k - 1), 2**k)
        for b in range(2 ** (k - 1), 2**k)
        if a * b == N
    }


def model_pairs(N, k, with_d=False):
    cnf, vm = encode_factoring(N, k)
    if with_d:
        encode_d_equation(cnf, vm, N)
    models = enumerate_models(cnf.num_vars, cnf.clauses, vm.p_bits + vm.q_bits + (vm.d_bits or []))
    out = []
    for m in models:
        p, q = decode_int(m, vm.p_bits), decode_int(m, vm.q_bits)
        d = decode_int(m, vm.d_bits) if with_d else None
        out.append((p, q, d))
    return out


@pytest.mark.parametrize("N,k", [(35, 3), (9, 2), (25, 3), (143, 4), (49, 3), (21, 3), (221, 4)])
def test_models_are_exactly_the_factorizations(N, k):
    got = [(p, q) for p, q, _ in model_pairs(N, k)]
    assert len(got) == len(set(got))
    assert set(got) == factor_pairs(N, k)


def test_small_examples():
    assert {(p, q) for p, q, _ in model_pairs(35, 3)} == {(5, 7), (7, 5)}
    assert [(p, q) for p, q, _ in model_pairs(9, 2)] == [(3, 3)]
    assert {(p, q) for p, q, _ in model_pairs(25, 3)} == {(5, 5)}


def test_prime_modulus_has_no_model():
    # 37 is prime; 5 * 7 = 35 and 7 * 7 = 49 bracket it
    assert model_pairs(37, 3) == []


def test_variable_layout():
    cnf, vm = encode_factoring(35, 3)
    assert vm.p_bits == [1, 2, 3] and vm.q_bits == [4, 5, 6]
    assert len(vm.product_bits) == 6
    assert vm.aux_count == cnf.num_vars - 6


def test_bad_bitlength():
    with pytest.raises(BadBitlength):
        encode_factoring(36, 3)
    with pytest.raises(BadBitlength):
        encode_factoring(35, 5)
    with pytest.raises(BadBitlength):
        encode_factoring(3, 1)


def test_leak_units():
    cnf, vm = encode_factoring(35, 3)
    before = len(cnf.clauses)
    add_leak_units(cnf, vm, [("p", 0, 1)])
    # p0 is already pinned structurally
    assert len(cnf.clauses) == before
    add_leak_units(cnf, vm, [("p", 1, 0)])
    assert cnf.clauses[-1] == [-vm.p_bits[1]]
    with pytest.raises(ConflictingLeak):
        add_leak_units(cnf, vm, [("q", 1, 0), ("q", 1, 1)])
    with pytest.raises(IndexError):
        add_leak_units(cnf, vm, [("q", 3, 0)])
    with pytest.raises(ValueError):
        add_leak_units(cnf, vm, [("d", 0, 0)])


def test_full_leak_needs_no_decisions():
    cnf, vm = encode_factoring(35, 3)
    add_leak_units(cnf, vm, [("p", i, (5 >> i) & 1) for i in range(3)])
    res = solve(cnf)
    assert res.status == "sat" and res.stats["decisions"] == 0
    assert decode_int(res.model, vm.q_bits) == 7


def test_d_tilde_examples():
    assert d_tilde(788131) == 525421 == 2**19 + 1133
    assert d_tilde(3) == 3


def test_fixed_high_bits_examples():
    assert fixed_high_bits_of_d(788131, 20) == (0, "")
    assert fixed_high_bits_of_d(9, 4) == (1, "0")


def test_fixed_high_bits_on_64_bit_key():
    N, p, q, d = make_key(32, 5, e3=True)
    l, prefix = fixed_high_bits_of_d(N)
    assert l >= 20
    assert format(d, f"0{N.bit_length()}b")[:l] == prefix


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=5, max_value=32), st.integers(min_value=0, max_value=2**32))
def test_d_tilde_gap(k, seed):
    N, p, q, d = make_key(k, seed, e3=True)
    assert 3 * d + 2 * (p + q) == 2 * N + 3
    gap = d_tilde(N) - d
    assert 0 <= gap <= isqrt(2 * N)


def test_d_equation_no_units_for_lemma_counterexample():
    cnf, vm = encode_factoring(788131, 10)
    n_before = len(cnf.clauses)
    encode_d_equation(cnf, vm, 788131)
    pinned = {vm.d_bits.index(abs(c[0])) for c in cnf.clauses[n_before:] if len(c) == 1 and abs(c[0]) in vm.d_bits}
    # only the parity of d is forced (by the low column of the adder chain)
    assert pinned == {0}


@pytest.mark.parametrize("N,k", [(5 * 5, 3), (11 * 11, 4), (17 * 23, 5), (17 * 29, 5), (23 * 29, 5)])
def test_d_equation_decodes_inverse(N, k):
    got = model_pairs(N, k, with_d=True)
    assert got
    for p, q, d in got:
        assert p * q == N
        assert d == mod_inverse(3, (p - 1) * (q - 1))
        assert 3 * d + 2 * (p + q) == 2 * N + 3


def test_d_equation_32_bit_key():
    N, p, q, d = make_key(16, 9, e3=True)
    cnf, vm = encode_factoring(N, 16)
    encode_d_equation(cnf, vm, N)
    add_leak_units(cnf, vm, [("p", i, (p >> i) & 1) for i in range(16)])
    res = solve(cnf)
    assert res.status == "sat"
    assert decode_int(res.model, vm.d_bits) == d == mod_inverse(3, (p - 1) * (q - 1))


def test_truth_assignment_satisfies_formula():
    N, p, q, d = make_key(24, 3, e3=True)
    cnf, vm = encode_factoring(N, 24)
    encode_d_equation(cnf, vm, N)
    model = truth_assignment(cnf, vm, p, q, d)
    assert check_model(cnf, model)
    assert not check_model(cnf, truth_assignment(cnf, vm, p, q, d ^ 2))


def test_dimacs_format():
    cnf = CnfFormula(2, [[1, -2], [2]])
    assert write_dimacs(cnf) == "p cnf 2 2\n1 -2 0\n2 0\n"
    sink = io.StringIO()
    write_dimacs(cnf, sink=sink)
    assert sink.getvalue() == "p cnf 2 2\n1 -2 0\n2 0\n"


def test_dimacs_round_trip():
    N, p, q, d = make_key(8, 1, e3=True)
    cnf, vm = encode_factoring(N, 8)
    encode_d_equation(cnf, vm, N)
    text = write_dimacs(cnf, vm)
    cnf2, vm2 = read_dimacs(text)
    assert cnf2.num_vars == cnf.num_vars and cnf2.clauses == cnf.clauses
    assert vm2 == vm


def test_dimacs_rejects_garbage():
    with pytest.raises(ValueError):
        read_dimacs("1 2 0\n")
    with pytest.raises(ValueError):
        read_dimacs("p cnf 2 1\n1 2\n")


def test_clause_hygiene():
    cnf = CnfFormula(3)
    cnf.add_clause([1, 1, 2])
    assert cnf.clauses == [[1, 2]]
    with pytest.raises(ValueError):
        cnf.add_clause([1, -1])
    with pytest.raises(ValueError):
        cnf.add_clause([4])
    with pytest.raises(ValueError):
        cnf.add_clause([])
