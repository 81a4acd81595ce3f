import random

import pytest

from copperbolt.numtheory import gen_prime, mod_inverse


def make_key(k: int, seed: int, e3: bool = False) -> tuple[int, int, int, int | None]:
    """(N, p, q, d) with two distinct k-bit primes and a 2k-bit modulus."""
    rng = random.Random(seed)
    while True:
        p = gen_prime(k, rng, avoid_1_mod_3=e3)
        q = gen_prime(k, rng, avoid_1_mod_3=e3)
        if p != q and (p * q).bit_length() == 2 * k:
            break
    d = mod_inverse(3, (p - 1) * (q - 1)) if e3 else None
    return p * q, p, q, d


def trial_division(n: int) -> list[int]:
    """Prime factors with multiplicity; only meant for n < 2^40."""
    out, f = [], 2
    while f * f <= n:
        while n % f == 0:
            out.append(f)
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def random_leaks(rng: random.Random, values: dict[str, tuple[int, int]], pct: float) -> list[tuple[str, int, int]]:
    leaks = []
    for target, (value, length) in values.items():
        for i in sorted(rng.sample(range(length), round(pct * length / 100))):
            leaks.append((target, i, (value >> i) & 1))
    return leaks


@pytest.fixture
def key64():
    return make_key(32, 64)


def enumerate_models(num_vars: int, clauses: list[list[int]], order: list[int]) -> list[dict[int, bool]]:
    """Every total model of a CNF, by plain splitting with unit propagation.

    Deliberately naive and independent of the solver under test. Variables in
    ``order`` are split first; any left unassigned afterwards are split too.
    """
    first = set(order)
    split = list(order) + [v for v in range(1, num_vars + 1) if v not in first]
    occurs: dict[int, list[list[int]]] = {}
    for c in clauses:
        for lit in c:
            occurs.setdefault(-lit, []).append(c)
    units = [c[0] for c in clauses if len(c) == 1]
    models: list[dict[int, bool]] = []

    def propagate(assign: dict[int, bool], queue: list[int]) -> dict[int, bool] | None:
        assign = dict(assign)
        while queue:
            lit = queue.pop()
            val = assign.get(abs(lit))
            if val is not None:
                if val != (lit > 0):
                    return None
                continue
            assign[abs(lit)] = lit > 0
            # clauses that just lost the literal -lit
            for c in occurs.get(lit, ()):
                free = []
                for other in c:
                    v = assign.get(abs(other))
                    if v is None:
                        free.append(other)
                    elif v == (other > 0):
                        break
                else:
                    if not free:
                        return None
                    if len(free) == 1:
                        queue.append(free[0])
        return assign

    def go(assign: dict[int, bool], queue: list[int]) -> None:
        assign = propagate(assign, queue)
        if assign is None:
            return
        for v in split:
            if v not in assign:
                go(assign, [-v])
                go(assign, [v])
                return
        models.append(assign)

    go({}, list(units))
    return models


# one (criterion, passed, detail) entry per acceptance check, printed at the end
ACCEPTANCE: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
