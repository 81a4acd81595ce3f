"""CNF encodings of ``N = p * q`` and of the e = 3 relation ``3d + 2(p + q) = 2N + 3``.

Variable numbering is deterministic: ``p`` bits take ids ``1..k``, ``q`` bits
``k+1..2k``, then partial products and adder outputs in construction order,
then (optionally) the ``d`` bits and their adder chain. Every gate gets its
own Tseytin variable; nothing is constant-folded except structurally absent
(zero) inputs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from .numtheory import isqrt

__all__ = [
    "BadBitlength",
    "ConflictingLeak",
    "CnfFormula",
    "VarMap",
    "Leak",
    "encode_factoring",
    "add_leak_units",
    "d_tilde",
    "fixed_high_bits_of_d",
    "encode_d_equation",
    "write_dimacs",
    "read_dimacs",
    "decode_int",
    "truth_assignment",
]

Leak = tuple[str, int, int]


class BadBitlength(ValueError):
    pass


class ConflictingLeak(ValueError):
    pass


@dataclass
class CnfFormula:
    num_vars: int = 0
    clauses: list[list[int]] = field(default_factory=list)
    _units: set[int] = field(default_factory=set, repr=False, compare=False)

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add_clause(self, lits: Iterable[int]) -> None:
        clause = list(dict.fromkeys(lits))
        if not clause:
            raise ValueError("empty clause")
        for lit in clause:
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"literal {lit} out of range")
        if any(-lit in clause for lit in clause):
            raise ValueError(f"tautological clause {clause}")
        if len(clause) == 1:
            if clause[0] in self._units:
                return
            self._units.add(clause[0])
        self.clauses.append(clause)

    def add_unit(self, lit: int) -> None:
        self.add_clause([lit])

    def copy(self) -> CnfFormula:
        return CnfFormula(self.num_vars, [list(c) for c in self.clauses], set(self._units))


@dataclass
class VarMap:
    """Which variable holds which semantic bit (index 0 = least significant)."""

    k: int
    n: int
    p_bits: list[int]
    q_bits: list[int]
    product_bits: list[int]
    d_bits: list[int] | None = None
    aux_count: int = 0
    modulus: int = 0

    def bits(self, target: str) -> list[int]:
        if target == "p":
            return self.p_bits
        if target == "q":
            return self.q_bits
        if target == "d":
            if self.d_bits is None:
                raise ValueError("formula has no d bits")
            return self.d_bits
        raise ValueError(f"unknown leak target {target!r}")


# --- Tseytin gates -----------------------------------------------------------


def _and_gate(cnf: CnfFormula, a: int, b: int) -> int:
    c = cnf.new_var()
    cnf.add_clause([-c, a])
    cnf.add_clause([-c, b])
    cnf.add_clause([c, -a, -b])
    return c


def _half_adder(cnf: CnfFormula, a: int, b: int) -> tuple[int, int]:
    s = cnf.new_var()
    # s <-> a xor b
    cnf.add_clause([-s, a, b])
    cnf.add_clause([-s, -a, -b])
    cnf.add_clause([s, -a, b])
    cnf.add_clause([s, a, -b])
    return s, _and_gate(cnf, a, b)


def _full_adder(cnf: CnfFormula, a: int, b: int, c: int) -> tuple[int, int]:
    s = cnf.new_var()
    for x in (1, -1):
        for y in (1, -1):
            for z in (1, -1):
                # odd number of positive inputs forces s, even forbids it
                parity = (x > 0) + (y > 0) + (z > 0)
                lit = s if parity % 2 else -s
                cnf.add_clause([lit, -x * a, -y * b, -z * c])
    co = cnf.new_var()
    cnf.add_clause([-co, a, b])
    cnf.add_clause([-co, a, c])
    cnf.add_clause([-co, b, c])
    cnf.add_clause([co, -a, -b])
    cnf.add_clause([co, -a, -c])
    cnf.add_clause([co, -b, -c])
    return s, co


def _sum_inputs(cnf: CnfFormula, bits: list[int]) -> tuple[int | None, int | None]:
    """Sum of up to three bits as (sum, carry); None stands for constant 0."""
    if not bits:
        return None, None
    if len(bits) == 1:
        return bits[0], None
    if len(bits) == 2:
        return _half_adder(cnf, bits[0], bits[1])
    return _full_adder(cnf, bits[0], bits[1], bits[2])


def _ripple_add(cnf: CnfFormula, a: Sequence[int | None], b: Sequence[int | None]) -> list[int | None]:
    width = max(len(a), len(b))
    out: list[int | None] = []
    carry: int | None = None
    for i in range(width):
        ins = [x for x in (a[i] if i < len(a) else None, b[i] if i < len(b) else None, carry) if x is not None]
        s, carry = _sum_inputs(cnf, ins)
        out.append(s)
    out.append(carry)
    return out


def _fix_bits(cnf: CnfFormula, bits: Sequence[int | None], value: int) -> None:
    """Force ``bits`` (LSB first) to spell ``value``; absent bits must be 0."""
    if value >> len(bits):
        raise BadBitlength(f"{value} does not fit in {len(bits)} bits")
    for i, v in enumerate(bits):
        bit = (value >> i) & 1
        if v is None:
            if bit:
                raise BadBitlength(f"bit {i} of {value} is structurally zero")
            continue
        cnf.add_unit(v if bit else -v)


# --- factoring ---------------------------------------------------------------


def encode_factoring(N: int, k: int) -> tuple[CnfFormula, VarMap]:
    """Schoolbook multiplier with product fixed to ``N``.

    Columns are reduced LSB first: each column's bits (partial products by
    increasing ``p`` index, then incoming carries) are consumed three at a
    time by full adders, a half adder handles a final pair, sums stay in the
    column and carries move to the next one.
    """
    n = N.bit_length()
    if N % 2 == 0:
        raise BadBitlength("N must be odd")
    if k < 2 or not 2 * k - 1 <= n <= 2 * k:
        raise BadBitlength(f"N has {n} bits, incompatible with {k}-bit factors")
    cnf = CnfFormula()
    p = [cnf.new_var() for _ in range(k)]
    q = [cnf.new_var() for _ in range(k)]
    columns: list[list[int]] = [[] for _ in range(2 * k + 1)]
    for i in range(k):
        for j in range(k):
            columns[i + j].append(_and_gate(cnf, p[i], q[j]))
    product: list[int] = []
    for col in range(2 * k):
        bits = columns[col]
        pos = 0
        while len(bits) - pos > 1:
            take = bits[pos : pos + 3]
            pos += len(take)
            s, c = _sum_inputs(cnf, take)
            bits.append(s)
            columns[col + 1].append(c)
        product.append(bits[pos])
    overflow = columns[2 * k]
    _fix_bits(cnf, product, N)
    for c in overflow:
        cnf.add_unit(-c)
    for bits in (p, q):
        cnf.add_unit(bits[0])
        cnf.add_unit(bits[k - 1])
    vm = VarMap(
        k=k,
        n=n,
        p_bits=p,
        q_bits=q,
        product_bits=product,
        aux_count=cnf.num_vars - 2 * k,
        modulus=N,
    )
    return cnf, vm


def add_leak_units(cnf: CnfFormula, varmap: VarMap, leaks: Iterable[Leak]) -> CnfFormula:
    """Append one unit clause per known bit. Mutates and returns ``cnf``."""
    seen: dict[tuple[str, int], int] = {}
    todo = []
    for target, index, value in leaks:
        bits = varmap.bits(target)
        if not 0 <= index < len(bits):
            raise IndexError(f"{target} bit {index} out of range")
        if value not in (0, 1):
            raise ValueError(f"leak value must be 0 or 1, got {value}")
        prev = seen.setdefault((target, index), value)
        if prev != value:
            raise ConflictingLeak(f"{target} bit {index} leaked as both 0 and 1")
        todo.append((bits[index], value))
    for var, value in todo:
        cnf.add_unit(var if value else -var)
    return cnf


# --- low public exponent -----------------------------------------------------


def d_tilde(N: int) -> int:
    """``floor(2N/3 + 1)``."""
    return (2 * N + 3) // 3


def fixed_high_bits_of_d(N: int, n: int | None = None) -> tuple[int, str]:
    """Number ``l`` and value of the leading bits every admissible ``d`` shares.

    Compares the ``n``-bit strings of ``d~`` and ``d~ - isqrt(2N)``; the true
    ``d`` lies between them, so it carries their common prefix.
    """
    if n is None:
        n = N.bit_length()
    hi = d_tilde(N)
    lo = hi - isqrt(2 * N)
    if lo < 0:
        return 0, ""
    a, b = format(hi, f"0{n}b"), format(lo, f"0{n}b")
    if len(a) != n or len(b) != n:
        raise BadBitlength(f"d~ does not fit in {n} bits")
    l = 0
    while l < n and a[l] == b[l]:
        l += 1
    return l, a[:l]


def encode_d_equation(cnf: CnfFormula, varmap: VarMap, N: int) -> tuple[CnfFormula, VarMap]:
    """Add ``d`` bits and ripple-carry adders for ``d + 2d + 2p + 2q = 2N + 3``.

    Also pins the leading bits of ``d`` that are provably shared with ``d~``.
    Mutates ``cnf`` and ``varmap``.
    """
    if varmap.d_bits is not None:
        raise ValueError("d equation already encoded")
    n = varmap.n
    d = [cnf.new_var() for _ in range(n)]
    twice = lambda bits: [None, *bits]  # noqa: E731
    acc = _ripple_add(cnf, d, twice(d))
    acc = _ripple_add(cnf, acc, twice(varmap.p_bits))
    acc = _ripple_add(cnf, acc, twice(varmap.q_bits))
    _fix_bits(cnf, acc, 2 * N + 3)
    l, prefix = fixed_high_bits_of_d(N, n)
    for i, ch in enumerate(prefix):
        v = d[n - 1 - i]
        cnf.add_unit(v if ch == "1" else -v)
    varmap.d_bits = d
    varmap.aux_count = cnf.num_vars - 2 * varmap.k - n
    return cnf, varmap


# --- helpers -----------------------------------------------------------------


def decode_int(model: Sequence[bool] | dict[int, bool], bits: Sequence[int]) -> int:
    """Integer spelled (LSB first) by ``bits`` under ``model`` (indexed by var id)."""
    return sum(1 << i for i, v in enumerate(bits) if model[v])


def truth_assignment(cnf: CnfFormula, varmap: VarMap, p: int, q: int, d: int | None = None) -> list[bool]:
    """Full assignment induced by known factors, found by propagating the circuit.

    Inputs are fixed and every gate output follows by unit propagation, so a
    simple fixpoint over the clauses yields the complete model.
    """
    assign: dict[int, bool] = {}
    for bits, val in ((varmap.p_bits, p), (varmap.q_bits, q)):
        for i, v in enumerate(bits):
            assign[v] = bool((val >> i) & 1)
    if varmap.d_bits is not None:
        if d is None:
            raise ValueError("d required for a formula with d bits")
        for i, v in enumerate(varmap.d_bits):
            assign[v] = bool((d >> i) & 1)
    changed = True
    while changed:
        changed = False
        for clause in cnf.clauses:
            free = None
            sat = False
            nfree = 0
            for lit in clause:
                val = assign.get(abs(lit))
                if val is None:
                    nfree += 1
                    free = lit
                elif val == (lit > 0):
                    sat = True
                    break
            if not sat and nfree == 1:
                assign[abs(free)] = free > 0
                changed = True
    model = [False] * (cnf.num_vars + 1)
    for v, val in assign.items():
        model[v] = val
    return model


# --- DIMACS ------------------------------------------------------------------


def write_dimacs(cnf: CnfFormula, varmap: VarMap | None = None, sink: TextIO | None = None) -> str:
    lines = []
    if varmap is not None:
        lines.append(f"c nbits {varmap.k} {varmap.n}")
        lines.append(f"c modulus {varmap.modulus:x}")
        for name, bits in (("pbit", varmap.p_bits), ("qbit", varmap.q_bits), ("dbit", varmap.d_bits or [])):
            lines.extend(f"c {name} {i} {v}" for i, v in enumerate(bits))
        lines.extend(f"c prodbit {i} {v}" for i, v in enumerate(varmap.product_bits))
        lines.append(f"c aux {varmap.aux_count}")
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    lines.extend(" ".join(map(str, c)) + " 0" for c in cnf.clauses)
    text = "\n".join(lines) + "\n"
    if sink is not None:
        sink.write(text)
    return text


_HEADER = re.compile(r"p\s+cnf\s+(\d+)\s+(\d+)")


def read_dimacs(text: str) -> tuple[CnfFormula, VarMap | None]:
    """Parse DIMACS text; the varmap is returned when the comment block has one."""
    cnf = CnfFormula()
    meta: dict[str, dict[int, int]] = {"pbit": {}, "qbit": {}, "dbit": {}, "prodbit": {}}
    k = n = None
    modulus = 0
    aux = 0
    declared_clauses = None
    pending: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 4 and parts[1] in meta:
                meta[parts[1]][int(parts[2])] = int(parts[3])
            elif len(parts) == 4 and parts[1] == "nbits":
                k, n = int(parts[2]), int(parts[3])
            elif len(parts) == 3 and parts[1] == "modulus":
                modulus = int(parts[2], 16)
            elif len(parts) == 3 and parts[1] == "aux":
                aux = int(parts[2])
            continue
        m = _HEADER.match(line)
        if m:
            cnf.num_vars = int(m.group(1))
            declared_clauses = int(m.group(2))
            continue
        if declared_clauses is None:
            raise ValueError("clause before 'p cnf' header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                cnf.add_clause(pending)
                pending = []
            else:
                pending.append(lit)
    if pending:
        raise ValueError("unterminated clause")
    varmap = None
    if k is not None:

        def ordered(d: dict[int, int]) -> list[int]:
            return [d[i] for i in range(len(d))]

        varmap = VarMap(
            k=k,
            n=n,
            p_bits=ordered(meta["pbit"]),
            q_bits=ordered(meta["qbit"]),
            product_bits=ordered(meta["prodbit"]),
            d_bits=ordered(meta["dbit"]) or None,
            aux_count=aux,
            modulus=modulus,
        )
    return cnf, varmap
