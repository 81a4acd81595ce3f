"""Dense univariate polynomials over the integers.

Only what the small-roots machinery needs: arithmetic, the map between
polynomials and scaled lattice rows, and exact extraction of bounded integer
roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "IntPoly",
    "DivisibilityViolation",
    "eval_at",
    "multiply",
    "add",
    "scale",
    "shift",
    "derivative",
    "integer_roots",
    "row_to_poly",
    "poly_to_row",
]


class DivisibilityViolation(ValueError):
    """A lattice row entry is not divisible by the matching power of X."""


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class IntPoly:
    """Polynomial with integer coefficients; ``coeffs[i]`` multiplies ``x**i``.

    The zero polynomial has an empty coefficient tuple.
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _trim(int(c) for c in self.coeffs))

    @classmethod
    def from_roots(cls, roots: Iterable[int], lead: int = 1) -> IntPoly:
        p = cls((lead,))
        for r in roots:
            p = multiply(p, cls((-r, 1)))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: int) -> int:
        return eval_at(self, x)

    def __mul__(self, other: IntPoly) -> IntPoly:
        return multiply(self, other)

    def __add__(self, other: IntPoly) -> IntPoly:
        return add(self, other)

    def __neg__(self) -> IntPoly:
        return scale(self, -1)

    def __sub__(self, other: IntPoly) -> IntPoly:
        return add(self, -other)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            body = "" if mag == 1 and i else str(mag)
            if i == 1:
                body += "x"
            elif i > 1:
                body += f"x^{i}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def eval_at(p: IntPoly, x: int) -> int:
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def multiply(a: IntPoly, b: IntPoly) -> IntPoly:
    if a.is_zero() or b.is_zero():
        return IntPoly()
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, ca in enumerate(a.coeffs):
        if ca:
            for j, cb in enumerate(b.coeffs):
                out[i + j] += ca * cb
    return IntPoly(out)


def add(a: IntPoly, b: IntPoly) -> IntPoly:
    n = max(len(a.coeffs), len(b.coeffs))
    ac = a.coeffs + (0,) * (n - len(a.coeffs))
    bc = b.coeffs + (0,) * (n - len(b.coeffs))
    return IntPoly(x + y for x, y in zip(ac, bc))


def scale(p: IntPoly, c: int) -> IntPoly:
    return IntPoly(c * a for a in p.coeffs)


def shift(p: IntPoly, k: int) -> IntPoly:
    """Multiply by ``x**k``."""
    if p.is_zero():
        return p
    return IntPoly((0,) * k + p.coeffs)


def derivative(p: IntPoly) -> IntPoly:
    return IntPoly(i * c for i, c in enumerate(p.coeffs) if i)


def _content(c: Sequence[int]) -> int:
    g = 0
    for x in c:
        g = gcd(g, x)
        if g == 1:
            break
    return g


def _primitive(c: Sequence[int]) -> list[int]:
    g = _content(c)
    return [x // g for x in c] if g > 1 else list(c)


def _prem(f: list[int], g: list[int]) -> list[int]:
    """Pseudo-remainder of f by g, scaled by a positive constant.

    Returns r with ``lc(g)**e * f = s*g + r`` up to a positive factor, so the
    sign pattern matches the true remainder. Coefficient lists are trimmed.
    """
    r = list(f)
    lg = g[-1]
    dg = len(g) - 1
    while len(r) - 1 >= dg and r:
        lr = r[-1]
        shift_by = len(r) - 1 - dg
        # r <- lg*r - lr*x^shift*g; multiplier |lg| keeps the sign
        mult = abs(lg)
        sgn_lg = 1 if lg > 0 else -1
        r = [mult * x for x in r]
        coef = lr * sgn_lg
        for i, gi in enumerate(g):
            r[i + shift_by] -= coef * gi
        while r and r[-1] == 0:
            r.pop()
    return r


def _poly_gcd(f: list[int], g: list[int]) -> list[int]:
    """Primitive gcd over Z[x] via primitive pseudo-remainder sequence."""
    a, b = _primitive(f), _primitive(g)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, (_primitive(r) if r else [])
    a = _primitive(a)
    if a and a[-1] < 0:
        a = [-x for x in a]
    return a


def _exact_div(f: list[int], g: list[int]) -> list[int]:
    """Exact quotient f / g over Q, with integer result assumed up to content."""
    r = [Fraction(x) for x in f]
    dg = len(g) - 1
    q = [Fraction(0)] * (len(f) - dg)
    for k in range(len(f) - 1 - dg, -1, -1):
        c = r[k + dg] / g[-1]
        q[k] = c
        for i, gi in enumerate(g):
            r[k + i] -= c * gi
    den = 1
    for c in q:
        den = den * c.denominator // gcd(den, c.denominator)
    return _primitive([int(c * den) for c in q])


def _sign_at(c: Sequence[int], x: int) -> int:
    acc = 0
    for a in reversed(c):
        acc = acc * x + a
    return (acc > 0) - (acc < 0)


def _sturm_chain(c: list[int]) -> list[list[int]]:
    chain = [c, _primitive(derivative(IntPoly(c)).coeffs)]
    while len(chain[-1]) > 1:
        r = _prem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(_primitive([-x for x in r]))
    return chain


def _variations(chain: list[list[int]], x: int) -> int:
    count, prev = 0, 0
    for c in chain:
        s = _sign_at(c, x)
        if s:
            if prev and s != prev:
                count += 1
            prev = s
    return count


def integer_roots(p: IntPoly, bound: int) -> set[int]:
    """All integers ``r`` with ``p(r) == 0`` and ``|r| <= bound``.

    Works on the square-free part and isolates real roots by counting sign
    variations of a Sturm chain on integer intervals, halving until each
    interval has unit width. Every candidate is confirmed by exact evaluation.
    """
    if p.is_zero():
        raise ValueError("integer_roots of the zero polynomial")
    bound = int(bound)
    if bound < 0 or p.degree == 0:
        return set()
    c = list(p.coeffs)
    g = _poly_gcd(c, list(derivative(p).coeffs))
    sqf = _exact_div(c, g) if len(g) > 1 else _primitive(c)
    if len(sqf) == 2:
        a0, a1 = sqf
        if a0 % a1 == 0 and abs(a0 // a1) <= bound:
            return {-a0 // a1}
        return set()
    chain = _sturm_chain(sqf)

    found: set[int] = set()
    lo = -bound - 1
    # count roots in the half-open interval (a, b]
    stack = [(lo, bound, _variations(chain, lo), _variations(chain, bound))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n <= 0:
            continue
        if b - a == 1:
            if _sign_at(sqf, b) == 0:
                found.add(b)
            continue
        mid = (a + b) // 2
        vm = _variations(chain, mid)
        stack.append((mid, b, vm, vb))
        stack.append((a, mid, va, vm))
    return {r for r in found if abs(r) <= bound and eval_at(p, r) == 0}


def poly_to_row(p: IntPoly, X: int, width: int) -> list[int]:
    if p.degree >= width:
        raise ValueError(f"degree {p.degree} does not fit in width {width}")
    row = [0] * width
    xp = 1
    for i, c in enumerate(p.coeffs):
        row[i] = c * xp
        xp *= X
    return row


def row_to_poly(row: Sequence[int], X: int) -> IntPoly:
    coeffs = []
    xp = 1
    for i, v in enumerate(row):
        q, r = divmod(int(v), xp)
        if r:
            raise DivisibilityViolation(f"entry {i} ({v}) not divisible by X^{i}")
        coeffs.append(q)
        xp *= X
    return IntPoly(coeffs)
