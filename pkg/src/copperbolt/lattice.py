"""Exact LLL reduction on integer bases.

The reducer keeps the Gram-Schmidt data in the fraction-free form
(``d_i`` Gram determinants and integral ``lambda_ij = d_j * mu_ij``), so no
rational or floating point arithmetic appears in the inner loop. The checker
below recomputes Gram-Schmidt from scratch with ``Fraction`` and shares no
code with the reducer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

__all__ = [
    "SingularBasis",
    "DEFAULT_DELTA",
    "lll_reduce",
    "is_lll_reduced",
    "LLLCheck",
    "determinant",
    "gram_schmidt",
]

DEFAULT_DELTA = Fraction(99, 100)

Basis = Sequence[Sequence[int]]


class SingularBasis(ValueError):
    """The rows of the basis are linearly dependent."""


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def _check_delta(delta: Fraction) -> Fraction:
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError(f"delta must lie in (1/4, 1), got {delta}")
    return delta


def lll_reduce(basis: Basis, delta: Fraction | float | str = DEFAULT_DELTA) -> list[list[int]]:
    """Return an LLL-reduced basis of the lattice spanned by ``basis``.

    Rows are basis vectors. The output is size-reduced (``|mu_ij| <= 1/2``)
    and satisfies the Lovasz condition with parameter ``delta``; it spans the
    same lattice. Deterministic: adjacent swaps, lowest index first.

    Raises:
        SingularBasis: if the rows are linearly dependent.
    """
    delta = _check_delta(Fraction(delta))
    num, den = delta.numerator, delta.denominator
    n = len(basis)
    # 1-based internally: b[1..n], d[0..n], lam[i][j] for 1 <= j < i
    b = [None] + [[int(x) for x in row] for row in basis]
    if n == 0:
        return []
    d = [1] + [0] * n
    lam = [[0] * (n + 1) for _ in range(n + 1)]

    def red(k: int, l: int) -> None:
        lkl = lam[k][l]
        dl = d[l]
        if 2 * abs(lkl) <= dl:
            return
        q = (2 * lkl + dl) // (2 * dl)
        bk, bl = b[k], b[l]
        b[k] = [x - q * y for x, y in zip(bk, bl)]
        lam[k][l] = lkl - q * dl
        lk, ll = lam[k], lam[l]
        for i in range(1, l):
            lk[i] -= q * ll[i]

    def swap(k: int, kmax: int) -> None:
        b[k], b[k - 1] = b[k - 1], b[k]
        lk, lk1 = lam[k], lam[k - 1]
        for j in range(1, k - 1):
            lk[j], lk1[j] = lk1[j], lk[j]
        lmb = lk[k - 1]
        dk, dk1, dk2 = d[k], d[k - 1], d[k - 2]
        big_b = (dk2 * dk + lmb * lmb) // dk1
        for i in range(k + 1, kmax + 1):
            li = lam[i]
            t = li[k]
            li[k] = (dk * li[k - 1] - lmb * t) // dk1
            li[k - 1] = (big_b * t + lmb * li[k]) // dk
        d[k - 1] = big_b

    def gs_row(k: int) -> None:
        bk = b[k]
        lk = lam[k]
        for j in range(1, k + 1):
            bj = b[j]
            u = _dot(bk, bj)
            lj = lam[j]
            for i in range(1, j):
                u = (d[i] * u - lk[i] * lj[i]) // d[i - 1]
            if j < k:
                lk[j] = u
            elif u == 0:
                raise SingularBasis("basis rows are linearly dependent")
            else:
                d[k] = u

    gs_row(1)
    k, kmax = 2, 1
    while k <= n:
        if k > kmax:
            kmax = k
            gs_row(k)
        red(k, k - 1)
        lmb = lam[k][k - 1]
        if den * (d[k] * d[k - 2] + lmb * lmb) < num * d[k - 1] * d[k - 1]:
            swap(k, kmax)
            k = max(2, k - 1)
        else:
            for l in range(k - 2, 0, -1):
                red(k, l)
            k += 1
    return [list(row) for row in b[1:]]


def gram_schmidt(basis: Basis) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Exact rational Gram-Schmidt: returns (orthogonal vectors, mu matrix)."""
    rows = [[Fraction(x) for x in r] for r in basis]
    n = len(rows)
    ortho: list[list[Fraction]] = []
    norms: list[Fraction] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i, v in enumerate(rows):
        w = list(v)
        for j in range(i):
            if norms[j] == 0:
                raise SingularBasis("basis rows are linearly dependent")
            m = sum(a * c for a, c in zip(v, ortho[j])) / norms[j]
            mu[i][j] = m
            w = [a - m * c for a, c in zip(w, ortho[j])]
        ortho.append(w)
        norms.append(sum(a * a for a in w))
        mu[i][i] = Fraction(1)
    if norms and norms[-1] == 0:
        raise SingularBasis("basis rows are linearly dependent")
    return ortho, mu


@dataclass
class LLLCheck:
    """Outcome of :func:`is_lll_reduced`; truthy when the basis is reduced."""

    ok: bool
    size_violations: list[tuple[int, int, Fraction]] = field(default_factory=list)
    lovasz_violations: list[int] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def is_lll_reduced(basis: Basis, delta: Fraction | float | str = DEFAULT_DELTA) -> LLLCheck:
    delta = _check_delta(Fraction(delta))
    ortho, mu = gram_schmidt(basis)
    norms = [sum(a * a for a in w) for w in ortho]
    size_bad = [
        (i, j, mu[i][j])
        for i in range(len(mu))
        for j in range(i)
        if abs(mu[i][j]) > Fraction(1, 2)
    ]
    lovasz_bad = [
        k
        for k in range(1, len(norms))
        if norms[k] < (delta - mu[k][k - 1] ** 2) * norms[k - 1]
    ]
    return LLLCheck(not size_bad and not lovasz_bad, size_bad, lovasz_bad)


def determinant(matrix: Basis) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    a = [[int(x) for x in row] for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            ai, aik = a[i], a[i][k]
            ak = a[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * akk - aik * ak[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]
