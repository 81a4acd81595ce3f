"""Factor recovery from a partially known prime via small roots.

Two entry points:

* :func:`recover_factor_msb` -- the high bits of ``p`` are known; a
  4-dimensional lattice built from ``N, f, x f, x^2 f`` with ``f = p_hat + x``.
* :func:`recover_factor_lsb` -- the ``m`` low bits of ``p`` are known;
  ``f(x) = x + (2^-m * p_check mod N)`` and a 5-dimensional lattice from
  ``N^2, N f, f^2, x f^2, x^2 f^2`` with ``X = floor(N^(1/5) / 4)``.

When the known bits are right and the unknown part fits below ``X``, the
root shows up among the integer roots of the first reduced row. When no root
yields a factor the known bits are certified wrong, which is what the solver
turns into a blocking clause.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .lattice import DEFAULT_DELTA, lll_reduce
from .numtheory import gcd, inth_root, mod_inverse
from .polyint import IntPoly, integer_roots, multiply, poly_to_row, row_to_poly, shift

__all__ = [
    "BoundTooSmall",
    "MsbProblem",
    "LsbProblem",
    "Factors",
    "NoFactorFound",
    "OracleOutcome",
    "lsb_bound",
    "build_msb_basis",
    "build_lsb_basis",
    "small_roots",
    "recover_factor_msb",
    "recover_factor_lsb",
]

LSB_DIMENSION = 5


class BoundTooSmall(ValueError):
    """The modulus is too small for a nonzero root bound."""


@dataclass(frozen=True)
class MsbProblem:
    N: int
    p_hat: int
    X: int

    def __post_init__(self) -> None:
        if not 0 < self.p_hat < self.N:
            raise ValueError("need 0 < p_hat < N")
        if self.X < 1:
            raise ValueError("need X >= 1")


@dataclass(frozen=True)
class LsbProblem:
    N: int
    m: int
    p_check: int

    def __post_init__(self) -> None:
        if self.N % 2 == 0:
            raise ValueError("N must be odd")
        if self.m < 1 or self.p_check % 2 == 0 or self.p_check >= 1 << self.m:
            raise ValueError("p_check must be odd and below 2^m")


@dataclass(frozen=True)
class Factors:
    p: int
    q: int


@dataclass(frozen=True)
class NoFactorFound:
    roots_tried: int


OracleOutcome = Union[Factors, NoFactorFound]


def lsb_bound(N: int) -> int:
    """``floor(floor(N^(1/5)) / 4)``, the root bound of the LSB lattice."""
    return inth_root(N, 5) // 4


def build_msb_basis(prob: MsbProblem) -> list[list[int]]:
    N, X = prob.N, prob.X
    f = IntPoly((prob.p_hat, 1))
    polys = [IntPoly((N,)), f, shift(f, 1), shift(f, 2)]
    return [poly_to_row(g, X, 4) for g in polys]


def build_lsb_basis(prob: LsbProblem) -> tuple[list[list[int]], int, int]:
    """Return ``(basis, X, c)`` for the LSB problem.

    ``c = 2^-m * p_check mod N`` so that ``f(x) = x + c`` is monic and
    vanishes mod ``p`` at the unknown high part of ``p``.
    """
    N = prob.N
    X = lsb_bound(N)
    if X == 0:
        raise BoundTooSmall(f"N = {N} gives a zero root bound")
    c = mod_inverse(pow(2, prob.m, N), N) * prob.p_check % N
    f = IntPoly((c, 1))
    f2 = multiply(f, f)
    polys = [
        IntPoly((N * N,)),
        IntPoly((N * c, N)),
        f2,
        shift(f2, 1),
        shift(f2, 2),
    ]
    return [poly_to_row(g, X, LSB_DIMENSION) for g in polys], X, c


def small_roots(
    basis: list[list[int]], X: int, rows: int = 1, delta: Fraction = DEFAULT_DELTA
) -> list[int]:
    """Integer roots bounded by ``X`` of the polynomial(s) from the reduced basis.

    Only the first reduced row is used unless ``rows`` asks for more.
    Returns the roots sorted ascending.
    """
    reduced = lll_reduce(basis, delta)
    roots: set[int] = set()
    for row in reduced[:rows]:
        g = row_to_poly(row, X)
        if g.degree >= 1:
            roots |= integer_roots(g, X)
    return sorted(roots)


def _split(N: int, g: int) -> Factors | None:
    if 1 < g < N and N % g == 0:
        a, b = g, N // g
        return Factors(min(a, b), max(a, b))
    return None


def recover_factor_msb(prob: MsbProblem, delta: Fraction = DEFAULT_DELTA) -> OracleOutcome:
    """Find ``p = p_hat + x0`` with ``0 <= x0 <= X``, or report that none exists."""
    roots = [r for r in small_roots(build_msb_basis(prob), prob.X, delta=delta) if r >= 0]
    for x0 in roots:
        hit = _split(prob.N, gcd(abs(prob.p_hat + x0), prob.N))
        if hit:
            return hit
    return NoFactorFound(len(roots))


def recover_factor_lsb(
    prob: LsbProblem, rows: int = 1, delta: Fraction = DEFAULT_DELTA
) -> OracleOutcome:
    """Complete ``p`` from its ``m`` low bits, or certify that they are wrong.

    The caller is responsible for ``2^(k-m) <= X`` (see
    :func:`copperbolt.pipeline.threshold_bits`); under that condition a
    :class:`NoFactorFound` means no factor of ``N`` ends in ``p_check``.
    """
    basis, X, c = build_lsb_basis(prob)
    roots = [r for r in small_roots(basis, X, rows=rows, delta=delta) if r >= 0]
    N = prob.N
    for x0 in roots:
        hit = _split(N, gcd(x0 + c, N))
        if hit:
            return hit
    return NoFactorFound(len(roots))
