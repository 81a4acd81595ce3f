"""Integer helpers shared by the lattice, encoding and key-generation code."""

from __future__ import annotations

import math
import random

__all__ = [
    "NotInvertible",
    "mod_inverse",
    "isqrt",
    "inth_root",
    "gcd",
    "is_probable_prime",
    "gen_prime",
]

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_RANDOM_ROUNDS = 40
_INCREMENT_CAP = 10_000


class NotInvertible(ValueError):
    """Raised when an inverse is requested for a non-unit."""


def mod_inverse(a: int, n: int) -> int:
    """Return ``b`` in ``(0, n)`` with ``a * b == 1 (mod n)``."""
    if n < 2:
        raise NotInvertible(f"modulus must be >= 2, got {n}")
    try:
        return pow(a, -1, n)
    except ValueError:
        raise NotInvertible(f"{a} is not invertible modulo {n}") from None


def isqrt(n: int) -> int:
    if n < 0:
        raise ValueError("isqrt of a negative number")
    return math.isqrt(n)


def inth_root(n: int, k: int) -> int:
    """Floor of the k-th root of a non-negative integer.

    Newton iteration on integers, started from a power of two above the root
    so the sequence decreases monotonically onto the answer.
    """
    if k < 1:
        raise ValueError("root index must be >= 1")
    if n < 0:
        raise ValueError("inth_root of a negative number")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def _miller_rabin_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int, rounds: int = _MR_RANDOM_ROUNDS) -> bool:
    """Miller-Rabin test.

    Deterministic below 2**64 (fixed witness set); above that, ``rounds``
    random bases are drawn, giving error probability at most ``4**-rounds``.
    The random bases come from a generator seeded by ``n`` itself, so the
    answer for a given input never changes between calls.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < 1 << 64:
        return all(_miller_rabin_round(n, d, s, a) for a in _SMALL_PRIMES)
    rng = random.Random(n)
    return all(
        _miller_rabin_round(n, d, s, rng.randrange(2, n - 1)) for _ in range(rounds)
    )


def gen_prime(bits: int, rng: random.Random | int | None = None, avoid_1_mod_3: bool = False) -> int:
    """Random prime with exactly ``bits`` bits.

    ``rng`` may be a ``random.Random`` (consumed in place) or a seed.
    Candidates are odd with the top bit forced; a failed candidate is stepped
    by 2 up to a fixed cap before a fresh candidate is drawn.
    """
    if bits < 3:
        raise ValueError("bits must be >= 3")
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    lo, hi = 1 << (bits - 1), 1 << bits
    while True:
        cand = rng.getrandbits(bits) | lo | 1
        for _ in range(_INCREMENT_CAP):
            if cand >= hi:
                break
            if (not avoid_1_mod_3 or cand % 3 != 1) and is_probable_prime(cand):
                return cand
            cand += 2
