"""
Small roots by lattice reduction
================================

Recover a factor of a toy modulus from its high digits, then a 64-bit
modulus from the low bits of one prime.
"""

from copperbolt.coppersmith import (
    LsbProblem,
    MsbProblem,
    build_msb_basis,
    lsb_bound,
    recover_factor_lsb,
    recover_factor_msb,
)
from copperbolt.lattice import lll_reduce
from copperbolt.numtheory import gen_prime
from copperbolt.pipeline import threshold_bits
from copperbolt.polyint import integer_roots, row_to_poly

# N = 2837 * 5923 and we know p starts with 283_: f(x) = 2830 + x
prob = MsbProblem(N=16803551, p_hat=2830, X=10)
basis = build_msb_basis(prob)
for row in basis:
    print("basis  ", row)

short = lll_reduce(basis)[0]
g = row_to_poly(short, prob.X)
print("short polynomial:", g)
print("integer roots below X:", integer_roots(g, prob.X))
print("factors:", recover_factor_msb(prob))

# A 64-bit modulus with 32-bit primes. The lattice handles roots up to
# X = N^(1/5) / 4, so enough low bits must be known to leave less than that.
p, q = gen_prime(32, 1), gen_prime(32, 2)
N = p * q
t = threshold_bits(32, N)
print(f"\nN = {N:#x}, X = {lsb_bound(N)}, low bits needed: {t}")
print("correct low bits:", recover_factor_lsb(LsbProblem(N, t, p % 2**t)))
print("one bit flipped: ", recover_factor_lsb(LsbProblem(N, t, (p % 2**t) ^ 8)))
