"""
Leading bits of d for e = 3
===========================

With e = 3 the private exponent satisfies 3d + 2(p + q) = 2N + 3, so d sits
just below d~ = floor(2N/3 + 1). Their common leading bits are known for free.
"""

from copperbolt.cnfenc import d_tilde, fixed_high_bits_of_d
from copperbolt.numtheory import gen_prime, isqrt, mod_inverse

# a tiny modulus where the two bounds share no leading bits
N = 827 * 953
d = mod_inverse(3, 826 * 952)
print(f"N = {N}: d = {d}, d~ = {d_tilde(N)}, shared bits = {fixed_high_bits_of_d(N, 20)[0]}")

for bits in (64, 128, 256):
    p = gen_prime(bits // 2, 10, avoid_1_mod_3=True)
    q = gen_prime(bits // 2, 11, avoid_1_mod_3=True)
    N = p * q
    d = mod_inverse(3, (p - 1) * (q - 1))
    l, prefix = fixed_high_bits_of_d(N)
    assert format(d, f"0{N.bit_length()}b").startswith(prefix)
    print(f"{bits:4d}-bit N: gap d~ - d = {d_tilde(N) - d} <= {isqrt(2 * N)}, leading bits known: {l}")
