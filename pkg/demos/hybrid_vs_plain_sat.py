"""
SAT with a lattice oracle
=========================

Generate a 96-bit instance with half of the bits of p and q leaked and factor
it three ways: plain CDCL, CDCL with the Coppersmith callback, and
branch-and-prune.
"""

import time

from copperbolt.baselines import branch_and_prune
from copperbolt.harness import generate
from copperbolt.pipeline import HybridConfig, factor

inst, truth = generate(bits=96, leak_pct=50, with_d=False, seed=3)
print(f"N = {inst.N:#x}; {len(inst.leaks)} leaked bits")

for method in ("sat", "satcas"):
    p, q, stats = factor(inst.N, inst.k, inst.leaks, HybridConfig(method=method, seed=0))
    print(
        f"{method:7s} {stats.wall_time:6.2f} s  conflicts={stats.conflicts:6d}  "
        f"oracle calls={stats.oracle_calls:4d}  blocked={stats.blocking_clauses:4d}"
    )
    assert {p, q} == {truth.p, truth.q}

start = time.perf_counter()
res = branch_and_prune(inst.N, inst.k, inst.leaks)
print(f"bnp     {time.perf_counter() - start:6.2f} s  peak frontier={res.peak_frontier}")
