"""
Robin's inequality along the LR sequence
========================================

Checks sigma(n)/n < e^gamma log log n for every n_m above 5040 up to
m = 100000 and tracks how close G = rho / log log n gets to e^gamma.
"""

import time

from lr_abundant import Engine, robin_check
from lr_abundant.lr_engine import EXP_GAMMA, HOLDS, g_value

M = 100_000
t0 = time.perf_counter()
worst = (0.0, 0)
tightest = None
for state in Engine().states(M):
    if state.m < 7:  # n_6 = 2520 is still below 5040
        continue
    verdict = robin_check(state)
    assert verdict.status == HOLDS, state.m
    g = g_value(state)
    if g > worst[0]:
        worst, tightest = (g, state.m), verdict

print(f"checked m = 7..{M} in {time.perf_counter() - t0:.1f}s")
print(f"e^gamma            = {EXP_GAMMA:.10f}")
print(f"largest G          = {worst[0]:.10f} at m = {worst[1]}")
print(f"margin there       = {tightest.margin:.3e} (rounding bound {tightest.error_bound:.1e})")

# G creeps upward with m, so the closest approach is at the end of the run
