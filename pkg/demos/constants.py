"""
W1, M, W2 and the gamma identity
================================

Truncated sums over prime-power chain values z, with the tail bound that
each truncation carries.
"""

from lr_abundant.constants import (EULER_GAMMA, compute_m_constant, compute_w1, compute_w2,
                                   verify_theorem3)
from lr_abundant.primes import sieve

for max_z in (10 ** 4, 10 ** 5, 10 ** 6, 10 ** 7):
    primes = sieve(max_z)
    w1 = compute_w1(max_z, primes)
    mc = compute_m_constant(max_z, primes)
    w2 = compute_w2(max_z, primes)
    rep = verify_theorem3(w1, w2)
    print(f"max_z={max_z:>9}  W1={w1.value:.7f}  M={mc.value:.7f}  W2={w2.value:.7f}  "
          f"|W2-W1-gamma|={rep.residual:.1e} <= {rep.bound:.1e}")

# W2 converges like 1/sqrt(max_z); W1 like 1/max_z
print(f"gamma = {EULER_GAMMA:.10f}")
