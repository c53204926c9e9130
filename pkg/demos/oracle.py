"""
Brute force over all n with m prime factors
===========================================

For small m every exponent vector on the first m primes is scored exactly
with fractions and the maximizer compared with n_m.
"""

from lr_abundant import Engine
from lr_abundant.exact_oracle import brute_force_max_rho, candidate_count, render

for state in Engine().states(10):
    exps, value = brute_force_max_rho(state.m)
    same = exps == state.exponents
    print(f"m={state.m:>2}  candidates={candidate_count(state.m):>6}  "
          f"best {render(exps):<28} rho={value}  {'= n_m' if same else 'differs'}")
