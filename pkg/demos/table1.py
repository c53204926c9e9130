"""
The first twenty LR numbers
===========================

Builds n_1..n_20 one prime-power step at a time and prints the table with
the exact value of n next to each row.
"""

from lr_abundant import Engine
from lr_abundant.lr_engine import record_for
from lr_abundant.exact_oracle import render

# every step multiplies n by the prime q whose next chain sum
# z = q + q^2 + ... + q^k is smallest; ties go to the larger q
engine = Engine()
print(f"{'m':>3} {'q':>3} {'k':>2} {'z':>4} {'rho':>8} {'G':>8}  n")
for state in engine.states(20):
    rec = record_for(state)
    print(f"{rec.m:>3} {rec.q:>3} {rec.k:>2} {rec.z:>4} {rec.rho:8.4f} {rec.G:8.4f}  {render(state.exponents)}")

# rows 14 and 15 share z = 30: first 5 gets its square, then 2 its fourth power
