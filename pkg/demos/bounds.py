"""
Prime-power thresholds and Chebyshev bounds
===========================================

Runs the structural checks over the first thousand LR numbers and prints
the tightest case of each.
"""

from lr_abundant.chebyshev import SieveTables, check_dusart, check_mertens_shift, run_suite
from lr_abundant.constants import compute_w1

tables = SieveTables(10 ** 7)
w1 = compute_w1(10 ** 7, tables.primes)

reports = run_suite(["lemma1", "lemma2", "theorem2", "theorem4", "theorem6", "theorem7"],
                    1000, tables, w1, sample_m=[10_000, 100_000])
reports["dusart"] = check_dusart(tables)
reports["mertens_shift"] = check_mertens_shift(tables)
for name, rep in reports.items():
    status = "ok" if rep.passed else f"{len(rep.failures)} failure(s)"
    print(f"{name:>14}: m/x in [{rep.lo}, {rep.hi}]  worst slack {rep.worst_slack:.3e}  {status}")

# the psi lower bound breaks at m = 1, where log log 2 is negative
bad = reports["theorem7"].failures
if bad:
    f = bad[0]
    print(f"\ntheorem7 at m={f['at']}: psi={f['psi']:.4f} but lower bound {f['lower']:.4f}")
