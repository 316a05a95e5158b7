"""Power signals come out of the transformation as the constant 1.

For f(t) = t^D on [T, T+U] the output g = H/f(alpha_0) is pinned to 1 by
the location of alpha_0 alone, and the zeta-ratio product G^2 realises the
same value. D = 1000 is evaluated through ratios f(t)/f(T+U) so that
nothing overflows.
"""
from _table import get_table

from zlad.signals import telegraphic_output
from zlad.transform import power_theorem_check

table = get_table()
T, U, k = 1e5, 0.4, 2
print(f"T={T:g} U={U} k={k}")
print(f"{'D':>7} {'alpha0 - T':>12} {'|g-1|':>10} {'envelope':>10} {'|G2/g-1|':>10} {'min|Z|':>8}")
reports = []
for delta in (-1, -0.5, 0, 2, 1000):
    chk = power_theorem_check(table, delta, T, U, k)
    rep = chk.report
    reports.append(rep)
    print(f"{delta:7g} {rep.alpha0 - T:12.6f} {abs(rep.g - 1):10.2e} {chk.envelope:10.2e} "
          f"{chk.product_deviation:10.2e} {rep.alpha.min_abs_z:8.3f}")

sweep = [power_theorem_check(table, 2, T, u, k).report for u in (0.1, 0.2, 0.3, 0.4)]
print("\nD=2 U-sweep accepted as", telegraphic_output(sweep, a=0.4))
