"""Shifted powers (t - L)^D split into two regimes.

g = (U/(alpha_0 - L))^D / (D + 1) is at least 2^D/(D+1) when alpha_0 sits
in the first half of [L, L+U], and between 1/(D+1) and that value
otherwise. Which half alpha_0 lands in is not something the inputs decide.
"""
from _table import get_table

from zlad.transform import shifted_power_transform

table = get_table()
L = 1e5
for delta in (0.5, 1.0, 2.0):
    print(f"D = {delta}: threshold 2^D/(D+1) = {2 ** delta / (delta + 1):.4f}")
    for i in range(1, 11):
        U = 0.05 * i
        res = shifted_power_transform(table, delta, L, U, 1)
        side = "first half " if res.near else "second half"
        print(f"  U={U:.2f}  (alpha0-L)/U={res.offset / U:.3f} {side}  g={res.g:.5f}"
              f"  {'ok' if res.satisfied else 'VIOLATION'}")
