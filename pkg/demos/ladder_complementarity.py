"""The ladder phi_1 and how far it trails the identity.

phi_1 comes from the second moment I(T) = int_0^T Z^2 solved against
ln T + c - ln 2pi. Its lag T - phi_1(T) should behave like (1 - c) pi(T).
With pi(T) ~ T/ln T the ratio sits near 1.12-1.16 at these heights and
creeps down only logarithmically; dividing by ln T + c - ln 2pi instead of
ln T removes most of that excess, and exact pi(T) brings it within 3%.
"""
import math

from _table import get_table

from zlad.config import EULER_GAMMA, LOG_2PI
from zlad.ladder import complementarity_report, phi1, reverse_iterate

table = get_table()
print(f"table to {table.t_max:g}, digest {table.digest}\n")
print(f"{'T':>8} {'T - phi1':>10} {'ratio T/lnT':>12} {'ratio exact pi':>15} {'ratio via D':>12}")
for row in complementarity_report(table, [1e4, 2e4, 5e4, 1e5, 1.9e5]):
    T = row.t
    lag = T - phi1(table, T)
    D = math.log(T) + EULER_GAMMA - LOG_2PI
    via_d = lag * D / ((1 - EULER_GAMMA) * T)
    print(f"{T:8.0f} {lag:10.1f} {row.ratio:12.4f} {row.ratio_exact_pi:15.4f} {via_d:12.4f}")

print("\nreverse iterates of 1e5:")
chain = reverse_iterate(table, 1e5, 2)
for r, t in enumerate(chain):
    print(f"  T^{r} = {t:.6f}")
