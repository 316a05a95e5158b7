"""Regenerate the multiprecision oracle fixtures.

Writes fixtures/zeros.csv (first 100 zero heights) and fixtures/z_values.csv
(Z at the first 10 zeros and 10 generic heights), and prints the scalar
oracle values frozen into the test-suite. Takes a minute or two.
"""
from pathlib import Path

import mpmath as mp

ROOT = Path(__file__).resolve().parents[1] / "fixtures"
GENERIC = [0.0, 50.0, 150.0, 250.0, 1000.0, 5000.0, 10000.0, 31415.9, 100000.0, 200000.0]


def main():
    mp.mp.dps = 30
    ROOT.mkdir(exist_ok=True)
    zeros = [mp.zetazero(n).imag for n in range(1, 101)]
    with open(ROOT / "zeros.csv", "w", newline="\n") as fh:
        fh.write("# zeta-zeros v1\n")
        for z in zeros:
            fh.write(mp.nstr(z, 12, strip_zeros=False) + "\n")
    heights = [float(mp.nstr(z, 12)) for z in zeros[:10]] + GENERIC
    with open(ROOT / "z_values.csv", "w", newline="\n") as fh:
        fh.write("# z-values v1 dps=30\n")
        fh.write("t,Z\n")
        for t in heights:
            fh.write(f"{t!r},{mp.nstr(mp.siegelz(t), 20)}\n")

    print("zeta(1/2) =", mp.nstr(mp.zeta(0.5), 20))
    print("theta(2pi) =", mp.nstr(mp.siegeltheta(2 * mp.pi), 20))
    print("theta(100) =", mp.nstr(mp.siegeltheta(100), 20))
    print("|zeta(1/2+100i)| =", mp.nstr(abs(mp.zeta(mp.mpc(0.5, 100))), 20))
    print("|zeta(1/2+1e4 i)| =", mp.nstr(abs(mp.zeta(mp.mpc(0.5, 10000))), 20))
    print("Z(1e4+1) =", mp.nstr(mp.siegelz(10001), 20))
    with mp.workdps(30):
        pts = mp.linspace(0, 100, 201)
        val = mp.quad(lambda x: mp.siegelz(x) ** 2, pts)
    print("int_0^100 Z^2 =", mp.nstr(val, 20))


if __name__ == "__main__":
    main()
