"""Oscillator form of Z on short windows, and the calibration of C_SP.

Near x, Z(t) is approximated by a fixed bank of floor(tau) oscillators with
amplitudes 2/sqrt(n), common phase -x/2 - pi/8 and frequencies frozen at x.
Linearising theta(t) - t ln n at t = x gives the frequency ln(tau/n); the
alternative tau/n is kept for comparison and is visibly wrong.

The scaled error max|spectral - Z| * x^(1/4) stays near 1 for the log form,
which is where C_SP = 1.5 comes from.
"""
from zlad.config import C_SP
from zlad.verify import spectral_error
from zlad.zeta import local_spectrum

print(f"{'x':>8} {'oscillators':>11} {'log err*x^1/4':>14} {'raw err*x^1/4':>14}")
worst = 0.0
for x in (1e3, 1e4, 1e5, 1e6):
    spec = local_spectrum(x)
    log_err = spectral_error(x, "log") * x ** 0.25
    raw_err = spectral_error(x, "raw") * x ** 0.25
    if x <= 1e5:
        worst = max(worst, log_err)
    print(f"{x:8.0e} {spec.count:11d} {log_err:14.3f} {raw_err:14.1f}")

print(f"\nlargest scaled error on x in {{1e3, 1e4, 1e5}}: {worst:.3f}")
print(f"configured C_SP = {C_SP} (headroom {C_SP / worst:.2f}x)")
