"""Verification sweeps shared by the CLI and the acceptance suite.

Each sweep returns a :class:`Sweep`: plot-ready rows plus a list of asserted
checks. Nothing here reads a clock or a random source, so repeated runs on
the same table produce identical output.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import C_SP, DEFAULT, RunConfig
from .ladder import LadderTable, complementarity_report
from .signals import SignalSpec
from .transform import (gap_report, nodes_ordered, power_theorem_check,
                        shifted_power_transform, z_transform)
from .zeta import local_spectrum, spectral_z, z_array


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Sweep:
    mode: str
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(ok), detail))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()

    def summary(self) -> str:
        lines = [f"verify {self.mode}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}"
                         + (f"  ({c.detail})" if c.detail else ""))
        return "\n".join(lines)


def _fmt(v):
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, float):
        return f"{v:.15g}"
    if v is None:
        return ""
    return v


def parse_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def parse_sweep(text: str) -> list[float]:
    """``start:stop:step`` inclusive of stop (to rounding)."""
    start, stop, step = (float(x) for x in text.split(":"))
    n = int(math.floor((stop - start) / step + 1e-9))
    return [round(start + i * step, 12) for i in range(n + 1)]


# ------------------------------------------------------------------ power ----

def verify_power(table: LadderTable, deltas: Sequence[float], T_list: Sequence[float],
                 U: float, k: int, cfg: RunConfig = DEFAULT) -> Sweep:
    sw = Sweep("power", ("delta", "T", "U", "k", "alpha0", "g", "abs_g_minus_1", "envelope",
                         "G2", "abs_G2_over_g_minus_1", "discrepancy", "bound", "min_abs_z",
                         "conditioned", "ok"))
    medians: dict[float, list[float]] = {}
    for T in T_list:
        for delta in deltas:
            chk = power_theorem_check(table, delta, T, U, k, cfg)
            rep = chk.report
            mz = min(rep.alpha.min_abs_z, rep.beta.min_abs_z)
            sw.rows.append((float(delta), float(T), float(U), k, rep.alpha0, rep.g,
                            abs(rep.g - 1), chk.envelope, rep.G2, chk.product_deviation,
                            rep.discrepancy, rep.bound, mz, rep.conditioned, chk.passed))
            sw.check(f"envelope delta={delta:g} T={T:g}", chk.within_envelope,
                     f"|g-1|={abs(rep.g - 1):.3g} <= {chk.envelope:.3g}")
            if delta == 0:
                sw.check(f"g == 1 exactly, T={T:g}", rep.g == 1.0)
            if rep.conditioned:
                sw.check(f"|G2/g-1| bound delta={delta:g} T={T:g}", chk.product_ok,
                         f"{chk.product_deviation:.3g} <= {chk.product_bound:.3g}")
                medians.setdefault(float(T), []).append(chk.product_deviation)
    for T, vals in sorted(medians.items()):
        sw.rows.append(("median", T, float(U), k, None, None, None, None, None,
                        float(np.median(vals)), None, None, None, None, None))
    return sw


# ---------------------------------------------------------------- shifted ----

def verify_shifted(table: LadderTable, delta: float, L: float, U_values: Iterable[float],
                   k: int, cfg: RunConfig = DEFAULT) -> Sweep:
    sw = Sweep("shifted", ("delta", "L", "U", "k", "alpha0_minus_L", "case", "g",
                           "lower", "upper", "ok"))
    violations = 0
    n = 0
    for U in U_values:
        res = shifted_power_transform(table, delta, L, U, k, cfg)
        n += 1
        violations += not res.satisfied
        case = "near" if res.near else "far"
        sw.rows.append((float(delta), float(L), float(U), k, res.offset, case, res.g,
                        res.lower, res.upper, res.satisfied))
        sw.check(f"dichotomy U={U:g}", res.satisfied,
                 f"{case}: g={res.g:.6g}")
    sw.check("zero violations", violations == 0, f"{violations} of {n}")
    return sw


# ------------------------------------------------------------------- gaps ----

def verify_gaps(table: LadderTable, T: float, k: int, U: float = 0.5,
                signal: SignalSpec | None = None, band: tuple[float, float] = (0.85, 1.15),
                use_exact_pi: bool = False, cfg: RunConfig = DEFAULT) -> Sweep:
    signal = signal or SignalSpec.power(2)
    rep = z_transform(table, signal, T, U, k, cfg)
    sw = Sweep("gaps", ("chain", "r", "gap", "ratio_asymptotic", "ratio_exact_pi", "in_band"))
    lo, hi = band
    for sol in (rep.alpha, rep.beta):
        sw.check(f"node ordering ({sol.kind})", nodes_ordered(sol, T, U))
        for row in gap_report(sol, T):
            ratio = row.ratio_exact_pi if use_exact_pi else row.ratio
            ok = lo <= ratio <= hi
            sw.rows.append((row.chain, row.r, row.gap, row.ratio, row.ratio_exact_pi, ok))
            basis = "exact pi" if use_exact_pi else "T/ln T"
            sw.check(f"{row.chain} gap r={row.r} in [{lo:g}, {hi:g}] vs {basis}", ok,
                     f"ratio={ratio:.4f}")
    return sw


# -------------------------------------------------------- complementarity ----

def verify_complementarity(table: LadderTable, ts: Sequence[float],
                           band: tuple[float, float] = (0.85, 1.15)) -> Sweep:
    sw = Sweep("complementarity", ("t", "ratio_asymptotic", "ratio_exact_pi", "in_band"))
    lo, hi = band
    rows = complementarity_report(table, ts)
    for r in rows:
        ok = lo <= r.ratio <= hi
        sw.rows.append((r.t, r.ratio, r.ratio_exact_pi, ok))
        sw.check(f"ratio at t={r.t:g} in [{lo:g}, {hi:g}]", ok, f"ratio={r.ratio:.4f}")
    devs = decade_median_deviation([(r.t, r.ratio) for r in rows])
    non_increasing = all(b <= a for a, b in zip(devs.values(), list(devs.values())[1:]))
    sw.check("per-decade median |ratio-1| non-increasing", non_increasing,
             ", ".join(f"1e{d}: {v:.4f}" for d, v in devs.items()))
    return sw


def decade_median_deviation(pairs: Iterable[tuple[float, float]]) -> dict[int, float]:
    groups: dict[int, list[float]] = {}
    for t, ratio in pairs:
        groups.setdefault(int(math.floor(math.log10(t) + 1e-12)), []).append(abs(ratio - 1.0))
    return {d: float(np.median(v)) for d, v in sorted(groups.items())}


# --------------------------------------------------------------- spectral ----

def spectral_error(x: float, omega_mode: str = "log", samples: int = 401) -> float:
    """max |spectral_z - Z| over [x, x + x^{1/4}]."""
    spec = local_spectrum(x, omega_mode=omega_mode)
    t = np.linspace(x, x + spec.window, samples)
    return float(np.max(np.abs(spectral_z(t, spec) - z_array(t))))


def verify_spectral(x_list: Sequence[float], c_sp: float = C_SP, samples: int = 401) -> Sweep:
    sw = Sweep("spectral", ("x", "omega", "max_err", "bound", "scaled_err", "within"))
    for x in x_list:
        bound = c_sp * x ** -0.25
        for mode in ("log", "raw"):
            err = spectral_error(x, mode, samples)
            sw.rows.append((float(x), mode, err, bound, err * x ** 0.25, err <= bound))
            if mode == "log":
                sw.check(f"log omega within C_sp x^-1/4 at x={x:g}", err <= bound,
                         f"{err:.3g} <= {bound:.3g}")
            else:
                sw.check(f"raw omega exceeds bound at x={x:g}", err > bound,
                         f"{err:.3g} > {bound:.3g}")
    return sw


# ------------------------------------------------------------------- suite ----

def default_suite(table: LadderTable, cfg: RunConfig = DEFAULT) -> list[Sweep]:
    """The full verify run with its default arguments."""
    t_top = min(table.t_max * 0.95, 1.9e5)
    return [
        verify_power(table, [-1, -0.5, 0, 2, 1000], [1e4, 1e5], 0.4, 2, cfg),
        verify_shifted(table, 1.0, 1e5, parse_sweep("0.05:0.5:0.05"), 1, cfg),
        verify_gaps(table, 1e5, 2, cfg=cfg),
        verify_complementarity(table, [1e4, 2e4, 5e4, 1e5, t_top]),
        verify_spectral([1e3, 1e4, 1e5]),
    ]
