"""Second moment of Z, the Jacob's ladder phi_1 and its iterates.

The ladder is defined from the almost-exact second-moment representation

    I(T) = int_0^T Z(t)^2 dt = phi_1(T) (ln T + c - ln 2pi) + c0,

solved for phi_1. A :class:`LadderTable` stores I, phi_1 and phi_1' on a
uniform grid; values between grid rows are obtained by integrating Z^2 from
the nearest row, never by interpolating I (Z^2 oscillates on the scale of
the zero spacing, far below any usable grid step).
"""
from __future__ import annotations

import functools
import hashlib
import io
import math
import os
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq

from . import quad
from .config import DEFAULT, EULER_GAMMA, LOG_2PI
from .errors import BracketError, QuadratureError, RangeError, TableFormatError
from .primes import PRIME_PI_CAP, pi_asymptotic, prime_pi
from .zeta import z_array

TABLE_VERSION = "v1"
CHUNK_NODES = 1_500_000


def z_squared(t) -> np.ndarray:
    v = z_array(t)
    return v * v


def log_factor(t):
    """ln t + c - ln 2pi, the denominator of the closed form for phi_1."""
    return np.log(t) + EULER_GAMMA - LOG_2PI


# ------------------------------------------------------------ quadrature ----

def _panels_q(a: float, b: float, n: int, order: int) -> float:
    return quad.integrate(z_squared, a, b, n, order)


def integrate_z_squared(a: float, b: float, tol: float = 1e-8, *,
                        rho: float = DEFAULT.rho, order: int = DEFAULT.quad_order,
                        max_halvings: int = 6) -> float:
    """int_a^b Z(t)^2 dt by composite Gauss-Legendre panels.

    The error estimate compares order/2 against order on the same panels;
    panels are halved until it drops below ``tol`` (plus a rounding floor of a
    few ulps of the result).
    """
    if not 0 <= a <= b:
        raise ValueError(f"need 0 <= a <= b, got a={a!r}, b={b!r}")
    if a == b:
        return 0.0
    n = quad.panel_count(a, b, rho)
    for _ in range(max_halvings + 1):
        hi = _panels_q(a, b, n, order)
        lo = _panels_q(a, b, n, order // 2)
        floor = 64 * np.finfo(float).eps * abs(hi) * math.sqrt(n)
        if abs(hi - lo) <= max(tol, floor):
            return hi
        n *= 2
    raise QuadratureError(
        f"Z^2 quadrature on [{a:g}, {b:g}] stalled: estimate {abs(hi - lo):.3g} > tol {tol:g}"
    )


def _cell_integrals(left: np.ndarray, step: float, rho: float, order: int) -> np.ndarray:
    """int over [left_i, left_i + step] of Z^2, vectorised over cells.

    Cells are grouped by panel count so each group is one array evaluation;
    group boundaries depend only on the grid, hence the result is
    bit-reproducible.
    """
    right = left + step
    counts = np.maximum(1, np.ceil(step / quad.panel_width(right, rho) - 1e-12)).astype(int)
    out = np.empty(left.shape)
    for n in np.unique(counts):
        idx = np.flatnonzero(counts == n)
        per_cell = int(n) * order
        rows = max(1, CHUNK_NODES // per_cell)
        for lo in range(0, idx.size, rows):
            sel = idx[lo:lo + rows]
            nodes, weights = quad.composite_rule(left[sel], right[sel], int(n), order)
            out[sel] = (z_squared(nodes) * weights).sum(axis=1)
    return out


# ------------------------------------------------------------ the table ----

@dataclass(frozen=True, eq=False)
class LadderTable:
    grid_step: float
    t_floor: float
    t_max: float
    c0: float
    rho: float
    order: int
    t: np.ndarray = field(repr=False)
    I: np.ndarray = field(repr=False)
    phi1: np.ndarray = field(repr=False)
    phi1_prime: np.ndarray = field(repr=False)
    euler_c: float = EULER_GAMMA

    def __post_init__(self):
        for arr in (self.t, self.I, self.phi1, self.phi1_prime):
            arr.setflags(write=False)

    @property
    def rows(self) -> int:
        return int(self.t.size)

    @property
    def header(self) -> str:
        return (f"# ladder-table {TABLE_VERSION} grid_step={self.grid_step:.15g} "
                f"t_floor={self.t_floor:.15g} t_max={self.t_max:.15g} c0={self.c0:.15g} "
                f"rho={self.rho:.15g} order={self.order}")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(self.header + "\n")
        buf.write("t,I,phi1,phi1_prime\n")
        data = np.column_stack([self.t, self.I, self.phi1, self.phi1_prime])
        np.savetxt(buf, data, fmt="%.15g", delimiter=",", newline="\n")
        return buf.getvalue()

    @functools.cached_property
    def digest(self) -> str:
        return hashlib.sha256(self.to_csv().encode()).hexdigest()[:16]

    @functools.cached_property
    def running_max(self) -> np.ndarray:
        out = np.maximum.accumulate(self.phi1)
        out.setflags(write=False)
        return out

    @property
    def phi1_range(self) -> tuple[float, float]:
        return float(self.phi1[0]), float(self.phi1[-1])

    def index_of(self, t: float) -> int | None:
        """Row index when ``t`` is exactly a grid abscissa, else None."""
        i = int(round((t - self.t_floor) / self.grid_step))
        if 0 <= i < self.rows and self.t[i] == t:
            return i
        return None


def build_table(t_max: float, grid_step: float = DEFAULT.grid_step,
                c0: float = DEFAULT.c0, *, t_floor: float = DEFAULT.t_floor,
                rho: float = DEFAULT.rho, order: int = DEFAULT.quad_order,
                progress=None) -> LadderTable:
    """Accumulate I(t) on the grid t_floor, t_floor + step, ..., t_max."""
    if not t_max >= 1e3:
        raise ValueError(f"t_max must be >= 1e3, got {t_max!r}")
    if not 0.05 <= grid_step <= 1.0:
        raise ValueError(f"grid_step must lie in [0.05, 1], got {grid_step!r}")
    n_cells = int(math.floor((t_max - t_floor) / grid_step + 1e-9))
    t = t_floor + grid_step * np.arange(n_cells + 1)
    start = integrate_z_squared(0.0, t_floor, 1e-10, rho=rho, order=order)
    cells = np.empty(n_cells)
    block = 20_000
    for lo in range(0, n_cells, block):
        hi = min(lo + block, n_cells)
        cells[lo:hi] = _cell_integrals(t[lo:hi], grid_step, rho, order)
        if progress is not None:
            progress(hi, n_cells)
    I = np.empty(n_cells + 1)
    I[0] = start
    np.cumsum(cells, out=I[1:])
    I[1:] += start
    if np.any(np.diff(I) < 0):
        raise QuadratureError("accumulated second moment decreased along the grid")
    D = log_factor(t)
    phi = (I - c0) / D
    zsq = z_squared(t)
    phi_p = (zsq - phi / t) / D
    return LadderTable(grid_step=float(grid_step), t_floor=float(t_floor),
                       t_max=float(t[-1]), c0=float(c0), rho=float(rho), order=int(order),
                       t=t, I=I, phi1=phi, phi1_prime=phi_p)


def _parse_header(line: str) -> dict[str, str]:
    parts = line.strip().split()
    if len(parts) < 3 or parts[0] != "#" or parts[1] != "ladder-table":
        raise TableFormatError(f"not a ladder table header: {line.strip()!r}")
    if parts[2] != TABLE_VERSION:
        raise TableFormatError(f"unsupported table version {parts[2]!r}")
    out = {}
    for item in parts[3:]:
        key, _, value = item.partition("=")
        out[key] = value
    return out


def save_table(table: LadderTable, path) -> None:
    """Write the cache file atomically (single writer)."""
    path = os.fspath(path)
    tmp = path + ".tmp"
    with open(tmp, "w", newline="\n") as fh:
        fh.write(table.to_csv())
    os.replace(tmp, path)


def load_table(path, *, grid_step: float | None = None, t_max: float | None = None,
               c0: float | None = None, rho: float | None = None,
               order: int | None = None) -> LadderTable:
    """Read a cache file; any parameter given must match the header."""
    with open(path, "rb") as fh:
        raw = fh.read()
    text = raw.decode()
    first, _, rest = text.partition("\n")
    meta = _parse_header(first)
    wanted = {"grid_step": grid_step, "t_max": t_max, "c0": c0, "rho": rho, "order": order}
    for key, value in wanted.items():
        if value is None:
            continue
        if key not in meta or float(meta[key]) != float(value):
            raise TableFormatError(f"table {key}={meta.get(key)!r} does not match requested {value!r}")
    columns, _, body = rest.partition("\n")
    if columns.strip() != "t,I,phi1,phi1_prime":
        raise TableFormatError("unexpected column header")
    data = np.loadtxt(io.StringIO(body), delimiter=",", ndmin=2)
    table = LadderTable(grid_step=float(meta["grid_step"]), t_floor=float(meta["t_floor"]),
                        t_max=float(meta["t_max"]), c0=float(meta["c0"]),
                        rho=float(meta["rho"]), order=int(meta["order"]),
                        t=np.ascontiguousarray(data[:, 0]), I=np.ascontiguousarray(data[:, 1]),
                        phi1=np.ascontiguousarray(data[:, 2]),
                        phi1_prime=np.ascontiguousarray(data[:, 3]))
    table.__dict__["digest"] = hashlib.sha256(raw).hexdigest()[:16]
    return table


# ------------------------------------------------------- phi_1 and phi_1' ----

def _check_range(table: LadderTable, t: np.ndarray) -> None:
    if np.any(t < table.t_floor) or np.any(t > table.t_max) or np.any(~np.isfinite(t)):
        bad = t[(t < table.t_floor) | (t > table.t_max) | ~np.isfinite(t)]
        raise RangeError(
            f"t={bad.flat[0]:.10g} outside table range [{table.t_floor:g}, {table.t_max:g}]"
        )


def second_moment(table: LadderTable, t) -> np.ndarray:
    """I(t) from the nearest grid row plus a local Z^2 integral."""
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    _check_range(table, arr)
    idx = np.clip(np.rint((arr - table.t_floor) / table.grid_step).astype(np.int64),
                  0, table.rows - 1)
    base_t = table.t[idx]
    out = table.I[idx].copy()
    off = arr != base_t
    if np.any(off):
        a = base_t[off]
        b = arr[off]
        n = quad.panel_count(0.0, 0.5 * table.grid_step, table.rho)
        n = max(n, int(np.max(np.ceil(np.abs(b - a) / quad.panel_width(np.maximum(a, b), table.rho)))))
        nodes, weights = quad.composite_rule(a, b, n, table.order)
        out[off] += (z_squared(nodes) * weights).sum(axis=-1)
    return out


def phi1(table: LadderTable, t):
    """phi_1(t); exact stored value at grid abscissae."""
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    I = second_moment(table, arr)
    out = (I - table.c0) / log_factor(arr)
    idx = np.clip(np.rint((arr - table.t_floor) / table.grid_step).astype(np.int64),
                  0, table.rows - 1)
    on_grid = table.t[idx] == arr
    out[on_grid] = table.phi1[idx[on_grid]]
    return float(out[0]) if np.ndim(t) == 0 else out


def phi1_prime(table: LadderTable, t):
    """phi_1'(t) = (Z^2(t) - phi_1(t)/t) / (ln t + c - ln 2pi).

    This is the density tilde-Z^2 used in the change of variables; it dips
    slightly below zero at zeros of Z.
    """
    out = phi1_and_prime(table, t)[1]
    return float(out[0]) if np.ndim(t) == 0 else out


def phi1_and_prime(table: LadderTable, t) -> tuple[np.ndarray, np.ndarray]:
    """phi_1 and phi_1' together, sharing the second-moment evaluation."""
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    ph = np.atleast_1d(phi1(table, arr))
    pr = (z_squared(arr) - ph / arr) / log_factor(arr)
    idx = np.clip(np.rint((arr - table.t_floor) / table.grid_step).astype(np.int64),
                  0, table.rows - 1)
    on_grid = table.t[idx] == arr
    pr[on_grid] = table.phi1_prime[idx[on_grid]]
    return ph, pr


# ------------------------------------------------------------- inversion ----

def phi1_inverse(table: LadderTable, y: float, *, xtol: float = 1e-11) -> float:
    """Smallest t with phi_1(t) = y.

    phi_1 is increasing only on scales of several units: Z^2 can stay small
    over stretches longer than the zero spacing, and there phi_1' < 0. The
    bracket is therefore the first grid row where the running maximum of
    phi_1 reaches y; the cells just before it are sampled below the zero
    spacing so that an earlier off-grid crossing is not missed.
    """
    lo_y, hi_y = table.phi1_range
    if not lo_y <= y <= hi_y:
        raise RangeError(f"y={y:.10g} outside phi_1 range [{lo_y:.10g}, {hi_y:.10g}]")
    i = int(np.searchsorted(table.running_max, y, side="left"))
    if i >= table.rows:
        raise BracketError(f"no bracket for y={y!r} at the table end")
    if table.phi1[i] == y and i == 0:
        return float(table.t[0])
    i0 = max(i - 2, 0)
    a, b = float(table.t[i0]), float(table.t[i])
    width = float(quad.panel_width(b, table.rho))
    samples = np.linspace(a, b, max(int(math.ceil((b - a) / (0.25 * width))), 1) + 1)
    vals = np.atleast_1d(phi1(table, samples)) - y
    above = np.flatnonzero(vals >= 0)
    if above.size == 0:
        raise BracketError(
            f"phi_1 does not reach y={y:.10g} on [{a:.10g}, {b:.10g}]; table may be corrupt"
        )
    m = int(above[0])
    if vals[m] == 0 or m == 0:
        return float(samples[m])
    return brentq(lambda s: phi1(table, s) - y, samples[m - 1], samples[m],
                  xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)


@dataclass(frozen=True)
class IterationChain:
    base: float
    u: float
    k: int
    lower: tuple[float, ...]
    upper: tuple[float, ...]


def _required_t_max(t: float, k: int) -> float:
    x = t
    for _ in range(k):
        x += 1.2 * (1.0 - EULER_GAMMA) * x / math.log(x)
    return x


def reverse_iterate(table: LadderTable, t: float, k: int,
                    k_max: int = DEFAULT.k_max) -> list[float]:
    """[T^0, T^1, ..., T^k] with phi_1(T^r) = T^{r-1}."""
    if not 0 <= k <= k_max:
        raise ValueError(f"k must lie in [0, {k_max}], got {k}")
    chain = [float(t)]
    for _ in range(k):
        try:
            chain.append(phi1_inverse(table, chain[-1]))
        except RangeError:
            need = _required_t_max(t, k)
            raise RangeError(
                f"reverse iterate {len(chain)} of t={t:g} leaves the table "
                f"(t_max={table.t_max:g}); rebuild with t_max >= {need:.6g}"
            ) from None
    return chain


def forward_iterate(table: LadderTable, t: float, k: int) -> float:
    """phi_1^k(t)."""
    x = float(t)
    for _ in range(k):
        x = phi1(table, x)
    return x


def iteration_chain(table: LadderTable, T: float, U: float, k: int,
                    k_max: int = DEFAULT.k_max) -> IterationChain:
    lower = reverse_iterate(table, T, k, k_max)
    upper = reverse_iterate(table, T + U, k, k_max)
    return IterationChain(float(T), float(U), int(k), tuple(lower), tuple(upper))


# ------------------------------------------------------ complementarity ----

class ComplementarityRow(NamedTuple):
    t: float
    ratio: float
    ratio_exact_pi: float | None


def complementarity_report(table: LadderTable, ts: Sequence[float]) -> list[ComplementarityRow]:
    """(t - phi_1(t)) / ((1 - c) pi(t)) with pi(t) ~ t/ln t, and with exact pi(t)."""
    rows = []
    for t in ts:
        gap = t - phi1(table, float(t))
        ratio = gap / ((1.0 - EULER_GAMMA) * pi_asymptotic(t))
        exact = None
        if t <= PRIME_PI_CAP:
            exact = gap / ((1.0 - EULER_GAMMA) * prime_pi(int(t)))
        rows.append(ComplementarityRow(float(t), float(ratio), exact))
    return rows
