"""Mean-value node extraction and the Z_{zeta,Q^2} transformation.

For a signal f on [T, T+U] the substitution x = phi_1^k(t) gives

    int_T^{T+U} f(x) dx = int_{T^k}^{(T+U)^k} F(t) dt,
    F(t) = f(phi_1^k(t)) * prod_{r=0}^{k-1} phi_1'(phi_1^r(t)),

where T^k is the k-th reverse iterate. The mean-value abscissa d is a point
with F(d) equal to the interval mean of F; its forward images
alpha_{k-r} = phi_1^r(d) are the nodes. Running the same construction with
f = 1 gives the beta nodes, and the transformation output is

    g = H(T, U) / f(alpha_0),   G^2 = prod_r Z^2(alpha_r) / Z^2(beta_r).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from . import quad
from .config import DEFAULT, EULER_GAMMA, RunConfig
from .errors import BoundViolation, NoCrossingError, QuadratureError
from .ladder import LadderTable, phi1_and_prime, reverse_iterate
from .primes import PRIME_PI_CAP, pi_asymptotic, prime_pi
from .signals import SignalKind, SignalSpec, g_envelope
from .zeta import z_array


class UBound(NamedTuple):
    ok: bool
    u_max: float


def check_u_bound(T: float, U: float, u_kappa: float = DEFAULT.u_kappa) -> UBound:
    """U must satisfy 0 < U <= u_kappa * T / ln^2 T."""
    if not T >= 1e3:
        raise ValueError(f"T must be >= 1e3, got {T!r}")
    u_max = u_kappa * T / math.log(T) ** 2
    return UBound(0 < U <= u_max, u_max)


def mean_h(f: SignalSpec, T: float, U: float) -> float:
    """H(T, U) = (1/U) int_T^{T+U} f; inf if it overflows."""
    if not U > 0:
        raise ValueError("U must be positive")
    return f.mean(T, U)


@dataclass(frozen=True)
class MeanValueSolution:
    d: float
    nodes: tuple[float, ...]          # alpha_0 .. alpha_k (or beta_0 .. beta_k)
    kind: str                          # "Alpha" or "Beta"
    k: int
    lower: tuple[float, ...]           # T^0 .. T^k
    upper: tuple[float, ...]           # (T+U)^0 .. (T+U)^k
    integral_f: float                  # int_T^{T+U} f / f(T+U)
    integral_F: float                  # int over the k-th reverse iterate of F / f(T+U)
    residual: float                    # |F(d) * len - int F|
    tilde_z2: tuple[float, ...]        # phi_1'(node_r), r = 1..k
    z_nodes: tuple[float, ...]         # Z(node_r), r = 1..k
    skipped_roots: int = 0

    @property
    def length(self) -> float:
        return self.upper[-1] - self.lower[-1]

    @property
    def identity_defect(self) -> float:
        return abs(self.integral_F - self.integral_f) / abs(self.integral_f)

    @property
    def product_nodes(self) -> tuple[float, ...]:
        return self.nodes[1:]

    @property
    def min_abs_z(self) -> float:
        return min((abs(v) for v in self.z_nodes), default=math.inf)

    @property
    def tilde_product(self) -> float:
        return float(np.prod(self.tilde_z2)) if self.tilde_z2 else 1.0


def _transformed_integrand(table: LadderTable, f: SignalSpec, k: int, ref: float):
    def F(t):
        x = np.asarray(t, dtype=float)
        shape = x.shape
        x = x.ravel()
        prod = np.ones(x.shape)
        for _ in range(k):
            ph, pr = phi1_and_prime(table, x)
            prod *= pr
            x = ph
        return (f.ratio(x, ref) * prod).reshape(shape)
    return F


def _chain_from(table: LadderTable, d: float, k: int):
    """Nodes alpha_0..alpha_k from d, with phi_1' and Z at alpha_1..alpha_k."""
    x = np.array([d])
    nodes = [d]
    primes = []
    for _ in range(k):
        ph, pr = phi1_and_prime(table, x)
        primes.append(float(pr[0]))
        x = ph
        nodes.append(float(ph[0]))
    nodes.reverse()   # alpha_0 first
    primes.reverse()  # phi_1'(alpha_r), r = 1..k
    zs = tuple(float(v) for v in z_array(np.array(nodes[1:]))) if k else ()
    return tuple(nodes), tuple(primes), zs


def _scan_crossings(F, avg: float, a: float, b: float, step: float):
    """Grid, F - avg on it, and the cells where F - avg changes sign."""
    probe = F(np.linspace(a, b, 9)) - avg
    if np.all(np.abs(probe) <= 64 * np.finfo(float).eps * abs(avg)):
        # F constant (f = 1, k = 0): every point qualifies; take the midpoint
        return np.array([0.5 * (a + b)]), np.zeros(1), [0]
    for _ in range(6):
        m = max(2, int(math.ceil((b - a) / step)))
        grid = np.linspace(a, b, m + 1)
        vals = F(grid) - avg
        crossings = [i for i in range(m) if vals[i] == 0 or vals[i] * vals[i + 1] < 0]
        if crossings:
            return grid, vals, crossings
        step /= 2
    raise NoCrossingError(f"F - mean has no sign change on [{a:.10g}, {b:.10g}]")


def mean_value_point(table: LadderTable, f: SignalSpec, T: float, U: float, k: int,
                     cfg: RunConfig = DEFAULT, *, well_conditioned: bool = False,
                     kind: str = "Alpha") -> MeanValueSolution:
    """Solve F(d) = mean of F on the k-th reverse iterate of [T, T+U].

    Returns the smallest root unless ``well_conditioned`` is set, in which case
    roots whose nodes sit within ``z_floor`` of a zero of Z are skipped.
    """
    if k > 0:
        bound = check_u_bound(T, U, cfg.u_kappa)
        if not bound.ok:
            raise BoundViolation(f"U={U:g} violates 0 < U <= {bound.u_max:.6g} at T={T:g}",
                                 bound.u_max)
    elif not U > 0:
        raise BoundViolation("U must be positive", math.inf)
    lower = tuple(reverse_iterate(table, T, k, cfg.k_max))
    upper = tuple(reverse_iterate(table, T + U, k, cfg.k_max))
    a, b = lower[-1], upper[-1]
    ref = T + U
    F = _transformed_integrand(table, f, k, ref)

    exact = U * f.mean_ratio(T, U, ref)
    n_panels = quad.panel_count(a, b, cfg.rho) * max(1, k)
    integral = quad.integrate(F, a, b, n_panels, cfg.quad_order)
    defect = abs(integral - exact) / abs(exact)
    if not defect <= cfg.identity_tol:
        raise QuadratureError(
            f"substitution identity defect {defect:.3g} exceeds {cfg.identity_tol:g} "
            f"(T={T:g}, U={U:g}, k={k}, f={f})")
    avg = integral / (b - a)

    grid, vals, crossings = _scan_crossings(F, avg, a, b, cfg.rho * 2 * math.pi / math.log(a))

    skipped = 0
    chosen = None
    for i in crossings:
        if vals[i] == 0:
            d = float(grid[i])
        else:
            d = brentq(lambda s: float(F(np.array([s]))[0]) - avg, grid[i], grid[i + 1],
                       xtol=1e-12, rtol=4 * np.finfo(float).eps, maxiter=200)
        nodes, primes, zs = _chain_from(table, d, k)
        candidate = (d, nodes, primes, zs)
        if chosen is None:
            chosen = candidate
        if not well_conditioned:
            break
        if min((abs(v) for v in zs), default=math.inf) >= cfg.z_floor:
            chosen = candidate
            break
        skipped += 1
    d, nodes, primes, zs = chosen
    Fd = float(F(np.array([d]))[0])
    return MeanValueSolution(
        d=d, nodes=nodes, kind=kind, k=k, lower=lower, upper=upper,
        integral_f=exact, integral_F=integral, residual=abs(Fd * (b - a) - integral),
        tilde_z2=primes, z_nodes=zs, skipped_roots=skipped,
    )


def beta_nodes(table: LadderTable, T: float, U: float, k: int, cfg: RunConfig = DEFAULT,
               *, well_conditioned: bool = False) -> MeanValueSolution:
    """The f = 1 case: prod_r phi_1'(beta_r) = U / ((T+U)^k - T^k)."""
    return mean_value_point(table, SignalSpec.constant(), T, U, k, cfg,
                            well_conditioned=well_conditioned, kind="Beta")


def product_identity_residual(sol: MeanValueSolution, f: SignalSpec, T: float, U: float) -> float:
    """Relative residual of prod_{r=1}^k phi_1'(alpha_r) = (U/len) H / f(alpha_0)."""
    if sol.k == 0:
        return 0.0
    ref = T + U
    rhs = (U / sol.length) * f.mean_ratio(T, U, ref) / float(f.ratio(sol.nodes[0], ref))
    return abs(sol.tilde_product - rhs) / abs(rhs)


# ---------------------------------------------------------- the transform ----

def _sig(x: float | None):
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.15g}")


@dataclass(frozen=True)
class TransformReport:
    signal: SignalSpec
    T: float
    U: float
    k: int
    H: float
    g: float
    G2: float
    discrepancy: float
    bound: float
    kappa: float
    alpha: MeanValueSolution
    beta: MeanValueSolution
    z_floor: float
    table_digest: str
    product_residual_alpha: float = 0.0
    product_residual_beta: float = 0.0

    @property
    def conditioned(self) -> bool:
        return min(self.alpha.min_abs_z, self.beta.min_abs_z) >= self.z_floor

    @property
    def alpha0(self) -> float:
        return self.alpha.nodes[0]

    def to_dict(self) -> dict:
        s = self.signal
        return {
            "signal": {"kind": s.kind.value, "delta": _sig(s.delta), "L": _sig(s.L)},
            "T": _sig(self.T),
            "U": _sig(self.U),
            "k": self.k,
            "d_alpha": _sig(self.alpha.d),
            "d_beta": _sig(self.beta.d),
            "alphas": [_sig(x) for x in self.alpha.nodes],
            "betas": [_sig(x) for x in self.beta.product_nodes],
            "H": _sig(self.H),
            "g": _sig(self.g),
            "G2": _sig(self.G2),
            "discrepancy": _sig(self.discrepancy),
            "bound": _sig(self.bound),
            "kappa": _sig(self.kappa),
            "min_abs_z_alpha": _sig(self.alpha.min_abs_z),
            "min_abs_z_beta": _sig(self.beta.min_abs_z),
            "conditioned": self.conditioned,
            "table_digest": self.table_digest,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    CSV_FIELDS = ("signal", "T", "U", "k", "d_alpha", "d_beta", "alpha0", "H", "g", "G2",
                  "discrepancy", "bound", "kappa", "min_abs_z_alpha", "min_abs_z_beta",
                  "conditioned", "table_digest")

    def csv_row(self) -> list:
        d = self.to_dict()
        return [str(self.signal), d["T"], d["U"], d["k"], d["d_alpha"], d["d_beta"],
                _sig(self.alpha0), d["H"], d["g"], d["G2"], d["discrepancy"], d["bound"],
                d["kappa"], d["min_abs_z_alpha"], d["min_abs_z_beta"], int(d["conditioned"]),
                d["table_digest"]]


def factorization_bound(T: float, kappa: float) -> float:
    return kappa * math.log(math.log(T)) / math.log(T)


def z_transform(table: LadderTable, f: SignalSpec, T: float, U: float, k: int,
                cfg: RunConfig = DEFAULT, *, well_conditioned: bool = False) -> TransformReport:
    """Output value g = H/f(alpha_0) together with its zeta-ratio realisation G^2."""
    if not f.is_positive_on(T, U):
        raise ValueError(f"signal {f} is not positive on ({T:g}, {T + U:g}]")
    beta = beta_nodes(table, T, U, k, cfg, well_conditioned=well_conditioned)
    if f.kind is SignalKind.CONSTANT:
        alpha = MeanValueSolution(**{**beta.__dict__, "kind": "Alpha"})
    else:
        alpha = mean_value_point(table, f, T, U, k, cfg, well_conditioned=well_conditioned)
    ref = T + U
    if f.kind is SignalKind.SHIFTED_POWER:
        g = (U / (alpha.nodes[0] - f.L)) ** f.delta / (f.delta + 1.0)
    else:
        g = f.mean_ratio(T, U, ref) / float(f.ratio(alpha.nodes[0], ref))
    if k == 0:
        G2 = 1.0
    else:
        G2 = 1.0
        for za, zb in zip(alpha.z_nodes, beta.z_nodes):
            G2 *= (za * za) / (zb * zb) if zb != 0 else math.inf
    return TransformReport(
        signal=f, T=float(T), U=float(U), k=int(k), H=mean_h(f, T, U), g=float(g),
        G2=float(G2), discrepancy=float(G2 / g - 1.0),
        bound=factorization_bound(T, cfg.kappa), kappa=cfg.kappa, alpha=alpha, beta=beta,
        z_floor=cfg.z_floor, table_digest=table.digest,
        product_residual_alpha=product_identity_residual(alpha, f, T, U),
        product_residual_beta=product_identity_residual(beta, SignalSpec.constant(), T, U),
    )


# ------------------------------------------------------- theorem checks ----

@dataclass(frozen=True)
class PowerCheck:
    report: TransformReport
    envelope: float
    product_bound: float

    @property
    def within_envelope(self) -> bool:
        return abs(self.report.g - 1.0) <= self.envelope

    @property
    def product_deviation(self) -> float:
        """|G^2/g - 1|."""
        return abs(self.report.discrepancy)

    @property
    def product_ok(self) -> bool:
        return self.product_deviation <= self.product_bound

    @property
    def passed(self) -> bool:
        """Envelope always; the G^2 bound only on well-conditioned runs."""
        return self.within_envelope and (self.product_ok or not self.report.conditioned)


def power_theorem_check(table: LadderTable, delta: float, T: float, U: float, k: int,
                        cfg: RunConfig = DEFAULT, *, well_conditioned: bool = False) -> PowerCheck:
    """Transform t^delta and compare g with 1 (delta = -1 and 0 included)."""
    report = z_transform(table, SignalSpec.power(delta), T, U, k, cfg,
                         well_conditioned=well_conditioned)
    return PowerCheck(report, g_envelope(delta, T, U), factorization_bound(T, cfg.kappa))


@dataclass(frozen=True)
class ShiftedCheck:
    report: TransformReport
    offset: float          # alpha_0 - L
    near: bool             # offset <= U/2
    lower: float
    upper: float | None

    @property
    def g(self) -> float:
        return self.report.g

    @property
    def satisfied(self) -> bool:
        if self.near:
            return self.g >= self.lower
        return self.lower <= self.g < self.upper


def shifted_power_transform(table: LadderTable, delta: float, L: float, U: float, k: int,
                            cfg: RunConfig = DEFAULT, *, well_conditioned: bool = False
                            ) -> ShiftedCheck:
    """Transform (t - L)^delta on [L, L+U] and classify alpha_0 - L against U/2."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    if not L >= cfg.l_bar0:
        raise ValueError(f"L must be >= L_bar0={cfg.l_bar0:g}")
    if not 0 < U <= 0.5:
        raise ValueError("U must lie in (0, 1/2]")
    report = z_transform(table, SignalSpec.shifted(delta, L), L, U, k, cfg,
                         well_conditioned=well_conditioned)
    offset = report.alpha0 - L
    near = offset <= U / 2
    top = 2.0 ** delta / (delta + 1.0)
    if near:
        return ShiftedCheck(report, offset, True, top, None)
    return ShiftedCheck(report, offset, False, 1.0 / (delta + 1.0), top)


class GapRow(NamedTuple):
    chain: str
    r: int
    gap: float
    ratio: float
    ratio_exact_pi: float | None


def gap_report(solution: MeanValueSolution, T: float) -> list[GapRow]:
    """node_{r+1} - node_r against (1 - c) pi(T), with pi(T) ~ T/ln T and exact.

    Alpha chains report r = 0..k-1, beta chains r = 1..k-1.
    """
    scale = (1.0 - EULER_GAMMA) * pi_asymptotic(T)
    exact = (1.0 - EULER_GAMMA) * prime_pi(int(T)) if T <= PRIME_PI_CAP else None
    start = 0 if solution.kind == "Alpha" else 1
    rows = []
    for r in range(start, solution.k):
        gap = solution.nodes[r + 1] - solution.nodes[r]
        rows.append(GapRow(solution.kind, r, gap, gap / scale,
                           gap / exact if exact else None))
    return rows


def nodes_ordered(sol: MeanValueSolution, T: float, U: float) -> bool:
    """T < node_0 < node_1 < ... and node_r inside (T^r, (T+U)^r)."""
    nodes = sol.nodes
    start = 0 if sol.kind == "Alpha" else 1
    if not T < nodes[start]:
        return False
    if any(not nodes[r] < nodes[r + 1] for r in range(start, sol.k)):
        return False
    return all(sol.lower[r] < nodes[r] < sol.upper[r] for r in range(start, sol.k + 1))
