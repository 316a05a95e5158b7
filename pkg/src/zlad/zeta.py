"""Critical-line evaluation of Z(t), theta(t) and |zeta(1/2+it)|.

Two independent backends are provided:

* Euler-Maclaurin summation of zeta(1/2+it), with a rigorous remainder bound,
  used as the reference and for small heights;
* the Riemann-Siegel main sum plus up to five correction terms, used above
  ``t_switch`` where it is orders of magnitude cheaper.

The array entry points (``theta_array``, ``z_array``) are what the ladder
quadrature calls in its hot loop; the scalar wrappers return
:class:`ZEvaluation` records carrying the backend tag and an error estimate.

The local oscillator (spectral) form of the Riemann-Siegel sum lives here too:
around a base point x the phase theta(t) - t ln n is linearised, which gives
frozen frequencies ln(tau(x)/n) and a common phase -x/2 - pi/8.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.special import bernoulli

from .config import C_SP, DEFAULT, K_RS
from .errors import DomainError, IllConditionedError, ToleranceError, WindowError

TWO_PI = 2.0 * math.pi
LOG_PI = math.log(math.pi)
HALF_LOG_2PI = 0.5 * math.log(TWO_PI)
EPS = np.finfo(float).eps

MAX_EM_TERMS = 10**6


class Backend(str, enum.Enum):
    RIEMANN_SIEGEL = "RiemannSiegel"
    EULER_MACLAURIN = "EulerMaclaurin"


@dataclass(frozen=True)
class ZEvaluation:
    t: float
    z: float
    theta: float
    backend: Backend
    err_bound: float

    @property
    def abs_zeta(self) -> float:
        return abs(self.z)


# ---------------------------------------------------------------- theta ----

# B_{2k} / (2k (2k-1)) for the Stirling series of ln Gamma
_STIRLING = [
    float(bernoulli(2 * k)[2 * k]) / (2 * k * (2 * k - 1)) for k in range(1, 9)
]
_STIRLING_MIN_MODULUS = 15.0


def _im_loggamma(w: np.ndarray) -> np.ndarray:
    """Im ln Gamma(w) for Re w > 0 on the principal (continuous) branch."""
    w = np.asarray(w, dtype=complex)
    shift = np.where(np.abs(w) < _STIRLING_MIN_MODULUS,
                     np.ceil(_STIRLING_MIN_MODULUS), 0.0)
    m_max = int(shift.max()) if shift.size else 0
    correction = np.zeros(w.shape)
    for j in range(m_max):
        active = shift > j
        correction -= np.where(active, np.angle(w + j), 0.0)
    u = w + shift
    a, b = u.real, u.imag
    val = (a - 0.5) * np.angle(u) + b * np.log(np.abs(u)) - b
    inv = 1.0 / u
    inv2 = inv * inv
    series = np.zeros(w.shape, dtype=complex)
    power = inv
    for coef in _STIRLING:
        series += coef * power
        power = power * inv2
    return val + series.imag + correction


def theta_array(t) -> np.ndarray:
    """Riemann-Siegel theta without domain checks (valid for all t >= 0)."""
    t = np.asarray(t, dtype=float)
    return _im_loggamma(0.25 + 0.5j * t) - 0.5 * t * LOG_PI


def theta(t: float) -> float:
    """theta(t) = Im ln Gamma(1/4 + it/2) - (t/2) ln pi, for t >= 1."""
    if not t >= 1.0:
        raise DomainError(f"theta requires t >= 1, got {t!r}")
    return float(theta_array(t))


# ------------------------------------------------------- Euler-Maclaurin ----

@functools.lru_cache(maxsize=None)
def _em_coefficients(m: int) -> np.ndarray:
    """B_{2k} / (2k)! for k = 1..m."""
    b = bernoulli(2 * m)
    return np.array([b[2 * k] / math.factorial(2 * k) for k in range(1, m + 1)])


def _em_zeta(t: np.ndarray, tol: float, max_terms: int = MAX_EM_TERMS):
    """zeta(1/2+it) by Euler-Maclaurin; returns (values, remainder bounds).

    One truncation point N serves the whole array; it is chosen so that the
    ratio of consecutive tail terms stays near 1/4 at the largest height.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = 0.5 + 1j * t
    t_top = float(t.max()) if t.size else 0.0
    n_trunc = max(10, int(math.ceil(t_top / math.pi)) + 10)
    if n_trunc > max_terms:
        raise ToleranceError(
            f"Euler-Maclaurin needs {n_trunc} terms at t={t_top:g}, cap is {max_terms}"
        )
    # Dirichlet head, chunked to bound the work matrix
    head = np.zeros(t.shape, dtype=complex)
    n = np.arange(1, n_trunc, dtype=float)
    log_n = np.log(n)
    amp = n ** -0.5
    rows = max(1, 4_000_000 // max(1, n.size))
    for lo in range(0, t.size, rows):
        tt = t[lo:lo + rows, None]
        ph = tt * log_n
        head[lo:lo + rows] = (amp * np.cos(ph)).sum(axis=1) - 1j * (amp * np.sin(ph)).sum(axis=1)

    log_N = math.log(n_trunc)
    n_pow = np.exp(-s * log_N)  # N^{-s}
    total = head + n_trunc * n_pow / (s - 1.0) + 0.5 * n_pow

    m_max = 80
    coefs = _em_coefficients(m_max + 1)
    rising = s.copy()  # s (s+1) ... (s+2k-2)
    power = n_pow / n_trunc  # N^{-s-2k+1} at k = 1
    bound = np.full(t.shape, np.inf)
    for k in range(1, m_max + 1):
        term = coefs[k - 1] * rising * power
        total = total + term
        # next term and the remainder estimate after k terms
        rising_next = rising * (s + 2 * k - 1) * (s + 2 * k)
        power_next = power / (n_trunc * n_trunc)
        nxt = coefs[k] * rising_next * power_next
        bound = np.abs(s + 2 * k + 1) / (0.5 + 2 * k + 1) * np.abs(nxt)
        rising, power = rising_next, power_next
        if np.all(bound <= tol):
            break
    else:
        raise ToleranceError(f"Euler-Maclaurin remainder {bound.max():.3g} above {tol:g}")
    # rounding in the phases t ln n, accumulated as a random walk
    rounding = 4 * EPS * (t * log_N + 1.0) * np.sqrt(np.log(n_trunc) + 1.0)
    return total, bound + rounding


def _em_z(t, tol: float):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    zeta, err = _em_zeta(t, tol)
    th = theta_array(t)
    rotated = np.exp(1j * th) * zeta
    residue = np.abs(rotated.imag)
    # theta is only known to ~eps*|theta|; that phase error leaks into Im
    allowed = 10 * np.maximum(tol, err) + 8 * EPS * (np.abs(th) + 1) * np.abs(zeta)
    if np.any(residue > allowed):
        i = int(np.argmax(residue - allowed))
        raise ToleranceError(
            f"imaginary residue {residue[i]:.3g} at t={t[i]:g} exceeds {allowed[i]:.3g}"
        )
    return rotated.real, th, err


def z_euler_maclaurin(t: float, target_tol: float = 1e-10) -> ZEvaluation:
    """Z(t) from Euler-Maclaurin summation of zeta(1/2+it)."""
    if not t >= 0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    if not target_tol >= 1e-12:
        raise DomainError("target_tol must be >= 1e-12")
    z, th, err = _em_z(t, target_tol)
    return ZEvaluation(float(t), float(z[0]), float(th[0]),
                       Backend.EULER_MACLAURIN, float(err[0]))


# -------------------------------------------------------- Riemann-Siegel ----

_PSI_DEGREE = 70


@functools.lru_cache(maxsize=None)
def _psi_taylor() -> np.ndarray:
    """Taylor coefficients of Psi(p) = cos(2pi(p^2-p-1/16))/cos(2pi p) at p=1/2.

    With x = p - 1/2 this is -cos(2pi x^2 - 5pi/8)/cos(2pi x), an entire
    function; the series division is done in multiprecision because the
    secant coefficients grow geometrically and cancel.
    """
    import mpmath as mp

    deg = _PSI_DEGREE
    with mp.workdps(60):
        pi = mp.pi
        b = 5 * pi / 8
        trig = (mp.cos(b), mp.sin(b), -mp.cos(b), -mp.sin(b))
        num = [mp.mpf(0)] * (deg + 1)
        den = [mp.mpf(0)] * (deg + 1)
        for j in range(deg // 2 + 1):
            num[2 * j] = (2 * pi) ** j / mp.factorial(j) * trig[j % 4]
            den[2 * j] = -((-1) ** j) * (2 * pi) ** (2 * j) / mp.factorial(2 * j)
        q = []
        for n in range(deg + 1):
            acc = num[n] - mp.fsum(q[i] * den[n - i] for i in range(n))
            q.append(acc / den[0])
        return np.array([float(c) for c in q])


@functools.lru_cache(maxsize=None)
def _psi_derivative(order: int) -> np.ndarray:
    c = _psi_taylor()
    for _ in range(order):
        c = npoly.polyder(c)
    return c


def _psi(order: int, x: np.ndarray) -> np.ndarray:
    return npoly.polyval(x, _psi_derivative(order))


def _rs_corrections(p: np.ndarray, n_corrections: int) -> list[np.ndarray]:
    x = p - 0.5
    pi2 = math.pi ** 2
    out = [_psi(0, x)]
    if n_corrections >= 1:
        out.append(-_psi(3, x) / (96 * pi2))
    if n_corrections >= 2:
        out.append(_psi(2, x) / (64 * pi2) + _psi(6, x) / (18432 * pi2 ** 2))
    if n_corrections >= 3:
        out.append(-_psi(1, x) / (64 * pi2) - _psi(5, x) / (3840 * pi2 ** 2)
                   - _psi(9, x) / (5308416 * pi2 ** 3))
    if n_corrections >= 4:
        out.append(_psi(0, x) / (128 * pi2) + 19 * _psi(4, x) / (24576 * pi2 ** 2)
                   + 11 * _psi(8, x) / (5898240 * pi2 ** 3)
                   + _psi(12, x) / (2038431744 * pi2 ** 4))
    return out


def _rs_main_sum(t: np.ndarray, th: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """2 sum_{n <= N(t)} n^{-1/2} cos(theta(t) - t ln n), grouped by N."""
    out = np.zeros(t.shape)
    n_top = int(counts.max()) if counts.size else 0
    log_n = np.log(np.arange(1, n_top + 1, dtype=float))
    amp = np.arange(1, n_top + 1, dtype=float) ** -0.5
    order = np.argsort(counts, kind="stable")
    sorted_counts = counts[order]
    bounds = np.flatnonzero(np.diff(sorted_counts)) + 1
    for grp in np.split(order, bounds):
        if grp.size == 0:
            continue
        n = int(counts[grp[0]])
        rows = max(1, 2_000_000 // n)
        ln = log_n[:n]
        a = amp[:n]
        for lo in range(0, grp.size, rows):
            idx = grp[lo:lo + rows]
            phase = th[idx, None] - t[idx, None] * ln
            out[idx] = 2.0 * (np.cos(phase) @ a)
    return out


def _rs_z(t, n_corrections: int):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    th = theta_array(t)
    tau = np.sqrt(t / TWO_PI)
    counts = np.floor(tau).astype(np.int64)
    p = tau - counts
    main = _rs_main_sum(t, th, counts)
    sign = np.where(counts % 2 == 1, 1.0, -1.0)  # (-1)^(N-1)
    corr = np.zeros(t.shape)
    inv_tau = 1.0 / tau
    scale = np.ones(t.shape)
    for c in _rs_corrections(p, n_corrections):
        corr += c * scale
        scale = scale * inv_tau
    z = main + sign * tau ** -0.5 * corr
    err = K_RS[n_corrections] * t ** (-(2 * n_corrections + 3) / 4.0)
    return z, th, err


def z_riemann_siegel(t: float, n_corrections: int = DEFAULT.n_corrections,
                     t_switch: float = DEFAULT.t_switch) -> ZEvaluation:
    """Z(t) from the Riemann-Siegel formula with ``n_corrections`` extra terms."""
    if not t >= t_switch:
        raise DomainError(
            f"Riemann-Siegel backend needs t >= {t_switch:g}, got {t!r}; "
            "use the Euler-Maclaurin backend"
        )
    if not 0 <= n_corrections <= 4:
        raise DomainError("n_corrections must lie in [0, 4]")
    z, th, err = _rs_z(t, n_corrections)
    return ZEvaluation(float(t), float(z[0]), float(th[0]),
                       Backend.RIEMANN_SIEGEL, float(err[0]))


# ----------------------------------------------------------- dispatcher ----

def z_array(t, t_switch: float = DEFAULT.t_switch,
            n_corrections: int = DEFAULT.n_corrections,
            em_tol: float = 1e-10) -> np.ndarray:
    """Vectorised Z(t): Euler-Maclaurin below ``t_switch``, Riemann-Siegel above."""
    t = np.asarray(t, dtype=float)
    flat = t.ravel()
    out = np.empty(flat.shape)
    low = flat < t_switch
    if np.any(low):
        out[low] = _em_z(flat[low], em_tol)[0]
    if np.any(~low):
        out[~low] = _rs_z(flat[~low], n_corrections)[0]
    return out.reshape(t.shape)


def z(t: float, t_switch: float = DEFAULT.t_switch,
      n_corrections: int = DEFAULT.n_corrections) -> ZEvaluation:
    if not t >= 0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    if t < t_switch:
        return z_euler_maclaurin(t)
    return z_riemann_siegel(t, n_corrections, t_switch)


class RatioResult(NamedTuple):
    value: float
    min_abs_z: float


def zeta_ratio_sq(alphas: Sequence[float], betas: Sequence[float],
                  z_floor: float = DEFAULT.z_floor,
                  k_max: int = DEFAULT.k_max) -> RatioResult:
    """prod_r |zeta(1/2+i a_r)|^2 / |zeta(1/2+i b_r)|^2 and its conditioning."""
    a = np.asarray(alphas, dtype=float)
    b = np.asarray(betas, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("alphas and betas must be 1-d sequences of equal length")
    if not 1 <= a.size <= k_max:
        raise ValueError(f"need 1 <= k <= {k_max}, got k={a.size}")
    if np.any(a < 0) or np.any(b < 0):
        raise DomainError("heights must be non-negative")
    za = z_array(a)
    zb = z_array(b)
    if np.any(np.abs(zb) < z_floor):
        r = int(np.argmin(np.abs(zb)))
        raise IllConditionedError(
            f"|Z(beta_{r + 1})| = {abs(zb[r]):.3g} below z_floor={z_floor:g}"
        )
    value = 1.0
    for x, y in zip(za, zb):
        value *= (x * x) / (y * y)
    min_abs = float(min(np.abs(za).min(), np.abs(zb).min()))
    return RatioResult(float(value), min_abs)


# ------------------------------------------------------- spectral form ----

@dataclass(frozen=True)
class SpectrumDescriptor:
    x: float
    tau: float
    psi: float
    n: np.ndarray
    amplitude: np.ndarray
    omega: np.ndarray
    remainder_bound: float
    window: float
    omega_mode: str = "log"

    @property
    def count(self) -> int:
        return int(self.n.size)

    def oscillators(self):
        return list(zip(self.n.tolist(), self.amplitude.tolist(), self.omega.tolist()))


def local_spectrum(x: float, *, x_min: float = 1e3, window: float | None = None,
                   omega_mode: str = "log", k_remainder: float = C_SP) -> SpectrumDescriptor:
    """Local oscillator set of the Riemann-Siegel sum around base point ``x``.

    ``omega_mode="log"`` uses omega_n = ln(tau/n), the slope of
    theta(t) - t ln n at t = x; ``"raw"`` uses tau/n literally.
    """
    if not x >= x_min:
        raise DomainError(f"x must be >= {x_min:g}, got {x!r}")
    if omega_mode not in ("log", "raw"):
        raise ValueError("omega_mode must be 'log' or 'raw'")
    tau = math.sqrt(x / TWO_PI)
    # guard against tau landing a hair under an integer, e.g. x = 2 pi
    count = int(math.floor(tau + 1e-12))
    n = np.arange(1, count + 1)
    amplitude = 2.0 / np.sqrt(n)
    if omega_mode == "log":
        omega = np.log(tau / n)
    else:
        omega = tau / n
    if window is None:
        window = x ** 0.25
    elif not 0 < window <= x ** 0.25:
        raise DomainError("window must lie in (0, x^(1/4)]")
    return SpectrumDescriptor(
        x=float(x), tau=tau, psi=-x / 2.0 - math.pi / 8.0, n=n,
        amplitude=amplitude, omega=omega,
        remainder_bound=k_remainder * x ** -0.25, window=float(window),
        omega_mode=omega_mode,
    )


def spectral_z(t, spec: SpectrumDescriptor):
    """Oscillator-sum approximation of Z(t) inside the descriptor's window."""
    arr = np.asarray(t, dtype=float)
    lo, hi = spec.x, spec.x + spec.window
    if np.any(arr < lo) or np.any(arr > hi):
        raise WindowError(f"t must lie in [{lo:g}, {hi:g}]")
    # phase measured from x keeps t*omega small and exact to rounding
    rel = arr[..., None] - spec.x
    phase = rel * spec.omega + (spec.x * spec.omega + spec.psi)
    val = (spec.amplitude * np.cos(phase)).sum(axis=-1)
    return float(val) if np.ndim(val) == 0 else val
