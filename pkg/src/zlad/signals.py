"""Input signal classes, the telegraphic output record and L_n schedules."""
from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT
from .errors import SpacingError, ZladError


class SignalKind(str, enum.Enum):
    POWER = "pow"
    SHIFTED_POWER = "shifted"
    CONSTANT = "const"


class SignalClass(str, enum.Enum):
    UNBOUNDED = "Unbounded"
    NEGLIGIBLE = "Negligible"
    CONSTANT = "Constant"
    BOUNDED_SHIFTED = "BoundedShifted"


@dataclass(frozen=True)
class SignalSpec:
    """One of t^delta, (t - L)^delta with delta > 0, or the constant 1.

    Values are exposed mostly as ratios f(t)/f(ref) so that signals such as
    t^1000 at t ~ 1e5 never have to be formed explicitly.
    """

    kind: SignalKind
    delta: float = 0.0
    L: float | None = None

    def __post_init__(self):
        if self.kind is SignalKind.SHIFTED_POWER:
            if not self.delta > 0:
                raise ValueError("shifted power signals need delta > 0")
            if self.L is None:
                raise ValueError("shifted power signals need L")
        elif self.kind is SignalKind.POWER and self.delta == 0:
            raise ValueError("use SignalSpec.power(0), which normalises to a constant")

    @classmethod
    def power(cls, delta: float) -> "SignalSpec":
        if delta == 0:
            return cls.constant()
        return cls(SignalKind.POWER, float(delta))

    @classmethod
    def shifted(cls, delta: float, L: float) -> "SignalSpec":
        return cls(SignalKind.SHIFTED_POWER, float(delta), float(L))

    @classmethod
    def constant(cls) -> "SignalSpec":
        return cls(SignalKind.CONSTANT, 0.0)

    @classmethod
    def parse(cls, text: str) -> "SignalSpec":
        """``const``, ``pow:<delta>`` or ``shifted:<delta>:<L>``."""
        parts = text.strip().split(":")
        try:
            if parts == ["const"]:
                return cls.constant()
            if parts[0] == "pow" and len(parts) == 2:
                return cls.power(float(parts[1]))
            if parts[0] == "shifted" and len(parts) == 3:
                return cls.shifted(float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise ValueError(f"bad signal spec {text!r}: {exc}") from None
        raise ValueError(f"bad signal spec {text!r}; expected const, pow:D or shifted:D:L")

    def __str__(self) -> str:
        if self.kind is SignalKind.CONSTANT:
            return "const"
        if self.kind is SignalKind.POWER:
            return f"pow:{self.delta:g}"
        return f"shifted:{self.delta:g}:{self.L:g}"

    # -- values --------------------------------------------------------------

    def log_value(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind is SignalKind.CONSTANT:
            return np.zeros(t.shape)
        if self.kind is SignalKind.POWER:
            return self.delta * np.log(t)
        with np.errstate(divide="ignore"):
            return self.delta * np.log(np.maximum(t - self.L, 0.0))

    def value(self, t):
        with np.errstate(over="ignore"):
            return np.exp(self.log_value(t))

    def ratio(self, t, ref: float):
        """f(t) / f(ref), evaluated without forming either factor."""
        t = np.asarray(t, dtype=float)
        if self.kind is SignalKind.CONSTANT:
            return np.ones(t.shape)
        if self.kind is SignalKind.POWER:
            return np.exp(self.delta * np.log1p((t - ref) / ref))
        # continuous extension by 0 below L
        return (np.maximum(t - self.L, 0.0) / (ref - self.L)) ** self.delta

    def mean_ratio(self, T: float, U: float, ref: float | None = None) -> float:
        """H(T, U) / f(ref), with H the mean of f over [T, T+U]; ref defaults to T+U."""
        ref = T + U if ref is None else ref
        if self.kind is SignalKind.CONSTANT:
            return 1.0
        d = self.delta
        if self.kind is SignalKind.POWER:
            top = T + U
            if d == -1:
                val = top * math.log1p(U / T) / U
            else:
                val = top * -math.expm1(-(d + 1) * math.log1p(U / T)) / ((d + 1) * U)
            return val * math.exp(d * math.log(top / ref)) if ref != top else val
        hi = T + U - self.L
        lo = max(T - self.L, 0.0)
        frac = (lo / hi) ** (d + 1) if lo > 0 else 0.0
        val = hi * (1.0 - frac) / ((d + 1) * U)
        return val * (hi / (ref - self.L)) ** d if ref != T + U else val

    def mean(self, T: float, U: float) -> float:
        """H(T, U) itself; inf when it overflows a double."""
        ref = T + U
        log_h = math.log(self.mean_ratio(T, U)) + float(self.log_value(ref))
        return math.exp(log_h) if log_h < 709.0 else math.inf

    def is_positive_on(self, T: float, U: float) -> bool:
        if self.kind is SignalKind.SHIFTED_POWER:
            return T >= self.L
        return T > 0


def classify_signal(s: SignalSpec) -> SignalClass:
    if s.kind is SignalKind.SHIFTED_POWER:
        return SignalClass.BOUNDED_SHIFTED
    if s.kind is SignalKind.CONSTANT:
        return SignalClass.CONSTANT
    return SignalClass.UNBOUNDED if s.delta > 0 else SignalClass.NEGLIGIBLE


# ----------------------------------------------------- telegraphic output ----

@dataclass(frozen=True)
class TelegraphicSignal:
    """Unit rectangular output: level 1 for every U in (0, a)."""

    L: float
    a: float
    level: float = 1.0

    @property
    def alpha0_location(self) -> tuple[float, float]:
        return (self.L, self.L + self.a)

    def same_shape(self, other: "TelegraphicSignal") -> bool:
        """S_L(U; a) = S_L'(U; a): equality of (level, a)."""
        return (self.level, self.a) == (other.level, other.a)


class TelegraphicRejection(ZladError):
    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


def g_envelope(delta: float, T: float, U: float) -> float:
    """Deterministic bound on |g - 1| for t^delta: (1 + U/T)^(|delta|+1) - 1."""
    return math.expm1((abs(delta) + 1.0) * math.log1p(U / T))


def telegraphic_output(runs: Sequence, a: float | None = None) -> TelegraphicSignal:
    """Accept a batch of power-signal transform reports as one telegraphic signal.

    Every run must keep g inside the deterministic envelope; runs whose nodes
    are well conditioned must also keep |G^2/g - 1| within their bound.
    """
    if not runs:
        raise ValueError("need at least one run")
    first = runs[0]
    if a is None:
        a = max(r.U for r in runs)
    for i, run in enumerate(runs):
        sig = run.signal
        if sig.kind is SignalKind.SHIFTED_POWER:
            raise TelegraphicRejection(f"run {i} is a shifted power signal", i)
        if (sig.delta, run.T) != (first.signal.delta, first.T):
            raise TelegraphicRejection(f"run {i} does not share L and delta with run 0", i)
        if not 0 < run.U <= a:
            raise TelegraphicRejection(f"run {i} has U={run.U:g} outside (0, {a:g}]", i)
        env = g_envelope(sig.delta, run.T, run.U)
        if not abs(run.g - 1.0) <= env:
            raise TelegraphicRejection(
                f"run {i}: |g - 1| = {abs(run.g - 1):.3g} exceeds envelope {env:.3g}", i)
        if run.conditioned and not abs(run.discrepancy) <= run.bound:
            raise TelegraphicRejection(
                f"run {i}: |G2/g - 1| = {abs(run.discrepancy):.3g} exceeds {run.bound:.3g}", i)
    return TelegraphicSignal(L=float(first.T), a=float(a))


# -------------------------------------------------------------- schedules ----

class ScheduleMode(str, enum.Enum):
    INTEGER_LADDER = "IntegerLadder"
    CUSTOM = "Custom"


@dataclass(frozen=True)
class Schedule:
    mode: ScheduleMode
    entries: tuple[tuple[float, float], ...]

    @property
    def periodic(self) -> bool:
        """Periodic iff the widths a_n are stationary."""
        widths = {a for _, a in self.entries}
        return len(widths) <= 1

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# schedule v1 mode={self.mode.value}\n")
        buf.write("L,a\n")
        for L, a in self.entries:
            buf.write(f"{L:.15g},{a:.15g}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Schedule":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if head[:3] != ["#", "schedule", "v1"] or not head[3].startswith("mode="):
            raise ValueError(f"not a schedule file header: {lines[0]!r}")
        mode = ScheduleMode(head[3].partition("=")[2])
        if lines[1].strip() != "L,a":
            raise ValueError("expected column header 'L,a'")
        entries = []
        for ln in lines[2:]:
            L, a = ln.split(",")
            entries.append((float(L), float(a)))
        return cls(mode, tuple(entries))


def schedule(mode: ScheduleMode | str, *, L: float | Sequence[float], a: float | Sequence[float],
             count: int | None = None, l_bar0: float = DEFAULT.l_bar0) -> Schedule:
    """Build an (L_n, a_n) schedule.

    IntegerLadder: L_n = L + n, a_n = a for n = 0..count-1.
    Custom: explicit strictly increasing L_n with a_n <= (L_{n+1} - L_n)/2;
    ``a`` has one entry fewer than ``L``.
    """
    mode = ScheduleMode(mode)
    if mode is ScheduleMode.INTEGER_LADDER:
        if count is None or count < 1:
            raise ValueError("IntegerLadder needs count >= 1")
        L0 = float(L)
        width = float(a)
        if not L0 > l_bar0:
            raise ValueError(f"L must exceed L_bar0={l_bar0:g}")
        if not 0 < width <= 0.5:
            raise SpacingError(f"a={width:g} must lie in (0, 1/2]")
        return Schedule(mode, tuple((L0 + n, width) for n in range(count)))
    Ls = [float(x) for x in L]
    widths = [float(x) for x in a]
    if len(widths) != len(Ls) - 1:
        raise ValueError("Custom schedules need len(a) == len(L) - 1")
    if not Ls or not Ls[0] > l_bar0:
        raise ValueError(f"L_1 must exceed L_bar0={l_bar0:g}")
    for n, width in enumerate(widths):
        gap = Ls[n + 1] - Ls[n]
        if not gap > 0:
            raise ValueError("L_n must be strictly increasing")
        if not 0 < width <= gap / 2:
            raise SpacingError(
                f"a_{n + 1}={width:g} exceeds (L_{n + 2} - L_{n + 1})/2 = {gap / 2:g}")
    return Schedule(mode, tuple(zip(Ls[:-1], widths)))


def schedule_from_pairs(pairs: Iterable[tuple[float, float]], mode=ScheduleMode.CUSTOM) -> Schedule:
    return Schedule(ScheduleMode(mode), tuple((float(L), float(a)) for L, a in pairs))
