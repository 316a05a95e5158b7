"""Run configuration and numerical constants."""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

EULER_GAMMA = 0.57721566490153286061
LOG_2PI = math.log(2.0 * math.pi)

# Riemann-Siegel remainder constants by number of correction terms, taken from
# Gabcke's published bounds |R_n(t)| <= K_n t^{-(2n+3)/4} for t >= 200.
K_RS = (0.127, 0.061, 0.053, 0.053, 0.081)

# Fitted once from max |spectral_z - z| * x^{1/4} over [x, x + x^{1/4}],
# x in {1e3, 1e4, 1e5}; see demos/spectral_form.py for the calibration run.
C_SP = 1.5


@dataclass(frozen=True)
class RunConfig:
    t_switch: float = 200.0
    grid_step: float = 0.25
    t_floor: float = 100.0
    rho: float = 0.25
    quad_order: int = 16
    c0: float = 0.0
    kappa: float = 5.0
    u_kappa: float = 1.0
    z_floor: float = 1e-4
    inv_tol: float = 1e-6
    mv_tol: float = 1e-6
    identity_tol: float = 1e-4
    k_max: int = 3
    l_bar0: float = 1e3
    n_corrections: int = 2
    table_path: str | None = None
    output: str = "json"

    def __post_init__(self):
        for name in ("rho", "z_floor", "inv_tol", "mv_tol", "identity_tol",
                     "kappa", "u_kappa", "grid_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 1 <= self.k_max <= 8:
            raise ValueError("k_max must lie in [1, 8]")
        if not 0 <= self.n_corrections <= 4:
            raise ValueError("n_corrections must lie in [0, 4]")
        if self.output not in ("csv", "json"):
            raise ValueError("output must be 'csv' or 'json'")

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


DEFAULT = RunConfig()
