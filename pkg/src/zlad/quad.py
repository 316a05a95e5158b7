"""Composite Gauss-Legendre panels sized to the local oscillation of Z^2."""
from __future__ import annotations

import functools
import math

import numpy as np
from numpy.polynomial.legendre import leggauss

TWO_PI = 2.0 * math.pi


@functools.lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1]."""
    x, w = leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def panel_width(t, rho: float):
    """Largest panel width allowed at height t: rho * 2pi / ln(t / 2pi).

    The mean spacing of zeros of Z is 2pi/ln(t/2pi); below t = 2pi e the
    logarithm is clamped at 1 so the width stays finite.
    """
    lg = np.maximum(np.log(np.maximum(np.asarray(t, dtype=float), 1.0) / TWO_PI), 1.0)
    return rho * TWO_PI / lg


def panel_count(a: float, b: float, rho: float) -> int:
    if b <= a:
        return 0
    return max(1, int(math.ceil((b - a) / float(panel_width(b, rho)) - 1e-12)))


def composite_rule(a, b, n_panels: int, order: int):
    """Nodes and weights for n equal panels on each [a_i, b_i].

    ``a`` and ``b`` are broadcastable arrays; the result has shape
    ``a.shape + (n_panels * order,)``. Reversed intervals give negative weights,
    so signed integrals come out right.
    """
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    x, w = gauss_legendre(order)
    h = (b - a) / n_panels
    starts = a + h * np.arange(n_panels)
    nodes = (starts[..., None] + h[..., None] * x).reshape(a.shape[:-1] + (-1,))
    weights = np.broadcast_to(h[..., None] * w, starts.shape + (order,))
    return nodes, weights.reshape(a.shape[:-1] + (-1,))


def integrate(func, a: float, b: float, n_panels: int, order: int) -> float:
    """Composite Gauss-Legendre integral of a vectorised ``func`` over [a, b]."""
    if n_panels <= 0 or a == b:
        return 0.0
    nodes, weights = composite_rule(a, b, n_panels, order)
    return float(np.dot(func(nodes), weights))
