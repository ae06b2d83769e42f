"""Finite-difference helpers.

These exist as independent cross-checks of the exact symbolic derivative
path, never as the primary derivative route (two stacked FD layers would
destroy curvature-level tolerances).
"""

from __future__ import annotations

from typing import Callable

import numpy as np


def step_for(x: float, rel_step: float = 1e-4) -> float:
    """Step proportional to the coordinate scale, floored at the relative step."""
    return rel_step * max(1.0, abs(x))


def central_diff(f: Callable[[np.ndarray], float | np.ndarray], x, i: int,
                 h: float | None = None, order: int = 2):
    """Central difference of f along coordinate i at x.

    order=2 is the classic two-point stencil, order=4 the five-point one.
    Works for scalar- or array-valued f.
    """
    x = np.asarray(x, dtype=float)
    if h is None:
        h = step_for(x[i])
    e = np.zeros_like(x)
    e[i] = 1.0
    if order == 2:
        return (np.asarray(f(x + h * e)) - np.asarray(f(x - h * e))) / (2.0 * h)
    if order == 4:
        return (-np.asarray(f(x + 2 * h * e)) + 8.0 * np.asarray(f(x + h * e))
                - 8.0 * np.asarray(f(x - h * e)) + np.asarray(f(x - 2 * h * e))) / (12.0 * h)
    raise ValueError(f"unsupported FD order {order}")


def gradient(f: Callable[[np.ndarray], float], x, h: float | None = None,
             order: int = 4) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.array([central_diff(f, x, i, h, order) for i in range(len(x))])
