"""Switched ODE integration and the combined flow on state x signal pairs.

The state flows under the vector field selected by the current signal
value; the signal itself is translated in time.  Integration is fixed-step
RK4 split exactly at the signal's switching breakpoints, so trajectories
are deterministic and the only error is the smooth per-field RK4 error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fields import VectorField
from .graph import DirectedGraph, ValidationError, require_valid
from .signals import SwitchingSignal, metric_delta, shift


class IntegrationError(RuntimeError):
    """Raised when a trajectory leaves the finite range of floats."""


@dataclass(frozen=True)
class SwitchedSystem:
    """A family of vector fields on a box, one per graph vertex."""

    graph: DirectedGraph
    box: tuple[tuple[float, float], ...]
    step: float
    fields: tuple[VectorField, ...]
    substeps: int = 20
    clamp: bool = False

    def __post_init__(self) -> None:
        require_valid(self.graph)
        if len(self.fields) != self.graph.n:
            raise ValidationError("need exactly one field per graph vertex")
        if self.step <= 0:
            raise ValidationError("step h must be positive")
        if self.substeps < 1:
            raise ValidationError("substeps must be >= 1")
        for lo, hi in self.box:
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValidationError("box intervals must be nonempty and finite")

    @property
    def dimension(self) -> int:
        return len(self.box)

    def clip(self, x: np.ndarray) -> np.ndarray:
        lo = np.array([b[0] for b in self.box])
        hi = np.array([b[1] for b in self.box])
        return np.clip(x, lo, hi)

    def contains(self, x: Sequence[float]) -> bool:
        return all(lo <= xi <= hi for xi, (lo, hi) in zip(x, self.box))


@dataclass(frozen=True)
class HybridState:
    """A point of the product space: state plus driving signal."""

    x: tuple[float, ...]
    f: SwitchingSignal


def integrate_segment(sys: SwitchedSystem, field_index: int, x0: np.ndarray,
                      dt: float) -> np.ndarray:
    """Fixed-step RK4 under a single field for (possibly negative) time dt."""
    x = np.asarray(x0, dtype=float)
    if dt == 0.0:
        return x.copy()
    vf = sys.fields[field_index]
    n_steps = max(1, math.ceil(abs(dt) / sys.step)) * sys.substeps
    hstep = dt / n_steps
    for _ in range(n_steps):
        k1 = vf(x)
        k2 = vf(x + 0.5 * hstep * k1)
        k3 = vf(x + 0.5 * hstep * k2)
        k4 = vf(x + hstep * k3)
        x = x + (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if sys.clamp:
            x = sys.clip(x)
    if not np.all(np.isfinite(x)):
        raise IntegrationError(f"state became non-finite under field {field_index}")
    return x


def _breakpoints(f: SwitchingSignal, t: float) -> list[float]:
    """Partition points of [0, t] (or [t, 0]) at the signal's cell boundaries."""
    pts = [0.0]
    if t > 0:
        b = f.breakpoint_after(0.0)
        while b < t:
            pts.append(b)
            b += f.step
    else:
        b = f.breakpoint_after(t)
        down = []
        while b < 0.0:
            down.append(b)
            b += f.step
        pts.extend(reversed(down))
    pts.append(t)
    return pts


def switched_flow(sys: SwitchedSystem, t: float, x0: Sequence[float] | np.ndarray,
                  f: SwitchingSignal) -> np.ndarray:
    """Flow the state for time t, switching fields at the signal's breakpoints.

    Negative t integrates backward.  The active field over each piece is the
    signal value in the piece's interior.
    """
    if f.graph != sys.graph:
        raise ValidationError("signal and system use different graphs")
    if abs(f.step - sys.step) > 1e-12 * sys.step:
        raise ValidationError("signal and system use different step h")
    x = np.asarray(x0, dtype=float)
    pts = _breakpoints(f, t)
    for a, b in zip(pts, pts[1:]):
        if b == a:
            continue
        idx = f.value_at(0.5 * (a + b))
        x = integrate_segment(sys, idx, x, b - a)
    return x


def skew_product(sys: SwitchedSystem, t: float, state: HybridState) -> HybridState:
    """Advance the pair (x, f): state driven by f, signal translated by t."""
    x1 = switched_flow(sys, t, state.x, state.f)
    return HybridState(tuple(float(v) for v in np.atleast_1d(x1)), shift(state.f, t))


def product_metric(a: HybridState, b: HybridState, tol: float = 1e-12) -> float:
    """Euclidean distance on states plus the signal metric."""
    dx = np.asarray(a.x, dtype=float) - np.asarray(b.x, dtype=float)
    return float(np.linalg.norm(dx)) + metric_delta(a.f, b.f, tol)
