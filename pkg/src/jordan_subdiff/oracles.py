"""Brute-force numerical oracles.

These only evaluate: finite differences, sampling probes of the regular
subgradient inequality, and least-distance tests against a convex hull. They
depend on ``algebra`` (element arithmetic and coordinates) and on nothing that
implements a subdifferential formula.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence, TypeVar

import numpy as np
from scipy.optimize import nnls

from .algebra import Element
from .config import config
from .errors import DomainViolation, SchemaError, SizeCapExceeded

logger = logging.getLogger(__name__)

Point = TypeVar("Point", Element, np.ndarray)


@dataclass(frozen=True, eq=False)
class FDEstimate:
    """One-sided finite-difference estimate of a directional derivative.

    ``order`` is the observed convergence order of the quotients; ``inf``
    when they agree to rounding level (the map is linear along the ray).
    """

    value: np.ndarray
    error_estimate: float
    order: float | None
    quotients: tuple[np.ndarray, ...]


@dataclass(frozen=True, eq=False)
class ProbeVerdict:
    """Result of a regular-subgradient probe.

    ``worst_violation`` is the smallest (f(x0+v) - f(x0) - <s,v>)/||v|| + ε over
    the sampled v, so the probe passes exactly when it is nonnegative.
    """

    passed: bool
    worst_violation: float
    witness: Element | np.ndarray | None = None

    def to_dict(self) -> dict:
        """JSON form of the verdict."""
        witness = self.witness
        if isinstance(witness, Element):
            witness = witness.to_coords()
        return {
            "passed": self.passed,
            "worst_violation": self.worst_violation,
            "witness": None if witness is None else np.asarray(witness).tolist(),
        }


def fd_dir_derivative(
    evaluate: Callable[[Point], np.ndarray],
    x: Point,
    z: Point,
    t_grid: Sequence[float],
) -> FDEstimate:
    """Difference quotients (evaluate(x + t z) - evaluate(x)) / t over a decreasing t grid.

    The value is linearly extrapolated to t = 0 from the last two quotients.
    """
    ts = np.asarray(t_grid, dtype=np.float64)
    if ts.size == 0 or np.any(ts <= 0) or np.any(np.diff(ts) >= 0):
        raise SchemaError(f"t_grid must be positive and strictly decreasing, got {list(t_grid)}")
    base = np.atleast_1d(np.asarray(evaluate(x), dtype=np.float64))
    quotients = tuple(
        (np.atleast_1d(np.asarray(evaluate(x + float(t) * z), dtype=np.float64)) - base) / t for t in ts
    )
    if ts.size == 1:
        return FDEstimate(value=quotients[0], error_estimate=math.inf, order=None, quotients=quotients)

    q_prev, q_last = quotients[-2], quotients[-1]
    t_prev, t_last = ts[-2], ts[-1]
    value = q_last + (q_last - q_prev) * t_last / (t_prev - t_last)
    error = float(np.linalg.norm(q_last - q_prev))

    noise = 64.0 * np.finfo(float).eps * (1.0 + float(np.linalg.norm(base))) / t_last
    order: float | None = None
    if error <= noise:
        order = math.inf
    elif ts.size >= 3:
        earlier = float(np.linalg.norm(q_prev - quotients[-3]))
        if earlier > noise:
            order = math.log(earlier / error) / math.log(t_prev / t_last)
    return FDEstimate(value=value, error_estimate=error, order=order, quotients=quotients)


def regular_subgradient_probe(
    evaluate: Callable[[Point], float],
    x0: Point,
    s: Point,
    epsilon: float,
    radii: Sequence[float],
    n_dirs: int | None = None,
    seed: int = 0,
) -> ProbeVerdict:
    """Sample the inequality f(x0+v) - f(x0) - <s,v> >= -ε||v|| on spheres around x0.

    Directions are uniform on the unit sphere of the orthonormal coordinates,
    n_dirs per radius. Points where ``evaluate`` is not finite never count as
    violations.

    Raises:
        DomainViolation: evaluate(x0) is not finite.
    """
    n_dirs = config.PROBE_N_DIRS if n_dirs is None else n_dirs
    f0 = float(evaluate(x0))
    if not math.isfinite(f0):
        raise DomainViolation(f"Probe base value must be finite, got {f0}")

    if isinstance(x0, Element):
        base = x0.to_coords()
        slope = s.to_coords()

        def at(v: np.ndarray) -> Point:
            return x0 + x0.algebra.from_coords(v)

        def wrap(v: np.ndarray) -> Point:
            return x0.algebra.from_coords(v)
    else:
        base = np.asarray(x0, dtype=np.float64)
        slope = np.asarray(s, dtype=np.float64)

        def at(v: np.ndarray) -> Point:
            return base + v

        def wrap(v: np.ndarray) -> Point:
            return v

    rng = np.random.Generator(np.random.Philox(seed))
    worst = math.inf
    worst_v: np.ndarray | None = None
    for radius in radii:
        directions = rng.standard_normal((n_dirs, base.size))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        for v in radius * directions:
            fv = float(evaluate(at(v)))
            if not math.isfinite(fv):
                continue
            ratio = (fv - f0 - float(slope @ v)) / float(np.linalg.norm(v)) + epsilon
            if ratio < worst:
                worst, worst_v = ratio, v

    passed = worst >= 0.0
    logger.debug("Probe over %d radii: worst %.6g", len(radii), worst)
    return ProbeVerdict(passed=passed, worst_violation=worst, witness=None if passed or worst_v is None else wrap(worst_v))


def _polish_on_support(points: np.ndarray, u: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Exact least distance on the affine hull of the current support, if it stays feasible."""
    support = np.flatnonzero(weights > 0)
    ps = points[support]
    k = support.size
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = ps @ ps.T
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.concatenate([ps @ u, [1.0]])
    sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:k]
    if np.all(sol >= 0) and abs(sol.sum() - 1.0) <= 1e-12:
        out = np.zeros_like(weights)
        out[support] = sol
        return out
    return weights


def hull_distance(u: Sequence[float] | np.ndarray, points: Sequence[Sequence[float]] | np.ndarray) -> tuple[float, np.ndarray]:
    """Distance from u to conv(points) and the convex weights attaining it.

    Solves nonnegative least squares with a heavily weighted row of ones for
    the sum-to-one constraint, renormalizes, then re-solves exactly on the
    resulting support.

    Raises:
        SizeCapExceeded: more than HULL_POINT_CAP points.
    """
    u = np.asarray(u, dtype=np.float64)
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if pts.size == 0:
        raise SchemaError("Need at least one hull point")
    if pts.shape[0] > config.HULL_POINT_CAP:
        raise SizeCapExceeded(f"{pts.shape[0]} hull points exceed the cap of {config.HULL_POINT_CAP}")
    if pts.shape[1] != u.size:
        raise SchemaError(f"Hull points have dimension {pts.shape[1]}, query has {u.size}")

    weight = 1e6 * (1.0 + max(float(np.max(np.abs(pts))), float(np.max(np.abs(u)))))
    a = np.r_[pts.T, weight * np.ones((1, pts.shape[0]))]
    b = np.r_[u, [weight]]
    w, _ = nnls(a, b, maxiter=50 * a.shape[1])
    if w.sum() <= 0:
        w = np.full(pts.shape[0], 1.0 / pts.shape[0])
    w = w / w.sum()
    w = _polish_on_support(pts, u, w)
    return float(np.linalg.norm(pts.T @ w - u)), w


def hull_member_bruteforce(
    u: Sequence[float] | np.ndarray,
    points: Sequence[Sequence[float]] | np.ndarray,
    tol: float | None = None,
) -> bool:
    """True iff the distance from u to conv(points) is at most tol."""
    tol = config.DEFAULT_TOL if tol is None else tol
    return hull_distance(u, points)[0] <= tol
