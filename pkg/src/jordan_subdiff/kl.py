"""Sampling checks of the Kurdyka-Łojasiewicz inequality and exponent fits.

With the desingularizer ψ(t) = c t^(1-α), the KL inequality at y near x reads

    ψ'(F(y) - F(x)) · dist(0, ∂F(y)) >= 1    whenever F(x) < F(y) < F(x) + ν.

Points y are drawn around x (isotropic Gaussian direction in orthonormal
coordinates, radius uniform in (0, radius], Philox generator) and the margin
ψ'(Δ)·dist0 - 1 is recorded. Sampling can only falsify the inequality, so
reports say "no violation found", never that the property holds.

The exponent fit regresses log dist0 on log Δ. At the tight rate
dist0 ~ Δ^α / (c(1 - α)) the slope is α itself, so the slope is reported as
the exponent estimate.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.stats import linregress

from .algebra import Element
from .config import config
from .errors import DomainViolation, InsufficientSamples, SchemaError
from .frames import spectral_decompose
from .functions import SymmetricFunction, SymmetricFunctionId

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KLReport:
    """Outcome of a KL sampling scan."""

    samples_tested: int
    violations: int
    min_margin: float | None
    fitted_exponent: float | None = None
    fit_residual: float | None = None
    samples_drawn: int = 0

    @property
    def verdict(self) -> str:
        """Human-readable summary of the violation count."""
        return "no violation found" if self.violations == 0 else "violation found"

    def to_dict(self) -> dict:
        """JSON form of the report."""
        return {
            "samples_drawn": self.samples_drawn,
            "samples_tested": self.samples_tested,
            "violations": self.violations,
            "min_margin": self.min_margin,
            "fitted_exponent": self.fitted_exponent,
            "fit_residual": self.fit_residual,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class KLTransferReport:
    """KL scans of F at x and of f at λ(x) with the same ψ and ν."""

    spectral: KLReport
    vector: KLReport

    @property
    def agree(self) -> bool:
        """True iff both scans reach the same verdict."""
        return (self.spectral.violations == 0) == (self.vector.violations == 0)


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares KL exponent estimate."""

    exponent: float | None
    residual: float
    n_used: int
    degenerate: bool

    def to_dict(self) -> dict:
        """JSON form of the fit."""
        return {
            "exponent": self.exponent,
            "residual": self.residual,
            "n_used": self.n_used,
            "degenerate": self.degenerate,
        }


def _function(fid: SymmetricFunctionId | str) -> SymmetricFunction:
    if isinstance(fid, str):
        fid = SymmetricFunctionId.parse(fid)
    return fid.function()


def sample_offsets(dim: int, radius: float, n_samples: int, rng: np.random.Generator) -> np.ndarray:
    """Offsets with isotropic direction and radius uniform in (0, radius]."""
    directions = rng.standard_normal((n_samples, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = radius * (1.0 - rng.random(n_samples))
    return directions * radii[:, None]


def _check_params(alpha: float, c: float, nu: float, radius: float, n_samples: int) -> None:
    if not 0.0 <= alpha < 1.0:
        raise SchemaError(f"alpha must lie in [0, 1), got {alpha}")
    if not c > 0:
        raise SchemaError(f"c must be positive, got {c}")
    if not nu > 0:
        raise SchemaError(f"nu must be positive, got {nu}")
    if not radius > 0:
        raise SchemaError(f"radius must be positive, got {radius}")
    if n_samples < 0:
        raise SchemaError(f"n_samples must be nonnegative, got {n_samples}")


# (value, dist0) at a sample; dist0 is only called for points inside the band
Sampler = Callable[[np.ndarray], tuple[float, Callable[[], float]]]


def _scan(
    sampler: Sampler,
    base_value: float,
    offsets: np.ndarray,
    alpha: float,
    c: float,
    nu: float,
    tol: float,
) -> KLReport:
    tested = 0
    violations = 0
    min_margin = math.inf
    for offset in offsets:
        value, dist0 = sampler(offset)
        delta = value - base_value
        if not 0.0 < delta < nu:
            continue
        tested += 1
        margin = c * (1.0 - alpha) * delta ** (-alpha) * dist0() - 1.0
        min_margin = min(min_margin, margin)
        if margin < -tol:
            violations += 1
    logger.debug("KL scan: %d of %d samples in band, %d violations", tested, len(offsets), violations)
    return KLReport(
        samples_tested=tested,
        violations=violations,
        min_margin=None if tested == 0 else min_margin,
        samples_drawn=len(offsets),
    )


def _spectral_sampler(fn: SymmetricFunction, x: Element) -> Sampler:
    def sample(offset: np.ndarray) -> tuple[float, Callable[[], float]]:
        y = x + x.algebra.from_coords(offset)
        lam = spectral_decompose(y).eigenvalues
        return fn.value(lam), lambda: fn.dist0(lam)

    return sample


def _vector_sampler(fn: SymmetricFunction, u: np.ndarray) -> Sampler:
    def sample(offset: np.ndarray) -> tuple[float, Callable[[], float]]:
        v = u + offset
        return fn.value(v), lambda: fn.dist0(v)

    return sample


def kl_check(
    fid: SymmetricFunctionId | str,
    x: Element,
    alpha: float,
    c: float,
    nu: float,
    radius: float,
    n_samples: int,
    seed: int,
    tol: float | None = None,
) -> KLReport:
    """Scan the KL inequality for F = f∘λ around x.

    Raises:
        DomainViolation: λ(x) is outside the domain of f.
    """
    _check_params(alpha, c, nu, radius, n_samples)
    fn = _function(fid)
    lam = spectral_decompose(x).eigenvalues
    if not fn.in_domain(lam):
        raise DomainViolation(f"{fn} is +inf at λ(x) = {lam.tolist()}")
    rng = np.random.Generator(np.random.Philox(seed))
    offsets = sample_offsets(x.algebra.dim, radius, n_samples, rng)
    tol = config.KL_TOL if tol is None else tol
    return _scan(_spectral_sampler(fn, x), fn.value(lam), offsets, alpha, c, nu, tol)


def kl_check_vector(
    fid: SymmetricFunctionId | str,
    u: Sequence[float] | np.ndarray,
    alpha: float,
    c: float,
    nu: float,
    radius: float,
    n_samples: int,
    seed: int,
    tol: float | None = None,
) -> KLReport:
    """Scan the KL inequality for f itself around u."""
    _check_params(alpha, c, nu, radius, n_samples)
    fn = _function(fid)
    u = np.asarray(u, dtype=np.float64)
    if not fn.in_domain(u):
        raise DomainViolation(f"{fn} is +inf at {u.tolist()}")
    rng = np.random.Generator(np.random.Philox(seed))
    offsets = sample_offsets(u.size, radius, n_samples, rng)
    tol = config.KL_TOL if tol is None else tol
    return _scan(_vector_sampler(fn, u), fn.value(u), offsets, alpha, c, nu, tol)


def kl_transfer_check(
    fid: SymmetricFunctionId | str,
    x: Element,
    alpha: float,
    c: float,
    nu: float,
    radius: float,
    n_samples: int,
    seed: int,
    tol: float | None = None,
) -> KLTransferReport:
    """Run the KL scan on F at x and on f at λ(x) with the same ψ, ν and seed."""
    lam = spectral_decompose(x).eigenvalues
    return KLTransferReport(
        spectral=kl_check(fid, x, alpha, c, nu, radius, n_samples, seed, tol),
        vector=kl_check_vector(fid, lam, alpha, c, nu, radius, n_samples, seed, tol),
    )


def kl_exponent_fit(
    fid: SymmetricFunctionId | str,
    x: Element,
    radii: Sequence[float],
    n_samples: int,
    seed: int,
    nu: float = 1.0,
) -> ExponentFit:
    """Least-squares estimate of the KL exponent of F at x.

    Samples are drawn at every radius from one seeded stream; only those with
    Δ in [KL_MIN_GAP, ν) and positive dist0 enter the fit. The fit is flagged
    degenerate when dist0 or Δ is constant over the accepted samples.

    Raises:
        InsufficientSamples: fewer than KL_MIN_FIT_SAMPLES samples were accepted.
    """
    fn = _function(fid)
    lam = spectral_decompose(x).eigenvalues
    if not fn.in_domain(lam):
        raise DomainViolation(f"{fn} is +inf at λ(x) = {lam.tolist()}")
    base = fn.value(lam)
    rng = np.random.Generator(np.random.Philox(seed))
    sampler = _spectral_sampler(fn, x)

    log_delta: list[float] = []
    log_dist: list[float] = []
    for radius in radii:
        for offset in sample_offsets(x.algebra.dim, radius, n_samples, rng):
            value, dist0 = sampler(offset)
            delta = value - base
            if not config.KL_MIN_GAP <= delta < nu:
                continue
            d = dist0()
            if d > 0:
                log_delta.append(math.log(delta))
                log_dist.append(math.log(d))

    n_used = len(log_delta)
    if n_used < config.KL_MIN_FIT_SAMPLES:
        raise InsufficientSamples(f"Only {n_used} samples accepted, need {config.KL_MIN_FIT_SAMPLES}")
    xs = np.asarray(log_delta)
    ys = np.asarray(log_dist)
    if np.ptp(xs) <= 1e-12:
        return ExponentFit(exponent=None, residual=0.0, n_used=n_used, degenerate=True)
    fit = linregress(xs, ys)
    residual = float(np.sqrt(np.mean((ys - (fit.intercept + fit.slope * xs)) ** 2)))
    logger.debug("Exponent fit over %d samples: slope %.6g, residual %.3g", n_used, fit.slope, residual)
    return ExponentFit(
        exponent=float(fit.slope),
        residual=residual,
        n_used=n_used,
        degenerate=bool(np.ptp(ys) <= 1e-12),
    )
