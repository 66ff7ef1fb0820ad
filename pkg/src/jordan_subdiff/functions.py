"""Catalog of permutation-symmetric functions f: R^r -> (-inf, +inf].

Each entry evaluates f and returns its regular, limiting, horizon and Clarke
subdifferentials as ``SubdiffSet`` objects: a distance-to-set function (so
membership at tolerance tol means distance <= tol), the distance from the
origin, and, where the set is a polytope of manageable size, its generators.

Set formulas, with T the indices tied (within tau) at the relevant value:

- ``kth_largest``: Clarke = conv{a^i : i in T}; Limiting = the points of that
  simplex with at most alpha nonzeros, alpha = 1 - k + #{i : u_i >= f_k(u)};
  Regular = Clarke when k = 1 or f_{k-1}(u) > f_k(u), empty otherwise.
- ``sum_top_k``: entries above the k-th largest are 1, entries below are 0,
  tied entries lie in [0, 1] and sum to the remaining count.
- ``l1_norm``: mu*sign(u_i) off the zero set, [-mu, mu] on it.
- ``zero_norm_count``: {d : d_i = 0 on supp u} for every kind. This is the
  counting-norm formula.
- smooth entries: the gradient, and {0} for the horizon kind.

Convex entries have one set for the regular, limiting and Clarke kinds. All
horizon sets are {0} at domain points except ``zero_norm_count``.
"""

from __future__ import annotations

import itertools
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Callable, ClassVar, Sequence

import numpy as np
from scipy.optimize import brentq

from .config import config, default_tau_group
from .errors import DomainViolation, EmptySubdifferential, IndexOutOfRange, SchemaError

logger = logging.getLogger(__name__)


class SubdiffKind(str, Enum):
    """Kind of generalized subdifferential."""

    REGULAR = "regular"
    LIMITING = "limiting"
    HORIZON = "horizon"
    CLARKE = "clarke"

    @classmethod
    def parse(cls, name: str | SubdiffKind) -> SubdiffKind:
        """Parse a kind name, case-insensitively."""
        try:
            return cls(str(name.value if isinstance(name, SubdiffKind) else name).lower())
        except ValueError:
            raise SchemaError(f"Unknown subdifferential kind '{name}'") from None


@dataclass(frozen=True, eq=False)
class SubdiffSet:
    """A queryable subdifferential set in R^r."""

    r: int
    distance: Callable[[np.ndarray], float]
    dist0: float
    generate: Callable[[], list[np.ndarray]] | None = None
    rays: tuple[np.ndarray, ...] = ()
    is_empty: bool = False

    def membership(self, d: Sequence[float] | np.ndarray, tol: float | None = None) -> bool:
        """True iff the Euclidean distance from d to the set is at most tol."""
        if self.is_empty:
            return False
        d = np.asarray(d, dtype=np.float64)
        if d.shape != (self.r,):
            raise SchemaError(f"Subgradient must have length {self.r}, got shape {d.shape}")
        tol = config.DEFAULT_TOL if tol is None else tol
        return self.distance(d) <= tol

    def generators(self) -> list[np.ndarray] | None:
        """Vertices of the set when it is a polytope small enough to enumerate."""
        return None if self.generate is None else self.generate()

    @classmethod
    def empty(cls, r: int) -> SubdiffSet:
        """The empty set in R^r."""
        return cls(r=r, distance=lambda d: math.inf, dist0=math.inf, generate=list, is_empty=True)

    @classmethod
    def singleton(cls, point: np.ndarray) -> SubdiffSet:
        """The set {point}."""
        point = np.array(point, dtype=np.float64)
        return cls(
            r=point.shape[0],
            distance=lambda d: float(np.linalg.norm(d - point)),
            dist0=float(np.linalg.norm(point)),
            generate=lambda: [point.copy()],
        )


def project_simplex(v: np.ndarray, value: float = 1.0) -> np.ndarray:
    """Euclidean projection onto {w >= 0, sum(w) = value}, by sorting."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    ind = np.arange(1, u.size + 1)
    rho = int(np.count_nonzero(u + (value - css) / ind > 0))
    theta = (value - css[rho - 1]) / rho
    return np.maximum(v + theta, 0.0)


def project_sparse_simplex(v: np.ndarray, max_nz: int) -> np.ndarray:
    """Projection onto the unit simplex restricted to at most ``max_nz`` nonzeros.

    Keeping the ``max_nz`` largest entries and projecting them is optimal.
    """
    keep = np.argsort(-v, kind="stable")[:max_nz]
    out = np.zeros_like(v)
    out[keep] = project_simplex(v[keep])
    return out


def project_capped_simplex(v: np.ndarray, total: float) -> np.ndarray:
    """Projection onto {0 <= w <= 1, sum(w) = total}."""
    if total <= 0:
        return np.zeros_like(v)
    if total >= v.size:
        return np.ones_like(v)
    theta = brentq(
        lambda t: float(np.sum(np.clip(v - t, 0.0, 1.0))) - total,
        float(np.min(v)) - 1.0,
        float(np.max(v)),
        xtol=1e-15,
    )
    return np.clip(v - theta, 0.0, 1.0)


def _as_vector(u: Sequence[float] | np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 1 or u.size == 0:
        raise SchemaError(f"Expected a nonempty vector, got shape {u.shape}")
    return u


def _sorted_desc(u: np.ndarray) -> np.ndarray:
    return np.sort(u)[::-1]


class SymmetricFunction(ABC):
    """A catalog entry; subclasses register themselves under ``tag``."""

    tag: ClassVar[str]
    params: ClassVar[tuple[str, ...]] = ()

    def __init__(self, k: int | None = None, mu: float | None = None):
        self.k = k
        self.mu = mu

    @abstractmethod
    def value(self, u: np.ndarray) -> float:
        """Evaluate f(u); +inf outside the domain."""

    @abstractmethod
    def _subdiff(self, kind: SubdiffKind, u: np.ndarray, tau: float) -> SubdiffSet: ...

    def in_domain(self, u: np.ndarray) -> bool:
        """True iff f is finite at u."""
        return True

    def subdiff(self, kind: SubdiffKind | str, u: Sequence[float] | np.ndarray, tau: float | None = None) -> SubdiffSet:
        """Return the ``kind`` subdifferential of f at u.

        Raises:
            DomainViolation: u is outside the domain and kind is not horizon.
        """
        kind = SubdiffKind.parse(kind)
        u = _as_vector(u)
        tau = default_tau_group(float(np.linalg.norm(u))) if tau is None else tau
        if not self.in_domain(u):
            if kind is SubdiffKind.HORIZON:
                return SubdiffSet.empty(u.size)
            raise DomainViolation(f"{self} is +inf at {u.tolist()}")
        return self._subdiff(kind, u, tau)

    def dist0(self, u: Sequence[float] | np.ndarray, tau: float | None = None) -> float:
        """Distance from the origin to the limiting subdifferential at u."""
        s = self.subdiff(SubdiffKind.LIMITING, u, tau)
        if s.is_empty:
            raise EmptySubdifferential(f"Limiting subdifferential of {self} is empty at {list(u)}")
        return s.dist0

    def __str__(self) -> str:
        return str(SymmetricFunctionId(self.tag, self.k, self.mu))


_CATALOG: dict[str, type[SymmetricFunction]] = {}


def register(cls: type[SymmetricFunction]) -> type[SymmetricFunction]:
    """Add a catalog entry under its tag."""
    _CATALOG[cls.tag] = cls
    return cls


def available_functions() -> list[str]:
    """Sorted catalog tags."""
    return sorted(_CATALOG)


@dataclass(frozen=True)
class SymmetricFunctionId:
    """Tag plus parameters, serialized as e.g. ``kth_largest:k=2`` or ``neglogprod:mu=1.5``."""

    tag: str
    k: int | None = None
    mu: float | None = None

    def __post_init__(self) -> None:
        if self.tag not in _CATALOG:
            raise SchemaError(f"Unknown function '{self.tag}'. Known: {', '.join(available_functions())}")
        params = _CATALOG[self.tag].params
        if "k" in params:
            if self.k is None or int(self.k) < 1:
                raise SchemaError(f"{self.tag} needs an integer parameter k >= 1, got {self.k}")
            object.__setattr__(self, "k", int(self.k))
        elif self.k is not None:
            raise SchemaError(f"{self.tag} takes no parameter k")
        if "mu" in params:
            mu = 1.0 if self.mu is None else float(self.mu)
            if not (mu > 0 and math.isfinite(mu)):
                raise SchemaError(f"{self.tag} needs a positive finite mu, got {self.mu}")
            object.__setattr__(self, "mu", mu)
        elif self.mu is not None:
            raise SchemaError(f"{self.tag} takes no parameter mu")

    @classmethod
    def parse(cls, text: str) -> SymmetricFunctionId:
        """Parse ``tag[:k=..][,mu=..]``."""
        tag, _, rest = text.strip().partition(":")
        values: dict[str, str] = {}
        for item in filter(None, (p.strip() for p in rest.split(","))):
            key, sep, val = item.partition("=")
            if not sep or key.strip() not in ("k", "mu"):
                raise SchemaError(f"Bad function parameter '{item}' in '{text}'")
            values[key.strip()] = val.strip()
        try:
            k = int(values["k"]) if "k" in values else None
            mu = float(values["mu"]) if "mu" in values else None
        except ValueError:
            raise SchemaError(f"Bad function parameter value in '{text}'") from None
        return cls(tag.strip(), k, mu)

    def function(self) -> SymmetricFunction:
        """Instantiate the catalog entry."""
        return _CATALOG[self.tag](k=self.k, mu=self.mu)

    def __str__(self) -> str:
        parts = []
        if self.k is not None:
            parts.append(f"k={self.k}")
        if self.mu is not None:
            parts.append(f"mu={self.mu!r}")
        return self.tag + (":" + ",".join(parts) if parts else "")


def _smooth(kind: SubdiffKind, gradient: np.ndarray) -> SubdiffSet:
    if kind is SubdiffKind.HORIZON:
        return SubdiffSet.singleton(np.zeros_like(gradient))
    return SubdiffSet.singleton(gradient)


def _check_k(k: int, r: int) -> None:
    if not 1 <= k <= r:
        raise IndexOutOfRange(f"k must lie in 1..{r}, got {k}")


@register
class KthLargest(SymmetricFunction):
    """f_k(u): the k-th largest entry of u."""

    tag = "kth_largest"
    params = ("k",)

    def value(self, u: np.ndarray) -> float:
        """Return the k-th largest entry."""
        u = _as_vector(u)
        _check_k(self.k, u.size)
        return float(_sorted_desc(u)[self.k - 1])

    def support_bound(self, u: np.ndarray, tau: float) -> int:
        """alpha = 1 - k + #{i : u_i >= f_k(u)}."""
        fk = self.value(u)
        return 1 - self.k + int(np.count_nonzero(u >= fk - tau))

    def _subdiff(self, kind: SubdiffKind, u: np.ndarray, tau: float) -> SubdiffSet:
        r = u.size
        _check_k(self.k, r)
        if kind is SubdiffKind.HORIZON:
            return SubdiffSet.singleton(np.zeros(r))
        srt = _sorted_desc(u)
        fk = srt[self.k - 1]
        ties = np.flatnonzero(np.abs(u - fk) <= tau)
        others = np.setdiff1d(np.arange(r), ties)
        alpha = self.support_bound(u, tau)

        if kind is SubdiffKind.REGULAR and self.k > 1 and srt[self.k - 2] - fk <= tau:
            return SubdiffSet.empty(r)
        sparse = kind is SubdiffKind.LIMITING and alpha < ties.size
        cap = alpha if sparse else ties.size

        def distance(d: np.ndarray) -> float:
            dt = d[ties]
            proj = project_sparse_simplex(dt, cap) if sparse else project_simplex(dt)
            return float(np.sqrt(np.sum(d[others] ** 2) + np.sum((dt - proj) ** 2)))

        def generate() -> list[np.ndarray]:
            return [np.eye(r)[i] for i in ties]

        return SubdiffSet(r=r, distance=distance, dist0=1.0 / math.sqrt(cap), generate=None if sparse else generate)


@register
class SumTopK(SymmetricFunction):
    """Sum of the k largest entries."""

    tag = "sum_top_k"
    params = ("k",)

    def value(self, u: np.ndarray) -> float:
        """Return the sum of the k largest entries."""
        u = _as_vector(u)
        _check_k(self.k, u.size)
        return float(np.sum(_sorted_desc(u)[: self.k]))

    def _subdiff(self, kind: SubdiffKind, u: np.ndarray, tau: float) -> SubdiffSet:
        r = u.size
        _check_k(self.k, r)
        if kind is SubdiffKind.HORIZON:
            return SubdiffSet.singleton(np.zeros(r))
        t = _sorted_desc(u)[self.k - 1]
        above = np.flatnonzero(u > t + tau)
        ties = np.flatnonzero(np.abs(u - t) <= tau)
        below = np.setdiff1d(np.arange(r), np.concatenate([above, ties]))
        m = self.k - above.size

        def distance(d: np.ndarray) -> float:
            dt = d[ties]
            gap = dt - project_capped_simplex(dt, m)
            return float(np.sqrt(np.sum((d[above] - 1.0) ** 2) + np.sum(d[below] ** 2) + np.sum(gap**2)))

        def generate() -> list[np.ndarray]:
            points = []
            for chosen in itertools.combinations(ties, m):
                p = np.zeros(r)
                p[above] = 1.0
                p[list(chosen)] = 1.0
                points.append(p)
            return points

        small = math.comb(ties.size, m) <= config.HULL_POINT_CAP
        return SubdiffSet(
            r=r,
            distance=distance,
            dist0=math.sqrt(above.size + m * m / ties.size),
            generate=generate if small else None,
        )


@register
class L1Norm(SymmetricFunction):
    """mu * ||u||_1."""

    tag = "l1_norm"
    params = ("mu",)

    def value(self, u: np.ndarray) -> float:
        """Return mu * ||u||_1."""
        return self.mu * float(np.sum(np.abs(_as_vector(u))))

    def _subdiff(self, kind: SubdiffKind, u: np.ndarray, tau: float) -> SubdiffSet:
        r = u.size
        if kind is SubdiffKind.HORIZON:
            return SubdiffSet.singleton(np.zeros(r))
        mu = self.mu
        zeros = np.flatnonzero(np.abs(u) <= tau)
        support = np.setdiff1d(np.arange(r), zeros)
        base = np.zeros(r)
        base[support] = mu * np.sign(u[support])

        def distance(d: np.ndarray) -> float:
            off = d[support] - base[support]
            excess = np.maximum(np.abs(d[zeros]) - mu, 0.0)
            return float(np.sqrt(np.sum(off**2) + np.sum(excess**2)))

        def generate() -> list[np.ndarray]:
            points = []
            for signs in itertools.product((-mu, mu), repeat=zeros.size):
                p = base.copy()
                p[zeros] = signs
                points.append(p)
            return points

        return SubdiffSet(
            r=r,
            distance=distance,
            dist0=mu * math.sqrt(support.size),
            generate=generate if zeros.size <= config.L1_GENERATOR_MAX_ZEROS else None,
        )


@register
class L2Norm(SymmetricFunction):
    """mu * ||u||_2."""

    tag = "l2_norm"
    params = ("mu",)

    def value(self, u: np.ndarray) -> float:
        """Return mu * ||u||_2."""
        return self.mu * float(np.linalg.norm(_as_vector(u)))

    def _subdiff(self, kind: SubdiffKind, u: np.ndarray, tau: float) -> SubdiffSet:
        nrm = float(np.linalg.norm(u))
        if kind is SubdiffKind.HORIZON or nrm > tau:
            return _smooth(kind, self.mu * u / max(nrm, tau))
        mu = self.mu
        return SubdiffSet(r=u.size, distance=lambda d: max(float(np.linalg.norm(d)) - mu, 0.0), dist0=0.0)


@register
class NegLogProd(SymmetricFunction):
    """-mu * sum(log u_i) on u > 0."""

    tag = "neglogprod"
    params = ("mu",)

    def in_domain(self, u: np.ndarray) -> bool:
        """True iff every entry is positive."""
        return bool(np.all(u > 0))

    def value(self, u: np.ndarray) -> float:
        """Return -mu * sum(log u_i), +inf off the positive orthant."""
        u = _as_vector(u)
        if not self.in_domain(u):
            return math.inf
        return -self.mu * float(np.sum(np.log(u)))

    def _subdiff(self, kind: SubdiffKind, u: np.ndarray, tau: float) -> SubdiffSet:
        return _smooth(kind, -self.mu / u)


@register
class Sum(SymmetricFunction):
    """sum(u)."""

    tag = "sum"

    def value(self, u: np.ndarray) -> float:
        """Return the sum of the entries."""
        return float(np.sum(_as_vector(u)))

    def _subdiff(self, kind: SubdiffKind, u: np.ndarray, tau: float) -> SubdiffSet:
        return _smooth(kind, np.ones(u.size))


@register
class HalfSqNorm(SymmetricFunction):
    """||u||^2 / 2."""

    tag = "half_sq_norm"

    def value(self, u: np.ndarray) -> float:
        """Return ||u||^2 / 2."""
        u = _as_vector(u)
        return 0.5 * float(u @ u)

    def _subdiff(self, kind: SubdiffKind, u: np.ndarray, tau: float) -> SubdiffSet:
        return _smooth(kind, u.copy())


@register
class ZeroNormCount(SymmetricFunction):
    """mu * #{i : u_i != 0}, zeros judged at ZERO_COUNT_REL_TOL * (1 + max|u_i|)."""

    tag = "zero_norm_count"
    params = ("mu",)

    @staticmethod
    def support(u: np.ndarray) -> np.ndarray:
        """Indices of entries counted as nonzero."""
        threshold = config.ZERO_COUNT_REL_TOL * (1.0 + float(np.max(np.abs(u))))
        return np.flatnonzero(np.abs(u) > threshold)

    def value(self, u: np.ndarray) -> float:
        """Return mu times the number of nonzero entries."""
        u = _as_vector(u)
        return self.mu * float(self.support(u).size)

    def _subdiff(self, kind: SubdiffKind, u: np.ndarray, tau: float) -> SubdiffSet:
        r = u.size
        support = self.support(u)
        free = np.setdiff1d(np.arange(r), support)
        rays = tuple(sign * np.eye(r)[i] for i in free for sign in (1.0, -1.0))
        return SubdiffSet(
            r=r,
            distance=lambda d: float(np.linalg.norm(d[support])),
            dist0=0.0,
            generate=lambda: [np.zeros(r)],
            rays=rays,
        )


def _resolve(fid: SymmetricFunctionId | str) -> SymmetricFunction:
    if isinstance(fid, str):
        fid = SymmetricFunctionId.parse(fid)
    return fid.function()


def value(fid: SymmetricFunctionId | str, u: Sequence[float] | np.ndarray) -> float:
    """Evaluate the catalog function ``fid`` at u."""
    return _resolve(fid).value(np.asarray(u, dtype=np.float64))


def subdiff(
    fid: SymmetricFunctionId | str,
    kind: SubdiffKind | str,
    u: Sequence[float] | np.ndarray,
    tau: float | None = None,
) -> SubdiffSet:
    """Return the ``kind`` subdifferential of ``fid`` at u."""
    return _resolve(fid).subdiff(kind, u, tau)


def dist0(fid: SymmetricFunctionId | str, u: Sequence[float] | np.ndarray, tau: float | None = None) -> float:
    """Distance from 0 to the limiting subdifferential of ``fid`` at u.

    Raises:
        DomainViolation: u is outside the domain.
    """
    return _resolve(fid).dist0(u, tau)
