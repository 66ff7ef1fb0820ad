"""Product Euclidean Jordan algebras and their elements.

An algebra is a direct product of factors, each one of

- ``diag``: R^n with the componentwise product (rank n),
- ``sym``: n x n real symmetric matrices with X∘Y = (XY + YX)/2 (rank n),
- ``spin``: pairs (x0, xbar) in R x R^(n-1) with
  x∘y = (x0 y0 + xbar·ybar, x0 ybar + y0 xbar) (rank 2).

The trace is the sum of the factor traces, with tr((x0, xbar)) = 2 x0 on spin
factors, so every primitive idempotent has unit norm under <x, y> = tr(x∘y).

Every algebra also carries orthonormal coordinates for that inner product
(identity on diag, the sqrt(2)-scaled upper triangle on sym, sqrt(2) times the
pair on spin). Samplers, Lyapunov matrices and the oracles work in them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import block_diag

from .errors import DescriptorMismatch, SchemaError

SQRT2 = float(np.sqrt(2.0))


class FactorKind(str, Enum):
    """Kind of a simple factor."""

    DIAGONAL = "diag"
    SYM = "sym"
    SPIN = "spin"


@dataclass(frozen=True)
class Factor:
    """One factor of a product algebra."""

    kind: FactorKind
    n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", FactorKind(self.kind))
        if self.n < 1:
            raise SchemaError(f"{self.kind.value} factor needs n >= 1, got {self.n}")
        if self.kind is FactorKind.SPIN and self.n < 2:
            raise SchemaError(f"spin factor needs n >= 2, got {self.n}")

    @property
    def rank(self) -> int:
        """Number of eigenvalues of an element of the factor."""
        return 2 if self.kind is FactorKind.SPIN else self.n

    @property
    def dim(self) -> int:
        """Length of the orthonormal coordinate vector."""
        if self.kind is FactorKind.SYM:
            return self.n * (self.n + 1) // 2
        return self.n

    @property
    def shape(self) -> tuple[int, ...]:
        """Array shape of a factor part."""
        return (self.n, self.n) if self.kind is FactorKind.SYM else (self.n,)

    def canonical(self, part: np.ndarray | Sequence) -> np.ndarray:
        """Validate a coordinate block and return a read-only float copy."""
        arr = np.array(part, dtype=np.float64)
        if arr.shape != self.shape:
            raise SchemaError(f"{self.kind.value}({self.n}) part must have shape {self.shape}, got {arr.shape}")
        if self.kind is FactorKind.SYM:
            # lower triangle is authoritative
            arr = np.tril(arr) + np.tril(arr, -1).T
        arr.setflags(write=False)
        return arr

    def identity(self) -> np.ndarray:
        """Unit element of the factor."""
        if self.kind is FactorKind.DIAGONAL:
            return np.ones(self.n)
        if self.kind is FactorKind.SYM:
            return np.eye(self.n)
        e = np.zeros(self.n)
        e[0] = 1.0
        return e

    def product(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Jordan product of two parts."""
        if self.kind is FactorKind.DIAGONAL:
            return a * b
        if self.kind is FactorKind.SYM:
            return 0.5 * (a @ b + b @ a)
        out = np.empty(self.n)
        out[0] = a @ b
        out[1:] = a[0] * b[1:] + b[0] * a[1:]
        return out

    def trace(self, a: np.ndarray) -> float:
        """Trace; 2·x0 on spin factors."""
        if self.kind is FactorKind.DIAGONAL:
            return float(np.sum(a))
        if self.kind is FactorKind.SYM:
            return float(np.trace(a))
        return 2.0 * float(a[0])

    def inner(self, a: np.ndarray, b: np.ndarray) -> float:
        """Trace inner product of two parts."""
        if self.kind is FactorKind.DIAGONAL:
            return float(a @ b)
        if self.kind is FactorKind.SYM:
            return float(np.sum(a * b))
        return 2.0 * float(a @ b)

    def to_coords(self, a: np.ndarray) -> np.ndarray:
        """Orthonormal coordinates of a part."""
        if self.kind is FactorKind.DIAGONAL:
            return np.array(a, dtype=np.float64)
        if self.kind is FactorKind.SPIN:
            return SQRT2 * np.asarray(a)
        rows, cols = np.triu_indices(self.n)
        scale = np.where(rows == cols, 1.0, SQRT2)
        return scale * np.asarray(a)[rows, cols]

    def from_coords(self, v: np.ndarray) -> np.ndarray:
        """Inverse of ``to_coords``."""
        v = np.asarray(v, dtype=np.float64)
        if self.kind is FactorKind.DIAGONAL:
            return v.copy()
        if self.kind is FactorKind.SPIN:
            return v / SQRT2
        rows, cols = np.triu_indices(self.n)
        scaled = np.where(rows == cols, v, v / SQRT2)
        mat = np.zeros((self.n, self.n))
        mat[rows, cols] = scaled
        mat[cols, rows] = scaled
        return mat

    def to_dict(self) -> dict:
        """JSON form ``{"kind": ..., "n": ...}``."""
        return {"kind": self.kind.value, "n": self.n}


@dataclass(frozen=True)
class AlgebraDescriptor:
    """A direct product of factor algebras."""

    factors: tuple[Factor, ...]
    coord_offsets: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        factors = tuple(f if isinstance(f, Factor) else Factor(*f) for f in self.factors)
        if not factors:
            raise SchemaError("An algebra needs at least one factor")
        object.__setattr__(self, "factors", factors)
        offsets = np.concatenate([[0], np.cumsum([f.dim for f in factors])])
        object.__setattr__(self, "coord_offsets", tuple(int(o) for o in offsets))

    @classmethod
    def of(cls, *specs: tuple[str, int]) -> AlgebraDescriptor:
        """Build a descriptor from ``(kind, n)`` pairs, e.g. ``of(("sym", 2), ("spin", 3))``."""
        return cls(tuple(Factor(FactorKind(kind), int(n)) for kind, n in specs))

    @property
    def rank(self) -> int:
        """Sum of the factor ranks."""
        return sum(f.rank for f in self.factors)

    @property
    def dim(self) -> int:
        """Dimension of the algebra as a real vector space."""
        return self.coord_offsets[-1]

    def element(self, parts: Iterable) -> Element:
        """Build an element from per-factor parts."""
        return Element(self, tuple(parts))

    def identity(self) -> Element:
        """Unit element e."""
        return Element(self, tuple(f.identity() for f in self.factors))

    def zero(self) -> Element:
        """Zero element."""
        return Element(self, tuple(np.zeros(f.shape) for f in self.factors))

    def from_coords(self, v: np.ndarray) -> Element:
        """Element with the given orthonormal coordinates."""
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.dim,):
            raise SchemaError(f"Coordinate vector must have length {self.dim}, got shape {v.shape}")
        o = self.coord_offsets
        return Element(self, tuple(f.from_coords(v[o[i]:o[i + 1]]) for i, f in enumerate(self.factors)))

    def basis(self) -> list[Element]:
        """Orthonormal basis for the trace inner product."""
        return [self.from_coords(row) for row in np.eye(self.dim)]

    def to_dict(self) -> list[dict]:
        """JSON form of the factor list."""
        return [f.to_dict() for f in self.factors]


@dataclass(frozen=True, eq=False)
class Element:
    """An element of a product algebra, stored as per-factor coordinate blocks."""

    algebra: AlgebraDescriptor
    parts: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.parts) != len(self.algebra.factors):
            raise SchemaError(f"Expected {len(self.algebra.factors)} parts, got {len(self.parts)}")
        object.__setattr__(
            self, "parts", tuple(f.canonical(p) for f, p in zip(self.algebra.factors, self.parts))
        )

    def _combine(self, other: Element, op) -> Element:
        check_same_algebra(self, other)
        return Element(self.algebra, tuple(op(a, b) for a, b in zip(self.parts, other.parts)))

    def __add__(self, other: Element) -> Element:
        return self._combine(other, np.add)

    def __sub__(self, other: Element) -> Element:
        return self._combine(other, np.subtract)

    def __neg__(self) -> Element:
        return Element(self.algebra, tuple(-p for p in self.parts))

    def __mul__(self, alpha: float) -> Element:
        return Element(self.algebra, tuple(float(alpha) * p for p in self.parts))

    __rmul__ = __mul__

    def __truediv__(self, alpha: float) -> Element:
        return self * (1.0 / float(alpha))

    def to_coords(self) -> np.ndarray:
        """Orthonormal coordinates; their dot product is the trace inner product."""
        return np.concatenate([f.to_coords(p) for f, p in zip(self.algebra.factors, self.parts)])

    def norm(self) -> float:
        """Norm induced by the trace inner product."""
        return float(np.sqrt(max(trace_inner(self, self), 0.0)))

    def is_finite(self) -> bool:
        """True iff every entry is finite."""
        return all(bool(np.all(np.isfinite(p))) for p in self.parts)

    def __repr__(self) -> str:
        kinds = ", ".join(f"{f.kind.value}({f.n})" for f in self.algebra.factors)
        return f"Element[{kinds}]({[p.tolist() for p in self.parts]})"


def check_same_algebra(x: Element, y: Element) -> None:
    """Raise ``DescriptorMismatch`` unless ``x`` and ``y`` share a descriptor."""
    if x.algebra != y.algebra:
        raise DescriptorMismatch(f"Elements belong to different algebras: {x.algebra.factors} vs {y.algebra.factors}")


def jordan_product(x: Element, y: Element) -> Element:
    """Return x∘y, computed factor by factor."""
    check_same_algebra(x, y)
    return Element(x.algebra, tuple(f.product(a, b) for f, a, b in zip(x.algebra.factors, x.parts, y.parts)))


def trace(x: Element) -> float:
    """Trace of x, summed over factors."""
    return sum(f.trace(p) for f, p in zip(x.algebra.factors, x.parts))


def trace_inner(x: Element, y: Element) -> float:
    """Return <x, y> = tr(x∘y)."""
    check_same_algebra(x, y)
    return float(sum(f.inner(a, b) for f, a, b in zip(x.algebra.factors, x.parts, y.parts)))


def quadratic_apply(x: Element, y: Element) -> Element:
    """Return Q_x(y) = 2 x∘(x∘y) - (x∘x)∘y."""
    check_same_algebra(x, y)
    return 2.0 * jordan_product(x, jordan_product(x, y)) - jordan_product(jordan_product(x, x), y)


def lyapunov_matrix(x: Element) -> np.ndarray:
    """Matrix of L_x: y -> x∘y in the orthonormal coordinates of the algebra."""
    blocks = []
    for f, part in zip(x.algebra.factors, x.parts):
        cols = [f.to_coords(f.product(part, f.from_coords(unit))) for unit in np.eye(f.dim)]
        blocks.append(np.column_stack(cols))
    return block_diag(*blocks)


def random_element(algebra: AlgebraDescriptor, rng: np.random.Generator, scale: float = 1.0) -> Element:
    """Draw an element with i.i.d. Gaussian orthonormal coordinates."""
    return algebra.from_coords(scale * rng.standard_normal(algebra.dim))
