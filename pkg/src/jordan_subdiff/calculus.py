"""Eigenvalue block structure, directional derivatives and majorization."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import Element, check_same_algebra
from .config import config, default_tau_group
from .errors import DescriptorMismatch
from .frames import SpectralDecomposition, block_subalgebra_spectrum, group_blocks, spectral_decompose

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EigenBlockStructure:
    """Blocks of equal eigenvalues of a spectral decomposition.

    ``relative_index`` is 1-based: position p is the l_p-th entry of its block.
    ``block_idempotents[p]`` is e_p, the idempotent sum over p's block.
    """

    boundaries: tuple[int, ...]
    multiplicities: tuple[int, ...]
    relative_index: tuple[int, ...]
    block_idempotents: tuple[Element, ...]

    @property
    def n_blocks(self) -> int:
        """Number of distinct eigenvalues."""
        return len(self.multiplicities)

    def block_of(self, position: int) -> int:
        """0-based block number of a 0-based eigenvalue position."""
        return int(np.searchsorted(self.boundaries, position, side="right")) - 1

    def to_dict(self) -> dict:
        """JSON form of the block structure."""
        return {
            "boundaries": list(self.boundaries),
            "multiplicities": list(self.multiplicities),
            "relative_index": list(self.relative_index),
        }


def block_structure(dec: SpectralDecomposition, tau_group: float | None = None) -> EigenBlockStructure:
    """Group λ into blocks of equal values and build e_p for every position."""
    tau = default_tau_group(float(np.linalg.norm(dec.eigenvalues))) if tau_group is None else tau_group
    blocks = group_blocks(dec.eigenvalues, tau)
    algebra = dec.frame.algebra

    boundaries = [0]
    relative_index: list[int] = []
    idempotents: list[Element] = []
    for block in blocks:
        boundaries.append(boundaries[-1] + len(block))
        e_block = algebra.zero()
        for pos in block:
            e_block = e_block + dec.frame[pos]
        relative_index.extend(range(1, len(block) + 1))
        idempotents.extend([e_block] * len(block))
    logger.debug("Eigenvalue blocks: %s", [len(b) for b in blocks])
    return EigenBlockStructure(
        boundaries=tuple(boundaries),
        multiplicities=tuple(len(b) for b in blocks),
        relative_index=tuple(relative_index),
        block_idempotents=tuple(idempotents),
    )


def eigen_dir_derivative(
    x: Element,
    z: Element,
    tau_group: float | None = None,
    decomposition: SpectralDecomposition | None = None,
) -> np.ndarray:
    """Directional derivative λ'(x; z) of the eigenvalue map.

    For each block j of equal eigenvalues of x the block entries are the
    eigenvalues of Q_{e_j}(z) inside V(e_j, 1), sorted nonincreasing.
    """
    check_same_algebra(x, z)
    dec = spectral_decompose(x) if decomposition is None else decomposition
    tau = default_tau_group(x.norm()) if tau_group is None else tau_group
    derivative: list[float] = []
    for block in group_blocks(dec.eigenvalues, tau):
        values = [v for v, _ in block_subalgebra_spectrum(dec, block, z)]
        derivative.extend(sorted(values, reverse=True))
    return np.asarray(derivative)


def _as_pair(u: Sequence[float] | np.ndarray, v: Sequence[float] | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.ndim != 1 or u.shape != v.shape:
        raise DescriptorMismatch(f"Vectors must have equal length, got shapes {u.shape} and {v.shape}")
    return u, v


def majorizes(u: Sequence[float] | np.ndarray, v: Sequence[float] | np.ndarray, tol: float | None = None) -> bool:
    """True iff u ≺ v: sorted prefix sums of u never exceed those of v and the totals agree.

    The tolerance is absolute on prefix sums, scaled by (1 + ||v||_1).
    """
    u, v = _as_pair(u, v)
    if u.size == 0:
        return True
    tol = config.DEFAULT_TOL if tol is None else tol
    slack = tol * (1.0 + float(np.sum(np.abs(v))))
    cu = np.cumsum(np.sort(u)[::-1])
    cv = np.cumsum(np.sort(v)[::-1])
    return bool(np.all(cu[:-1] <= cv[:-1] + slack) and abs(cu[-1] - cv[-1]) <= slack)


def stabilizer_hull_member(
    u: Sequence[float] | np.ndarray,
    v: Sequence[float] | np.ndarray,
    lam: Sequence[float] | np.ndarray,
    tau_group: float | None = None,
    tol: float | None = None,
) -> bool:
    """True iff u lies in conv{Pv : P permutes only equal entries of lam}.

    The stabilizer of lam is block diagonal over its groups of equal entries,
    so the hull splits into per-block permutation hulls and each is a
    majorization test.
    """
    u, v = _as_pair(u, v)
    lam = np.asarray(lam, dtype=np.float64)
    if lam.shape != u.shape:
        raise DescriptorMismatch(f"lam has shape {lam.shape}, expected {u.shape}")
    tau = default_tau_group(float(np.linalg.norm(lam))) if tau_group is None else tau_group
    order = np.argsort(-lam, kind="stable")
    for block in group_blocks(lam[order], tau):
        idx = order[block]
        if not majorizes(u[idx], v[idx], tol):
            return False
    return True
