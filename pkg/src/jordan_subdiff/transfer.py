"""Subdifferentials of spectral functions F = f∘λ.

An element s lies in the regular, limiting or horizon subdifferential of F at
x exactly when x and s operator commute and diag(s, J) lies in the matching
subdifferential of f at λ(x) for a common frame J of x and s. One frame is
enough: any two frames in J(x, s) give diagonals that differ by a permutation
fixing λ(x), and the catalog sets are invariant under those. The Clarke kind
uses the same test against the Clarke set of f.

The k-th largest eigenvalue also has a direct description: its Clarke
subdifferential is the convex hull of the primitive idempotents c with
x∘c = λ_k(x) c, i.e. the elements of V(ĉ, 1) with nonnegative eigenvalues and
unit trace, where ĉ is the idempotent of the λ_k(x) eigenvalue block.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import Element, check_same_algebra, quadratic_apply
from .config import config, default_tau_group
from .errors import DomainViolation, IndexOutOfRange, NotASubgradient
from .frames import (
    JordanFrame,
    block_idempotent,
    block_subalgebra_spectrum,
    common_frame,
    diag_build,
    diag_in_frame,
    group_blocks,
    operator_commute,
    spectral_decompose,
)
from .functions import (
    SubdiffKind,
    SymmetricFunction,
    SymmetricFunctionId,
    project_simplex,
    project_sparse_simplex,
)
from .serialization import element_to_json

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SpectralQueryReport:
    """Outcome of a spectral subdifferential membership query."""

    commutes: bool
    frame_used: JordanFrame | None
    diag_vector: np.ndarray | None
    member: bool
    kind: SubdiffKind

    def to_dict(self) -> dict:
        """JSON form of the report."""
        return {
            "commutes": self.commutes,
            "member": self.member,
            "kind": self.kind.value,
            "diag_vector": None if self.diag_vector is None else self.diag_vector.tolist(),
            "frame_used": None if self.frame_used is None else [element_to_json(c) for c in self.frame_used],
        }


@dataclass(frozen=True)
class LambdaKReport:
    """Membership of s in a subdifferential of λ_k, with the formula branch used."""

    member: bool
    branch: str

    def to_dict(self) -> dict:
        """JSON form of the report."""
        return {"member": self.member, "branch": self.branch}


def _function(fid: SymmetricFunctionId | str) -> SymmetricFunction:
    if isinstance(fid, str):
        fid = SymmetricFunctionId.parse(fid)
    return fid.function()


def spectral_value(fid: SymmetricFunctionId | str, x: Element) -> float:
    """Return F(x) = f(λ(x))."""
    return _function(fid).value(spectral_decompose(x).eigenvalues)


def spectral_subdiff_member(
    fid: SymmetricFunctionId | str,
    kind: SubdiffKind | str,
    x: Element,
    s: Element,
    tol: float | None = None,
    tau_group: float | None = None,
) -> SpectralQueryReport:
    """Decide whether s belongs to the ``kind`` subdifferential of F = f∘λ at x.

    Non-commuting s is reported with ``commutes=False`` and ``member=False``.

    Raises:
        DomainViolation: λ(x) is outside the domain of f for a non-horizon kind.
    """
    check_same_algebra(x, s)
    kind = SubdiffKind.parse(kind)
    fn = _function(fid)
    tol = config.DEFAULT_TOL if tol is None else tol
    tau = default_tau_group(x.norm()) if tau_group is None else tau_group

    dec = spectral_decompose(x)
    subgradients = fn.subdiff(kind, dec.eigenvalues, tau)
    if not operator_commute(x, s, tol):
        return SpectralQueryReport(commutes=False, frame_used=None, diag_vector=None, member=False, kind=kind)

    frame = common_frame(x, s, tol, tau, decomposition=dec)
    d = diag_in_frame(s, frame)
    member = subgradients.membership(d, tol)
    logger.debug("%s %s membership at λ=%s with d=%s: %s", fn, kind.value, dec.eigenvalues, d, member)
    return SpectralQueryReport(commutes=True, frame_used=frame, diag_vector=d, member=member, kind=kind)


def spectral_subgradient_build(
    fid: SymmetricFunctionId | str,
    kind: SubdiffKind | str,
    x: Element,
    d: Sequence[float] | np.ndarray,
    tol: float | None = None,
    tau_group: float | None = None,
) -> Element:
    """Return Diag(d, J) for a frame J of x, after checking d against the catalog.

    Raises:
        NotASubgradient: d is not in the ``kind`` subdifferential of f at λ(x).
    """
    kind = SubdiffKind.parse(kind)
    fn = _function(fid)
    tol = config.DEFAULT_TOL if tol is None else tol
    tau = default_tau_group(x.norm()) if tau_group is None else tau_group
    dec = spectral_decompose(x)
    d = np.asarray(d, dtype=np.float64)
    if not fn.subdiff(kind, dec.eigenvalues, tau).membership(d, tol):
        raise NotASubgradient(f"{d.tolist()} is not a {kind.value} subgradient of {fn} at λ(x) = {dec.eigenvalues.tolist()}")
    return diag_build(d, dec.frame)


def lambda_k_subdiff_query(
    k: int,
    kind: SubdiffKind | str,
    x: Element,
    s: Element,
    tol: float | None = None,
    tau_group: float | None = None,
) -> LambdaKReport:
    """Membership of s in the ``kind`` subdifferential of λ_k at x, with the branch used.

    s must operator commute with x; membership then means that the distance
    from s to the set, ||s - Q_ĉ(s)|| combined with the distance from the
    eigenvalues of Q_ĉ(s) in V(ĉ, 1) to the unit simplex, is at most tol.
    This is the same Euclidean test the catalog applies to diag(s, J).

    Branches: ``clarke``; ``regular`` (k = 1 or λ_{k-1}(x) > λ_k(x));
    ``regular_empty`` otherwise; ``limiting`` (the simplex restricted to at
    most alpha nonzeros, alpha = 1 - k + #{i : λ_i(x) >= λ_k(x)}, which is
    the rank bound rank(s) <= alpha); ``horizon`` (s = 0).

    Raises:
        IndexOutOfRange: k outside 1..r.
    """
    check_same_algebra(x, s)
    kind = SubdiffKind.parse(kind)
    r = x.algebra.rank
    if not 1 <= k <= r:
        raise IndexOutOfRange(f"k must lie in 1..{r}, got {k}")
    tol = config.DEFAULT_TOL if tol is None else tol
    tau = default_tau_group(x.norm()) if tau_group is None else tau_group

    if kind is SubdiffKind.HORIZON:
        return LambdaKReport(member=s.norm() <= tol, branch="horizon")

    dec = spectral_decompose(x)
    lam = dec.eigenvalues
    if kind is SubdiffKind.REGULAR and k > 1 and lam[k - 2] - lam[k - 1] <= tau:
        return LambdaKReport(member=False, branch="regular_empty")

    branch = kind.value
    if not operator_commute(x, s, tol):
        return LambdaKReport(member=False, branch=branch)

    block = next(b for b in group_blocks(lam, tau) if k - 1 in b)
    c_hat = block_idempotent(x, k, tau, decomposition=dec)
    outside = (s - quadratic_apply(c_hat, s)).norm()
    mu = np.array([v for v, _ in block_subalgebra_spectrum(dec, block, s)])
    if kind is SubdiffKind.LIMITING:
        alpha = 1 - k + int(np.count_nonzero(lam >= lam[k - 1] - tau))
        proj = project_sparse_simplex(mu, alpha) if alpha < mu.size else project_simplex(mu)
    else:
        proj = project_simplex(mu)
    distance = float(np.sqrt(outside**2 + np.sum((mu - proj) ** 2)))
    logger.debug("λ_%d %s: distance %.3e from the eigenvalue-block simplex", k, branch, distance)
    return LambdaKReport(member=distance <= tol, branch=branch)


def lambda_k_subdiff_member(
    k: int,
    kind: SubdiffKind | str,
    x: Element,
    s: Element,
    tol: float | None = None,
    tau_group: float | None = None,
) -> bool:
    """Membership of s in the ``kind`` subdifferential of λ_k at x."""
    return lambda_k_subdiff_query(k, kind, x, s, tol, tau_group).member


def spectral_dist0(fid: SymmetricFunctionId | str, x: Element, tau_group: float | None = None) -> float:
    """Distance from 0 to the limiting subdifferential of F at x, i.e. dist0(f, λ(x)).

    Raises:
        DomainViolation: λ(x) is outside the domain of f.
    """
    fn = _function(fid)
    lam = spectral_decompose(x).eigenvalues
    if not fn.in_domain(lam):
        raise DomainViolation(f"{fn} is +inf at λ(x) = {lam.tolist()}")
    tau = default_tau_group(x.norm()) if tau_group is None else tau_group
    return fn.dist0(lam, tau)
