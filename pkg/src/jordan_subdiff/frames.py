"""Jordan frames, spectral decomposition and simultaneous diagonalization.

The spectral decomposition of a product element is assembled factor by factor
(Jacobi on sym factors, closed forms on spin and diag factors) and merged into
one nonincreasing eigenvalue vector. Ties are broken by factor order and then
by the local index of the factor solver; the sort is stable.

Common frames of operator-commuting x and s are built block by block: for each
block of equal eigenvalues of x, the projection Q_{e_j}(s) is decomposed inside
the subalgebra V(e_j, 1) and the resulting idempotents are lifted back.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .algebra import (
    AlgebraDescriptor,
    Element,
    FactorKind,
    check_same_algebra,
    jordan_product,
    lyapunov_matrix,
    quadratic_apply,
    random_element,
    trace,
    trace_inner,
)
from .config import config, default_tau_group
from .errors import (
    DescriptorMismatch,
    DomainViolation,
    EigensolverError,
    IndexOutOfRange,
    NonCommuting,
    NotEigenIdempotent,
    NotIdempotent,
)
from .jacobi import jacobi_eigh

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class JordanFrame:
    """Ordered list of r primitive idempotents."""

    idempotents: tuple[Element, ...]

    def __post_init__(self) -> None:
        idempotents = tuple(self.idempotents)
        if not idempotents:
            raise DescriptorMismatch("A Jordan frame needs at least one idempotent")
        for c in idempotents[1:]:
            check_same_algebra(idempotents[0], c)
        if len(idempotents) != idempotents[0].algebra.rank:
            raise DescriptorMismatch(
                f"A Jordan frame of a rank-{idempotents[0].algebra.rank} algebra needs "
                f"{idempotents[0].algebra.rank} idempotents, got {len(idempotents)}"
            )
        object.__setattr__(self, "idempotents", idempotents)

    @property
    def algebra(self) -> AlgebraDescriptor:
        """Algebra the idempotents belong to."""
        return self.idempotents[0].algebra

    def __len__(self) -> int:
        return len(self.idempotents)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.idempotents)

    def __getitem__(self, i: int) -> Element:
        return self.idempotents[i]


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Nonincreasing eigenvalues and a frame in J(x).

    ``sources[p]`` is the (factor index, local index) that produced sorted
    position p. ``local_vectors`` holds per-factor solver data: the Jacobi
    eigenvector matrix for sym factors, the spin axis for spin factors and
    ``None`` for diag factors.
    """

    eigenvalues: np.ndarray
    frame: JordanFrame
    sources: tuple[tuple[int, int], ...]
    local_vectors: tuple[np.ndarray | None, ...]

    def reconstruct(self) -> Element:
        """Rebuild x as the sum of λ_i(x) c_i."""
        return diag_build(self.eigenvalues, self.frame)


class PeirceParts(NamedTuple):
    """Components of z in V(c,1), V(c,1/2) and V(c,0)."""

    one: Element
    half: Element
    zero: Element


def _embed(algebra: AlgebraDescriptor, index: int, part: np.ndarray) -> Element:
    parts = [np.zeros(f.shape) for f in algebra.factors]
    parts[index] = part
    return Element(algebra, tuple(parts))


def _spin_idempotent(n: int, axis: np.ndarray, sign: float) -> np.ndarray:
    c = np.empty(n)
    c[0] = 0.5
    c[1:] = 0.5 * sign * axis
    return c


def _spin_axis(xbar: np.ndarray, fallback: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    nrm = float(np.linalg.norm(xbar))
    if nrm <= config.SPIN_AXIS_EPS:
        if fallback is None:
            fallback = np.zeros(xbar.shape[0])
            fallback[0] = 1.0
        return nrm, fallback
    return nrm, xbar / nrm


def _factor_spectrum(kind: FactorKind, part: np.ndarray) -> tuple[list[float], list[np.ndarray], np.ndarray | None]:
    """Eigenvalues and idempotent parts of one factor block, in solver order."""
    if kind is FactorKind.DIAGONAL:
        n = part.shape[0]
        return [float(v) for v in part], list(np.eye(n)), None
    if kind is FactorKind.SYM:
        w, vecs = jacobi_eigh(part)
        return [float(v) for v in w], [np.outer(vecs[:, i], vecs[:, i]) for i in range(w.shape[0])], vecs
    nrm, axis = _spin_axis(part[1:])
    n = part.shape[0]
    x0 = float(part[0])
    return (
        [x0 + nrm, x0 - nrm],
        [_spin_idempotent(n, axis, 1.0), _spin_idempotent(n, axis, -1.0)],
        axis,
    )


def spectral_decompose(x: Element, tol: float | None = None) -> SpectralDecomposition:
    """Compute λ(x) (nonincreasing) and a Jordan frame in J(x).

    With ``tol`` given, the frame invariants and the reconstruction
    ||x - Σ λ_i c_i|| <= tol (1 + ||x||) are verified before returning.

    Raises:
        DomainViolation: ``x`` has non-finite entries.
        EigensolverError: Jacobi exceeded its sweep cap, or the result misses ``tol``.
    """
    if not x.is_finite():
        raise DomainViolation("Cannot decompose an element with non-finite entries")
    algebra = x.algebra
    values: list[float] = []
    idempotents: list[Element] = []
    sources: list[tuple[int, int]] = []
    local_vectors: list[np.ndarray | None] = []
    for f_idx, (factor, part) in enumerate(zip(algebra.factors, x.parts)):
        vals, idem_parts, local = _factor_spectrum(factor.kind, part)
        local_vectors.append(local)
        for loc, (v, c) in enumerate(zip(vals, idem_parts)):
            values.append(v)
            idempotents.append(_embed(algebra, f_idx, c))
            sources.append((f_idx, loc))

    order = np.argsort(-np.asarray(values), kind="stable")
    eigenvalues = np.asarray(values)[order]
    eigenvalues.setflags(write=False)
    dec = SpectralDecomposition(
        eigenvalues=eigenvalues,
        frame=JordanFrame(tuple(idempotents[i] for i in order)),
        sources=tuple(sources[i] for i in order),
        local_vectors=tuple(local_vectors),
    )
    if tol is not None:
        problems = frame_violations(dec.frame, tol)
        residual = (dec.reconstruct() - x).norm()
        if residual > tol * (1.0 + x.norm()):
            problems.append(f"reconstruction residual {residual:.3e}")
        if problems:
            raise EigensolverError(f"Decomposition misses tol={tol:g}: {'; '.join(problems)}")
    return dec


def diag_in_frame(z: Element, frame: JordanFrame) -> np.ndarray:
    """Return diag(z, J) = (<c_1, z>, ..., <c_r, z>)."""
    return np.array([trace_inner(c, z) for c in frame])


def diag_build(u: Sequence[float] | np.ndarray, frame: JordanFrame) -> Element:
    """Return Diag(u, J) = sum_i u_i c_i."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (len(frame),):
        raise DescriptorMismatch(f"Vector of length {u.shape} does not match a frame of length {len(frame)}")
    parts = [np.zeros(f.shape) for f in frame.algebra.factors]
    for ui, c in zip(u, frame):
        for k, p in enumerate(c.parts):
            parts[k] = parts[k] + ui * p
    return Element(frame.algebra, tuple(parts))


element_with_spectrum = diag_build


def frame_violations(frame: JordanFrame, tol: float | None = None) -> list[str]:
    """List the Jordan frame invariants that fail at ``tol``."""
    tol = config.FRAME_TOL if tol is None else tol
    problems = []
    for i, c in enumerate(frame):
        if (jordan_product(c, c) - c).norm() > tol:
            problems.append(f"c{i + 1} is not idempotent")
        if abs(trace(c) - 1.0) > tol:
            problems.append(f"c{i + 1} does not have unit trace")
        for j in range(i + 1, len(frame)):
            if jordan_product(c, frame[j]).norm() > tol or abs(trace_inner(c, frame[j])) > tol:
                problems.append(f"c{i + 1} and c{j + 1} are not orthogonal")
    total = frame.algebra.zero()
    for c in frame:
        total = total + c
    if (total - frame.algebra.identity()).norm() > tol:
        problems.append("idempotents do not sum to the identity")
    return problems


def random_frame(algebra: AlgebraDescriptor, rng: np.random.Generator) -> JordanFrame:
    """Frame of a random element; generic, so all idempotents are determined by the sample."""
    return spectral_decompose(random_element(algebra, rng)).frame


def operator_commute(x: Element, y: Element, tol: float | None = None) -> bool:
    """True iff ||L_x L_y b - L_y L_x b|| <= tol (1 + ||x|| ||y||) on an orthonormal basis."""
    check_same_algebra(x, y)
    tol = config.FRAME_TOL if tol is None else tol
    lx = lyapunov_matrix(x)
    ly = lyapunov_matrix(y)
    commutator = lx @ ly - ly @ lx
    worst = float(np.max(np.linalg.norm(commutator, axis=0))) if commutator.size else 0.0
    return worst <= tol * (1.0 + x.norm() * y.norm())


def group_blocks(values: np.ndarray, tau_group: float) -> list[list[int]]:
    """Split a nonincreasing vector into runs whose consecutive gaps are <= tau_group."""
    blocks: list[list[int]] = []
    for i, v in enumerate(values):
        if blocks and values[i - 1] - v <= tau_group:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return blocks


def block_subalgebra_spectrum(
    dec: SpectralDecomposition, positions: Sequence[int], z: Element
) -> list[tuple[float, Element]]:
    """Spectrum of Q_{e_B}(z) inside V(e_B, 1), e_B the idempotent sum over ``positions``.

    Returns (eigenvalue, idempotent) pairs in the order the block solvers
    produce them: factor order, then solver order inside each factor.
    """
    algebra = z.algebra
    by_factor: dict[int, list[int]] = {}
    for pos in positions:
        f_idx, _ = dec.sources[pos]
        by_factor.setdefault(f_idx, []).append(pos)

    out: list[tuple[float, Element]] = []
    for f_idx in sorted(by_factor):
        factor = algebra.factors[f_idx]
        block = by_factor[f_idx]
        zpart = z.parts[f_idx]
        if factor.kind is FactorKind.DIAGONAL:
            for pos in block:
                out.append((float(zpart[dec.sources[pos][1]]), dec.frame[pos]))
        elif factor.kind is FactorKind.SYM:
            basis = dec.local_vectors[f_idx][:, [dec.sources[pos][1] for pos in block]]
            local = basis.T @ zpart @ basis
            w, vecs = jacobi_eigh(0.5 * (local + local.T))
            lifted = basis @ vecs
            for k in range(w.shape[0]):
                out.append((float(w[k]), _embed(algebra, f_idx, np.outer(lifted[:, k], lifted[:, k]))))
        elif len(block) == 1:
            c = dec.frame[block[0]]
            out.append((trace_inner(c, z), c))
        else:
            nrm, axis = _spin_axis(zpart[1:], fallback=dec.local_vectors[f_idx])
            z0 = float(zpart[0])
            out.append((z0 + nrm, _embed(algebra, f_idx, _spin_idempotent(factor.n, axis, 1.0))))
            out.append((z0 - nrm, _embed(algebra, f_idx, _spin_idempotent(factor.n, axis, -1.0))))
    return out


def common_frame(
    x: Element,
    s: Element,
    tol: float | None = None,
    tau_group: float | None = None,
    decomposition: SpectralDecomposition | None = None,
) -> JordanFrame:
    """Return the canonical frame of J(x, s).

    Inside each block of equal x-eigenvalues the frame is ordered so that the
    s-diagonal is nonincreasing; remaining ties keep the block solver order.

    Raises:
        NonCommuting: x and s do not operator commute, so J(x, s) is empty.
    """
    check_same_algebra(x, s)
    if not operator_commute(x, s, tol):
        raise NonCommuting("x and s do not operator commute; J(x, s) is empty")
    dec = spectral_decompose(x) if decomposition is None else decomposition
    tau = default_tau_group(x.norm()) if tau_group is None else tau_group

    idempotents: list[Element] = []
    for block in group_blocks(dec.eigenvalues, tau):
        items = block_subalgebra_spectrum(dec, block, s)
        order = np.argsort(-np.array([v for v, _ in items]), kind="stable")
        idempotents.extend(items[i][1] for i in order)
    return JordanFrame(tuple(idempotents))


def block_idempotent(
    x: Element,
    k: int,
    tau_group: float | None = None,
    decomposition: SpectralDecomposition | None = None,
) -> Element:
    """Sum of the frame idempotents whose eigenvalue equals λ_k(x) (1-based k)."""
    dec = spectral_decompose(x) if decomposition is None else decomposition
    if not 1 <= k <= len(dec.eigenvalues):
        raise IndexOutOfRange(f"k must lie in 1..{len(dec.eigenvalues)}, got {k}")
    tau = default_tau_group(x.norm()) if tau_group is None else tau_group
    block = next(b for b in group_blocks(dec.eigenvalues, tau) if k - 1 in b)
    total = x.algebra.zero()
    for pos in block:
        total = total + dec.frame[pos]
    return total


def eigen_idempotent_member(x: Element, c: Element, sigma: float, tol: float | None = None) -> bool:
    """Membership of c in I(x, σ): primitive idempotent with x∘c = σc."""
    check_same_algebra(x, c)
    tol = config.FRAME_TOL if tol is None else tol
    return (
        (jordan_product(c, c) - c).norm() <= tol
        and abs(trace(c) - 1.0) <= tol
        and (jordan_product(x, c) - sigma * c).norm() <= tol
    )


def peirce_project(c: Element, z: Element, tol: float | None = None) -> PeirceParts:
    """Split z along the Peirce decomposition of the idempotent c.

    Raises:
        NotIdempotent: ||c∘c - c|| > tol.
    """
    check_same_algebra(c, z)
    tol = config.FRAME_TOL if tol is None else tol
    if (jordan_product(c, c) - c).norm() > tol:
        raise NotIdempotent(f"c is not idempotent (||c∘c - c|| = {(jordan_product(c, c) - c).norm():.3e})")
    one = quadratic_apply(c, z)
    zero = quadratic_apply(z.algebra.identity() - c, z)
    return PeirceParts(one=one, half=z - one - zero, zero=zero)


def frame_extend(x: Element, c: Element, sigma: float, tol: float | None = None) -> JordanFrame:
    """Extend a primitive idempotent c with x∘c = σc to a frame in J(x) containing c.

    The rest of the frame diagonalizes x - σc inside V(c, 0).

    Raises:
        NotEigenIdempotent: c is not a primitive idempotent or x∘c != σc.
    """
    check_same_algebra(x, c)
    tol = config.FRAME_TOL if tol is None else tol
    if not eigen_idempotent_member(x, c, sigma, tol):
        raise NotEigenIdempotent(f"c is not a primitive idempotent with x∘c = {sigma}·c")
    algebra = x.algebra
    traces = [f.trace(p) for f, p in zip(algebra.factors, c.parts)]
    home = int(np.argmax(np.abs(traces)))

    values: list[float] = []
    idempotents: list[Element] = []
    for f_idx, (factor, part) in enumerate(zip(algebra.factors, x.parts)):
        if f_idx != home:
            vals, idem_parts, _ = _factor_spectrum(factor.kind, part)
            values.extend(vals)
            idempotents.extend(_embed(algebra, f_idx, p) for p in idem_parts)
            continue
        values.append(float(sigma))
        idempotents.append(c)
        cpart = c.parts[f_idx]
        if factor.kind is FactorKind.DIAGONAL:
            i = int(np.argmax(cpart))
            for j in range(factor.n):
                if j != i:
                    values.append(float(part[j]))
                    idempotents.append(_embed(algebra, f_idx, np.eye(factor.n)[j]))
        elif factor.kind is FactorKind.SYM:
            w, vecs = jacobi_eigh(cpart)
            i = int(np.argmax(w))
            v = vecs[:, i]
            complement = np.delete(vecs, i, axis=1)
            local = complement.T @ (part - sigma * np.outer(v, v)) @ complement
            w2, vecs2 = jacobi_eigh(0.5 * (local + local.T))
            lifted = complement @ vecs2
            for k in range(w2.shape[0]):
                values.append(float(w2[k]))
                idempotents.append(_embed(algebra, f_idx, np.outer(lifted[:, k], lifted[:, k])))
        else:
            rest = _embed(algebra, f_idx, factor.identity() - cpart)
            values.append(trace_inner(x, rest))
            idempotents.append(rest)

    order = np.argsort(-np.asarray(values), kind="stable")
    return JordanFrame(tuple(idempotents[i] for i in order))
