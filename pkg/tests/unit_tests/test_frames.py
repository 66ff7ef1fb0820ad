import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from jordan_subdiff import (
    AlgebraDescriptor,
    block_idempotent,
    common_frame,
    diag_build,
    diag_in_frame,
    eigen_idempotent_member,
    element_with_spectrum,
    frame_extend,
    frame_violations,
    frames,
    jordan_product,
    operator_commute,
    peirce_project,
    random_element,
    random_frame,
    spectral_decompose,
    trace_inner,
)
from jordan_subdiff.errors import (
    DescriptorMismatch,
    DomainViolation,
    EigensolverError,
    IndexOutOfRange,
    NonCommuting,
    NotEigenIdempotent,
    NotIdempotent,
)


def repeated_spectrum(algebra, rng) -> np.ndarray:
    return np.sort(rng.integers(0, 3, size=algebra.rank).astype(float))[::-1]


def test_decompose_sym_example(sym2) -> None:
    dec = spectral_decompose(sym2([[2, 0], [0, 1]]))
    assert_array_equal(dec.eigenvalues, [2.0, 1.0])
    assert_array_equal(dec.frame[0].parts[0], [[1, 0], [0, 0]])
    assert_array_equal(dec.frame[1].parts[0], [[0, 0], [0, 1]])


def test_decompose_spin_example(spin3) -> None:
    dec = spectral_decompose(spin3([1, 1, 0]))
    assert_allclose(dec.eigenvalues, [2.0, 0.0])
    assert_allclose(dec.frame[0].parts[0], [0.5, 0.5, 0.0])
    assert_allclose(dec.frame[1].parts[0], [0.5, -0.5, 0.0])


def test_spin_axis_fallback(spin3) -> None:
    dec = spectral_decompose(spin3([3, 0, 0]))
    assert_array_equal(dec.eigenvalues, [3.0, 3.0])
    assert_array_equal(dec.frame[0].parts[0], [0.5, 0.5, 0.0])
    assert_array_equal(dec.frame[1].parts[0], [0.5, -0.5, 0.0])


def test_decompose_identity(algebra) -> None:
    dec = spectral_decompose(algebra.identity())
    assert_allclose(dec.eigenvalues, np.ones(algebra.rank))
    assert frame_violations(dec.frame) == []


def test_decompose_verifies_a_requested_tolerance(algebra, rng) -> None:
    x = random_element(algebra, rng)
    assert_array_equal(spectral_decompose(x, tol=1e-8).eigenvalues, spectral_decompose(x).eigenvalues)


def test_decompose_rejects_a_missed_tolerance(monkeypatch, rng) -> None:
    def sloppy(matrix):
        w, v = np.linalg.eigh(matrix)
        return w, v + 1e-4

    monkeypatch.setattr(frames, "jacobi_eigh", sloppy)
    x = random_element(AlgebraDescriptor.of(("sym", 3)), rng)
    spectral_decompose(x)
    with pytest.raises(EigensolverError):
        spectral_decompose(x, tol=1e-8)


def test_product_eigenvalues_are_merged_stably() -> None:
    algebra = AlgebraDescriptor.of(("sym", 2), ("diag", 2))
    dec = spectral_decompose(algebra.element([np.diag([1.0, 4.0]), [3.0, 2.0]]))
    assert_array_equal(dec.eigenvalues, [4.0, 3.0, 2.0, 1.0])
    assert dec.sources == ((0, 1), (1, 0), (1, 1), (0, 0))

    tied = spectral_decompose(AlgebraDescriptor.of(("sym", 2), ("diag", 1)).element([np.diag([2.0, 1.0]), [2.0]]))
    assert tied.sources == ((0, 0), (1, 0), (0, 1))


def test_decomposition_invariants(algebra, rng) -> None:
    for _ in range(20):
        x = random_element(algebra, rng, scale=3.0)
        dec = spectral_decompose(x)
        lam = dec.eigenvalues
        assert lam.shape == (algebra.rank,)
        assert np.all(np.diff(lam) <= 0)
        assert (dec.reconstruct() - x).norm() <= 1e-8 * (1 + x.norm())
        assert frame_violations(dec.frame) == []
        assert_allclose(diag_in_frame(x, dec.frame), lam, atol=1e-8 * (1 + x.norm()))
        assert np.linalg.norm(lam) == pytest.approx(x.norm(), abs=1e-10 * (1 + x.norm()))


def test_eigenvalues_are_lipschitz(algebra, rng) -> None:
    for _ in range(10):
        x = random_element(algebra, rng)
        y = random_element(algebra, rng)
        gap = np.linalg.norm(spectral_decompose(x).eigenvalues - spectral_decompose(y).eigenvalues)
        assert gap <= (x - y).norm() + 1e-10


def test_non_finite_rejected(diagonal) -> None:
    with pytest.raises(DomainViolation):
        spectral_decompose(diagonal([1.0, np.inf]))


def test_operator_commute_examples(sym2) -> None:
    x = sym2([[0, 1], [1, 0]])
    assert not operator_commute(x, sym2([[1, 0], [0, -1]]))
    assert operator_commute(x, sym2([[1, 0], [0, 1]]))
    assert operator_commute(x, x)
    assert operator_commute(sym2([[2, 0], [0, 1]]), sym2([[3, 0], [0, 7]]))


def test_common_frame_examples(sym2) -> None:
    frame = common_frame(sym2([[2, 0], [0, 1]]), sym2([[3, 0], [0, 7]]))
    assert_allclose(diag_in_frame(sym2([[3, 0], [0, 7]]), frame), [3.0, 7.0])

    # x = e ties everything, so the frame is ordered by s
    frame = common_frame(sym2([[1, 0], [0, 1]]), sym2([[3, 0], [0, 7]]))
    assert_allclose(diag_in_frame(sym2([[3, 0], [0, 7]]), frame), [7.0, 3.0])
    assert_allclose(frame[0].parts[0], [[0, 0], [0, 1]])


def test_common_frame_rejects_non_commuting(sym2) -> None:
    with pytest.raises(NonCommuting):
        common_frame(sym2([[0, 1], [1, 0]]), sym2([[1, 0], [0, -1]]))


def test_common_frame_diagonalizes_both(algebra, rng) -> None:
    for _ in range(10):
        frame = random_frame(algebra, rng)
        u = repeated_spectrum(algebra, rng)
        x = element_with_spectrum(u, frame)
        s = diag_build(rng.standard_normal(algebra.rank), frame)
        joint = common_frame(x, s)
        assert frame_violations(joint) == []
        assert_allclose(diag_in_frame(x, joint), u, atol=1e-8)
        d = diag_in_frame(s, joint)
        assert (s - diag_build(d, joint)).norm() <= 1e-8 * (1 + s.norm())
        lam = spectral_decompose(x).eigenvalues
        for i in range(algebra.rank - 1):
            if abs(lam[i] - lam[i + 1]) <= 1e-8:
                assert d[i] >= d[i + 1] - 1e-10


def test_commuting_elements_form_a_subspace(algebra, rng) -> None:
    frame = random_frame(algebra, rng)
    x = element_with_spectrum(repeated_spectrum(algebra, rng), frame)
    y = diag_build(rng.standard_normal(algebra.rank), frame)
    z = diag_build(rng.standard_normal(algebra.rank), frame)
    assert operator_commute(x, 2.0 * y - 0.5 * z)
    common_frame(x, 2.0 * y - 0.5 * z)


def test_diag_examples(sym2, algebra, rng) -> None:
    frame = spectral_decompose(sym2([[2, 0], [0, 1]])).frame
    assert_allclose(diag_in_frame(sym2([[1, 0], [0, 1]]), frame), [1.0, 1.0])
    assert_allclose(diag_in_frame(sym2([[1, 1], [1, 1]]), frame), [1.0, 1.0])
    assert_allclose(diag_build([3.0, 7.0], frame).parts[0], [[3, 0], [0, 7]])

    frame = random_frame(algebra, rng)
    u = rng.standard_normal(algebra.rank)
    assert_allclose(diag_in_frame(diag_build(u, frame), frame), u, atol=1e-12)
    assert_allclose(spectral_decompose(diag_build(u, frame)).eigenvalues, np.sort(u)[::-1], atol=1e-10)


def test_diag_build_length_mismatch(sym2) -> None:
    frame = spectral_decompose(sym2([[2, 0], [0, 1]])).frame
    with pytest.raises(DescriptorMismatch):
        diag_build([1.0, 2.0, 3.0], frame)


def test_peirce_examples(sym2) -> None:
    z = sym2([[1, 2], [2, 3]])
    parts = peirce_project(sym2([[1, 0], [0, 0]]), z)
    assert_allclose(parts.one.parts[0], [[1, 0], [0, 0]])
    assert_allclose(parts.half.parts[0], [[0, 2], [2, 0]])
    assert_allclose(parts.zero.parts[0], [[0, 0], [0, 3]])

    whole = peirce_project(sym2([[1, 0], [0, 1]]), z)
    assert_allclose(whole.one.parts[0], z.parts[0])
    assert whole.half.norm() == 0.0 and whole.zero.norm() == 0.0


def test_peirce_components(algebra, rng) -> None:
    frame = random_frame(algebra, rng)
    m = max(1, algebra.rank // 2)
    c = algebra.zero()
    for idem in list(frame)[:m]:
        c = c + idem
    z = random_element(algebra, rng)
    one, half, zero = peirce_project(c, z)
    atol = 1e-10 * (1 + z.norm())
    assert ((one + half + zero) - z).norm() <= atol
    assert (jordan_product(c, one) - one).norm() <= atol
    assert (jordan_product(c, half) - 0.5 * half).norm() <= atol
    assert jordan_product(c, zero).norm() <= atol
    assert abs(trace_inner(one, half)) <= atol
    assert abs(trace_inner(one, zero)) <= atol
    assert abs(trace_inner(half, zero)) <= atol


def test_peirce_rejects_non_idempotent(sym2) -> None:
    with pytest.raises(NotIdempotent):
        peirce_project(sym2([[2, 0], [0, 2]]), sym2([[1, 0], [0, 1]]))


def test_frame_extend_examples(sym2, spin3) -> None:
    frame = frame_extend(sym2([[2, 0], [0, 1]]), sym2([[1, 0], [0, 0]]), 2.0)
    assert_allclose(frame[0].parts[0], [[1, 0], [0, 0]])
    assert_allclose(frame[1].parts[0], [[0, 0], [0, 1]])

    frame = frame_extend(spin3([1, 1, 0]), spin3([0.5, 0.5, 0]), 2.0)
    assert_allclose(frame[0].parts[0], [0.5, 0.5, 0])
    assert_allclose(frame[1].parts[0], [0.5, -0.5, 0])


def test_frame_extend_contains_c(algebra, rng) -> None:
    for _ in range(5):
        x = random_element(algebra, rng)
        dec = spectral_decompose(x)
        p = int(rng.integers(algebra.rank))
        c = dec.frame[p]
        frame = frame_extend(x, c, dec.eigenvalues[p])
        assert frame_violations(frame) == []
        assert any((idem - c).norm() <= 1e-12 for idem in frame)
        assert_allclose(diag_in_frame(x, frame), dec.eigenvalues, atol=1e-8 * (1 + x.norm()))


def test_frame_extend_at_multiple_of_identity(rng) -> None:
    algebra = AlgebraDescriptor.of(("sym", 3))
    c = random_frame(algebra, rng)[0]
    frame = frame_extend(3.0 * algebra.identity(), c, 3.0)
    assert any((idem - c).norm() <= 1e-12 for idem in frame)
    assert frame_violations(frame) == []


def test_frame_extend_rejects_wrong_eigenvalue(sym2) -> None:
    with pytest.raises(NotEigenIdempotent):
        frame_extend(sym2([[2, 0], [0, 1]]), sym2([[0, 0], [0, 1]]), 2.0)


def test_eigen_idempotent_member(sym2) -> None:
    x = sym2([[2, 0], [0, 1]])
    assert eigen_idempotent_member(x, sym2([[1, 0], [0, 0]]), 2.0)
    assert not eigen_idempotent_member(x, sym2([[0, 0], [0, 1]]), 2.0)
    assert not eigen_idempotent_member(x, sym2([[2, 0], [0, 0]]), 4.0)


def test_block_idempotent_is_frame_independent(rng) -> None:
    algebra = AlgebraDescriptor.of(("sym", 3), ("spin", 3))
    frame = random_frame(algebra, rng)
    x = element_with_spectrum([2.0, 2.0, 1.0, 2.0, 0.0], frame)
    expected = frame[0] + frame[1] + frame[3]
    assert (block_idempotent(x, 1) - expected).norm() <= 1e-10
    assert (block_idempotent(x, 3) - expected).norm() <= 1e-10
    assert (block_idempotent(x, 5) - frame[4]).norm() <= 1e-10
    with pytest.raises(IndexOutOfRange):
        block_idempotent(x, 6)
