import numpy as np
import pytest
from numpy.testing import assert_allclose

from jordan_subdiff import (
    AlgebraDescriptor,
    Factor,
    FactorKind,
    jordan_product,
    lyapunov_matrix,
    quadratic_apply,
    random_element,
    trace,
    trace_inner,
)
from jordan_subdiff.errors import DescriptorMismatch, SchemaError


def assert_close(a, b, atol) -> None:
    assert (a - b).norm() <= atol


def test_identity_is_neutral(algebra, rng) -> None:
    for _ in range(10):
        x = random_element(algebra, rng)
        assert_close(jordan_product(algebra.identity(), x), x, 1e-14 * (1 + x.norm()))


def test_product_is_commutative_and_satisfies_jordan_identity(algebra, rng) -> None:
    for _ in range(10):
        x = random_element(algebra, rng)
        y = random_element(algebra, rng)
        assert_close(jordan_product(x, y), jordan_product(y, x), 1e-13 * (1 + x.norm() * y.norm()))
        x2 = jordan_product(x, x)
        lhs = jordan_product(x, jordan_product(x2, y))
        rhs = jordan_product(x2, jordan_product(x, y))
        assert_close(lhs, rhs, 1e-10 * (1 + x.norm() ** 3 * y.norm()))


def test_sym_anticommuting_product_vanishes(sym2) -> None:
    p = jordan_product(sym2([[0, 1], [1, 0]]), sym2([[1, 0], [0, -1]]))
    assert_allclose(p.parts[0], np.zeros((2, 2)))


def test_spin_product(spin3) -> None:
    x = spin3([1, 1, 0])
    assert_allclose(jordan_product(x, x).parts[0], [2, 2, 0])
    assert trace(x) == 2.0


def test_trace_inner_examples(sym2, spin3) -> None:
    x = sym2([[2, 0], [0, 1]])
    assert trace_inner(x, x) == pytest.approx(5.0)
    c = spin3([0.5, 0.5, 0])
    assert trace_inner(c, c) == pytest.approx(1.0)
    assert c.norm() == pytest.approx(1.0)


def test_trace_inner_with_identity_is_trace(algebra, rng) -> None:
    x = random_element(algebra, rng)
    assert trace_inner(x, algebra.identity()) == pytest.approx(trace(x))
    assert trace(algebra.identity()) == pytest.approx(algebra.rank)


def test_coordinates_are_orthonormal(algebra, rng) -> None:
    x = random_element(algebra, rng)
    y = random_element(algebra, rng)
    assert x.to_coords() @ y.to_coords() == pytest.approx(trace_inner(x, y))
    back = algebra.from_coords(x.to_coords())
    assert_close(back, x, 1e-14 * (1 + x.norm()))

    basis = algebra.basis()
    assert len(basis) == algebra.dim
    gram = np.array([[trace_inner(a, b) for b in basis] for a in basis])
    assert_allclose(gram, np.eye(algebra.dim), atol=1e-14)


def test_quadratic_apply_is_xyx(sym2) -> None:
    q = quadratic_apply(sym2([[2, 0], [0, 1]]), sym2([[1, 1], [1, 1]]))
    assert_allclose(q.parts[0], [[4, 2], [2, 1]])


def test_quadratic_apply_is_self_adjoint(algebra, rng) -> None:
    x, y, z = (random_element(algebra, rng) for _ in range(3))
    lhs = trace_inner(quadratic_apply(x, y), z)
    rhs = trace_inner(y, quadratic_apply(x, z))
    assert lhs == pytest.approx(rhs, abs=1e-10 * (1 + x.norm() ** 2 * y.norm() * z.norm()))


def test_lyapunov_matrix_matches_product(algebra, rng) -> None:
    x = random_element(algebra, rng)
    y = random_element(algebra, rng)
    lx = lyapunov_matrix(x)
    assert lx.shape == (algebra.dim, algebra.dim)
    assert_allclose(lx, lx.T, atol=1e-14)
    assert_allclose(lx @ y.to_coords(), jordan_product(x, y).to_coords(), atol=1e-12 * (1 + x.norm() * y.norm()))


def test_descriptor_mismatch(sym2, spin3) -> None:
    with pytest.raises(DescriptorMismatch):
        jordan_product(sym2([[1, 0], [0, 1]]), spin3([1, 0, 0]))
    with pytest.raises(DescriptorMismatch):
        sym2([[1, 0], [0, 1]]) + spin3([1, 0, 0])


def test_factor_validation() -> None:
    with pytest.raises(SchemaError):
        Factor(FactorKind.SPIN, 1)
    with pytest.raises(SchemaError):
        Factor(FactorKind.SYM, 0)
    with pytest.raises(SchemaError):
        AlgebraDescriptor(())
    with pytest.raises(SchemaError):
        AlgebraDescriptor.of(("sym", 2)).element([np.zeros(3)])
    with pytest.raises(SchemaError):
        AlgebraDescriptor.of(("sym", 2)).from_coords(np.zeros(2))


def test_rank_and_dim() -> None:
    algebra = AlgebraDescriptor.of(("sym", 3), ("spin", 4), ("diag", 2))
    assert algebra.rank == 3 + 2 + 2
    assert algebra.dim == 6 + 4 + 2
    assert algebra.to_dict() == [{"kind": "sym", "n": 3}, {"kind": "spin", "n": 4}, {"kind": "diag", "n": 2}]


def test_sym_lower_triangle_is_authoritative(sym2) -> None:
    x = sym2([[1, 5], [2, 3]])
    assert_allclose(x.parts[0], [[1, 2], [2, 3]])


def test_parts_are_read_only(sym2) -> None:
    x = sym2([[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        x.parts[0][0, 0] = 3.0


def test_scalar_arithmetic(spin3) -> None:
    x = spin3([1, 2, 3])
    assert_allclose((2 * x - x / 2).parts[0], [1.5, 3, 4.5])
    assert_allclose((-x).parts[0], [-1, -2, -3])
