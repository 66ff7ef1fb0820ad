import math
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from jordan_subdiff import AlgebraDescriptor, majorizes, spectral_decompose, spectral_value, value
from jordan_subdiff.errors import DomainViolation, SchemaError, SizeCapExceeded
from jordan_subdiff.oracles import (
    fd_dir_derivative,
    hull_distance,
    hull_member_bruteforce,
    regular_subgradient_probe,
)

SYM2 = AlgebraDescriptor.of(("sym", 2))


def test_fd_of_a_linear_map_is_exact() -> None:
    a = np.array([[1.0, 2.0], [3.0, -1.0]])
    est = fd_dir_derivative(lambda v: a @ v, np.array([0.5, 0.5]), np.array([1.0, -2.0]), [1e-2, 1e-3, 1e-4])
    assert_allclose(est.value, a @ [1.0, -2.0], atol=1e-9)
    assert est.order == math.inf
    assert len(est.quotients) == 3


def test_fd_of_eigenvalues_at_identity() -> None:
    est = fd_dir_derivative(
        lambda y: spectral_decompose(y).eigenvalues,
        SYM2.identity(),
        SYM2.element([[[0.0, 1.0], [1.0, 0.0]]]),
        [1e-3, 1e-4, 1e-5],
    )
    assert_allclose(est.value, [1.0, -1.0], atol=1e-8)
    assert est.order == math.inf


def test_fd_observes_first_order_convergence() -> None:
    est = fd_dir_derivative(
        lambda v: np.array([np.sin(v[0]) + v[1] ** 2]),
        np.array([0.3, 0.7]),
        np.array([1.0, 1.0]),
        [1e-2, 1e-3, 1e-4],
    )
    assert est.order == pytest.approx(1.0, abs=0.1)
    assert_allclose(est.value, [math.cos(0.3) + 1.4], atol=1e-6)


def test_fd_rejects_bad_grid() -> None:
    for grid in ([], [1e-3, 1e-2], [1e-2, 0.0]):
        with pytest.raises(SchemaError):
            fd_dir_derivative(lambda v: v, np.zeros(1), np.ones(1), grid)


def test_sampler_passes_for_a_convex_spectral_function() -> None:
    verdict = regular_subgradient_probe(
        lambda y: spectral_value("kth_largest:k=1", y),
        SYM2.identity(),
        SYM2.element([np.diag([1.0, 0.0])]),
        epsilon=1e-3,
        radii=[1e-2, 1e-3, 1e-4],
        n_dirs=64,
    )
    assert verdict.passed
    assert verdict.worst_violation >= 0
    assert verdict.to_dict()["witness"] is None


def test_sampler_fails_inside_a_kink() -> None:
    verdict = regular_subgradient_probe(
        lambda v: value("kth_largest:k=2", v),
        np.array([1.0, 1.0]),
        np.array([0.5, 0.5]),
        epsilon=1e-3,
        radii=[1e-2],
    )
    assert not verdict.passed
    assert verdict.worst_violation <= -0.5
    assert verdict.witness is not None
    assert len(verdict.to_dict()["witness"]) == 2


def test_sampler_ignores_points_outside_the_domain() -> None:
    u = np.array([1e-3, 1.0])
    verdict = regular_subgradient_probe(
        lambda v: value("neglogprod", v), u, -1.0 / u, epsilon=1e-3, radii=[1.0, 0.5], n_dirs=128
    )
    assert verdict.passed


def test_sampler_needs_a_finite_base_value() -> None:
    with pytest.raises(DomainViolation):
        regular_subgradient_probe(lambda v: value("neglogprod", v), np.array([0.0, 1.0]), np.zeros(2), 1e-3, [0.1])


def test_hull_examples(rng) -> None:
    square = [[1.0, 0.0], [0.0, 1.0]]
    assert hull_member_bruteforce([0.5, 0.5], square)
    assert not hull_member_bruteforce([0.6, 0.5], square)
    assert hull_member_bruteforce([0.0, 1.0], square)
    distance, weights = hull_distance([1.0, 1.0], square)
    assert distance == pytest.approx(math.sqrt(0.5), abs=1e-9)
    assert_allclose(weights, [0.5, 0.5], atol=1e-9)

    points = rng.standard_normal((5, 3))
    u = rng.dirichlet(np.ones(5)) @ points
    assert hull_member_bruteforce(u, points, tol=1e-8)


def test_hull_size_cap() -> None:
    with pytest.raises(SizeCapExceeded):
        hull_distance(np.zeros(2), np.zeros((10_001, 2)))


def _permutations(v: np.ndarray) -> np.ndarray:
    return np.array(sorted(set(permutations(v.tolist()))))


@seed(20240611)
@settings(max_examples=40, deadline=None)
@given(
    v=arrays(np.float64, 4, elements=st.integers(-3, 3).map(float)),
    weights=arrays(np.float64, 3, elements=st.floats(0.0, 1.0)),
)
def test_majorization_matches_permutation_hull(v, weights) -> None:
    perms = _permutations(v)
    w = np.r_[weights, 1.0]
    mixed = (w / w.sum()) @ perms[: w.size] if len(perms) >= w.size else perms[0]
    assert majorizes(mixed, v)
    assert hull_member_bruteforce(mixed, perms)


def test_non_majorized_points_are_outside_the_hull() -> None:
    v = np.array([3.0, 1.0, 0.0])
    for u in ([4.0, 0.0, 0.0], [2.0, 2.0, 1.0], [3.5, -0.5, 0.0]):
        assert not majorizes(u, v)
        assert not hull_member_bruteforce(u, _permutations(v))
