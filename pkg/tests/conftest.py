import numpy as np
import pytest

from jordan_subdiff import AlgebraDescriptor, Element

ALGEBRA_SPECS = {
    "diag3": (("diag", 3),),
    "sym1": (("sym", 1),),
    "sym3": (("sym", 3),),
    "sym5": (("sym", 5),),
    "spin2": (("spin", 2),),
    "spin4": (("spin", 4),),
    "sym2_spin3_diag2": (("sym", 2), ("spin", 3), ("diag", 2)),
    "diag1_sym3_spin2_sym2": (("diag", 1), ("sym", 3), ("spin", 2), ("sym", 2)),
}


@pytest.fixture(params=sorted(ALGEBRA_SPECS))
def algebra(request) -> AlgebraDescriptor:
    return AlgebraDescriptor.of(*ALGEBRA_SPECS[request.param])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def sym2():
    """Build Sym(2) elements from nested lists."""
    algebra = AlgebraDescriptor.of(("sym", 2))

    def make(matrix) -> Element:
        return algebra.element([np.array(matrix, dtype=float)])

    return make


@pytest.fixture
def spin3():
    """Build Spin(3) elements from (x0, x1, x2)."""
    algebra = AlgebraDescriptor.of(("spin", 3))

    def make(x) -> Element:
        return algebra.element([np.array(x, dtype=float)])

    return make


@pytest.fixture
def diagonal():
    """Build elements of the diagonal algebra R^r from a vector."""

    def make(values) -> Element:
        values = np.asarray(values, dtype=float)
        return AlgebraDescriptor.of(("diag", values.size)).element([values])

    return make
