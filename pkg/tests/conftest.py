"""Shared complexes for the zk-betti tests."""

import pytest

from zk_betti.domain import FieldSpec, build_complex

# Minimal 6-vertex triangulation of the real projective plane.
RP2_FACETS = [
    [1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6],
    [2, 3, 5], [2, 4, 5], [2, 4, 6], [3, 4, 6], [3, 5, 6],
]


@pytest.fixture
def f2():
    return FieldSpec.prime(2)


@pytest.fixture
def qq():
    return FieldSpec.rationals()


@pytest.fixture
def rp2():
    return build_complex(6, RP2_FACETS)


@pytest.fixture
def four_cycle():
    return build_complex(4, [[1, 2], [2, 3], [3, 4], [1, 4]])


@pytest.fixture
def two_points():
    return build_complex(2, [[1], [2]])


@pytest.fixture
def single_edge():
    return build_complex(2, [[1, 2]])


@pytest.fixture
def triangle_boundary():
    return build_complex(3, [[1, 2], [2, 3], [1, 3]])


@pytest.fixture
def tetrahedron_boundary():
    return build_complex(4, [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]])
