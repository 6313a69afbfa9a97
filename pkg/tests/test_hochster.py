"""Tests for Hochster sums, moment-angle Betti numbers and the Taylor oracle."""

import pytest

from zk_betti.domain import (
    BigradedTable,
    FieldSpec,
    GuardExceeded,
    LMParams,
    bigraded_betti,
    betti_number,
    build_complex,
    build_skeleton,
    minimal_non_faces,
    sample_lm,
    structural_violations,
    tor_via_taylor,
    zk_betti_numbers,
)
from zk_betti.domain.hochster import MAX_TABLE_VERTICES

from conftest import RP2_FACETS

BOTH_FIELDS = [FieldSpec.prime(2), FieldSpec.rationals()]


def oracle_corpus(size: int = 100):
    """Small complexes whose Taylor complexes stay cheap."""
    handcrafted = [
        build_complex(4, [[1, 2], [2, 3], [3, 4], [1, 4]]),
        build_complex(2, [[1], [2]]),
        build_complex(3, [[1, 2]]),
        build_complex(4, [[1, 2, 3, 4]]),
        build_complex(3, [[1, 2], [2, 3], [1, 3]]),
        build_complex(6, RP2_FACETS),
        build_complex(5, [[1, 2, 3], [1, 3, 4], [1, 4, 5], [2, 3, 5]]),
        build_complex(5, [[1, 2], [3, 4, 5]]),
    ]
    corpus = list(handcrafted)
    settings = [(1, 4), (2, 4), (1, 5), (2, 5), (1, 6), (2, 6)]
    probabilities = [0.3, 0.5, 0.7]
    trial = 0
    while len(corpus) < size:
        d, n = settings[trial % len(settings)]
        p = probabilities[trial % len(probabilities)]
        K = sample_lm(LMParams(n=n, d=d, p=p, seed=1000 + trial))
        trial += 1
        if len(minimal_non_faces(K)) <= 10:
            corpus.append(K)
    return corpus


class TestBigradedTable:
    """Hochster's formula on known complexes."""

    def test_four_cycle(self, four_cycle, f2):
        table = bigraded_betti(four_cycle, f2)
        assert table.entries == {(0, 0): 1, (1, 2): 2, (2, 4): 1}

    def test_full_simplex(self, f2):
        table = bigraded_betti(build_skeleton(5, 4), f2)
        assert table.entries == {(0, 0): 1}

    def test_trivial_entry_always_present(self, rp2, qq):
        assert bigraded_betti(rp2, qq).get(0, 0) == 1

    def test_absent_vertex_contributes_a_generator(self, f2):
        table = bigraded_betti(build_complex(3, [[1, 2]]), f2)
        assert table.entries == {(0, 0): 1, (1, 1): 1}

    def test_filter(self, four_cycle, f2):
        table = bigraded_betti(four_cycle, f2, [(1, 2)])
        assert table.entries == {(1, 2): 2}

    def test_filter_out_of_range_is_zero(self, four_cycle, f2):
        table = bigraded_betti(four_cycle, f2, [(3, 2), (1, 9)])
        assert table.entries == {}

    def test_single_entry(self, four_cycle, f2):
        assert betti_number(four_cycle, 1, 2, f2) == 2
        assert betti_number(four_cycle, 2, 4, f2) == 1
        assert betti_number(four_cycle, 1, 3, f2) == 0

    def test_nonzero_sorted_by_j_then_i(self, rp2, f2):
        keys = [(j, i) for i, j, _ in bigraded_betti(rp2, f2).nonzero()]
        assert keys == sorted(keys)

    def test_document_round_trip(self, rp2, f2):
        table = bigraded_betti(rp2, f2)
        assert BigradedTable.from_document(table.to_document()) == table

    def test_projective_plane_depends_on_field(self, rp2, f2, qq):
        assert bigraded_betti(rp2, f2) != bigraded_betti(rp2, qq)
        # the whole complex contributes H~_2 = F_2 at i = 6 - 2 - 1
        assert bigraded_betti(rp2, f2, [(3, 6)]).get(3, 6) == 1
        assert bigraded_betti(rp2, qq, [(3, 6)]).get(3, 6) == 0

    def test_graph_tables_are_field_independent(self):
        for seed in range(10):
            K = sample_lm(LMParams(n=7, d=1, p=0.4, seed=seed))
            tables = [bigraded_betti(K, field).entries for field in BOTH_FIELDS + [FieldSpec.prime(3)]]
            assert tables[0] == tables[1] == tables[2]

    # ========================================================================
    # Guards
    # ========================================================================

    def test_size_guard(self, f2):
        K = build_complex(MAX_TABLE_VERTICES + 1, [[1]])
        with pytest.raises(GuardExceeded) as info:
            bigraded_betti(K, f2)
        assert "override" in str(info.value)

    def test_filter_bypasses_size_guard(self, f2):
        K = build_complex(MAX_TABLE_VERTICES + 1, [[1, 2]])
        assert betti_number(K, 1, 2, f2) == 0
        # pairs of absent vertices give empty full subcomplexes
        assert bigraded_betti(K, f2, [(2, 2)]).get(2, 2) == 171

    def test_parallel_table_matches_serial(self, rp2, f2):
        assert bigraded_betti(rp2, f2, workers=2) == bigraded_betti(rp2, f2, workers=1)


class TestStructuralZeros:
    """Entries that vanish between the (d-1)- and d-skeleton."""

    @pytest.mark.parametrize("d", [1, 2])
    def test_samples_have_no_violations(self, d, f2):
        for seed in range(20):
            n = 4 + seed % 3
            K = sample_lm(LMParams(n=n, d=d, p=0.5, seed=seed))
            assert structural_violations(bigraded_betti(K, f2), d) == []

    def test_sphere_violates_graph_pattern(self, tetrahedron_boundary, f2):
        table = bigraded_betti(tetrahedron_boundary, f2)
        assert structural_violations(table, 1) == [(1, 4, 1)]
        assert structural_violations(table, 2) == []

    def test_missing_skeleton_violates_low_j(self, two_points, f2):
        assert structural_violations(bigraded_betti(two_points, f2), 2) == [(1, 2, 1)]


class TestMomentAngle:
    """Betti numbers of Z_K."""

    def test_four_cycle(self, four_cycle, f2):
        assert zk_betti_numbers(four_cycle, f2) == [1, 0, 0, 2, 0, 0, 1]

    def test_two_points(self, two_points, f2):
        assert zk_betti_numbers(two_points, f2) == [1, 0, 0, 1]

    def test_single_edge(self, single_edge, f2):
        assert zk_betti_numbers(single_edge, f2) == [1]

    def test_total_rank_is_preserved(self, rp2, f2):
        table = bigraded_betti(rp2, f2)
        assert sum(zk_betti_numbers(rp2, f2, table=table)) == table.total()

    def test_size_guard(self, f2):
        with pytest.raises(GuardExceeded):
            zk_betti_numbers(build_complex(MAX_TABLE_VERTICES + 1, [[1]]), f2)


class TestStanleyReisner:
    """Minimal non-faces and the Taylor complex."""

    def test_four_cycle_generators(self, four_cycle):
        assert minimal_non_faces(four_cycle) == [(1, 3), (2, 4)]

    def test_full_simplex_has_none(self):
        assert minimal_non_faces(build_skeleton(4, 3)) == []

    def test_hollow_triangle(self, triangle_boundary):
        assert minimal_non_faces(triangle_boundary) == [(1, 2, 3)]

    def test_absent_vertex(self):
        assert minimal_non_faces(build_complex(3, [[1, 2]])) == [(3,)]

    def test_projective_plane_generators(self, rp2):
        assert len(minimal_non_faces(rp2)) == 10

    def test_taylor_four_cycle(self, four_cycle, f2):
        assert tor_via_taylor(four_cycle, f2).entries == {(0, 0): 1, (1, 2): 2, (2, 4): 1}

    def test_taylor_two_points(self, two_points, qq):
        assert tor_via_taylor(two_points, qq).entries == {(0, 0): 1, (1, 2): 1}

    def test_taylor_full_simplex(self, f2):
        assert tor_via_taylor(build_skeleton(4, 3), f2).entries == {(0, 0): 1}

    def test_taylor_guard(self, f2):
        K = build_complex(18, [[1]])
        with pytest.raises(GuardExceeded):
            tor_via_taylor(K, f2)

    @pytest.mark.parametrize("field", BOTH_FIELDS, ids=["f2", "q"])
    def test_oracle_equivalence(self, field):
        for K in oracle_corpus():
            assert bigraded_betti(K, field).entries == tor_via_taylor(K, field).entries
