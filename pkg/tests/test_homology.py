import itertools
import random

import pytest

from bdcomplex.complexes import SimplicialComplex, build_complex
from bdcomplex.graph import (
    CaterpillarSpec,
    gen_caterpillar,
    gen_cycle,
    make_graph,
    random_forest,
)
from bdcomplex.homology import (
    HomologyProfile,
    IntegerMatrix,
    boundary_matrix,
    reduced_homology,
    smith_normal_form,
    wedge_profile,
)

from oracles import betti_via_fraction_rank, naive_snf

# six-vertex triangulation of the real projective plane: the canonical
# torsion example (homology Z/2 in dimension 1)
RP2_FACETS = [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
    (1, 2, 4), (2, 4, 5), (2, 3, 5), (1, 3, 5), (1, 3, 4),
]


def random_complex(rng) -> SimplicialComplex:
    g = random_forest(rng, 7)
    b = tuple(rng.randint(0, 3) for _ in range(g.num_vertices))
    return build_complex(g, b)


class TestBoundaryMatrix:
    def test_augmentation_of_single_vertex(self):
        k = SimplicialComplex(1, [(0,)])
        d0 = boundary_matrix(k, 0)
        assert (d0.rows, d0.cols) == (1, 1)
        assert d0.entries == {(0, 0): 1}

    def test_hollow_triangle_signs(self):
        k = SimplicialComplex.from_maximal_faces(3, [(0, 1), (1, 2), (0, 2)])
        d1 = boundary_matrix(k, 1)
        # faces (0,1),(0,2),(1,2) in rows (0,),(1,),(2,)
        assert d1.to_dense() == [[-1, -1, 0], [1, 0, -1], [0, 1, 1]]

    def test_two_spine_triangle_column(self):
        g, b = gen_caterpillar(CaterpillarSpec((2, 1), (2, 1)))
        k = build_complex(g, b)
        d2 = boundary_matrix(k, 2)
        assert (d2.rows, d2.cols) == (5, 1)
        edges = {f: i for i, f in enumerate(k.faces(1))}
        col = {r: v for (r, _), v in d2.entries.items()}
        assert col == {
            edges[(2, 3)]: 1,
            edges[(1, 3)]: -1,
            edges[(1, 2)]: 1,
        }

    def test_boundary_of_boundary_is_zero(self):
        rng = random.Random(2)
        for _ in range(20):
            k = random_complex(rng)
            for d in range(1, k.dim + 1):
                a = boundary_matrix(k, d - 1) if d >= 1 else None
                bmat = boundary_matrix(k, d)
                prod: dict[tuple[int, int], int] = {}
                for (i, j), v in a.entries.items():
                    for (j2, l), w in bmat.entries.items():
                        if j == j2:
                            prod[(i, l)] = prod.get((i, l), 0) + v * w
                assert all(v == 0 for v in prod.values())

    def test_negative_dimension_rejected(self):
        with pytest.raises(ValueError):
            boundary_matrix(SimplicialComplex(1, [(0,)]), -1)


class TestIntegerMatrix:
    def test_round_trip(self):
        dense = [[0, 2], [-3, 0]]
        m = IntegerMatrix.from_dense(dense)
        assert m.to_dense() == dense and m.nnz == 2

    def test_zero_entries_dropped(self):
        m = IntegerMatrix(2, 2, {(0, 0): 0, (1, 1): 5})
        assert m.entries == {(1, 1): 5}


class TestSmithNormalForm:
    def test_diag_two_three(self):
        assert smith_normal_form(IntegerMatrix.from_dense([[2, 0], [0, 3]])) == (2, (1, 6))

    def test_zero_matrix(self):
        assert smith_normal_form(IntegerMatrix.from_dense([[0, 0], [0, 0]])) == (0, ())

    def test_rank_one_multiple(self):
        assert smith_normal_form(IntegerMatrix.from_dense([[2, 4], [4, 8]])) == (1, (2,))

    def test_divisibility_chain_and_naive_agreement(self):
        rng = random.Random(6)
        for _ in range(250):
            rows = rng.randint(1, 5)
            cols = rng.randint(1, 5)
            scale = rng.choice([1, 1, 2, 6])
            dense = [
                [rng.randint(-4, 4) * scale for _ in range(cols)] for _ in range(rows)
            ]
            got = smith_normal_form(IntegerMatrix.from_dense(dense))
            assert got == naive_snf(dense)
            rank, factors = got
            assert rank == len(factors)
            for a, b in zip(factors, factors[1:]):
                assert b % a == 0

    def test_on_boundary_matrices(self):
        rng = random.Random(8)
        for _ in range(15):
            k = random_complex(rng)
            for d in range(0, k.dim + 1):
                m = boundary_matrix(k, d)
                assert smith_normal_form(m) == naive_snf(m.to_dense())


class TestReducedHomology:
    def test_two_spine_example_is_circle(self):
        g, b = gen_caterpillar(CaterpillarSpec((2, 1), (2, 1)))
        h = reduced_homology(build_complex(g, b))
        assert h == HomologyProfile({1: 1}, {})

    def test_empty_complex(self):
        h = reduced_homology(SimplicialComplex(0, []))
        assert h.betti == {-1: 1} and not h.torsion

    def test_two_isolated_points(self):
        h = reduced_homology(SimplicialComplex(2, [(0,), (1,)]))
        assert h.betti == {0: 1} and not h.torsion

    def test_circle_complex(self):
        h = reduced_homology(build_complex(gen_cycle(3), (1, 1, 1)))
        # the three edges pairwise intersect, so only singletons are faces:
        # three points, i.e. two reduced classes in dimension 0
        assert h.betti == {0: 2}

    def test_projective_plane_torsion(self):
        k = SimplicialComplex.from_maximal_faces(6, RP2_FACETS)
        h = reduced_homology(k)
        assert h.betti == {} and h.torsion == {1: (2,)}
        assert not h.is_torsion_free

    def test_matching_complex_of_k7(self):
        # classical: the 1-matching complex of the complete graph on 7
        # vertices has three-torsion in dimension 1 and free rank 20 above
        k7 = make_graph(7, list(itertools.combinations(range(7), 2)))
        h = reduced_homology(build_complex(k7, (1,) * 7))
        assert h.betti == {2: 20} and h.torsion == {1: (3,)}

    def test_betti_minus_one_flag(self):
        rng = random.Random(10)
        for _ in range(20):
            k = random_complex(rng)
            h = reduced_homology(k)
            assert h.betti.get(-1, 0) in (0, 1)
            assert (h.betti.get(-1) == 1) == (k.num_faces == 0)

    def test_agrees_with_fraction_rank_betti(self):
        rng = random.Random(12)
        for _ in range(25):
            k = random_complex(rng)
            h = reduced_homology(k)
            assert h.betti == betti_via_fraction_rank(k)
            assert not h.torsion

    def test_euler_consistency(self):
        rng = random.Random(14)
        ks = [random_complex(rng) for _ in range(20)]
        ks.append(SimplicialComplex.from_maximal_faces(6, RP2_FACETS))
        for k in ks:
            h = reduced_homology(k)
            euler = sum(
                b if d % 2 == 0 else -b for d, b in h.betti.items() if d >= 0
            ) - h.betti.get(-1, 0)
            total = -1
            for d in range(k.dim + 1):
                total += len(k.faces(d)) if d % 2 == 0 else -len(k.faces(d))
            assert euler == total


class TestWedgeProfile:
    def test_circle_profile(self):
        g, b = gen_caterpillar(CaterpillarSpec((2, 1), (2, 1)))
        assert wedge_profile(reduced_homology(build_complex(g, b))) == {1: 1}

    def test_contractible(self):
        assert wedge_profile(HomologyProfile({}, {})) == {}

    def test_torsion_is_not_wedge_consistent(self):
        k = SimplicialComplex.from_maximal_faces(6, RP2_FACETS)
        assert wedge_profile(reduced_homology(k)) is None


class TestExactFallback:
    def test_large_entries_stay_exact(self):
        # entries beyond the int64 fast-path cap must still come out exact
        big = 3 ** 50
        m = IntegerMatrix.from_dense([[big, 0], [0, big * 2]])
        rank, factors = smith_normal_form(m)
        assert rank == 2 and factors == (big, big * 2)

    def test_no_unit_entries(self):
        m = IntegerMatrix.from_dense([[2, 4], [6, 10]])
        assert smith_normal_form(m) == naive_snf([[2, 4], [6, 10]])
