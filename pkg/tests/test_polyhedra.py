import itertools
import random
from fractions import Fraction as F

import pytest

from conreach import polyhedra as ph
from conreach.exactla import RatMatrix, Subspace, rank, solve
from conreach.polyhedra import Polyhedron

from conftest import random_polyhedron


def brute_force_vertices(p):
    """Independent vertex enumeration: feasible basic solutions of the hrep."""
    dim = p.dim
    rows = [list(r) for r in p.ineq_rows] + [list(r) for r in p.eq_rows]
    rhs = list(p.ineq_rhs) + list(p.eq_rhs)
    vertices = set()
    for subset in itertools.combinations(range(len(rows)), dim):
        m = RatMatrix([rows[i] for i in subset])
        if rank(m) < dim:
            continue
        point = solve(m, [rhs[i] for i in subset])
        if point is not None and p.contains(point):
            vertices.add(tuple(point))
    return vertices


class TestConstruction:
    def test_box_vertices(self):
        box = Polyhedron.from_box([(-1, 1), (-1, 1)])
        assert set(box.vrep().vertices) == {(F(a), F(b)) for a in (-1, 1) for b in (-1, 1)}
        assert box.vrep().rays == () and box.vrep().lineality == ()

    def test_halfline(self):
        hl = Polyhedron.from_hrep(1, [[-1]], [0])
        assert hl.vrep().vertices == ((F(0),),)
        assert hl.vrep().rays == ((F(1),),)

    def test_point(self):
        p = Polyhedron.from_point([0, 0])
        assert p.vrep().vertices == ((F(0), F(0)),)

    def test_empty_detection(self):
        assert Polyhedron.from_hrep(1, [[1], [-1]], [-1, -1]).is_empty
        assert Polyhedron.from_hrep(2, [], [], [[0, 0]], [1]).is_empty

    def test_canonical_equality_across_builds(self):
        a = Polyhedron.from_hrep(2, [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1]],
                                 [1, 1, 1, 1, 5])
        b = Polyhedron.from_box([(-1, 1), (-1, 1)])
        assert a == b
        assert hash(a) == hash(b)

    def test_vrep_roundtrip(self):
        rng = random.Random(13)
        for _ in range(25):
            dim = rng.randint(1, 3)
            p = random_polyhedron(rng, dim)
            if p.is_empty:
                continue
            v = p.vrep()
            again = Polyhedron.from_vrep(dim, v.vertices, v.rays, v.lineality)
            assert again == p

    def test_vertices_against_brute_force(self):
        rng = random.Random(21)
        for _ in range(20):
            dim = rng.randint(1, 3)
            p = random_polyhedron(rng, dim, kinds=("hrep", "box"))
            if p.is_empty or not p.is_bounded() or p.eq_rows:
                continue
            assert set(p.vrep().vertices) == brute_force_vertices(p)


class TestPolar:
    def test_box_polar_is_cross(self):
        box = Polyhedron.from_box([(-1, 1), (-1, 1)])
        cross = Polyhedron.from_vrep(2, [(1, 0), (-1, 0), (0, 1), (0, -1)])
        assert ph.polar(box) == cross

    def test_polar_cones_of_solid_set(self):
        box = Polyhedron.from_box([(-1, 1), (-1, 1)])
        origin = Polyhedron.from_point([0, 0])
        assert ph.neg_polar_cone(box) == origin
        assert ph.pos_polar_cone(box) == origin

    def test_polar_of_universe(self):
        assert ph.polar(Polyhedron.universe(2)) == Polyhedron.from_point([0, 0])

    def test_polar_needs_origin(self):
        shifted = Polyhedron.from_box([(1, 2)])
        with pytest.raises(ValueError):
            ph.polar(shifted)

    def test_polar_membership_via_support(self):
        # q in polar(P) iff sup <q, x> over P is at most 1 (LP oracle)
        from conreach import lp
        rng = random.Random(31)
        for _ in range(15):
            dim = rng.randint(1, 3)
            p = random_polyhedron(rng, dim)
            if p.is_empty or not p.contains([0] * dim):
                continue
            pol = ph.polar(p)
            for _ in range(5):
                q = [F(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(dim)]
                res = lp.solve_lp(q, [list(r) for r in p.ineq_rows], list(p.ineq_rhs),
                                  [list(r) for r in p.eq_rows], list(p.eq_rhs))
                bounded_by_one = res.status == lp.OPTIMAL and res.value <= 1
                assert pol.contains(q) == bounded_by_one


class TestRecessionBarrier:
    def test_bounded_set(self):
        box = Polyhedron.from_box([(-1, 1), (-1, 1)])
        assert ph.recession_cone(box) == Polyhedron.from_point([0, 0])
        assert ph.barrier_cone(box).is_universe()

    def test_ex6_recession(self, ex6_graph):
        rc = ph.recession_cone(ex6_graph)
        assert rc.vrep().rays == ((F(0), F(1)),)

    def test_cone_is_own_recession(self):
        cone = Polyhedron.from_hrep(2, [[-1, 0], [0, -1]], [0, 0])
        assert ph.recession_cone(cone) == cone

    def test_halfline_barrier(self):
        hl = Polyhedron.from_hrep(1, [[-1]], [0])
        assert ph.barrier_cone(hl) == Polyhedron.from_hrep(1, [[1]], [0])

    def test_universe_barrier(self):
        assert ph.barrier_cone(Polyhedron.universe(2)) == Polyhedron.from_point([0, 0])


class TestConicHull:
    def test_solid_box(self):
        assert ph.conic_hull(Polyhedron.from_box([(-1, 1), (-1, 1)])).is_universe()

    def test_segment(self):
        seg = Polyhedron.from_vrep(2, [(1, 0), (1, 1)])
        cone = ph.conic_hull(seg)
        assert cone == Polyhedron.from_vrep(2, [(0, 0)], [(1, 0), (1, 1)])

    def test_origin(self):
        assert ph.conic_hull(Polyhedron.from_point([0, 0])) == Polyhedron.from_point([0, 0])


class TestInterior:
    def test_box_solid(self):
        solid, witness = ph.interior_queries(Polyhedron.from_box([(-1, 1), (-1, 1)]))
        assert solid and witness == (F(0), F(0))

    def test_point_not_solid(self):
        solid, witness = ph.interior_queries(Polyhedron.from_point([0, 0]))
        assert not solid and witness is None

    def test_subspace_meets_interior(self):
        box = Polyhedron.from_box([(-1, 1), (-1, 1)])
        ok, witness = ph.subspace_meets_interior(Subspace(2, [[1, 0]]), box)
        assert ok and box.contains(witness, strict=True)

    def test_subspace_misses_slab(self):
        slab = Polyhedron.from_hrep(2, [[0, 1], [0, -1], [1, 0], [-1, 0]],
                                    [1, 1, 2, 0])
        # the slab here is 0 <= y1 <= 2: the axis span{e2} touches only its boundary
        ok, _ = ph.subspace_meets_interior(Subspace(2, [[0, 1]]), slab)
        assert not ok


class TestTransforms:
    def test_identity_image(self):
        box = Polyhedron.from_box([(-1, 1), (-1, 1)])
        assert ph.linear_transform("image", RatMatrix.identity(2), box) == box

    def test_ex1_output_preimage(self):
        cd = RatMatrix([[0, 0, 1], [0, 1, 0]])  # [C D] with x2, u reordered as (x1,x2,u)
        box = Polyhedron.from_box([(-1, 1), (-1, 1)])
        pre = ph.linear_transform("preimage", cd, box)
        assert pre == Polyhedron.from_hrep(3, [[0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]],
                                           [1, 1, 1, 1])

    def test_sum_map_image(self):
        box = Polyhedron.from_box([(-1, 1), (-1, 1)])
        img = ph.linear_transform("image", RatMatrix([[1, 1]]), box)
        assert img == Polyhedron.from_box([(-2, 2)])


class TestSetAlgebra:
    def test_minkowski(self):
        seg = Polyhedron.from_box([(-1, 1)])
        assert ph.minkowski_sum(seg, seg) == Polyhedron.from_box([(-2, 2)])

    def test_product(self):
        seg = Polyhedron.from_box([(-1, 1)])
        assert ph.product(seg, seg) == Polyhedron.from_box([(-1, 1), (-1, 1)])

    def test_subset(self):
        small = Polyhedron.from_box([(-1, 1), (-1, 1)])
        big = Polyhedron.from_box([(-2, 2), (-2, 2)])
        assert ph.subset_eq(small, big)
        assert not ph.subset_eq(big, small)

    def test_dispatcher(self):
        seg = Polyhedron.from_box([(-1, 1)])
        assert ph.set_algebra("minkowski_sum", seg, seg) == Polyhedron.from_box([(-2, 2)])
        assert ph.set_algebra("contains_point", seg, [F(1, 2)])
        assert ph.set_algebra("equal", seg, seg)


class TestHyperbolicity:
    def test_box(self):
        assert ph.hyperbolicity_witness(Polyhedron.from_box([(-1, 1), (-1, 1)])) == 1

    def test_cone(self):
        assert ph.hyperbolicity_witness(Polyhedron.from_hrep(1, [[-1]], [0])) == 0

    def test_shifted_ray(self):
        p = Polyhedron.from_vrep(2, [(3, 0)], [(0, 1)])
        assert ph.hyperbolicity_witness(p) == 3


class TestProjection:
    def test_projection_matches_fm(self):
        rng = random.Random(17)
        for _ in range(20):
            dim = rng.randint(2, 4)
            p = random_polyhedron(rng, dim)
            keep = sorted(rng.sample(range(dim), rng.randint(1, dim - 1)))
            assert ph.project(p, keep) == ph.project_fm(p, keep)

    def test_collapse_to_line(self):
        p = Polyhedron.from_hrep(2, [[1, 1], [-1, -1]], [1, 1])
        assert ph.project(p, [0]).is_universe()


class TestPropertySuite:
    def test_polar_involution(self):
        rng = random.Random(101)
        done = 0
        while done < 40:
            dim = rng.randint(1, 4)
            p = random_polyhedron(rng, dim)
            if p.is_empty or not p.contains([0] * dim):
                continue
            assert ph.polar(ph.polar(p)) == p
            done += 1

    def test_boundedness_iff_trivial_recession(self):
        rng = random.Random(102)
        done = 0
        while done < 40:
            dim = rng.randint(1, 4)
            p = random_polyhedron(rng, dim)
            if p.is_empty:
                continue
            rc = ph.recession_cone(p)
            origin = Polyhedron.from_point([0] * dim)
            assert (rc == origin) == p.is_bounded()
            done += 1

    def test_dd_roundtrip(self):
        rng = random.Random(103)
        done = 0
        while done < 40:
            dim = rng.randint(1, 4)
            p = random_polyhedron(rng, dim)
            if p.is_empty:
                continue
            v = p.vrep()
            assert Polyhedron.from_vrep(dim, v.vertices, v.rays, v.lineality) == p
            done += 1

    def test_minkowski_with_recession_fixed_point(self):
        rng = random.Random(104)
        done = 0
        while done < 30:
            dim = rng.randint(1, 3)
            p = random_polyhedron(rng, dim)
            if p.is_empty:
                continue
            assert ph.minkowski_sum(p, ph.recession_cone(p)) == p
            done += 1

    def test_hyperbolic_containment(self):
        rng = random.Random(105)
        done = 0
        while done < 30:
            dim = rng.randint(1, 3)
            p = random_polyhedron(rng, dim)
            if p.is_empty:
                continue
            mu = ph.hyperbolicity_witness(p)
            ball = Polyhedron.from_box([(-mu, mu)] * dim)
            cover = ph.minkowski_sum(ball, ph.recession_cone(p))
            assert ph.subset_eq(p, cover)
            done += 1

    def test_barrier_of_cone_is_neg_polar(self):
        rng = random.Random(106)
        done = 0
        while done < 25:
            dim = rng.randint(1, 4)
            p = random_polyhedron(rng, dim, kinds=("cone",))
            if p.is_empty:
                continue
            assert ph.barrier_cone(p) == ph.neg_polar_cone(p)
            done += 1

    def test_mutual_containment_of_reps(self):
        rng = random.Random(107)
        done = 0
        while done < 25:
            dim = rng.randint(1, 4)
            p = random_polyhedron(rng, dim)
            if p.is_empty:
                continue
            v = p.vrep()
            for vertex in v.vertices:
                assert p.contains(vertex)
            for ray in v.rays:
                assert all(ph._dot(row, ray) <= 0 for row in p.ineq_rows)
                assert all(ph._dot(row, ray) == 0 for row in p.eq_rows)
            for line in v.lineality:
                assert all(ph._dot(row, line) == 0
                           for row in list(p.ineq_rows) + list(p.eq_rows))
            done += 1


class TestSerialization:
    def test_roundtrip(self):
        box = Polyhedron.from_box([(-1, 1), (-1, 1)])
        assert Polyhedron.from_dict(box.to_dict()) == box

    def test_empty_roundtrip(self):
        empty = Polyhedron.empty_set(2)
        assert Polyhedron.from_dict(empty.to_dict()).is_empty

    def test_vrep_emission(self):
        box = Polyhedron.from_box([(-1, 1)])
        d = box.to_dict(include_vrep=True)
        assert d["vrep"]["vertices"] == [["-1"], ["1"]]
