import random
from fractions import Fraction as F

import pytest

from conreach.exactla import (PencilError, RatMatrix, RationalFormatError, Subspace,
                              algebraic_pencil_rank, charpoly, decompose, det,
                              format_rat, hstack, kernel_basis, parse_rat,
                              pencil_candidates, rank, real_eigen, solve, sub_contains,
                              sub_intersect, sub_perp, sub_preimage, sub_sum,
                              subspace_algebra, vstack)


class TestRationals:
    def test_parse_canonical(self):
        assert parse_rat("2/3") == F(2, 3)
        assert parse_rat("-5") == F(-5)
        assert parse_rat("0") == 0

    @pytest.mark.parametrize("bad", ["2/4", "1/0", "-3/6", "3/-2", "01", "+3", "1.5", ""])
    def test_parse_rejects_noncanonical(self, bad):
        with pytest.raises(RationalFormatError):
            parse_rat(bad)

    def test_roundtrip(self):
        for value in [F(7, 2), F(-1, 3), F(4), F(0)]:
            assert parse_rat(format_rat(value)) == value


class TestDecompose:
    def test_identity(self):
        rk, ker, img = decompose(RatMatrix.identity(2))
        assert rk == 2 and ker.dim == 0 and img == Subspace.full(2)

    def test_single_row(self):
        # transpose of the feedthrough column of the worked 2-state example
        rk, ker, img = decompose(RatMatrix([[1, 0]]))
        assert ker == Subspace(2, [[0, 1]])
        assert img == Subspace.full(1)

    def test_rank_one(self):
        rk, ker, img = decompose(RatMatrix([[2, 4], [1, 2]]))
        assert rk == 1
        assert ker.contains_vector([2, -1])
        assert ker.dim == 1

    def test_kernel_annihilates(self):
        rng = random.Random(3)
        for _ in range(25):
            rows = rng.randint(1, 4)
            cols = rng.randint(1, 4)
            m = RatMatrix([[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)])
            rk, ker, img = decompose(m)
            assert rk + ker.dim == cols
            for vec in ker.basis_vectors():
                assert all(x == 0 for x in m.apply(vec))
            for col in m.columns():
                assert img.contains_vector(col)


class TestSubspaceAlgebra:
    def test_sum_intersect(self):
        e1 = Subspace(2, [[1, 0]])
        e2 = Subspace(2, [[0, 1]])
        assert subspace_algebra("sum", e1, e2) == Subspace.full(2)
        assert subspace_algebra("intersect", e1, e2) == Subspace.zero(2)

    def test_preimage_swap(self):
        swap = RatMatrix([[0, 1], [1, 0]])
        assert subspace_algebra("preimage", swap, Subspace(2, [[1, 0]])) == Subspace(2, [[0, 1]])

    def test_contains(self):
        big = Subspace(3, [[1, 0, 0], [0, 1, 0]])
        assert sub_contains(big, Subspace(3, [[1, 1, 0]]))
        assert not sub_contains(big, [0, 0, 1])

    def test_lattice_properties(self):
        rng = random.Random(11)
        for _ in range(30):
            dim = rng.randint(1, 4)
            mk = lambda: Subspace(dim, [[rng.randint(-2, 2) for _ in range(dim)]
                                        for _ in range(rng.randint(0, dim))])
            s1, s2 = mk(), mk()
            assert sub_sum(s1, s1) == s1
            assert sub_perp(sub_perp(s1)) == s1
            assert (sub_sum(s1, s2).dim + sub_intersect(s1, s2).dim
                    == s1.dim + s2.dim)

    def test_canonical_equality(self):
        a = Subspace(3, [[1, 1, 0], [0, 1, 1]])
        b = Subspace(3, [[1, 2, 1], [2, 3, 1]])
        assert a == b
        assert hash(a) == hash(b)


class TestSolveDet:
    def test_solve(self):
        m = RatMatrix([[2, 1], [1, 1]])
        assert m.apply(solve(m, [F(3), F(2)])) == (F(3), F(2))

    def test_solve_inconsistent(self):
        assert solve(RatMatrix([[1, 1], [2, 2]]), [F(1), F(3)]) is None

    def test_det(self):
        assert det(RatMatrix([[2, 1], [1, 1]])) == 1
        assert det(RatMatrix([[1, 2], [2, 4]])) == 0


class TestRealEigen:
    def test_swap_matrix(self):
        eigs = real_eigen(RatMatrix([[0, 1], [1, 0]]))
        assert [(round(v), a, g) for v, a, g in eigs] == [(-1, 1, 1), (1, 1, 1)]

    def test_zero_matrix(self):
        assert real_eigen(RatMatrix.zeros(2, 2)) == [(0.0, 2, 2)]

    def test_scalar(self):
        assert real_eigen(RatMatrix([[2]])) == [(2.0, 1, 1)]

    def test_integer_spectrum_matches_charpoly(self):
        rng = random.Random(5)
        for _ in range(10):
            diag = [rng.randint(-3, 3) for _ in range(3)]
            basis = RatMatrix([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
            inv = RatMatrix([[F(1, 2), -F(1, 2), F(1, 2)],
                             [F(1, 2), F(1, 2), -F(1, 2)],
                             [-F(1, 2), F(1, 2), F(1, 2)]])
            d = RatMatrix([[diag[i] if i == j else 0 for j in range(3)] for i in range(3)])
            m = basis @ d @ inv
            coeffs = charpoly(m)
            eigs = real_eigen(m, tol=1e-9)
            total = sum(a for _, a, _ in eigs)
            assert total == 3
            for value, amult, gmult in eigs:
                # every numeric eigenvalue is a root of the exact polynomial
                horner = F(0)
                x = F(round(value))
                for c in reversed(coeffs):
                    horner = horner * x + c
                assert horner == 0
                assert 1 <= gmult <= amult

    def test_nonsquare_rejected(self):
        with pytest.raises(ValueError):
            real_eigen(RatMatrix([[1, 2]]))


class TestPencil:
    def test_rank_drop_at_zero(self):
        res = pencil_candidates(RatMatrix([[0]]), RatMatrix([[1]]), (F(0), None))
        assert res.kind == "finite"
        assert [c.exact for c in res.candidates] == [F(0)]

    def test_drop_outside_interval(self):
        res = pencil_candidates(RatMatrix([[2]]), RatMatrix([[1]]), (F(0), F(1)))
        assert res.kind == "finite" and res.candidates == ()

    def test_common_kernel(self):
        res = pencil_candidates(RatMatrix([[0]]), RatMatrix([[0]]), (F(0), None))
        assert res.kind == "singular"
        assert res.common_kernel == Subspace.full(1)

    def test_irrational_candidate(self):
        m = RatMatrix([[0, 1], [2, 0]])
        res = pencil_candidates(m, RatMatrix.identity(2), (F(0), None))
        assert res.kind == "finite"
        assert len(res.candidates) == 1
        cand = res.candidates[0]
        assert cand.exact is None
        assert cand.minpoly == (F(-2), F(0), F(1))
        assert abs(cand.value - 2 ** 0.5) < 1e-9

    def test_exact_rank_verification(self):
        rng = random.Random(9)
        for _ in range(10):
            m = RatMatrix([[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)])
            n = RatMatrix([[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)])
            res = pencil_candidates(m, n, (F(0), None))
            if res.kind != "finite":
                continue
            for cand in res.candidates:
                if cand.exact is not None:
                    assert rank(m - n.scale(cand.exact)) < res.generic_rank
                else:
                    assert algebraic_pencil_rank(m, n, cand.minpoly) < res.generic_rank


class TestAlgebraicRank:
    def test_sqrt2_rank(self):
        # [[0,1],[2,0]] - sqrt(2) I has rank 1 over Q(sqrt 2)
        m = RatMatrix([[0, 1], [2, 0]])
        assert algebraic_pencil_rank(m, RatMatrix.identity(2), [F(-2), F(0), F(1)]) == 1

    def test_extra_rows(self):
        m = RatMatrix([[0, 1], [2, 0]])
        extra = RatMatrix([[1, 0]])
        assert algebraic_pencil_rank(m, RatMatrix.identity(2), [F(-2), F(0), F(1)],
                                     extra_rows=extra) == 2
