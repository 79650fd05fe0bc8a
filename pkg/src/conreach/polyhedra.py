"""Exact polyhedral convex-set calculus in dual description.

A polyhedron is {y : G y <= h, E y = f} == conv(V) + cone(R) + span(L), with
all data rational.  Canonicalization runs through the double description
method in both directions: the homogenization cone yields the generators, the
polar cone of those generators yields the unique irredundant constraint form
(implicit equalities in reduced row echelon form, inequality normals reduced
modulo the equality space, primitive-integer scaling, lexicographic order).
Set equality is therefore bitwise equality of the stored constraints.

Empty sets carry an explicit marker; operations on empty sets return empty
(or False) rather than raising, except where documented otherwise.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

from conreach import lp
from conreach.exactla import (RatMatrix, Subspace, as_rat, format_rat,
                              kernel_basis, parse_rat, rref)

Vec = tuple[Fraction, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _vec(values) -> Vec:
    return tuple(as_rat(x) for x in values)


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), _ZERO)


def _vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def _vscale(a: Vec, c: Fraction) -> Vec:
    return tuple(c * x for x in a)


def _is_zero_vec(a: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in a)


def _primitive(vec: Vec) -> Vec:
    """Scale by the unique positive rational giving an integer vector, gcd 1."""
    if _is_zero_vec(vec):
        return vec
    denom_lcm = 1
    for x in vec:
        denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
    ints = [int(x * denom_lcm) for x in vec]
    g = reduce(gcd, (abs(v) for v in ints))
    return tuple(Fraction(v, g) for v in ints)


class VRep:
    """Generator description: conv(vertices) + cone(rays) + span(lineality)."""

    __slots__ = ("vertices", "rays", "lineality")

    def __init__(self, vertices: Sequence[Vec], rays: Sequence[Vec], lineality: Sequence[Vec]):
        object.__setattr__(self, "vertices", tuple(vertices))
        object.__setattr__(self, "rays", tuple(rays))
        object.__setattr__(self, "lineality", tuple(lineality))

    def __setattr__(self, name, value):
        raise AttributeError("VRep is immutable")

    def generators(self) -> list[Vec]:
        return list(self.vertices) + list(self.rays) + list(self.lineality)

    def to_dict(self) -> dict:
        fmt = lambda vs: [[format_rat(x) for x in v] for v in vs]
        return {"vertices": fmt(self.vertices), "rays": fmt(self.rays),
                "lineality": fmt(self.lineality)}


class Polyhedron:
    """Convex polyhedron over the rationals, canonical constraint form."""

    __slots__ = ("dim", "ineq_rows", "ineq_rhs", "eq_rows", "eq_rhs",
                 "is_empty", "_vrep")

    def __init__(self, dim, ineq_rows, ineq_rhs, eq_rows, eq_rhs, is_empty):
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "ineq_rows", tuple(ineq_rows))
        object.__setattr__(self, "ineq_rhs", tuple(ineq_rhs))
        object.__setattr__(self, "eq_rows", tuple(eq_rows))
        object.__setattr__(self, "eq_rhs", tuple(eq_rhs))
        object.__setattr__(self, "is_empty", is_empty)
        object.__setattr__(self, "_vrep", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polyhedron is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_hrep(cls, dim: int, ineq_rows=(), ineq_rhs=(), eq_rows=(), eq_rhs=()) -> "Polyhedron":
        g = [_vec(r) for r in ineq_rows]
        h = [as_rat(x) for x in ineq_rhs]
        e = [_vec(r) for r in eq_rows]
        f = [as_rat(x) for x in eq_rhs]
        if any(len(r) != dim for r in g + e):
            raise ValueError("constraint row length differs from dimension")
        if len(g) != len(h) or len(e) != len(f):
            raise ValueError("constraint rows and right-hand sides disagree")
        gens = _generators_from_system(dim, g, h, e, f)
        if gens is None:
            return cls.empty_set(dim)
        vrep = _canonical_vrep(dim, *gens)
        poly = _from_generators_canonical(dim, vrep)
        object.__setattr__(poly, "_vrep", vrep)
        return poly

    @classmethod
    def from_vrep(cls, dim: int, vertices=(), rays=(), lineality=()) -> "Polyhedron":
        vs = [_vec(v) for v in vertices]
        rs = [_vec(r) for r in rays]
        ls = [_vec(l) for l in lineality]
        if any(len(v) != dim for v in vs + rs + ls):
            raise ValueError("generator length differs from dimension")
        if not vs:
            if rs or ls:
                raise ValueError("rays or lineality without a base point")
            return cls.empty_set(dim)
        return _from_generators_canonical(dim, VRep(vs, rs, ls))

    @classmethod
    def universe(cls, dim: int) -> "Polyhedron":
        return cls(dim, (), (), (), (), False)

    @classmethod
    def empty_set(cls, dim: int) -> "Polyhedron":
        return cls(dim, (), (), (), (), True)

    @classmethod
    def from_box(cls, bounds: Sequence[tuple]) -> "Polyhedron":
        dim = len(bounds)
        g, h = [], []
        for i, (lo, hi) in enumerate(bounds):
            row = [_ZERO] * dim
            if hi is not None:
                g.append(tuple(row[:i] + [_ONE] + row[i + 1:]))
                h.append(as_rat(hi))
            if lo is not None:
                g.append(tuple(row[:i] + [-_ONE] + row[i + 1:]))
                h.append(-as_rat(lo))
        return cls.from_hrep(dim, g, h)

    @classmethod
    def from_point(cls, point) -> "Polyhedron":
        p = _vec(point)
        dim = len(p)
        eye = RatMatrix.identity(dim).data
        return cls.from_hrep(dim, eq_rows=eye, eq_rhs=list(p))

    @classmethod
    def from_subspace(cls, sub: Subspace) -> "Polyhedron":
        from conreach.exactla import sub_perp
        normals = sub_perp(sub).basis_vectors()
        return cls.from_hrep(sub.ambient_dim, eq_rows=normals,
                             eq_rhs=[_ZERO] * len(normals))

    # -- basic queries -----------------------------------------------------

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polyhedron) and self.dim == other.dim
                and self.is_empty == other.is_empty
                and self.ineq_rows == other.ineq_rows and self.ineq_rhs == other.ineq_rhs
                and self.eq_rows == other.eq_rows and self.eq_rhs == other.eq_rhs)

    def __hash__(self) -> int:
        return hash((self.dim, self.is_empty, self.ineq_rows, self.ineq_rhs,
                     self.eq_rows, self.eq_rhs))

    def __repr__(self) -> str:
        if self.is_empty:
            return f"Polyhedron(empty, dim={self.dim})"
        return (f"Polyhedron(dim={self.dim}, ineqs={len(self.ineq_rows)}, "
                f"eqs={len(self.eq_rows)})")

    def contains(self, point, strict: bool = False) -> bool:
        if self.is_empty:
            return False
        p = _vec(point)
        if len(p) != self.dim:
            raise ValueError("point dimension mismatch")
        for row, b in zip(self.eq_rows, self.eq_rhs):
            if _dot(row, p) != b:
                return False
        for row, b in zip(self.ineq_rows, self.ineq_rhs):
            v = _dot(row, p)
            if v > b or (strict and v == b):
                return False
        if strict and self.eq_rows:
            return False
        return True

    def is_cone(self) -> bool:
        return (not self.is_empty and all(b == 0 for b in self.ineq_rhs)
                and all(b == 0 for b in self.eq_rhs))

    def is_universe(self) -> bool:
        return not self.is_empty and not self.ineq_rows and not self.eq_rows

    def is_bounded(self) -> bool:
        if self.is_empty:
            return True
        v = self.vrep()
        return not v.rays and not v.lineality

    def relint_point(self) -> Vec | None:
        """A relative-interior point: vertex barycenter plus the ray sum."""
        if self.is_empty:
            return None
        v = self.vrep()
        count = Fraction(len(v.vertices))
        point = tuple(sum((vert[j] for vert in v.vertices), _ZERO) / count
                      for j in range(self.dim))
        for ray in v.rays:
            point = _vadd(point, ray)
        return point

    def vrep(self) -> VRep:
        if self.is_empty:
            return VRep((), (), ())
        if self._vrep is None:
            gens = _generators_from_system(self.dim, list(self.ineq_rows),
                                           list(self.ineq_rhs), list(self.eq_rows),
                                           list(self.eq_rhs))
            if gens is None:
                raise ArithmeticError("canonical nonempty polyhedron has no generators")
            object.__setattr__(self, "_vrep", _canonical_vrep(self.dim, *gens))
        return self._vrep

    # -- serialization -----------------------------------------------------

    def to_dict(self, include_vrep: bool = False) -> dict:
        rows = lambda rr: [[format_rat(x) for x in r] for r in rr]
        scal = lambda hh: [format_rat(x) for x in hh]
        if self.is_empty:
            d = {"dim": self.dim,
                 "ineq": {"G": [], "h": []},
                 "eq": {"E": [[format_rat(_ZERO)] * self.dim], "f": [format_rat(_ONE)]},
                 "empty": True}
        else:
            d = {"dim": self.dim,
                 "ineq": {"G": rows(self.ineq_rows), "h": scal(self.ineq_rhs)},
                 "eq": {"E": rows(self.eq_rows), "f": scal(self.eq_rhs)}}
        if include_vrep and not self.is_empty:
            d["vrep"] = self.vrep().to_dict()
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "Polyhedron":
        dim = int(data["dim"])
        ineq = data.get("ineq") or {"G": [], "h": []}
        eq = data.get("eq") or {"E": [], "f": []}
        g = [[parse_rat(x) for x in row] for row in ineq.get("G", [])]
        h = [parse_rat(x) for x in ineq.get("h", [])]
        e = [[parse_rat(x) for x in row] for row in eq.get("E", [])]
        f = [parse_rat(x) for x in eq.get("f", [])]
        return cls.from_hrep(dim, g, h, e, f)


# ---------------------------------------------------------------------------
# double description core
# ---------------------------------------------------------------------------

def _dd_cone(dim: int, rows: list[Vec]) -> tuple[list[Vec], list[Vec]]:
    """Extreme rays and lineality basis of {x : a.x <= 0 for a in rows}.

    Incremental insertion; rays are kept primitive-integer to bound growth.
    Redundant input rows are harmless.
    """
    lin: list[Vec] = [tuple(_ONE if i == j else _ZERO for j in range(dim))
                      for i in range(dim)]
    rays: list[Vec] = []
    processed: list[Vec] = []
    for a in rows:
        if _is_zero_vec(a):
            continue
        scores = [_dot(a, l) for l in lin]
        hit = next((j for j, s in enumerate(scores) if s != 0), None)
        if hit is not None:
            l0 = _vscale(lin[hit], -1 / scores[hit])  # a.l0 == -1
            lin = [_vadd(l, _vscale(l0, _dot(a, l))) for j, l in enumerate(lin) if j != hit]
            rays = [_primitive(_vadd(r, _vscale(l0, _dot(a, r)))) for r in rays]
            rays = [r for r in rays if not _is_zero_vec(r)]
            rays.append(_primitive(l0))
        else:
            scores_r = [_dot(a, r) for r in rays]
            if any(s > 0 for s in scores_r):
                keep = [r for r, s in zip(rays, scores_r) if s <= 0]
                pos = [(r, s) for r, s in zip(rays, scores_r) if s > 0]
                neg = [(r, s) for r, s in zip(rays, scores_r) if s < 0]
                masks = {id(r): _zero_mask(r, processed) for r in rays}
                new_rays = list(keep)
                for rp, sp in pos:
                    for rn, sn in neg:
                        common = masks[id(rp)] & masks[id(rn)]
                        if _adjacent(common, rays, rp, rn, masks):
                            combo = _primitive(_vadd(_vscale(rn, sp), _vscale(rp, -sn)))
                            if not _is_zero_vec(combo):
                                new_rays.append(combo)
                seen = set()
                rays = []
                for r in new_rays:
                    if r not in seen:
                        seen.add(r)
                        rays.append(r)
        processed.append(a)
    return rays, lin


def _zero_mask(ray: Vec, processed: list[Vec]) -> int:
    mask = 0
    for idx, a in enumerate(processed):
        if _dot(a, ray) == 0:
            mask |= 1 << idx
    return mask


def _adjacent(common: int, rays: list[Vec], rp: Vec, rn: Vec, masks) -> bool:
    for r in rays:
        if r is rp or r is rn:
            continue
        if masks[id(r)] & common == common:
            return False
    return True


def _restrict_to_kernel(dim, ineq_rows, eq_rows):
    """Substitute x = W z for W a kernel basis of the equality rows."""
    if not eq_rows:
        return RatMatrix.identity(dim), [tuple(r) for r in ineq_rows]
    w = kernel_basis(RatMatrix([list(r) for r in eq_rows]))
    cols = w.cols
    mapped = []
    for a in ineq_rows:
        mapped.append(tuple(_dot(a, w.column(j)) for j in range(cols)))
    return w, mapped


def _generators_from_system(dim, g, h, e, f):
    """Raw generators of {y: Gy <= h, Ey = f}, or None when empty."""
    hom_ineq = [tuple(list(row) + [-b]) for row, b in zip(g, h)]
    hom_ineq.append(tuple([_ZERO] * dim + [-_ONE]))  # t >= 0
    hom_eq = [tuple(list(row) + [-b]) for row, b in zip(e, f)]
    w, rows = _restrict_to_kernel(dim + 1, hom_ineq, hom_eq)
    rays_z, lin_z = _dd_cone(w.cols, rows)
    rays = [w.apply(z) for z in rays_z]
    lins = [w.apply(z) for z in lin_z]
    vertices, rec_rays, lineality = [], [], []
    for vec in lins:
        if vec[dim] != 0:
            raise ArithmeticError("homogenization lineality with nonzero height")
        if not _is_zero_vec(vec[:dim]):
            lineality.append(vec[:dim])
    for vec in rays:
        t = vec[dim]
        if t > 0:
            vertices.append(tuple(x / t for x in vec[:dim]))
        elif t == 0:
            if not _is_zero_vec(vec[:dim]):
                rec_rays.append(vec[:dim])
        else:
            raise ArithmeticError("homogenization ray with negative height")
    if not vertices:
        return None
    return vertices, rec_rays, lineality


def _canonical_vrep(dim, vertices, rays, lineality) -> VRep:
    """Vertices/rays reduced modulo the lineality space, scaled and sorted."""
    lin_sub = Subspace(dim, lineality)
    lin_basis = lin_sub.basis_vectors()
    pivots = [next(i for i, x in enumerate(vec) if x != 0) for vec in lin_basis]

    def reduce_mod_lin(v: Vec) -> Vec:
        out = list(v)
        for piv, basis_vec in zip(pivots, lin_basis):
            coeff = out[piv] / basis_vec[piv]
            if coeff != 0:
                out = [x - coeff * y for x, y in zip(out, basis_vec)]
        return tuple(out)

    vs = sorted({reduce_mod_lin(v) for v in vertices})
    rs = set()
    for r in rays:
        r2 = _primitive(reduce_mod_lin(r))
        if not _is_zero_vec(r2):
            rs.add(r2)
    return VRep(tuple(vs), tuple(sorted(rs)), tuple(lin_basis))


def _from_generators_canonical(dim, vrep: VRep) -> Polyhedron:
    """Canonical constraint form through the polar of the homogenization."""
    rows = [tuple(list(v) + [_ONE]) for v in vrep.vertices]
    rows += [tuple(list(r) + [_ZERO]) for r in vrep.rays]
    eq_rows = [tuple(list(l) + [_ZERO]) for l in vrep.lineality]
    w, mapped = _restrict_to_kernel(dim + 1, rows, eq_rows)
    polar_rays, polar_lin = _dd_cone(w.cols, mapped)

    eqs = []
    for z in polar_lin:
        vec = w.apply(z)
        if _is_zero_vec(vec):
            continue
        eqs.append((vec[:dim], -vec[dim]))
    eq_rows_c, eq_rhs_c = _canonical_equalities(dim, eqs)
    if eq_rows_c is None:
        raise ArithmeticError("generator polar produced an inconsistent equality")

    bucket = {}
    for z in polar_rays:
        vec = w.apply(z)
        row, rhs = _reduce_mod_equalities(vec[:dim], -vec[dim], eq_rows_c, eq_rhs_c)
        if _is_zero_vec(row):
            if rhs < 0:
                raise ArithmeticError("generator polar produced an infeasible row")
            continue
        scaled = _primitive(row)
        factor = next(x2 / x1 for x1, x2 in zip(row, scaled) if x1 != 0)
        value = rhs * factor
        if scaled not in bucket or value < bucket[scaled]:
            bucket[scaled] = value
    rows_sorted = sorted(bucket.items())
    return Polyhedron(dim, tuple(r for r, _ in rows_sorted),
                      tuple(b for _, b in rows_sorted),
                      tuple(eq_rows_c), tuple(eq_rhs_c), False)


def _canonical_equalities(dim, eqs):
    if not eqs:
        return [], []
    aug = RatMatrix([list(r) + [b] for r, b in eqs])
    reduced, pivots = rref(aug)
    if dim in pivots:
        return None, None
    rows, rhs = [], []
    for i in range(len(pivots)):
        rows.append(tuple(reduced.data[i][:dim]))
        rhs.append(reduced.data[i][dim])
    return rows, rhs


def _reduce_mod_equalities(row: Vec, b: Fraction, eq_rows, eq_rhs):
    """Eliminate the equality pivot coordinates from an inequality row."""
    row = list(row)
    for e_row, e_b in zip(eq_rows, eq_rhs):
        pivot = next(j for j, x in enumerate(e_row) if x != 0)
        coeff = row[pivot]
        if coeff != 0:
            factor = coeff / e_row[pivot]
            row = [x - factor * y for x, y in zip(row, e_row)]
            b = b - factor * e_b
    return tuple(row), b


def dd_convert(p: Polyhedron) -> Polyhedron:
    """Force both representations; returns the same (cached) polyhedron."""
    p.vrep()
    return p


# ---------------------------------------------------------------------------
# projection
# ---------------------------------------------------------------------------

def _project_raw(dim, g, h, e, f, keep: Sequence[int]) -> Polyhedron:
    """Project a raw (possibly redundant) system onto the kept coordinates."""
    gens = _generators_from_system(dim, g, h, e, f)
    if gens is None:
        return Polyhedron.empty_set(len(keep))
    vertices, rays, lineality = gens
    pick = lambda v: tuple(v[i] for i in keep)
    return Polyhedron.from_vrep(len(keep), [pick(v) for v in vertices],
                                [pick(r) for r in rays], [pick(l) for l in lineality])


def project(p: Polyhedron, keep: Sequence[int]) -> Polyhedron:
    """Orthogonal projection onto the listed coordinates (in their order)."""
    if p.is_empty:
        return Polyhedron.empty_set(len(keep))
    v = p.vrep()
    pick = lambda vec: tuple(vec[i] for i in keep)
    return Polyhedron.from_vrep(len(keep), [pick(x) for x in v.vertices],
                                [pick(r) for r in v.rays],
                                [pick(l) for l in v.lineality])


def _fm_eliminate(dim, g, h, e, f, drop: Sequence[int]):
    """Fourier-Motzkin elimination of the listed coordinates.

    Equality pivots are substituted first; genuine elimination steps run an
    LP-based redundancy sweep to keep growth in check.  Kept as an
    independent oracle for the generator-based projection.
    """
    g = [list(r) for r in g]
    h = list(h)
    e = [list(r) for r in e]
    f = list(f)
    alive = list(range(dim))
    for target in sorted(drop, reverse=True):
        col = alive.index(target)
        pivot_row = next((i for i, row in enumerate(e) if row[col] != 0), None)
        if pivot_row is not None:
            p_row, p_rhs = e.pop(pivot_row), f.pop(pivot_row)
            inv = 1 / p_row[col]
            for rows, rhs in ((g, h), (e, f)):
                for i, row in enumerate(rows):
                    c = row[col]
                    if c != 0:
                        factor = c * inv
                        rows[i] = [x - factor * y for x, y in zip(row, p_row)]
                        rhs[i] = rhs[i] - factor * p_rhs
            for rows in (g, e):
                for row in rows:
                    del row[col]
        else:
            pos = [(row, b) for row, b in zip(g, h) if row[col] > 0]
            neg = [(row, b) for row, b in zip(g, h) if row[col] < 0]
            zero = [(row, b) for row, b in zip(g, h) if row[col] == 0]
            combined = list(zero)
            for rp, bp in pos:
                cp = rp[col]
                for rn, bn in neg:
                    cn = -rn[col]
                    row = [cn * x + cp * y for x, y in zip(rp, rn)]
                    combined.append((row, cn * bp + cp * bn))
            g = [row[:col] + row[col + 1:] for row, _ in combined]
            h = [b for _, b in combined]
            e = [row[:col] + row[col + 1:] for row in e]
            g, h = _light_reduce(len(alive) - 1, g, h, e, f)
            if g is None:
                return None
        alive.pop(col)
    return g, h, e, f


def _light_reduce(dim, g, h, e, f):
    """Dedupe plus LP redundancy sweep used between elimination steps."""
    bucket: dict[Vec, Fraction] = {}
    for row, b in zip(g, h):
        if _is_zero_vec(row):
            if b < 0:
                return None, None
            continue
        key = _primitive(tuple(row))
        factor = next(x2 / x1 for x1, x2 in zip(row, key) if x1 != 0)
        b2 = b * factor
        if key not in bucket or b2 < bucket[key]:
            bucket[key] = b2
    rows = sorted(bucket.items())
    rows = _drop_redundant(dim, rows, [tuple(r) for r in e], list(f))
    return [list(r) for r, _ in rows], [b for _, b in rows]


def _drop_redundant(dim, rows, eq_rows, eq_rhs):
    """LP-based removal of inequalities implied by the remaining system."""
    current = list(rows)
    i = 0
    while i < len(current):
        g_row, b = current[i]
        others = current[:i] + current[i + 1:]
        res = lp.solve_lp(list(g_row), [list(r) for r, _ in others], [x for _, x in others],
                          [list(r) for r in eq_rows], list(eq_rhs), maximize=True)
        if res.status == lp.OPTIMAL and res.value <= b:
            current.pop(i)
        else:
            i += 1
    return current


def project_fm(p: Polyhedron, keep: Sequence[int]) -> Polyhedron:
    """Fourier-Motzkin projection; independent of the generator route."""
    if p.is_empty:
        return Polyhedron.empty_set(len(keep))
    drop = [i for i in range(p.dim) if i not in set(keep)]
    system = _fm_eliminate(p.dim, p.ineq_rows, p.ineq_rhs, p.eq_rows, p.eq_rhs, drop)
    if system is None:
        return Polyhedron.empty_set(len(keep))
    g, h, e, f = system
    remaining = [i for i in range(p.dim) if i not in set(drop)]
    order = [remaining.index(i) for i in keep]
    g = [[row[j] for j in order] for row in g]
    e = [[row[j] for j in order] for row in e]
    return Polyhedron.from_hrep(len(keep), g, h, e, f)


# ---------------------------------------------------------------------------
# convex-set constructions
# ---------------------------------------------------------------------------

def polar(p: Polyhedron) -> Polyhedron:
    """Polar set {q : <q, x> <= 1 on P}; requires 0 in P."""
    if p.is_empty or not p.contains([_ZERO] * p.dim):
        raise ValueError("polar set requires the origin to belong to the set")
    v = p.vrep()
    g = [list(x) for x in v.vertices] + [list(r) for r in v.rays]
    h = [_ONE] * len(v.vertices) + [_ZERO] * len(v.rays)
    e = [list(l) for l in v.lineality]
    f = [_ZERO] * len(v.lineality)
    return Polyhedron.from_hrep(p.dim, g, h, e, f)


def neg_polar_cone(p: Polyhedron) -> Polyhedron:
    """{q : <q, x> <= 0 on P}."""
    if p.is_empty:
        return Polyhedron.universe(p.dim)
    v = p.vrep()
    g = [list(x) for x in v.vertices] + [list(r) for r in v.rays]
    h = [_ZERO] * (len(v.vertices) + len(v.rays))
    e = [list(l) for l in v.lineality]
    f = [_ZERO] * len(v.lineality)
    return Polyhedron.from_hrep(p.dim, g, h, e, f)


def pos_polar_cone(p: Polyhedron) -> Polyhedron:
    return linear_transform("image", RatMatrix.identity(p.dim).scale(-1), neg_polar_cone(p))


def recession_cone(p: Polyhedron) -> Polyhedron:
    if p.is_empty:
        raise ValueError("recession cone of the empty set")
    return Polyhedron.from_hrep(p.dim, p.ineq_rows, [_ZERO] * len(p.ineq_rows),
                                p.eq_rows, [_ZERO] * len(p.eq_rows))


def barrier_cone(p: Polyhedron) -> Polyhedron:
    """Directions with bounded support; for polyhedra (0+P)^- exactly."""
    return neg_polar_cone(recession_cone(p))


def conic_hull(p: Polyhedron) -> Polyhedron:
    if p.is_empty:
        raise ValueError("conic hull of the empty set")
    v = p.vrep()
    zero = tuple([_ZERO] * p.dim)
    rays = [g for g in list(v.vertices) + list(v.rays) if not _is_zero_vec(g)]
    return Polyhedron.from_vrep(p.dim, [zero], rays, list(v.lineality))


def interior_queries(p: Polyhedron) -> tuple[bool, Vec | None]:
    """(is_solid, interior witness); solid means nonempty topological interior."""
    if p.is_empty or p.eq_rows:
        return False, None
    return True, p.relint_point()


def subspace_meets_interior(sub: Subspace, p: Polyhedron) -> tuple[bool, Vec | None]:
    """Does the subspace meet int(P)?  Decided by a capped max-slack program."""
    if sub.ambient_dim != p.dim:
        raise ValueError("ambient dimension mismatch")
    if p.is_empty or p.eq_rows:
        return False, None
    from conreach.exactla import sub_perp
    normals = sub_perp(sub).basis_vectors()
    dim = p.dim
    obj = [_ZERO] * dim + [_ONE]
    rows = [list(r) + [_ONE] for r in p.ineq_rows]
    rhs = list(p.ineq_rhs)
    rows.append([_ZERO] * dim + [_ONE])
    rhs.append(_ONE)
    eq_rows = [list(n) + [_ZERO] for n in normals]
    eq_rhs = [_ZERO] * len(normals)
    res = lp.solve_lp(obj, rows, rhs, eq_rows, eq_rhs, maximize=True)
    if res.status == lp.OPTIMAL and res.value > 0:
        return True, res.point[:dim]
    return False, None


def linear_transform(mode: str, matrix: RatMatrix, p: Polyhedron) -> Polyhedron:
    """Exact image or preimage of a polyhedron under a linear map."""
    if mode == "preimage":
        if matrix.rows != p.dim:
            raise ValueError("map codomain differs from the set's dimension")
        if p.is_empty:
            return Polyhedron.empty_set(matrix.cols)
        g = [matrix.transpose().apply(row) for row in p.ineq_rows]
        e = [matrix.transpose().apply(row) for row in p.eq_rows]
        return Polyhedron.from_hrep(matrix.cols, g, p.ineq_rhs, e, p.eq_rhs)
    if mode == "image":
        if matrix.cols != p.dim:
            raise ValueError("map domain differs from the set's dimension")
        if p.is_empty:
            return Polyhedron.empty_set(matrix.rows)
        v = p.vrep()
        return Polyhedron.from_vrep(
            matrix.rows,
            [matrix.apply(x) for x in v.vertices],
            [matrix.apply(r) for r in v.rays],
            [matrix.apply(l) for l in v.lineality])
    raise ValueError(f"unknown transform mode {mode!r}")


def minkowski_sum(a: Polyhedron, b: Polyhedron) -> Polyhedron:
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    if a.is_empty or b.is_empty:
        return Polyhedron.empty_set(a.dim)
    va, vb = a.vrep(), b.vrep()
    vertices = [_vadd(x, y) for x in va.vertices for y in vb.vertices]
    rays = list(va.rays) + list(vb.rays)
    lin = list(va.lineality) + list(vb.lineality)
    return Polyhedron.from_vrep(a.dim, vertices, rays, lin)


def intersect(a: Polyhedron, b: Polyhedron) -> Polyhedron:
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    if a.is_empty or b.is_empty:
        return Polyhedron.empty_set(a.dim)
    return Polyhedron.from_hrep(a.dim,
                                list(a.ineq_rows) + list(b.ineq_rows),
                                list(a.ineq_rhs) + list(b.ineq_rhs),
                                list(a.eq_rows) + list(b.eq_rows),
                                list(a.eq_rhs) + list(b.eq_rhs))


def product(a: Polyhedron, b: Polyhedron) -> Polyhedron:
    dim = a.dim + b.dim
    if a.is_empty or b.is_empty:
        return Polyhedron.empty_set(dim)
    pad_a = lambda r: tuple(list(r) + [_ZERO] * b.dim)
    pad_b = lambda r: tuple([_ZERO] * a.dim + list(r))
    g = [pad_a(r) for r in a.ineq_rows] + [pad_b(r) for r in b.ineq_rows]
    h = list(a.ineq_rhs) + list(b.ineq_rhs)
    e = [pad_a(r) for r in a.eq_rows] + [pad_b(r) for r in b.eq_rows]
    f = list(a.eq_rhs) + list(b.eq_rhs)
    rows = sorted(zip(g, h))
    eqs = sorted(zip(e, f))
    return Polyhedron(dim, tuple(r for r, _ in rows), tuple(x for _, x in rows),
                      tuple(r for r, _ in eqs), tuple(x for _, x in eqs), False)


def subset_eq(a: Polyhedron, b: Polyhedron) -> bool:
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    if a.is_empty:
        return True
    if b.is_empty:
        return False
    v = a.vrep()
    for x in v.vertices:
        if not b.contains(x):
            return False
    for r in v.rays:
        if any(_dot(row, r) > 0 for row in b.ineq_rows):
            return False
        if any(_dot(row, r) != 0 for row in b.eq_rows):
            return False
    for l in v.lineality:
        if any(_dot(row, l) != 0 for row in list(b.ineq_rows) + list(b.eq_rows)):
            return False
    return True


def contains_point(p: Polyhedron, point) -> bool:
    return p.contains(point)


def equal(a: Polyhedron, b: Polyhedron) -> bool:
    return a == b


def set_algebra(op: str, *args):
    table = {"minkowski_sum": minkowski_sum, "intersect": intersect, "product": product,
             "subset_eq": subset_eq, "contains_point": contains_point, "equal": equal}
    if op not in table:
        raise ValueError(f"unknown set operation {op!r}")
    return table[op](*args)


def hyperbolicity_witness(p: Polyhedron) -> Fraction:
    """mu with P inside the mu-scaled sup-norm ball plus the recession cone."""
    if p.is_empty:
        raise ValueError("hyperbolicity witness of the empty set")
    v = p.vrep()
    mu = _ZERO
    for vertex in v.vertices:
        for x in vertex:
            if abs(x) > mu:
                mu = abs(x)
    return mu


def sup_norm_radius(p: Polyhedron) -> Fraction | None:
    """Max sup-norm over vertices; None when the set is empty."""
    if p.is_empty:
        return None
    return hyperbolicity_witness(p)
