"""Set-valued mappings represented by graph polyhedra.

The transition relation of a constrained linear system, its conic relaxations
and recession counterpart, the three duals, forward/backward polyhedral
iteration, and the cone-constrained eigenpair search behind the spectral
reachability conditions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from conreach import polyhedra as ph
from conreach.exactla import (DEFAULT_TOL, PencilResult, RatMatrix, Subspace,
                              algebraic_pencil_rank, as_rat, format_rat, hstack,
                              kernel_basis, pencil_candidates, sub_perp, vstack)
from conreach.geomctrl import Sigma, recursive_matrices, tstar
from conreach.polyhedra import Polyhedron

_ZERO = Fraction(0)
_ONE = Fraction(1)

PRIMAL_TAGS = ("F", "Fcon", "Frec")
DUAL_TAGS = ("Fpolar", "Fminus", "Fb")
CONE_TAGS = ("Fcon", "Frec", "Fminus", "Fb")


class ConstrainedMap:
    """A set-valued mapping on R^dim carried by its graph polyhedron."""

    __slots__ = ("dim", "graph", "tag", "sigma", "constraint")

    def __init__(self, dim: int, graph: Polyhedron, tag: str = "Raw",
                 sigma: Sigma | None = None, constraint: Polyhedron | None = None):
        if graph.dim != 2 * dim:
            raise ValueError("graph must live in twice the map dimension")
        if tag in CONE_TAGS and not graph.is_cone():
            raise ValueError(f"tag {tag} requires a conic graph")
        if tag == "F" and constraint is not None and constraint.contains([_ZERO] * constraint.dim):
            if not graph.contains([_ZERO] * (2 * dim)):
                raise ValueError("graph of the transition map must contain the origin")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "constraint", constraint)

    def __setattr__(self, name, value):
        raise AttributeError("ConstrainedMap is immutable")

    def __repr__(self) -> str:
        return f"ConstrainedMap(tag={self.tag}, dim={self.dim})"

    def has_provenance(self) -> bool:
        return self.sigma is not None and self.constraint is not None


def build_primal(sig: Sigma, constraint: Polyhedron, which: str = "F") -> ConstrainedMap:
    """Graph of the forward transition relation, or of its conic variants.

    which == "F"    : outputs constrained to the given set,
    which == "Fcon" : outputs constrained to its (closed) conic hull,
    which == "Frec" : outputs constrained to its recession cone.
    """
    if which not in PRIMAL_TAGS:
        raise ValueError(f"unknown primal map tag {which!r}")
    if constraint.dim != sig.s:
        raise ValueError("constraint set dimension differs from the output dimension")
    if not constraint.contains([_ZERO] * sig.s):
        raise ValueError("constraint set must contain the origin")
    if which == "F":
        target = constraint
    elif which == "Fcon":
        target = ph.conic_hull(constraint)
    else:
        target = ph.recession_cone(constraint)
    n, m = sig.n, sig.m
    pre = ph.linear_transform("preimage", hstack(sig.C, sig.D), target)
    push = vstack(hstack(RatMatrix.identity(n), RatMatrix.zeros(n, m)),
                  hstack(sig.A, sig.B))
    graph = ph.linear_transform("image", push, pre)
    return ConstrainedMap(n, graph, which, sigma=sig, constraint=constraint)


def build_dual(sig: Sigma, constraint: Polyhedron, which: str = "Fpolar") -> ConstrainedMap:
    """Graphs of the dual mappings.

    q maps to A'q + C'v over v in -polar(Y) ("Fpolar"), the positive polar
    cone ("Fminus"), or minus the barrier cone ("Fb"), subject to
    B'q + D'v = 0.
    """
    if which not in DUAL_TAGS:
        raise ValueError(f"unknown dual map tag {which!r}")
    if constraint.dim != sig.s:
        raise ValueError("constraint set dimension differs from the output dimension")
    if not constraint.contains([_ZERO] * sig.s):
        raise ValueError("constraint set must contain the origin")
    neg = RatMatrix.identity(sig.s).scale(-1)
    if which == "Fpolar":
        vset = ph.linear_transform("image", neg, ph.polar(constraint))
    elif which == "Fminus":
        vset = ph.pos_polar_cone(constraint)
    else:
        vset = ph.linear_transform("image", neg, ph.barrier_cone(constraint))
    n, s = sig.n, sig.s
    g = [tuple([_ZERO] * n + list(row)) for row in vset.ineq_rows]
    h = list(vset.ineq_rhs)
    e = [tuple([_ZERO] * n + list(row)) for row in vset.eq_rows]
    f = list(vset.eq_rhs)
    coupling = hstack(sig.B.transpose(), sig.D.transpose())
    for row in coupling.data:
        e.append(tuple(row))
        f.append(_ZERO)
    pre = Polyhedron.from_hrep(n + s, g, h, e, f)
    push = vstack(hstack(RatMatrix.identity(n), RatMatrix.zeros(n, s)),
                  hstack(sig.A.transpose(), sig.C.transpose()))
    graph = ph.linear_transform("image", push, pre)
    return ConstrainedMap(n, graph, which, sigma=sig, constraint=constraint)


def map_apply(mapping: ConstrainedMap, mode: str, p: Polyhedron) -> Polyhedron:
    """Image or preimage of a polyhedron under the set-valued mapping.

    Computed as one projection of the graph constrained to P on the relevant
    block; the intermediate system is never canonicalized.
    """
    d = mapping.dim
    if p.dim != d:
        raise ValueError("argument dimension differs from the map dimension")
    if mode not in ("image", "preimage"):
        raise ValueError(f"unknown application mode {mode!r}")
    if p.is_empty:
        return Polyhedron.empty_set(d)
    pad_front = mode == "image"
    graph = mapping.graph
    g = [list(r) for r in graph.ineq_rows]
    h = list(graph.ineq_rhs)
    e = [list(r) for r in graph.eq_rows]
    f = list(graph.eq_rhs)
    lift = ((lambda r: list(r) + [_ZERO] * d) if pad_front
            else (lambda r: [_ZERO] * d + list(r)))
    for row, b in zip(p.ineq_rows, p.ineq_rhs):
        g.append(lift(row))
        h.append(b)
    for row, b in zip(p.eq_rows, p.eq_rhs):
        e.append(lift(row))
        f.append(b)
    keep = list(range(d, 2 * d)) if pad_front else list(range(d))
    return ph._project_raw(2 * d, g, h, e, f, keep)


def domain(mapping: ConstrainedMap) -> Polyhedron:
    return map_apply(mapping, "preimage", Polyhedron.universe(mapping.dim))


@dataclass(frozen=True)
class StructureInfo:
    domain: Polyhedron
    is_onto: bool
    is_strict: bool


def structure_queries(mapping: ConstrainedMap) -> StructureInfo:
    dom = domain(mapping)
    image = ph.project(mapping.graph, list(range(mapping.dim, 2 * mapping.dim)))
    return StructureInfo(domain=dom, is_onto=image.is_universe(),
                         is_strict=dom.is_universe())


def reach_feas(mapping: ConstrainedMap, ell: int, mode: str,
               method: str = "iterate") -> list[Polyhedron]:
    """Backward ("X") or forward ("R") step sets for horizons 1..ell."""
    if ell < 1:
        raise ValueError("horizon must be at least 1")
    if mode not in ("X", "R"):
        raise ValueError(f"unknown sequence mode {mode!r}")
    if method == "iterate":
        out = []
        if mode == "X":
            current = domain(mapping)
            out.append(current)
            for _ in range(ell - 1):
                current = map_apply(mapping, "preimage", out[-1])
                out.append(current)
        else:
            current = map_apply(mapping, "image", Polyhedron.from_point([_ZERO] * mapping.dim))
            out.append(current)
            for _ in range(ell - 1):
                current = map_apply(mapping, "image", out[-1])
                out.append(current)
        return out
    if method == "direct":
        if not mapping.has_provenance():
            raise ValueError("direct evaluation requires system provenance")
        if mode == "X" and mapping.tag == "F":
            return [feasible_direct(mapping.sigma, mapping.constraint, k)
                    for k in range(1, ell + 1)]
        if mode == "R" and mapping.tag == "Fpolar":
            return [reach_dual_direct(mapping.sigma, mapping.constraint, k)
                    for k in range(1, ell + 1)]
        raise ValueError(f"no direct formula for tag {mapping.tag!r}, mode {mode!r}")
    raise ValueError(f"unknown method {method!r}")


def feasible_direct(sig: Sigma, constraint: Polyhedron, ell: int) -> Polyhedron:
    """States keeping `ell` consecutive outputs inside the constraint set.

    Closed form through the stacked response matrices: the preimage under the
    free-response matrix of (column span of the input-response matrix) +
    (the `ell`-fold product of the constraint set).
    """
    gamma, _, theta = recursive_matrices(sig, ell)
    normals = sub_perp(Subspace.from_matrix_columns(theta))
    if normals.dim == 0:
        return Polyhedron.universe(sig.n)
    nt = normals.basis.transpose()  # d' x (s*ell)
    s = sig.s
    pieces = []
    for i in range(ell):
        block = RatMatrix([row[i * s:(i + 1) * s] for row in nt.data],
                          shape=(nt.rows, s))
        pieces.append(ph.linear_transform("image", block, constraint))
    shadow = reduce(ph.minkowski_sum, pieces)
    return ph.linear_transform("preimage", nt @ gamma, shadow)


def reach_dual_direct(sig: Sigma, constraint: Polyhedron, ell: int) -> Polyhedron:
    """Forward sets of the polar dual map, in closed form."""
    gamma, _, theta = recursive_matrices(sig, ell)
    w = kernel_basis(theta.transpose())  # (s*ell) x w
    neg = RatMatrix.identity(sig.s).scale(-1)
    neg_polar = ph.linear_transform("image", neg, ph.polar(constraint))
    s = sig.s
    g, h = [], []
    for i in range(ell):
        block = RatMatrix([w.data[i * s + j] for j in range(s)], shape=(s, w.cols))
        for row, b in zip(neg_polar.ineq_rows, neg_polar.ineq_rhs):
            g.append(RatMatrix([list(row)], shape=(1, s)) @ block)
            h.append(b)
    e, f = [], []
    for i in range(ell):
        block = RatMatrix([w.data[i * s + j] for j in range(s)], shape=(s, w.cols))
        for row, b in zip(neg_polar.eq_rows, neg_polar.eq_rhs):
            e.append(RatMatrix([list(row)], shape=(1, s)) @ block)
            f.append(b)
    z_poly = Polyhedron.from_hrep(w.cols, [m.data[0] for m in g], h,
                                  [m.data[0] for m in e], f)
    return ph.linear_transform("image", gamma.transpose() @ w, z_poly)


def tstar_forward_direct(sig: Sigma, constraint: Polyhedron, ell: int) -> Polyhedron:
    """`ell`-step forward image of the strongly reachable subspace, closed form."""
    if ell == 0:
        return Polyhedron.from_subspace(tstar(sig))
    steps = sig.n + ell
    _, lam, theta = recursive_matrices(sig, steps)
    s = sig.s
    top = RatMatrix(theta.data[: s * ell], shape=(s * ell, theta.cols))
    bottom = RatMatrix(theta.data[s * ell:], shape=(theta.rows - s * ell, theta.cols))
    w = kernel_basis(bottom)
    tw = top @ w
    g, h, e, f = [], [], [], []
    for i in range(ell):
        block = RatMatrix([tw.data[i * s + j] for j in range(s)], shape=(s, w.cols))
        for row, b in zip(constraint.ineq_rows, constraint.ineq_rhs):
            g.append((RatMatrix([list(row)], shape=(1, s)) @ block).data[0])
            h.append(b)
        for row, b in zip(constraint.eq_rows, constraint.eq_rhs):
            e.append((RatMatrix([list(row)], shape=(1, s)) @ block).data[0])
            f.append(b)
    z_poly = Polyhedron.from_hrep(w.cols, g, h, e, f)
    return ph.linear_transform("image", lam @ w, z_poly)


# ---------------------------------------------------------------------------
# cone-constrained eigenpairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenCertificate:
    """A witness (lam, q, u): (A' - lam I)q + C'u = 0, B'q + D'u = 0, u in cone."""
    lam: Fraction | float
    q: tuple
    u: tuple
    cone_tag: str
    exact: bool
    residual: float = 0.0

    def to_dict(self) -> dict:
        lam = format_rat(self.lam) if isinstance(self.lam, Fraction) else float(self.lam)
        fmt = lambda v: format_rat(v) if isinstance(v, Fraction) else float(v)
        return {"lambda": lam, "q": [fmt(x) for x in self.q], "u": [fmt(x) for x in self.u],
                "cone": self.cone_tag, "exact": self.exact, "residual": self.residual}


@dataclass(frozen=True)
class EigenSearchResult:
    certificate: EigenCertificate | None
    notes: tuple[str, ...] = ()

    @property
    def found(self) -> bool:
        return self.certificate is not None


def cone_eigen_search(sig: Sigma, cone: Polyhedron,
                      interval: tuple[Fraction, Fraction | None],
                      cone_tag: str = "cone",
                      tol: float = DEFAULT_TOL) -> EigenSearchResult:
    """Search for lam in the interval, u in the cone and q != 0 with
    (A' - lam I)q + C'u = 0 and B'q + D'u = 0.

    Rank-drop candidates of the reduced pencil are tested exactly at rational
    parameters; interval endpoints are always tested, and a singular pencil
    additionally gets interior rational probes plus an incompleteness note.
    Irrational candidates are decided exactly where the cone constraint is a
    subspace condition, and by verified numerics otherwise.
    """
    if not cone.is_cone() and not cone.is_universe():
        raise ValueError("eigen search requires a polyhedral cone")
    lo, hi = as_rat(interval[0]), interval[1]
    hi = None if hi is None else as_rat(hi)
    if lo < 0:
        raise ValueError("interval must sit inside the nonnegative axis")
    if hi is not None and hi < lo:
        raise ValueError("empty interval")

    n, s = sig.n, sig.s
    notes: list[str] = []
    nfull = kernel_basis(hstack(sig.B.transpose(), sig.D.transpose()))
    k = nfull.cols
    if k == 0:
        return EigenSearchResult(None)
    nq = RatMatrix(nfull.data[:n], shape=(n, k))
    nu = RatMatrix(nfull.data[n:], shape=(s, k))
    m = sig.A.transpose() @ nq + sig.C.transpose() @ nu

    candidates: list = []
    singular = False
    pencil = pencil_candidates(m, nq, (lo, hi), tol=tol)
    if pencil.kind == "singular":
        singular = True
        notes.append("pencil has a parameter-independent kernel; candidates taken "
                     "from its regular compression")
        comp = sub_perp(pencil.common_kernel).basis
        if comp.cols:
            inner = pencil_candidates(m @ comp, nq @ comp, (lo, hi), tol=tol)
            candidates.extend(inner.candidates)
            singular = singular or inner.generic_nullity > 0
    else:
        candidates.extend(pencil.candidates)
        if pencil.generic_nullity > 0:
            singular = True
    if singular:
        notes.append("singular pencil: eigenpairs may exist on a continuum; "
                     "endpoint and probe testing is sound but not exhaustive")

    rational_params = {lo}
    if hi is not None:
        rational_params.add(hi)
    for lam in _rational_state_eigenvalues(sig):
        if lam >= lo and (hi is None or lam <= hi):
            rational_params.add(lam)
    if singular:
        if hi is not None:
            span = hi - lo
            rational_params.update([lo + span * Fraction(1, 3), lo + span * Fraction(1, 2),
                                    lo + span * Fraction(2, 3)])
        else:
            rational_params.update([lo + Fraction(1, 2), lo + 1, lo + 2, lo + 7])
    for cand in candidates:
        if cand.exact is not None:
            rational_params.add(cand.exact)

    # scan from the top of the interval down: certificates at the largest
    # parameter are the conventional witnesses
    for lam in sorted(rational_params, reverse=True):
        cert = _exact_cone_test(sig, cone, cone_tag, m, nq, nu, lam)
        if cert is not None:
            return EigenSearchResult(cert, tuple(notes))

    for cand in candidates:
        if cand.exact is not None:
            continue
        if hi is not None and not (float(lo) - tol <= cand.value <= float(hi) + tol):
            continue
        cert, extra = _algebraic_cone_test(sig, cone, cone_tag, m, nq, nu, cand, tol)
        notes.extend(extra)
        if cert is not None:
            return EigenSearchResult(cert, tuple(notes))

    return EigenSearchResult(None, tuple(notes))


def _rational_state_eigenvalues(sig: Sigma) -> list[Fraction]:
    """Exact rational eigenvalues of A; natural extra probe parameters."""
    import sympy

    lam = sympy.Symbol("lam")
    sym = sympy.Matrix([[sympy.Rational(x) for x in row] for row in sig.A.data])
    out = []
    for root in sympy.Poly(sym.charpoly(lam).as_expr(), lam).real_roots():
        if root.is_rational:
            out.append(Fraction(int(root.p), int(root.q)))
    return out


def _exact_cone_test(sig, cone, cone_tag, m, nq, nu, lam: Fraction) -> EigenCertificate | None:
    """Exact test at a rational parameter: any kernel generator with q != 0."""
    pencil = m - nq.scale(lam)
    ker = kernel_basis(pencil)
    if ker.cols == 0:
        return None
    tmat = nu @ ker
    rows = []
    for row in cone.ineq_rows:
        rows.append(tuple((RatMatrix([list(row)], shape=(1, cone.dim)) @ tmat).data[0]))
    for row in cone.eq_rows:
        vec = tuple((RatMatrix([list(row)], shape=(1, cone.dim)) @ tmat).data[0])
        rows.append(vec)
        rows.append(tuple(-x for x in vec))
    rays, lin = ph._dd_cone(ker.cols, rows)
    qmat = nq @ ker
    for gen in list(rays) + list(lin):
        q = qmat.apply(gen)
        if any(x != 0 for x in q):
            z = ker.apply(gen)
            u = nu.apply(z)
            q, u = _canonical_direction(q, u, cone)
            return EigenCertificate(lam=lam, q=tuple(q), u=tuple(u),
                                    cone_tag=cone_tag, exact=True, residual=0.0)
    return None


def _canonical_direction(q, u, cone):
    """Positive-scale q to a primitive integer vector; flip sign when legal.

    Positive scalings always preserve cone membership of u; a sign flip is
    applied only when -u still lies in the cone, to make the leading nonzero
    entry of q positive.
    """
    prim = ph._primitive(tuple(q))
    factor = next(b / a for a, b in zip(q, prim) if a != 0)
    q = prim
    u = tuple(factor * x for x in u)
    lead = next(x for x in q if x != 0)
    if lead < 0 and cone.contains([-x for x in u]):
        q = tuple(-x for x in q)
        u = tuple(-x for x in u)
    return q, u


def _algebraic_cone_test(sig, cone, cone_tag, m, nq, nu, cand, tol):
    """Candidate test at an irrational algebraic parameter.

    Exact over Q(lam) whenever membership of u reduces to a subspace
    condition (trivial, full, or purely linear cones); otherwise a verified
    numeric fallback runs and its use is noted.
    """
    notes: list[str] = []
    span_k = _cone_span(cone)
    lin_k = _cone_lineality(cone)
    span_restricted = _restrict_codomain(nu, span_k)
    if not _algebraic_has_nonzero_q(m, nq, span_restricted, cand.minpoly):
        return None, notes
    if span_k == lin_k:
        # the cone constraint is exactly a subspace condition: decision is exact
        cert = _numeric_certificate(sig, cone, cone_tag, m, nq, nu, cand,
                                    _restrict_codomain(nu, lin_k), tol)
        if cert is None:
            notes.append(f"irrational parameter near {cand.value:.9g}: exact rank test "
                         "found an eigenvector but numeric extraction failed")
        return cert, notes
    lin_restricted = _restrict_codomain(nu, lin_k)
    if _algebraic_has_nonzero_q(m, nq, lin_restricted, cand.minpoly):
        cert = _numeric_certificate(sig, cone, cone_tag, m, nq, nu, cand, lin_restricted, tol)
        if cert is not None:
            return cert, notes
    notes.append(f"irrational parameter near {cand.value:.9g} with a pointed cone "
                 "constraint: decided by verified numerics")
    cert = _numeric_pointed_test(sig, cone, cone_tag, m, nq, nu, cand, tol)
    return cert, notes


def _cone_span(cone: Polyhedron) -> Subspace:
    v = cone.vrep()
    return Subspace(cone.dim, list(v.vertices) + list(v.rays) + list(v.lineality))


def _cone_lineality(cone: Polyhedron) -> Subspace:
    return Subspace(cone.dim, list(cone.vrep().lineality))


def _restrict_codomain(nu: RatMatrix, sub: Subspace) -> RatMatrix:
    """Basis (columns) of {z : nu z in sub}."""
    normals = sub_perp(sub).basis.transpose()
    if normals.rows == 0:
        return RatMatrix.identity(nu.cols)
    return kernel_basis(normals @ nu)


def _algebraic_has_nonzero_q(m, nq, w, minpoly) -> bool:
    """Over Q(lam): does ker((M - lam N) W) contain z with N_q W z != 0?"""
    if w.cols == 0:
        return False
    mw = m @ w
    nw = nq @ w
    base = algebraic_pencil_rank(mw, nw, minpoly)
    extended = algebraic_pencil_rank(mw, nw, minpoly, extra_rows=nq @ w)
    return extended > base


def _numeric_kernel(matrix: np.ndarray, tol: float) -> np.ndarray:
    u, sv, vt = np.linalg.svd(matrix)
    if sv.size == 0:
        return np.eye(matrix.shape[1])
    cutoff = max(matrix.shape) * sv[0] * 1e-12 + tol * max(1.0, sv[0])
    rank = int(np.sum(sv > cutoff))
    return vt[rank:].T


def _numeric_certificate(sig, cone, cone_tag, m, nq, nu, cand, w, tol):
    """Extract a float eigenvector restricted to the columns of w."""
    if w.cols == 0:
        return None
    lam = cand.value
    pencil = (m.to_float() - lam * nq.to_float()) @ w.to_float()
    ker = _numeric_kernel(pencil, tol)
    qmap = nq.to_float() @ w.to_float()
    umap = nu.to_float() @ w.to_float()
    for j in range(ker.shape[1]):
        vec = ker[:, j]
        q = qmap @ vec
        if np.linalg.norm(q, np.inf) <= np.sqrt(tol):
            continue
        scale = np.linalg.norm(q, np.inf)
        q = q / scale
        u = umap @ vec / scale
        return _flagged_certificate(sig, cone, cone_tag, lam, q, u, tol)
    return None


def _numeric_pointed_test(sig, cone, cone_tag, m, nq, nu, cand, tol):
    """Rationalize the float kernel and run the exact cone test inside it."""
    lam = cand.value
    pencil = m.to_float() - lam * nq.to_float()
    ker = _numeric_kernel(pencil, tol)
    if ker.shape[1] == 0:
        return None
    cols = []
    for j in range(ker.shape[1]):
        cols.append([Fraction(float(x)).limit_denominator(10 ** 9) for x in ker[:, j]])
    kmat = RatMatrix.from_columns(cols, ambient=m.cols)
    tmat = nu @ kmat
    rows = []
    for row in cone.ineq_rows:
        rows.append(tuple((RatMatrix([list(row)], shape=(1, cone.dim)) @ tmat).data[0]))
    for row in cone.eq_rows:
        vec = tuple((RatMatrix([list(row)], shape=(1, cone.dim)) @ tmat).data[0])
        rows.append(vec)
        rows.append(tuple(-x for x in vec))
    rays, lin = ph._dd_cone(kmat.cols, rows)
    qmap = nq @ kmat
    for gen in list(rays) + list(lin):
        q = [float(x) for x in qmap.apply(gen)]
        if np.linalg.norm(q, np.inf) > np.sqrt(tol):
            z = kmat.apply(gen)
            u = nu.apply(z)
            if all(_exact_cone_membership(cone, u)):
                qf = np.array([float(x) for x in nq.apply(z)])
                uf = np.array([float(x) for x in u])
                scale = np.linalg.norm(qf, np.inf)
                return _flagged_certificate(sig, cone, cone_tag, lam,
                                            qf / scale, uf / scale, tol)
    return None


def _exact_cone_membership(cone: Polyhedron, u) -> list[bool]:
    return [cone.contains(list(u))]


def _flagged_certificate(sig, cone, cone_tag, lam, q, u, tol):
    a = sig.A.to_float()
    b = sig.B.to_float()
    c = sig.C.to_float()
    d = sig.D.to_float()
    r1 = (a.T - lam * np.eye(sig.n)) @ q + c.T @ u
    r2 = b.T @ q + d.T @ u
    residual = float(max(np.linalg.norm(r1, np.inf), np.linalg.norm(r2, np.inf)))
    return EigenCertificate(lam=float(lam), q=tuple(float(x) for x in q),
                            u=tuple(float(x) for x in u), cone_tag=cone_tag,
                            exact=False, residual=residual)


def eigen_membership(mapping: ConstrainedMap, lam, q) -> bool:
    """Is lam*q contained in the map's value at q (conic graphs only)?"""
    if mapping.tag not in CONE_TAGS:
        raise ValueError("eigen membership requires a cone-tagged map")
    lam = as_rat(lam) if not isinstance(lam, float) else Fraction(lam).limit_denominator(10 ** 12)
    qv = [as_rat(x) if not isinstance(x, float) else Fraction(x).limit_denominator(10 ** 12)
          for x in q]
    point = list(qv) + [lam * x for x in qv]
    return mapping.graph.contains(point)
