"""Geometric control theory for linear quadruples (A, B, C, D).

Invariant-subspace iterations (weakly unobservable, strongly reachable),
invertibility subspaces, dual and input-restricted systems, the recursive
stacked matrices used for finite-horizon reasoning, and the bounded-trajectory
subspace of output-nulling dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from conreach.exactla import (DEFAULT_TOL, RatMatrix, Subspace, charpoly, hstack,
                              kernel_basis, rank, solve, sub_image, sub_intersect,
                              sub_perp, sub_preimage, sub_sum, vstack)

_ZERO = Fraction(0)


class Sigma:
    """A discrete-time linear system x+ = Ax + Bu, y = Cx + Du."""

    __slots__ = ("A", "B", "C", "D")

    def __init__(self, a: RatMatrix, b: RatMatrix, c: RatMatrix, d: RatMatrix):
        n = a.rows
        if a.cols != n:
            raise ValueError("state matrix must be square")
        if b.rows != n:
            raise ValueError("input matrix row count differs from the state dimension")
        if c.cols != n:
            raise ValueError("output matrix column count differs from the state dimension")
        if d.rows != c.rows or d.cols != b.cols:
            raise ValueError("feedthrough matrix shape mismatch")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)
        object.__setattr__(self, "C", c)
        object.__setattr__(self, "D", d)

    def __setattr__(self, name, value):
        raise AttributeError("Sigma is immutable")

    @property
    def n(self) -> int:
        return self.A.rows

    @property
    def m(self) -> int:
        return self.B.cols

    @property
    def s(self) -> int:
        return self.C.rows

    def __eq__(self, other) -> bool:
        return (isinstance(other, Sigma) and self.A == other.A and self.B == other.B
                and self.C == other.C and self.D == other.D)

    def __hash__(self) -> int:
        return hash((self.A, self.B, self.C, self.D))

    def __repr__(self) -> str:
        return f"Sigma(n={self.n}, m={self.m}, s={self.s})"

    def to_dict(self) -> dict:
        return {"A": self.A.to_json(), "B": self.B.to_json(),
                "C": self.C.to_json(), "D": self.D.to_json()}

    @classmethod
    def from_dict(cls, data: dict) -> "Sigma":
        return cls(*(RatMatrix.from_json(data[k]) for k in ("A", "B", "C", "D")))


@dataclass(frozen=True)
class SubspaceReport:
    vstar: Subspace
    tstar: Subspace
    rstar: Subspace
    ksub: Subspace
    lsub: Subspace
    right_invertible: bool
    left_invertible: bool

    def to_dict(self) -> dict:
        return {"vstar": self.vstar.to_json(), "tstar": self.tstar.to_json(),
                "rstar": self.rstar.to_json(), "ksub": self.ksub.to_json(),
                "lsub": self.lsub.to_json(),
                "right_invertible": self.right_invertible,
                "left_invertible": self.left_invertible}


def _vstar_chain(sig: Sigma) -> list[Subspace]:
    """Decreasing iterates of the weakly unobservable subspace."""
    n, s = sig.n, sig.s
    system = vstack(hstack(sig.A, sig.B), hstack(sig.C, sig.D))
    proj = hstack(RatMatrix.identity(n), RatMatrix.zeros(n, sig.m))
    chain = [Subspace.full(n)]
    while True:
        current = chain[-1]
        target = Subspace(n + s, [tuple(list(v) + [_ZERO] * s)
                                  for v in current.basis_vectors()])
        pre = sub_preimage(system, target)
        nxt = sub_image(proj, pre)
        if nxt == current:
            return chain
        chain.append(nxt)


def vstar(sig: Sigma) -> Subspace:
    """Largest subspace from which the output can be held at zero."""
    return _vstar_chain(sig)[-1]


def _tstar_chain(sig: Sigma) -> list[Subspace]:
    """Increasing iterates of the strongly reachable subspace."""
    n, m = sig.n, sig.m
    out_kernel = Subspace.from_matrix_columns(kernel_basis(hstack(sig.C, sig.D)))
    step = hstack(sig.A, sig.B)
    chain = [Subspace.zero(n)]
    while True:
        current = chain[-1]
        lifted = Subspace(n + m,
                          [tuple(list(v) + [_ZERO] * m) for v in current.basis_vectors()]
                          + [tuple([_ZERO] * n + list(u))
                             for u in Subspace.full(m).basis_vectors()])
        nxt = sub_image(step, sub_intersect(lifted, out_kernel))
        if nxt == current:
            return chain
        chain.append(nxt)


def tstar(sig: Sigma) -> Subspace:
    """States reachable from the origin with identically zero output.

    The fixed point of the increasing iteration, cross-checked against the
    closed form through the stacked matrices.
    """
    result = _tstar_chain(sig)[-1]
    _, lam_n, theta_n = recursive_matrices(sig, max(sig.n, 1))
    closed = sub_image(lam_n, Subspace.from_matrix_columns(kernel_basis(theta_n)))
    if closed != result:
        raise ArithmeticError("strongly reachable subspace cross-check failed")
    return result


def rstar(sig: Sigma) -> Subspace:
    return sub_intersect(vstar(sig), tstar(sig))


def dual_system(sig: Sigma) -> Sigma:
    return Sigma(sig.A.transpose(), sig.C.transpose(),
                 sig.B.transpose(), sig.D.transpose())


def restrict_inputs(sig: Sigma, input_space: Subspace) -> Sigma:
    """Replace the input space by a subspace (columns of its canonical basis)."""
    if input_space.ambient_dim != sig.m:
        raise ValueError("input-space ambient dimension mismatch")
    e = input_space.basis
    return Sigma(sig.A, sig.B @ e, sig.C, sig.D @ e)


def dual_and_restricted(sig: Sigma, input_space: Subspace | None = None) -> Sigma:
    if input_space is None:
        return dual_system(sig)
    return restrict_inputs(sig, input_space)


def kl_subspaces(sig: Sigma) -> SubspaceReport:
    """All five invariance subspaces plus right/left-invertibility flags."""
    v = vstar(sig)
    t = tstar(sig)
    r = sub_intersect(v, t)
    k = sub_sum(Subspace.from_matrix_columns(sig.D), sub_image(sig.C, t))
    l = sub_intersect(Subspace.from_matrix_columns(kernel_basis(sig.D)),
                      sub_preimage(sig.B, v))
    dual_l = sub_intersect(
        Subspace.from_matrix_columns(kernel_basis(sig.D.transpose())),
        sub_preimage(sig.C.transpose(), vstar(dual_system(sig))))
    if sub_perp(k) != dual_l:
        raise ArithmeticError("invertibility-subspace duality check failed")
    return SubspaceReport(vstar=v, tstar=t, rstar=r, ksub=k, lsub=l,
                          right_invertible=(k.dim == sig.s),
                          left_invertible=(l.dim == 0))


def recursive_matrices(sig: Sigma, ell: int) -> tuple[RatMatrix, RatMatrix, RatMatrix]:
    """Stacked response matrices: outputs over `ell` steps, newest block on top."""
    if ell < 1:
        raise ValueError("horizon must be at least 1")
    gamma, lam, theta = sig.C, sig.B, sig.D
    for _ in range(ell - 1):
        gamma = vstack(gamma @ sig.A, sig.C)
        theta = vstack(hstack(sig.C @ lam, sig.D),
                       hstack(theta, RatMatrix.zeros(theta.rows, sig.m)))
        lam = hstack(sig.A @ lam, sig.B)
    return gamma, lam, theta


def kalman_controllable(sig: Sigma) -> bool:
    blocks = [sig.B]
    power = sig.B
    for _ in range(sig.n - 1):
        power = sig.A @ power
        blocks.append(power)
    return rank(hstack(*blocks)) == sig.n


def controllable_subspace(sig: Sigma) -> Subspace:
    blocks = [sig.B]
    power = sig.B
    for _ in range(sig.n - 1):
        power = sig.A @ power
        blocks.append(power)
    return Subspace.from_matrix_columns(hstack(*blocks))


# ---------------------------------------------------------------------------
# bounded output-nulling trajectories
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundedSplit:
    """Outcome of splitting quotient dynamics by trajectory boundedness."""
    subspace: Subspace
    trivial: bool
    notes: tuple[str, ...]


def vstar_g(sig: Sigma, input_space: Subspace, tol: float = 1e-8) -> Subspace:
    """States with a bounded output-nulling trajectory using inputs in U."""
    return vstar_g_analysis(sig, input_space, tol).subspace


def vstar_g_analysis(sig: Sigma, input_space: Subspace, tol: float = 1e-8) -> BoundedSplit:
    restricted = restrict_inputs(sig, input_space)
    v = vstar(restricted)
    r = sub_intersect(v, tstar(restricted))
    if v.dim == r.dim:
        return BoundedSplit(subspace=v, trivial=(v.dim == 0), notes=())

    complement = _complement_in(v, r)
    quotient = _quotient_dynamics(restricted, v, r, complement)
    bounded, has_bounded_root, notes = _bounded_subspace(quotient, tol)

    vectors = [tuple(x) for x in r.basis_vectors()]
    comp_matrix = RatMatrix.from_columns([list(c) for c in complement], ambient=sig.n)
    for coords in bounded.basis_vectors():
        vectors.append(comp_matrix.apply(coords))
    subspace = Subspace(sig.n, vectors)
    trivial = (r.dim == 0) and not has_bounded_root
    return BoundedSplit(subspace=subspace, trivial=trivial, notes=tuple(notes))


def _complement_in(outer: Subspace, inner: Subspace) -> list[tuple[Fraction, ...]]:
    """Basis vectors of `outer` extending a basis of `inner`."""
    chosen = [list(v) for v in inner.basis_vectors()]
    complement = []
    current = rank(RatMatrix.from_columns(chosen, ambient=outer.ambient_dim)) if chosen else 0
    for v in outer.basis_vectors():
        trial = chosen + [list(v)]
        if rank(RatMatrix.from_columns(trial, ambient=outer.ambient_dim)) > current:
            chosen = trial
            complement.append(tuple(v))
            current += 1
    if current != outer.dim:
        raise ArithmeticError("complement extension failed")
    return complement


def _quotient_dynamics(sig: Sigma, v: Subspace, r: Subspace,
                       complement: list[tuple[Fraction, ...]]) -> RatMatrix:
    """Induced map on V*/R* of the output-nulling dynamics.

    For each complement basis vector x, any input u with Cx + Du = 0 and
    Ax + Bu in V* gives the same class of Ax + Bu modulo R*.
    """
    n = sig.n
    normals = sub_perp(v).basis.transpose()  # rows annihilating V*
    eq_top = sig.D
    eq_bot = normals @ sig.B
    solve_matrix = vstack(eq_top, eq_bot)
    full_basis = [list(x) for x in r.basis_vectors()] + [list(c) for c in complement]
    basis_matrix = RatMatrix.from_columns(full_basis, ambient=n)
    q = len(complement)
    columns = []
    for x in complement:
        rhs = [-val for val in sig.C.apply(x)] + [-val for val in normals.apply(sig.A.apply(x))]
        u = solve(solve_matrix, rhs)
        if u is None:
            raise ArithmeticError("output-nulling step unsolvable inside the invariant subspace")
        image = tuple(a + b for a, b in zip(sig.A.apply(x), sig.B.apply(u)))
        coords = solve(basis_matrix, list(image))
        if coords is None:
            raise ArithmeticError("image left the invariant subspace")
        columns.append(list(coords[r.dim:]))
    return RatMatrix.from_columns(columns, ambient=q)


def _bounded_subspace(matrix: RatMatrix, tol: float) -> tuple[Subspace, bool, list[str]]:
    """Initial states of x+ = Mx with bounded forward orbit.

    Exactly the sum of generalized eigenspaces strictly inside the unit circle
    and plain eigenspaces on it.  Assembled per irreducible rational factor of
    the characteristic polynomial; root moduli are classified in floating
    point at tolerance `tol`.
    """
    import sympy

    q = matrix.rows
    if q == 0:
        return Subspace.zero(0), False, []
    lam = sympy.Symbol("lam")
    coeffs = charpoly(matrix)
    poly = sympy.Poly([sympy.Rational(c) for c in reversed(coeffs)], lam)
    _, factors = poly.factor_list()
    vectors: list[tuple[Fraction, ...]] = []
    has_bounded_root = False
    notes: list[str] = []
    for factor, mult in factors:
        froots = np.roots([float(c) for c in factor.all_coeffs()])
        inside = [z for z in froots if abs(z) < 1 - tol]
        on_circle = [z for z in froots if abs(abs(z) - 1) <= tol]
        outside = [z for z in froots if abs(z) > 1 + tol]
        if inside or on_circle:
            has_bounded_root = True
        if not inside and not on_circle:
            continue
        if outside:
            notes.append("unit-circle-straddling irreducible factor: bounded part "
                         "has no rational basis and is omitted from the subspace")
            continue
        power = mult if not on_circle else 1
        evaluated = _poly_at_matrix(factor, matrix)
        accumulated = evaluated
        for _ in range(power - 1):
            accumulated = accumulated @ evaluated
        for col in kernel_basis(accumulated).columns():
            vectors.append(col)
    return Subspace(q, vectors), has_bounded_root, notes


def _poly_at_matrix(factor, matrix: RatMatrix) -> RatMatrix:
    """Horner evaluation of a sympy polynomial at an exact matrix."""
    coeffs = [Fraction(int(c.p), int(c.q)) for c in factor.all_coeffs()]  # high first
    q = matrix.rows
    result = RatMatrix.zeros(q, q)
    for c in coeffs:
        result = result @ matrix + RatMatrix.identity(q).scale(c)
    return result
