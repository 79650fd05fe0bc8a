"""Exact rational linear algebra, subspace lattice operations and the
floating-point spectral helpers shared by the rest of the package.

Matrices and subspaces are immutable and all operations are pure, so values
can be shared freely across threads.  Rational scalars are `fractions.Fraction`
throughout; floating point enters only in eigenvalue extraction.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-9

_RAT_RE = re.compile(r"^-?(?:0|[1-9][0-9]*)(?:/(?:[1-9][0-9]*))?$")


class RationalFormatError(ValueError):
    """Raised for rational strings that are not in canonical p/q form."""


def parse_rat(text: str) -> Fraction:
    """Parse a canonical rational string "p/q" (q > 0, gcd(p, q) = 1) or "p"."""
    if not isinstance(text, str) or not _RAT_RE.match(text):
        raise RationalFormatError(f"not a canonical rational string: {text!r}")
    value = Fraction(text)
    if str(value) != text and text != f"{value.numerator}/1":
        raise RationalFormatError(f"rational string not in lowest terms: {text!r}")
    return value


def format_rat(value: Fraction) -> str:
    return str(Fraction(value))


def as_rat(value) -> Fraction:
    """Coerce ints, Fractions and canonical strings; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to an exact rational")


class RatMatrix:
    """Immutable dense matrix over the rationals."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence], shape: tuple[int, int] | None = None):
        grid = tuple(tuple(as_rat(x) for x in row) for row in data)
        if shape is not None:
            rows, cols = shape
            if len(grid) != rows or any(len(r) != cols for r in grid):
                raise ValueError("data inconsistent with declared shape")
        else:
            rows = len(grid)
            cols = len(grid[0]) if grid else 0
            if any(len(r) != cols for r in grid):
                raise ValueError("ragged rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", grid)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        zero = Fraction(0)
        return cls([[zero] * cols for _ in range(rows)], shape=(rows, cols))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], ambient: int | None = None) -> "RatMatrix":
        cols = [tuple(as_rat(x) for x in c) for c in columns]
        if ambient is None:
            if not cols:
                raise ValueError("ambient dimension required for an empty column set")
            ambient = len(cols[0])
        if any(len(c) != ambient for c in cols):
            raise ValueError("column length mismatch")
        return cls([[c[i] for c in cols] for i in range(ambient)], shape=(ambient, len(cols)))

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self.data[i][j] for i in range(self.rows))

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
                         shape=(self.cols, self.rows))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        ot = other.data
        out = []
        for i in range(self.rows):
            row_i = self.data[i]
            out.append([sum((row_i[k] * ot[k][j] for k in range(self.cols)), Fraction(0))
                        for j in range(other.cols)])
        return RatMatrix(out, shape=(self.rows, other.cols))

    def apply(self, vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum((row[k] * vec[k] for k in range(self.cols)), Fraction(0))
                     for row in self.data)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return RatMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
                         shape=(self.rows, self.cols))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + other.scale(Fraction(-1))

    def scale(self, factor) -> "RatMatrix":
        c = as_rat(factor)
        return RatMatrix([[c * x for x in row] for row in self.data], shape=(self.rows, self.cols))

    def __neg__(self) -> "RatMatrix":
        return self.scale(Fraction(-1))

    def __eq__(self, other) -> bool:
        return (isinstance(other, RatMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.data == other.data)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        return f"RatMatrix({[[str(x) for x in row] for row in self.data]})"

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.data], dtype=float).reshape(
            self.rows, self.cols)

    def to_json(self) -> list[list[str]]:
        return [[format_rat(x) for x in row] for row in self.data]

    @classmethod
    def from_json(cls, rows: Sequence[Sequence[str]]) -> "RatMatrix":
        return cls([[parse_rat(x) for x in row] for row in rows])


def hstack(*mats: RatMatrix) -> RatMatrix:
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ValueError("row count mismatch")
    data = [sum((list(m.data[i]) for m in mats), []) for i in range(rows)]
    return RatMatrix(data, shape=(rows, sum(m.cols for m in mats)))


def vstack(*mats: RatMatrix) -> RatMatrix:
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ValueError("column count mismatch")
    data = [row for m in mats for row in m.data]
    return RatMatrix(data, shape=(sum(m.rows for m in mats), cols))


def rref(matrix: RatMatrix) -> tuple[RatMatrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot column indices."""
    grid = [list(row) for row in matrix.data]
    rows, cols = matrix.rows, matrix.cols
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if grid[i][c] != 0), None)
        if pivot_row is None:
            continue
        grid[r], grid[pivot_row] = grid[pivot_row], grid[r]
        inv = 1 / grid[r][c]
        grid[r] = [x * inv for x in grid[r]]
        for i in range(rows):
            if i != r and grid[i][c] != 0:
                factor = grid[i][c]
                grid[i] = [x - factor * y for x, y in zip(grid[i], grid[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return RatMatrix(grid, shape=(rows, cols)), tuple(pivots)


def rank(matrix: RatMatrix) -> int:
    return len(rref(matrix)[1])


def kernel_basis(matrix: RatMatrix) -> RatMatrix:
    """Columns form a basis of the right kernel."""
    reduced, pivots = rref(matrix)
    pivot_set = set(pivots)
    free = [j for j in range(matrix.cols) if j not in pivot_set]
    cols = []
    for j in free:
        vec = [Fraction(0)] * matrix.cols
        vec[j] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -reduced.data[r][j]
        cols.append(vec)
    return RatMatrix.from_columns(cols, ambient=matrix.cols)


def solve(matrix: RatMatrix, rhs: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
    """One exact solution of M x = rhs, or None when inconsistent."""
    aug = hstack(matrix, RatMatrix.from_columns([list(rhs)], ambient=matrix.rows))
    reduced, pivots = rref(aug)
    if matrix.cols in pivots:
        return None
    x = [Fraction(0)] * matrix.cols
    for r, p in enumerate(pivots):
        x[p] = reduced.data[r][matrix.cols]
    return tuple(x)


def det(matrix: RatMatrix) -> Fraction:
    if matrix.rows != matrix.cols:
        raise ValueError("determinant of a non-square matrix")
    n = matrix.rows
    grid = [list(row) for row in matrix.data]
    result = Fraction(1)
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if grid[i][c] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            grid[c], grid[pivot_row] = grid[pivot_row], grid[c]
            result = -result
        result *= grid[c][c]
        inv = 1 / grid[c][c]
        for i in range(c + 1, n):
            if grid[i][c] != 0:
                factor = grid[i][c] * inv
                grid[i] = [x - factor * y for x, y in zip(grid[i], grid[c])]
    return result


class Subspace:
    """Linear subspace with a canonical reduced column-echelon basis.

    Two subspaces are equal as sets exactly when their stored bases compare
    equal entrywise, which makes subspace comparisons syntactic.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence]):
        rows = [tuple(as_rat(x) for x in v) for v in vectors]
        if any(len(v) != ambient_dim for v in rows):
            raise ValueError("vector length differs from ambient dimension")
        if rows:
            reduced, pivots = rref(RatMatrix(rows))
            basis = RatMatrix.from_columns(
                [reduced.data[i] for i in range(len(pivots))], ambient=ambient_dim)
        else:
            basis = RatMatrix.zeros(ambient_dim, 0)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, [])

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, RatMatrix.identity(ambient_dim).data)

    @classmethod
    def from_matrix_columns(cls, matrix: RatMatrix) -> "Subspace":
        return cls(matrix.rows, matrix.transpose().data)

    @property
    def dim(self) -> int:
        return self.basis.cols

    def basis_vectors(self) -> list[tuple[Fraction, ...]]:
        return self.basis.columns()

    def contains_vector(self, vec: Sequence) -> bool:
        v = [as_rat(x) for x in vec]
        if len(v) != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return solve(self.basis, v) is not None

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def to_json(self) -> list[list[str]]:
        return self.basis.to_json()


def decompose(matrix: RatMatrix) -> tuple[int, Subspace, Subspace]:
    """Rank, right kernel and column-span image of an exact matrix."""
    ker = kernel_basis(matrix)
    image = Subspace(matrix.rows, matrix.transpose().data)
    rk = matrix.cols - ker.cols
    return rk, Subspace.from_matrix_columns(ker), image


def sub_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return Subspace(a.ambient_dim, a.basis.transpose().data + b.basis.transpose().data)


def sub_intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    stacked = hstack(a.basis, -b.basis)
    ker = kernel_basis(stacked)
    vectors = []
    for col in ker.columns():
        coeffs = col[:a.dim]
        vectors.append(a.basis.apply(coeffs))
    return Subspace(a.ambient_dim, vectors)


def sub_perp(a: Subspace) -> Subspace:
    ker = kernel_basis(a.basis.transpose())
    return Subspace.from_matrix_columns(ker)


def sub_preimage(matrix: RatMatrix, target: Subspace) -> Subspace:
    """{x : M x in target}, exactly."""
    if matrix.rows != target.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    normals = sub_perp(target).basis.transpose()  # rows annihilate target
    return Subspace.from_matrix_columns(kernel_basis(normals @ matrix))


def sub_image(matrix: RatMatrix, source: Subspace) -> Subspace:
    if matrix.cols != source.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return Subspace(matrix.rows, [matrix.apply(v) for v in source.basis_vectors()])


def sub_contains(outer: Subspace, inner) -> bool:
    if isinstance(inner, Subspace):
        _check_ambient(outer, inner)
        return all(outer.contains_vector(v) for v in inner.basis_vectors())
    return outer.contains_vector(inner)


def subspace_algebra(op: str, *args):
    """Dispatcher over the subspace lattice operations."""
    table = {"sum": sub_sum, "intersect": sub_intersect, "perp": sub_perp,
             "preimage": sub_preimage, "contains": sub_contains}
    if op not in table:
        raise ValueError(f"unknown subspace operation {op!r}")
    return table[op](*args)


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")


def real_eigen(matrix, tol: float = DEFAULT_TOL) -> list[tuple[float, int, int]]:
    """Real eigenvalues with algebraic and geometric multiplicities.

    Eigenvalues come from a floating solve; multiplicities are read off rank
    tests at tolerance `tol`, so nearby eigenvalues merge into one cluster.
    """
    arr = matrix.to_float() if isinstance(matrix, RatMatrix) else np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("real_eigen requires a square matrix")
    n = arr.shape[0]
    if n == 0:
        return []
    scale = max(1.0, float(np.abs(arr).max()))
    cluster_tol = max(tol, 1e-8) * scale
    eigvals = sorted(np.linalg.eigvals(arr), key=lambda z: (z.real, z.imag))
    used = [False] * n
    out = []
    for i, lam in enumerate(eigvals):
        if used[i] or abs(lam.imag) > cluster_tol:
            continue
        center = lam.real
        members = [j for j in range(n) if not used[j]
                   and abs(eigvals[j].real - center) <= cluster_tol
                   and abs(eigvals[j].imag) <= cluster_tol]
        for j in members:
            used[j] = True
        center = float(np.mean([eigvals[j].real for j in members]))
        shifted = arr - center * np.eye(n)
        svals = np.linalg.svd(shifted, compute_uv=False)
        geo = int(np.sum(svals <= cluster_tol * max(1.0, svals[0] if len(svals) else 1.0)))
        out.append((center, len(members), geo))
    out.sort(key=lambda t: t[0])
    return out


@dataclass(frozen=True)
class PencilCandidate:
    """One value of the pencil parameter where the rank drops.

    `exact` is set for rational candidates; irrational candidates carry their
    integer minimal polynomial (low-to-high coefficients) and a float value.
    """
    value: float
    exact: Fraction | None = None
    minpoly: tuple[Fraction, ...] | None = None

    @property
    def is_exact(self) -> bool:
        return self.exact is not None


@dataclass(frozen=True)
class PencilResult:
    kind: str  # "finite" | "singular"
    candidates: tuple[PencilCandidate, ...] = ()
    common_kernel: Subspace | None = None
    generic_rank: int = 0
    generic_nullity: int = 0


class PencilError(RuntimeError):
    """Raised when random probing of a pencil fails repeatedly."""


def pencil_candidates(m: RatMatrix, n: RatMatrix,
                      interval: tuple[Fraction, Fraction | None] = (Fraction(0), None),
                      tol: float = DEFAULT_TOL) -> PencilResult:
    """Parameters lam in [lo, hi] where rank(M - lam*N) drops below generic.

    Returns Singular with the lam-independent kernel when ker M and ker N
    intersect nontrivially; results are deterministic (seeded probes).
    """
    if (m.rows, m.cols) != (n.rows, n.cols):
        raise ValueError("pencil matrices must share a shape")
    lo, hi = interval
    lo = as_rat(lo)
    hi = None if hi is None else as_rat(hi)
    if hi is not None and hi < lo:
        raise ValueError("empty interval")
    common = kernel_basis(vstack(m, n))
    if common.cols > 0:
        return PencilResult(kind="singular",
                            common_kernel=Subspace.from_matrix_columns(common))
    if m.cols == 0:
        return PencilResult(kind="finite", generic_rank=0, generic_nullity=0)

    rng = random.Random(0x5EED)
    probes = [Fraction(rng.randint(10**3, 10**6), rng.randint(1, 97)) for _ in range(3)]
    generic_rank = max(rank(_pencil_at(m, n, lam)) for lam in probes)
    nullity = m.cols - generic_rank

    candidates = _root_candidates(m, n, generic_rank, lo, hi, rng)
    return PencilResult(kind="finite", candidates=tuple(candidates),
                        generic_rank=generic_rank, generic_nullity=nullity)


def _pencil_at(m: RatMatrix, n: RatMatrix, lam: Fraction) -> RatMatrix:
    return m - n.scale(lam)


def _root_candidates(m, n, generic_rank, lo, hi, rng):
    import sympy

    lam = sympy.Symbol("lam")
    p, k = m.rows, m.cols
    r = generic_rank
    sym_m = sympy.Matrix([[sympy.Rational(x) for x in row] for row in m.data])
    sym_n = sympy.Matrix([[sympy.Rational(x) for x in row] for row in n.data])
    poly = None
    for _ in range(6):
        u = sympy.Matrix([[sympy.Rational(rng.randint(-9, 9)) for _ in range(p)] for _ in range(r)])
        v = sympy.Matrix([[sympy.Rational(rng.randint(-9, 9)) for _ in range(r)] for _ in range(k)])
        compressed = u * (sym_m - lam * sym_n) * v
        candidate = sympy.Poly(compressed.det(method="berkowitz"), lam)
        if not candidate.is_zero:
            poly = candidate
            break
    if poly is None:
        raise PencilError("pencil compression degenerated at every probe")

    found: list[PencilCandidate] = []
    seen: set = set()
    for root in sympy.real_roots(poly):
        if root < sympy.Rational(lo):
            continue
        if hi is not None and root > sympy.Rational(hi):
            continue
        if root.is_rational:
            value = Fraction(int(root.p), int(root.q)) if hasattr(root, "p") else Fraction(str(root))
            if value in seen:
                continue
            if rank(_pencil_at(m, n, value)) < generic_rank:
                seen.add(value)
                found.append(PencilCandidate(value=float(value), exact=value))
        else:
            minpoly = sympy.minimal_polynomial(root, lam, polys=True)
            coeffs = tuple(Fraction(int(c.p), int(c.q)) for c in reversed(minpoly.all_coeffs()))
            approx = float(root.evalf(30))
            key = ("irr", coeffs, round(approx, 9))
            if key in seen:
                continue
            if algebraic_pencil_rank(m, n, coeffs) < generic_rank:
                seen.add(key)
                found.append(PencilCandidate(value=approx, minpoly=coeffs))
    found.sort(key=lambda c: c.value)
    return found


def companion_matrix(minpoly: Sequence[Fraction]) -> RatMatrix:
    """Companion matrix of a monic-normalized polynomial (low-to-high coeffs)."""
    coeffs = [as_rat(c) for c in minpoly]
    lead = coeffs[-1]
    if lead == 0:
        raise ValueError("zero leading coefficient")
    coeffs = [c / lead for c in coeffs[:-1]]
    d = len(coeffs)
    cols = []
    for j in range(d):
        col = [Fraction(0)] * d
        if j < d - 1:
            col[j + 1] = Fraction(1)
        else:
            col = [-c for c in coeffs]
        cols.append(col)
    return RatMatrix.from_columns(cols, ambient=d)


def algebraic_pencil_rank(m: RatMatrix, n: RatMatrix, minpoly: Sequence[Fraction],
                          extra_rows: RatMatrix | None = None) -> int:
    """Exact rank of M - lam*N over Q(lam) for lam a root of `minpoly`.

    Works through the companion embedding of Q(lam) into d x d rational
    blocks, so the answer is exact for every root of the (irreducible)
    polynomial.  `extra_rows` appends rational rows to the pencil before the
    rank is taken.
    """
    comp = companion_matrix(minpoly)
    d = comp.rows
    eye = RatMatrix.identity(d)
    blocks_m, blocks_n = m, n
    if extra_rows is not None:
        zero = RatMatrix.zeros(extra_rows.rows, m.cols)
        blocks_m = vstack(m, extra_rows)
        blocks_n = vstack(n, zero)
    big_rows = blocks_m.rows
    big = []
    for i in range(big_rows):
        strips = [[] for _ in range(d)]
        for j in range(m.cols):
            block = eye.scale(blocks_m.data[i][j]) - comp.scale(blocks_n.data[i][j])
            for bi in range(d):
                strips[bi].extend(block.data[bi])
        big.extend(strips)
    big_rank = rank(RatMatrix(big, shape=(big_rows * d, m.cols * d)))
    if big_rank % d != 0:
        raise ArithmeticError("companion embedding produced a non-multiple rank")
    return big_rank // d


def charpoly(matrix: RatMatrix) -> list[Fraction]:
    """Exact characteristic polynomial coefficients, low degree first."""
    import sympy

    if matrix.rows != matrix.cols:
        raise ValueError("characteristic polynomial of a non-square matrix")
    sym = sympy.Matrix([[sympy.Rational(x) for x in row] for row in matrix.data])
    poly = sym.charpoly()
    return [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
