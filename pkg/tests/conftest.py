import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

from conreach.exactla import RatMatrix
from conreach.geomctrl import Sigma
from conreach.polyhedra import Polyhedron

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "src" / "conreach" / "fixtures"


def load_system(name):
    with open(FIXTURE_DIR / name) as handle:
        data = json.load(handle)
    return Sigma.from_dict(data["sigma"]), Polyhedron.from_dict(data["constraint"])


def load_polyhedron(name):
    with open(FIXTURE_DIR / name) as handle:
        return Polyhedron.from_dict(json.load(handle))


@pytest.fixture(scope="session")
def ex1():
    return load_system("ex1.json")


@pytest.fixture(scope="session")
def ex2():
    return load_system("ex2.json")


@pytest.fixture(scope="session")
def ex3():
    return load_system("ex3.json")


@pytest.fixture(scope="session")
def ex4():
    return load_system("ex4.json")


@pytest.fixture(scope="session")
def ex5():
    return load_system("ex5.json")


@pytest.fixture(scope="session")
def ex6_graph():
    return load_polyhedron("ex6_graph.json")


def random_sigma(rng, n, m, s, span=2):
    mk = lambda r, c: RatMatrix([[rng.randint(-span, span) for _ in range(c)]
                                 for _ in range(r)])
    return Sigma(mk(n, n), mk(n, m), mk(s, n), mk(s, m))


def random_solid_set(rng, s, bounded=None, origin_interior=True):
    """A solid polyhedron in R^s; origin strictly inside unless told otherwise."""
    if bounded is None:
        bounded = rng.random() < 0.6
    rows, rhs = [], []
    for _ in range(rng.randint(s + 1, 2 * s + 2)):
        row = [rng.randint(-2, 2) for _ in range(s)]
        if all(x == 0 for x in row):
            continue
        rows.append(row)
        rhs.append(rng.randint(1, 3) if origin_interior else rng.randint(0, 3))
    if bounded:
        for i in range(s):
            unit = [0] * s
            unit[i] = 1
            rows.append(list(unit))
            rhs.append(rng.randint(1, 3))
            rows.append([-x for x in unit])
            rhs.append(rng.randint(1, 3))
    poly = Polyhedron.from_hrep(s, rows, rhs)
    if poly.is_empty or poly.eq_rows:
        return None
    if origin_interior and not poly.contains([0] * s, strict=True):
        return None
    if not poly.contains([0] * s):
        return None
    return poly


def random_polyhedron(rng, dim, kinds=("hrep", "box", "cone", "shifted")):
    """Assorted random polyhedra for the convex-calculus property suite."""
    kind = rng.choice(kinds)
    if kind == "box":
        bounds = []
        for _ in range(dim):
            lo = rng.choice([None, -rng.randint(0, 3)])
            hi = rng.choice([None, rng.randint(0, 3)])
            bounds.append((lo, hi))
        return Polyhedron.from_box(bounds)
    if kind == "cone":
        rows = []
        for _ in range(rng.randint(1, 2 * dim)):
            row = [rng.randint(-2, 2) for _ in range(dim)]
            if any(x != 0 for x in row):
                rows.append(row)
        return Polyhedron.from_hrep(dim, rows, [0] * len(rows))
    if kind == "shifted":
        rows, rhs = [], []
        for _ in range(rng.randint(dim, 2 * dim + 2)):
            row = [rng.randint(-2, 2) for _ in range(dim)]
            if any(x != 0 for x in row):
                rows.append(row)
                rhs.append(rng.randint(-1, 3))
        return Polyhedron.from_hrep(dim, rows, rhs)
    rows, rhs = [], []
    for _ in range(rng.randint(dim + 1, 3 * dim + 2)):
        row = [rng.randint(-3, 3) for _ in range(dim)]
        if any(x != 0 for x in row):
            rows.append(row)
            rhs.append(rng.randint(0, 4))
    return Polyhedron.from_hrep(dim, rows, rhs)


def conditioned_corpus(seed, count, predicate, nmax=3, mmax=2, smax=2,
                       max_tries=5000, bounded=None):
    """Deterministic stream of validated systems satisfying `predicate`."""
    from conreach.decide import validate

    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < count and tries < max_tries:
        tries += 1
        n = rng.randint(1, nmax)
        m = rng.randint(1, mmax)
        s = rng.randint(1, smax)
        sig = random_sigma(rng, n, m, s)
        constraint = random_solid_set(rng, s, bounded=bounded)
        if constraint is None:
            continue
        if not validate(sig, constraint).ok:
            continue
        if not predicate(sig, constraint):
            continue
        out.append((sig, constraint))
    return out
