"""Built-in fans and polytopes so every report is runnable without input files.

The --example mini-language: pn:<n>, p1n:<n>, hirzebruch:<a>, bl3p2,
box:<a1>x<a2>x..., plus the polytope extras simplex:<n>:<d> and
trapezoid:<n>:<m>.
"""

from __future__ import annotations

import itertools
import random

from .lattice import Fan, LatticePolytope, normal_fan


def projective_space_fan(n: int) -> Fan:
    """Rays e_1..e_n and -(e_1+...+e_n); maximal cones drop one ray each."""
    if n < 1:
        raise ValueError("need n >= 1")
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [tuple(sorted(set(range(n + 1)) - {i})) for i in range(n + 1)]
    return Fan(n, tuple(rays), tuple(cones))


def p1_power_fan(n: int) -> Fan:
    """Rays +-e_i; maximal cones are the 2^n orthants."""
    if n < 1:
        raise ValueError("need n >= 1")
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays += [tuple(-1 if j == i else 0 for j in range(n)) for i in range(n)]
    cones = []
    for signs in itertools.product((0, 1), repeat=n):
        cones.append(tuple(sorted(i + n * s for i, s in enumerate(signs))))
    return Fan(n, tuple(rays), tuple(cones))


def hirzebruch_fan(a: int) -> Fan:
    """Rays (-1,0), (0,-1), (1,a), (0,1) with the four adjacent cones."""
    if a < 0:
        raise ValueError("need a >= 0")
    rays = ((-1, 0), (0, -1), (1, a), (0, 1))
    cones = ((0, 1), (1, 2), (2, 3), (0, 3))
    return Fan(2, rays, cones)


def bl3p2_fan() -> Fan:
    """The hexagonal fan with rays +-e_1, +-e_2, +-(e_1+e_2)."""
    rays = ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))
    cones = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5))
    return Fan(2, rays, cones)


def box_polytope(sides) -> LatticePolytope:
    """Product of intervals [0, a_i]."""
    sides = tuple(int(a) for a in sides)
    if not sides or any(a < 1 for a in sides):
        raise ValueError("box sides must be positive")
    n = len(sides)
    normals = [tuple(-1 if j == i else 0 for j in range(n)) for i in range(n)]
    normals += [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    offsets = [0] * n + list(sides)
    return LatticePolytope(tuple(normals), tuple(offsets))


def simplex_polytope(n: int, d: int) -> LatticePolytope:
    """{m >= 0, m_1 + ... + m_n <= d}."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    normals = [tuple(-1 if j == i else 0 for j in range(n)) for i in range(n)]
    normals.append(tuple(1 for _ in range(n)))
    offsets = [0] * n + [d]
    return LatticePolytope(tuple(normals), tuple(offsets))


def trapezoid_polytope(n: int, m: int) -> LatticePolytope:
    """{m >= 0, m_1 + m_2 <= n, m_2 <= m}: the section polytope of the
    standard-form class (n, m) on the first Hirzebruch surface."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    return LatticePolytope(((-1, 0), (0, -1), (1, 1), (0, 1)),
                           (0, 0, n, m))


def hexagon_polytope() -> LatticePolytope:
    """Chopped triangle {m >= 0, 1 <= m_1 + m_2 <= 3, m_i <= 2}: the
    hexagon whose outer-normal fan is the bl3p2 fan."""
    return LatticePolytope(
        ((-1, 0), (0, -1), (1, 1), (-1, -1), (1, 0), (0, 1)),
        (0, 0, 3, -1, 2, 2))


def unit_square_polytope() -> LatticePolytope:
    return box_polytope((1, 1))


# ---------------------------------------------------------------------------
# random smooth polygons: start from a box or a dilated triangle and make
# random smooth corner chops (each chop is a toric blow-up on the dual side).


def polygon_is_smooth(p: LatticePolytope) -> bool:
    from .lattice import primitivize, vertex_neighbors
    from .linalg import det, vec_sub
    nbrs = vertex_neighbors(p)
    for v, ws in nbrs.items():
        if len(ws) != 2:
            return False
        dirs = []
        for w in ws:
            diff = vec_sub(w, v)
            if any(x.denominator != 1 for x in diff):
                return False
            dirs.append(primitivize(tuple(int(x) for x in diff)))
        if abs(det(dirs)) != 1:
            return False
    return True


def _edge_length(v, w):
    from math import gcd
    dx = int(w[0] - v[0])
    dy = int(w[1] - v[1])
    return gcd(abs(dx), abs(dy))


def random_smooth_polygon(rng: random.Random) -> LatticePolytope:
    """Seeded random smooth lattice polygon (all vertices unimodular)."""
    if rng.random() < 0.5:
        poly = box_polytope((rng.randint(2, 5), rng.randint(2, 5)))
    else:
        poly = simplex_polytope(2, rng.randint(3, 6))
    for _ in range(rng.randint(0, 4)):
        chopped = _chop_random_corner(poly, rng)
        if chopped is not None:
            poly = chopped
    assert polygon_is_smooth(poly)
    return poly


def _chop_random_corner(p: LatticePolytope, rng: random.Random):
    from .lattice import polytope_vertex_tight_sets, primitivize, vertex_neighbors
    verts = p.vertices
    tight = polytope_vertex_tight_sets(p)
    nbrs = vertex_neighbors(p)
    candidates = []
    for vi, v in enumerate(verts):
        ws = nbrs[v]
        if len(ws) != 2:
            return None
        maxk = min(_edge_length(v, w) for w in ws) - 1
        if maxk >= 1:
            candidates.append((vi, maxk))
    if not candidates:
        return None
    vi, maxk = candidates[rng.randrange(len(candidates))]
    v = verts[vi]
    k = rng.randint(1, min(maxk, 2))
    nus = [primitivize(p.normals[i]) for i in sorted(tight[vi])]
    if len(nus) != 2:
        return None
    new_normal = tuple(a + b for a, b in zip(nus[0], nus[1]))
    vint = tuple(int(x) for x in v)
    offset = sum(a * b for a, b in zip(new_normal, vint)) - k
    return p.with_inequality(new_normal, offset)


# ---------------------------------------------------------------------------
# mini-language


def example_fan(spec: str) -> Fan:
    name, *args = spec.split(":")
    if name == "pn":
        return projective_space_fan(int(args[0]))
    if name == "p1n":
        return p1_power_fan(int(args[0]))
    if name == "hirzebruch":
        return hirzebruch_fan(int(args[0]))
    if name == "bl3p2":
        return bl3p2_fan()
    if name in ("box", "simplex", "trapezoid"):
        fan, _ = normal_fan(example_polytope(spec))
        return fan
    raise ValueError(f"unknown fan example '{spec}'")


def example_polytope(spec: str) -> LatticePolytope:
    name, *args = spec.split(":")
    if name == "box":
        return box_polytope(tuple(int(a) for a in args[0].split("x")))
    if name == "simplex":
        return simplex_polytope(int(args[0]), int(args[1]))
    if name == "trapezoid":
        return trapezoid_polytope(int(args[0]), int(args[1]))
    if name == "bl3p2":
        return hexagon_polytope()
    if name == "square":
        return unit_square_polytope()
    raise ValueError(f"unknown polytope example '{spec}'")
