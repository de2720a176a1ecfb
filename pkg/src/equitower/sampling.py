"""Seeded samplers for rational points and relation-biased configurations.

Random tuples essentially never satisfy an exact distance relation, so every
relation gets a constructive positive sampler alongside plain random and
degenerate draws.  Two building blocks make exact positives possible in any
of the supported norms:

* ``isometry generator`` matrices: linear maps preserving the norm exactly
  (rational rotations/reflections for l2; the eight signed coordinate
  permutations for l1/linf/lp).  Applying one to a segment vector yields a
  second segment of exactly equal length.
* rational-side triangles for l2: gluing two rational right triangles along
  a common height gives triples of points whose pairwise Euclidean
  distances are all rational, so ray constructions scale rationally.

All sampling is driven by a caller-supplied ``random.Random``.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .geometry import Point, Space, affine_combination, p_add

Matrix = tuple[Fraction, Fraction, Fraction, Fraction]  # row-major 2x2

IDENTITY: Matrix = (Fraction(1), Fraction(0), Fraction(0), Fraction(1))


def apply_matrix(m: Matrix, v: Point) -> Point:
    return Point(m[0] * v.x + m[1] * v.y, m[2] * v.x + m[3] * v.y)


def mat_mul(m: Matrix, n: Matrix) -> Matrix:
    return (
        m[0] * n[0] + m[1] * n[2],
        m[0] * n[1] + m[1] * n[3],
        m[2] * n[0] + m[3] * n[2],
        m[2] * n[1] + m[3] * n[3],
    )


def rational_rotation(leg_a: int, leg_b: int) -> Matrix:
    """Rotation by the angle of a rational point on the unit circle.

    Uses (leg_a^2 - leg_b^2, 2*leg_a*leg_b) / (leg_a^2 + leg_b^2): an exact
    orthogonal matrix with rational entries.
    """
    hyp = Fraction(leg_a * leg_a + leg_b * leg_b)
    cos = Fraction(leg_a * leg_a - leg_b * leg_b) / hyp
    sin = Fraction(2 * leg_a * leg_b) / hyp
    return (cos, -sin, sin, cos)


SIGNED_PERMUTATIONS: tuple[Matrix, ...] = tuple(
    (Fraction(a), Fraction(b), Fraction(c), Fraction(d))
    for a, b, c, d in (
        (1, 0, 0, 1),
        (-1, 0, 0, 1),
        (1, 0, 0, -1),
        (-1, 0, 0, -1),
        (0, 1, 1, 0),
        (0, -1, 1, 0),
        (0, 1, -1, 0),
        (0, -1, -1, 0),
    )
)

L2_GENERATORS: tuple[Matrix, ...] = (
    IDENTITY,
    rational_rotation(2, 1),  # the 3-4-5 rotation
    rational_rotation(3, 2),  # the 5-12-13 rotation
    (Fraction(1), Fraction(0), Fraction(0), Fraction(-1)),  # x-axis reflection
)


def isometry_generators(space: Space) -> tuple[Matrix, ...]:
    if space.norm.kind == "l2":
        return L2_GENERATORS
    return SIGNED_PERMUTATIONS


def rand_fraction(rng: random.Random, span: int = 24, max_den: int = 8) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def rand_positive_fraction(rng: random.Random, span: int = 12, max_den: int = 8) -> Fraction:
    return Fraction(rng.randint(1, span), rng.randint(1, max_den))


def rand_unit_fraction(rng: random.Random, max_den: int = 16) -> Fraction:
    """A rational strictly inside (0, 1)."""
    den = rng.randint(2, max_den)
    return Fraction(rng.randint(1, den - 1), den)


def rand_point(space: Space, rng: random.Random, span: int = 24, max_den: int = 8) -> Point:
    x = rand_fraction(rng, span, max_den)
    y = rand_fraction(rng, span, max_den)
    if space.backend == "float":
        return Point(float(x), float(y))
    return Point(x, y)


def rand_nonzero_vector(space: Space, rng: random.Random, span: int = 12) -> Point:
    while True:
        v = rand_point(space, rng, span=span, max_den=4)
        if v.x != 0 or v.y != 0:
            return v


def rand_isometry(space: Space, rng: random.Random) -> Matrix:
    return rng.choice(isometry_generators(space))


def equal_length_mate(space: Space, rng: random.Random, v: Point) -> Point:
    """A vector of exactly the same norm as v (exact even on floats up to rounding)."""
    m = rand_isometry(space, rng)
    if space.backend == "float":
        return Point(float(m[0]) * v.x + float(m[1]) * v.y, float(m[2]) * v.x + float(m[3]) * v.y)
    return apply_matrix(m, v)


def scale_vector(space: Space, v: Point, q: Fraction) -> Point:
    if space.backend == "float":
        return Point(float(q) * v.x, float(q) * v.y)
    return Point(q * v.x, q * v.y)


def rational_distance_triangle(
    rng: random.Random, span: int = 6
) -> tuple[Point, Point, Point, Fraction, Fraction, Fraction]:
    """Points b, a, c with all three pairwise l2 distances rational.

    Returns (b, a, c, d_ba, d_ac, d_bc).  Built from two rational points on
    circles sharing the same height, then translated by a random rational
    vector.  Degenerate (collinear) outputs are possible and legal.
    """
    r = rand_positive_fraction(rng, span=span, max_den=4)
    t1 = Fraction(rng.randint(1, 5), rng.randint(1, 5))
    t2 = Fraction(rng.randint(1, 5), rng.randint(1, 5))
    # (x, h) at rational distance r from the origin
    x = r * (1 - t1 * t1) / (1 + t1 * t1)
    h = r * 2 * t1 / (1 + t1 * t1)
    # (lam - x, h) at rational distance u from the origin
    u = h * (1 + t2 * t2) / (2 * t2)
    lam = x + u * (1 - t2 * t2) / (1 + t2 * t2)
    if rng.random() < 0.5:
        h = -h
    shift = Point(rand_fraction(rng), rand_fraction(rng))
    b = shift
    a = p_add(shift, Point(x, h))
    c = p_add(shift, Point(lam, Fraction(0)))
    return b, a, c, r, u, abs(lam)


def segment_point(space: Space, rng: random.Random, a: Point, c: Point) -> Point:
    """A point strictly inside segment ac (rational parameter)."""
    return affine_combination(a, c, rand_unit_fraction(rng))


def collinear_triple(space: Space, rng: random.Random) -> tuple[Point, Point, Point]:
    """a, b, c with b strictly inside segment ac and a != c."""
    a = rand_point(space, rng)
    while True:
        c = rand_point(space, rng)
        if not space.points_eq(a, c):
            break
    return a, segment_point(space, rng, a, c), c


def box_path_triple(space: Space, rng: random.Random) -> tuple[Point, Point, Point]:
    """A triple satisfying d(a,b) + d(b,c) = d(a,c) that can sit off the segment.

    In l1 any b inside the coordinate rectangle of (a, c) works; in linf a
    staircase point with dominated cross-coordinate works.  For l2 (strictly
    convex) this falls back to an on-segment point.
    """
    kind = space.norm.kind
    a = rand_point(space, rng)
    if kind == "l1":
        dx = Point(rand_positive_fraction(rng), Fraction(0))
        dy = Point(Fraction(0), rand_positive_fraction(rng))
        b = p_add(a, Point(dx.x * rand_unit_fraction(rng), dy.y * rand_unit_fraction(rng)))
        c = p_add(a, Point(dx.x, dy.y))
        if space.backend == "float":
            b = Point(float(b.x), float(b.y))
            c = Point(float(c.x), float(c.y))
        return a, b, c
    if kind == "linf":
        total = rand_positive_fraction(rng) + 2
        split = total * rand_unit_fraction(rng)
        rise = total * rand_unit_fraction(rng)
        # keep |rise| <= split and |total-split| >= |rise - y_c| trivially via y_c = 0
        if rise > split:
            rise = split
        if rise > total - split:
            rise = total - split
        b = p_add(a, Point(split, rise))
        c = p_add(a, Point(total, Fraction(0)))
        if space.backend == "float":
            b = Point(float(b.x), float(b.y))
            c = Point(float(c.x), float(c.y))
        return a, b, c
    return collinear_triple(space, rng)
