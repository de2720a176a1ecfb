"""Analytic oracles for every relation in the definition tower.

Each oracle states the relation's intended meaning directly in coordinates
and distances; the formula kernel is verified against these.  Key reading
notes baked in here:

* ``M(a,b,c)`` is the affine midpoint condition a + c = 2b with a != c,
  independent of the norm.
* ``ALPHA(n)`` / ``BETA(k)`` pin a unique point on the ray/segment from a
  through b: on a straight line the distance conditions force exactly
  x = a + n*(b-a) and y = a + 2^(-k)*(b-a) in every norm.
* ``PSI(n, k)`` replaces its existential point by the closed-form annulus
  condition |R - r| <= d(c,d) <= R + r, which is equivalent to existence in
  a two-dimensional normed plane (cross-checked constructively by
  :func:`equitower.geometry.sphere_intersection_point`).
* ``GAMMA`` is metric betweenness with pairwise-distinct arguments; ``B``
  is affine betweenness with endpoint equality allowed.  These coincide in
  strictly convex norms (l2) and genuinely differ in l1/linf.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .geometry import Point, Space, cross, p_sub
from .scalars import float_eq


class OracleError(Exception):
    """Bad relation id, index, or arity."""


@dataclass(frozen=True)
class RelationId:
    """A named relation, possibly carrying integer indices (e.g. PSI(3,2))."""

    name: str
    indices: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        spec = RELATION_SPECS.get(self.name)
        if spec is None:
            raise OracleError(f"unknown relation {self.name!r}")
        n_idx, _, idx_check = spec
        if len(self.indices) != n_idx:
            raise OracleError(
                f"{self.name} takes {n_idx} index argument(s), got {len(self.indices)}"
            )
        if idx_check is not None and not idx_check(self.indices):
            raise OracleError(f"invalid indices {self.indices} for {self.name}")

    def arity(self) -> int:
        return RELATION_SPECS[self.name][1]

    def label(self) -> str:
        if not self.indices:
            return self.name
        return f"{self.name}({','.join(str(i) for i in self.indices)})"

    @staticmethod
    def parse(text: str) -> "RelationId":
        """Parse 'GAMMA' or 'PSI:3:2' style labels."""
        parts = text.split(":")
        name = parts[0].upper()
        try:
            indices = tuple(int(p) for p in parts[1:])
        except ValueError as exc:
            raise OracleError(f"bad relation indices in {text!r}") from exc
        return RelationId(name, indices)


# name -> (index count, point arity, index validity check)
RELATION_SPECS: dict[str, tuple[int, int, "object"]] = {
    "EQUIV2": (0, 4, None),
    "PHI": (1, 3, lambda ix: ix[0] >= 0),
    "M": (0, 3, None),
    "ALPHA": (1, 3, lambda ix: ix[0] >= 1),
    "BETA": (1, 3, lambda ix: ix[0] >= 1),
    "PSI": (2, 4, lambda ix: ix[0] >= 1 and ix[1] >= 1),
    "GAMMA": (0, 3, None),
    "B": (0, 3, None),
    "DELTA": (1, 3, lambda ix: ix[0] >= 1),
    "NEQ": (0, 2, None),
    "LE": (0, 4, None),
    "COLLINEAR": (0, 3, None),
    "PARALLELOGRAM": (0, 4, None),
}

EQUIV2 = RelationId("EQUIV2")
M = RelationId("M")
GAMMA = RelationId("GAMMA")
B = RelationId("B")
NEQ = RelationId("NEQ")
LE = RelationId("LE")
COLLINEAR = RelationId("COLLINEAR")
PARALLELOGRAM = RelationId("PARALLELOGRAM")


def PHI(n: int) -> RelationId:
    return RelationId("PHI", (n,))


def ALPHA(n: int) -> RelationId:
    return RelationId("ALPHA", (n,))


def BETA(k: int) -> RelationId:
    return RelationId("BETA", (k,))


def PSI(n: int, k: int) -> RelationId:
    return RelationId("PSI", (n, k))


def DELTA(n: int) -> RelationId:
    return RelationId("DELTA", (n,))


# ----------------------------------------------------------------------
# oracles
# ----------------------------------------------------------------------


def oracle_equiv2(space: Space, a: Point, b: Point, c: Point, d: Point) -> bool:
    """d(a,b) = 2 * d(c,d)."""
    return space.eq_dist_scaled(a, b, 2, c, d)


def _coords_eq(space: Space, p: Point, q: Point) -> bool:
    if space.backend == "exact":
        return p == q
    tol = space.tolerance
    return float_eq(p.x, q.x, tol) and float_eq(p.y, q.y, tol)


def oracle_midpoint(space: Space, a: Point, b: Point, c: Point) -> bool:
    """a + c = 2b coordinatewise, with a != c (affine; norm plays no role)."""
    if space.points_eq(a, c):
        return False
    double_b = Point(2 * b.x, 2 * b.y)
    return _coords_eq(space, Point(a.x + c.x, a.y + c.y), double_b)


def oracle_phi(space: Space, n: int, a: Point, b: Point, x: Point) -> bool:
    """Metric-midpoint test, stage 0 only: d(x,a) = d(x,b) and d(a,b) = 2 d(x,a).

    Stages n >= 1 tighten toward the affine midpoint but have no stated
    closed form at finite n; they are exposed for exploration through the
    formula kernel, not as an oracle.
    """
    if n != 0:
        raise OracleError("PHI has an oracle only at stage 0")
    return space.eq_dist(x, a, x, b) and space.eq_dist_scaled(a, b, 2, x, a)


def oracle_alpha(space: Space, n: int, a: Point, b: Point, x: Point) -> bool:
    """x is on ray a->b with d(a,x) = n*d(a,b): exactly x = a + n*(b-a)."""
    if n < 1:
        raise OracleError("ALPHA needs n >= 1")
    if space.points_eq(a, b):
        return False
    target = Point(a.x + n * (b.x - a.x), a.y + n * (b.y - a.y))
    return _coords_eq(space, x, target)


def oracle_beta(space: Space, k: int, a: Point, b: Point, y: Point) -> bool:
    """y is on segment ab with d(a,y) = 2^(-k) * d(a,b): y = a + 2^(-k)(b-a)."""
    if k < 1:
        raise OracleError("BETA needs k >= 1")
    if space.points_eq(a, b):
        return False
    t = Fraction(1, 2**k)
    target = Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
    return _coords_eq(space, y, target)


def oracle_psi(space: Space, n: int, k: int, a: Point, b: Point, c: Point, d: Point) -> bool:
    """Existence of e with d(c,e) = n*2^(-k)*d(a,b) and d(d,e) = 2^(-k)*d(a,b).

    With R = n*2^(-k)*u and r = 2^(-k)*u (u = d(a,b)), existence in a
    2-dimensional normed plane is exactly |R-r| <= d(c,d) <= R+r, i.e.
    (n-1)*2^(-k)*u <= d(c,d) <= (n+1)*2^(-k)*u.
    """
    if n < 1 or k < 1:
        raise OracleError("PSI needs n >= 1 and k >= 1")
    if space.points_eq(a, b) or space.points_eq(c, d):
        return False
    lo = Fraction(n - 1, 2**k)
    hi = Fraction(n + 1, 2**k)
    return space.le_dist_scaled(c, d, hi, a, b) and space.ge_dist_scaled(c, d, lo, a, b)


def oracle_gamma(space: Space, a: Point, b: Point, c: Point) -> bool:
    """Three pairwise-distinct points with d(a,b) + d(b,c) = d(a,c)."""
    if space.points_eq(a, b) or space.points_eq(b, c) or space.points_eq(a, c):
        return False
    return space.path_sum_eq(a, b, c)


def oracle_B(space: Space, a: Point, b: Point, c: Point) -> bool:
    """Affine betweenness: b = a + t(c-a) for some t in [0,1], endpoints allowed."""
    if space.backend == "exact":
        if a == c:
            return b == a
        u = p_sub(c, a)
        v = p_sub(b, a)
        if cross(u, v) != 0:
            return False
        t = Fraction(v.x, u.x) if u.x != 0 else Fraction(v.y, u.y)
        return 0 <= t <= 1
    tol = space.tolerance
    if space.points_eq(a, c):
        return space.points_eq(b, a)
    u = p_sub(c, a)
    v = p_sub(b, a)
    scale = max(1.0, abs(u.x), abs(u.y)) * max(1.0, abs(v.x), abs(v.y))
    if abs(cross(u, v)) > tol * scale:
        return False
    denom = u.x * u.x + u.y * u.y
    t = (v.x * u.x + v.y * u.y) / denom
    return -tol <= t <= 1.0 + tol


def oracle_delta(space: Space, n: int, a: Point, b: Point, c: Point) -> bool:
    """d(a,c) <= n * d(a,b)."""
    if n < 1:
        raise OracleError("DELTA needs n >= 1")
    return space.le_dist_scaled(a, c, n, a, b)


def oracle_distinct(space: Space, a: Point, b: Point) -> bool:
    return not space.points_eq(a, b)


def oracle_le(space: Space, a: Point, b: Point, c: Point, d: Point) -> bool:
    """Segment-length order: d(a,b) <= d(c,d)."""
    return space.le_dist(a, b, c, d)


def oracle_collinear(space: Space, a: Point, b: Point, c: Point) -> bool:
    u = p_sub(b, a)
    v = p_sub(c, a)
    if space.backend == "exact":
        return cross(u, v) == 0
    scale = max(1.0, abs(u.x), abs(u.y)) * max(1.0, abs(v.x), abs(v.y))
    return abs(cross(u, v)) <= space.tolerance * scale


def oracle_parallelogram(space: Space, a: Point, b: Point, c: Point, d: Point) -> bool:
    """a,b,c,d are the vertices, in order, of a nondegenerate parallelogram."""
    if not _coords_eq(space, p_sub(b, a), p_sub(c, d)):
        return False
    # with b-a = c-d, the four points are collinear iff a,b,c already are
    return not oracle_collinear(space, a, b, c)


def oracle_truth(space: Space, rel: RelationId, points: tuple[Point, ...]) -> bool:
    """Dispatch a relation id to its oracle."""
    if len(points) != rel.arity():
        raise OracleError(f"{rel.label()} expects {rel.arity()} points, got {len(points)}")
    name = rel.name
    if name == "EQUIV2":
        return oracle_equiv2(space, *points)
    if name == "PHI":
        return oracle_phi(space, rel.indices[0], *points)
    if name == "M":
        return oracle_midpoint(space, *points)
    if name == "ALPHA":
        return oracle_alpha(space, rel.indices[0], *points)
    if name == "BETA":
        return oracle_beta(space, rel.indices[0], *points)
    if name == "PSI":
        return oracle_psi(space, rel.indices[0], rel.indices[1], *points)
    if name == "GAMMA":
        return oracle_gamma(space, *points)
    if name == "B":
        return oracle_B(space, *points)
    if name == "DELTA":
        return oracle_delta(space, rel.indices[0], *points)
    if name == "NEQ":
        return oracle_distinct(space, *points)
    if name == "LE":
        return oracle_le(space, *points)
    if name == "COLLINEAR":
        return oracle_collinear(space, *points)
    if name == "PARALLELOGRAM":
        return oracle_parallelogram(space, *points)
    raise OracleError(f"no oracle for {name}")
