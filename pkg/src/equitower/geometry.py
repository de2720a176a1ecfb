"""Coordinate plane over p-norms with exact-rational and tolerant-float backends.

The only geometric primitive the definition tower is allowed to consume is
equidistance (``equidistant``): segment ab is as long as segment cd.  All
other comparisons offered here (scaled equality, length order, two-leg path
equality) exist for oracles, witness construction, and axiom checking.

On the exact backend every predicate is decided with integer arithmetic:
L1 and Linf lengths are rational, and L2 comparisons go through squared
distances (single lengths) or through the radical comparators in
:mod:`equitower.scalars` (sums of lengths).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Union

from .scalars import (
    Rad,
    ceil_sqrt,
    cmp_radical_sums,
    float_eq,
    float_le,
    format_exact,
    parse_exact,
)

Scalar = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"

NORM_KINDS = ("l1", "l2", "linf", "lp")


class GeometryError(Exception):
    """Base for geometric construction and backend failures."""


class BackendMismatchError(GeometryError):
    """Points or scalars do not match the space's backend."""


class ExactBackendRefusedError(GeometryError):
    """The requested construction is irrational in general; use floats."""


class NoIntersectionError(GeometryError):
    """Sphere intersection precondition (annulus inclusion) fails."""


class SolverError(GeometryError):
    """A numeric witness construction did not converge to tolerance."""


class Point(NamedTuple):
    x: Scalar
    y: Scalar


def p_add(a: Point, b: Point) -> Point:
    return Point(a.x + b.x, a.y + b.y)


def p_sub(a: Point, b: Point) -> Point:
    return Point(a.x - b.x, a.y - b.y)


def p_scale(a: Point, t: Scalar) -> Point:
    return Point(a.x * t, a.y * t)


def cross(u: Point, v: Point) -> Scalar:
    return u.x * v.y - u.y * v.x


def dot(u: Point, v: Point) -> Scalar:
    return u.x * v.x + u.y * v.y


def affine_combination(a: Point, b: Point, t: Scalar) -> Point:
    """The point a + t*(b - a); exact when inputs and t are rational."""
    return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))


def midpoint(a: Point, b: Point) -> Point:
    return affine_combination(a, b, Fraction(1, 2))


@dataclass(frozen=True)
class NormSpec:
    """One of the plane norms: l1, l2, linf, or lp with rational p > 1."""

    kind: str
    p: Fraction | None = None

    def __post_init__(self) -> None:
        if self.kind not in NORM_KINDS:
            raise GeometryError(f"unknown norm kind {self.kind!r}")
        if self.kind == "lp":
            if self.p is None or self.p <= 1:
                raise GeometryError("lp norm needs rational p > 1")
        elif self.p is not None:
            raise GeometryError(f"norm {self.kind} takes no p parameter")

    def label(self) -> str:
        if self.kind == "lp":
            return f"lp({format_exact(self.p)})"
        return self.kind


L1 = NormSpec("l1")
L2 = NormSpec("l2")
LINF = NormSpec("linf")


def lp(p: Fraction | int | str) -> NormSpec:
    return NormSpec("lp", Fraction(p))


@dataclass(frozen=True)
class Space:
    """Norm + backend + comparison tolerance.

    Exact backend: permitted for l1, linf, and l2 (l2 equality and order are
    decided on squared distances, which stay rational).  lp with
    p outside {1, 2, inf} is float-only.  Tolerance must be 0 on the exact
    backend; on floats all comparisons use
    ``|u - v| <= tolerance * max(1, |u|, |v|)``.
    """

    norm: NormSpec = field(default=L2)
    backend: str = EXACT
    tolerance: float = 0.0

    def __post_init__(self) -> None:
        if self.backend not in (EXACT, FLOAT):
            raise GeometryError(f"unknown backend {self.backend!r}")
        if self.backend == EXACT:
            if self.norm.kind == "lp":
                raise GeometryError("lp norms are float-only; no exact backend")
            if self.tolerance != 0:
                raise GeometryError("exact backend uses zero tolerance")
        else:
            if self.tolerance < 0:
                raise GeometryError("tolerance must be nonnegative")

    # ------------------------------------------------------------------
    # point plumbing
    # ------------------------------------------------------------------

    def point(self, x, y) -> Point:
        if self.backend == EXACT:
            return Point(parse_exact(x), parse_exact(y))
        return Point(float(x), float(y))

    def check_point(self, p: Point) -> Point:
        want = Fraction if self.backend == EXACT else float
        if not (isinstance(p.x, (want, int)) and isinstance(p.y, (want, int))):
            raise BackendMismatchError(
                f"point {p!r} does not match backend {self.backend!r}"
            )
        return p

    def points_eq(self, a: Point, b: Point) -> bool:
        if self.backend == EXACT:
            return a.x == b.x and a.y == b.y
        return float_eq(self._fdist(a, b), 0.0, self.tolerance)

    # ------------------------------------------------------------------
    # lengths
    # ------------------------------------------------------------------

    def sq_dist(self, a: Point, b: Point) -> Fraction:
        dx, dy = a.x - b.x, a.y - b.y
        return dx * dx + dy * dy

    def _exact_len(self, a: Point, b: Point) -> Fraction:
        dx, dy = abs(a.x - b.x), abs(a.y - b.y)
        if self.norm.kind == "l1":
            return dx + dy
        return max(dx, dy)

    def _fdist(self, a: Point, b: Point) -> float:
        dx, dy = abs(a.x - b.x), abs(a.y - b.y)
        kind = self.norm.kind
        if kind == "l1":
            return dx + dy
        if kind == "linf":
            return max(dx, dy)
        if kind == "l2":
            return math.hypot(dx, dy)
        p = float(self.p_value())
        return (dx**p + dy**p) ** (1.0 / p)

    def p_value(self) -> Fraction:
        assert self.norm.kind == "lp" and self.norm.p is not None
        return self.norm.p

    def distance(self, a: Point, b: Point):
        """Length of segment ab as a backend scalar.

        Exact l1/linf: a Fraction.  Exact l2: a :class:`Rad` square-root
        value (rational exactly when the squared distance is a perfect
        square).  Float backend: a double.
        """
        self.check_point(a)
        self.check_point(b)
        if self.backend == FLOAT:
            return self._fdist(a, b)
        if self.norm.kind == "l2":
            return Rad.sqrt(self.sq_dist(a, b))
        return self._exact_len(a, b)

    # ------------------------------------------------------------------
    # exact/tolerant comparisons used by every oracle
    # ------------------------------------------------------------------

    def eq_dist(self, a: Point, b: Point, c: Point, d: Point) -> bool:
        """The primitive relation: d(a,b) = d(c,d)."""
        if self.backend == FLOAT:
            return float_eq(self._fdist(a, b), self._fdist(c, d), self.tolerance)
        if self.norm.kind == "l2":
            return self.sq_dist(a, b) == self.sq_dist(c, d)
        return self._exact_len(a, b) == self._exact_len(c, d)

    def eq_dist_scaled(self, a: Point, b: Point, q, c: Point, d: Point) -> bool:
        """d(a,b) = q * d(c,d) for rational q >= 0."""
        q = Fraction(q)
        if q < 0:
            raise GeometryError("scale factor must be nonnegative")
        if self.backend == FLOAT:
            return float_eq(self._fdist(a, b), float(q) * self._fdist(c, d), self.tolerance)
        if self.norm.kind == "l2":
            return self.sq_dist(a, b) == q * q * self.sq_dist(c, d)
        return self._exact_len(a, b) == q * self._exact_len(c, d)

    def le_dist(self, a: Point, b: Point, c: Point, d: Point) -> bool:
        """d(a,b) <= d(c,d)."""
        if self.backend == FLOAT:
            return float_le(self._fdist(a, b), self._fdist(c, d), self.tolerance)
        if self.norm.kind == "l2":
            return self.sq_dist(a, b) <= self.sq_dist(c, d)
        return self._exact_len(a, b) <= self._exact_len(c, d)

    def le_dist_scaled(self, a: Point, b: Point, q, c: Point, d: Point) -> bool:
        """d(a,b) <= q * d(c,d) for rational q >= 0."""
        q = Fraction(q)
        if q < 0:
            raise GeometryError("scale factor must be nonnegative")
        if self.backend == FLOAT:
            return float_le(self._fdist(a, b), float(q) * self._fdist(c, d), self.tolerance)
        if self.norm.kind == "l2":
            return self.sq_dist(a, b) <= q * q * self.sq_dist(c, d)
        return self._exact_len(a, b) <= q * self._exact_len(c, d)

    def ge_dist_scaled(self, a: Point, b: Point, q, c: Point, d: Point) -> bool:
        """d(a,b) >= q * d(c,d) for rational q >= 0."""
        q = Fraction(q)
        if q < 0:
            raise GeometryError("scale factor must be nonnegative")
        if self.backend == FLOAT:
            return float_le(float(q) * self._fdist(c, d), self._fdist(a, b), self.tolerance)
        if self.norm.kind == "l2":
            return self.sq_dist(a, b) >= q * q * self.sq_dist(c, d)
        return self._exact_len(a, b) >= q * self._exact_len(c, d)

    def path_sum_eq(self, a: Point, b: Point, c: Point) -> bool:
        """d(a,b) + d(b,c) = d(a,c): b is metrically on a shortest path."""
        if self.backend == FLOAT:
            return float_eq(
                self._fdist(a, b) + self._fdist(b, c), self._fdist(a, c), self.tolerance
            )
        if self.norm.kind != "l2":
            return self._exact_len(a, b) + self._exact_len(b, c) == self._exact_len(a, c)
        # sqrt(A) + sqrt(B) = sqrt(C)  <=>  C - A - B >= 0 and (C-A-B)^2 = 4AB
        ab, bc, ac = self.sq_dist(a, b), self.sq_dist(b, c), self.sq_dist(a, c)
        lead = ac - ab - bc
        return lead >= 0 and lead * lead == 4 * ab * bc

    def path_defect_at_most(self, a: Point, b: Point, c: Point, coeff: Fraction) -> bool:
        """d(a,b) + d(b,c) <= d(a,c) + coeff * d(a,b), decided exactly.

        The defect d(a,b)+d(b,c)-d(a,c) is nonnegative (triangle
        inequality); this tests whether it is within coeff*d(a,b).  The
        blind band of the truncated metric-betweenness tower at depth K is
        exactly coeff = 2^(1-K).
        """
        coeff = Fraction(coeff)
        if not 0 <= coeff <= 1:
            raise GeometryError("defect coefficient must lie in [0, 1]")
        if self.backend == FLOAT:
            lhs = self._fdist(a, b) + self._fdist(b, c)
            rhs = self._fdist(a, c) + float(coeff) * self._fdist(a, b)
            return float_le(lhs, rhs, self.tolerance)
        if self.norm.kind != "l2":
            lhs = self._exact_len(a, b) + self._exact_len(b, c)
            return lhs <= self._exact_len(a, c) + coeff * self._exact_len(a, b)
        left = ((1 - coeff) * Rad.sqrt(self.sq_dist(a, b)), Rad.sqrt(self.sq_dist(b, c)))
        right = (Rad.sqrt(self.sq_dist(a, c)),)
        return cmp_radical_sums(left, right) <= 0

    def scaled_ratio_ceil(self, factor: int, num: tuple[Point, Point], den: tuple[Point, Point]) -> int:
        """ceil(factor * d(num) / d(den)), decided exactly on the exact backend."""
        a, b = num
        c, d = den
        if self.backend == FLOAT:
            dd = self._fdist(c, d)
            if dd == 0.0:
                raise GeometryError("ratio against a degenerate segment")
            return math.ceil(factor * self._fdist(a, b) / dd)
        if self.norm.kind == "l2":
            den_sq = self.sq_dist(c, d)
            if den_sq == 0:
                raise GeometryError("ratio against a degenerate segment")
            return ceil_sqrt(Fraction(factor * factor) * self.sq_dist(a, b) / den_sq)
        den_len = self._exact_len(c, d)
        if den_len == 0:
            raise GeometryError("ratio against a degenerate segment")
        return math.ceil(Fraction(factor) * self._exact_len(a, b) / den_len)

    def label(self) -> str:
        return f"{self.norm.label()}/{self.backend}"


# ----------------------------------------------------------------------
# spec'd operations as module-level functions
# ----------------------------------------------------------------------


def distance(space: Space, a: Point, b: Point):
    return space.distance(a, b)


def equidistant(space: Space, a: Point, b: Point, c: Point, d: Point) -> bool:
    space.check_point(a), space.check_point(b)
    space.check_point(c), space.check_point(d)
    return space.eq_dist(a, b, c, d)


def scaled_equidistant(space: Space, a: Point, b: Point, q, c: Point, d: Point) -> bool:
    space.check_point(a), space.check_point(b)
    space.check_point(c), space.check_point(d)
    return space.eq_dist_scaled(a, b, q, c, d)


# ----------------------------------------------------------------------
# sphere intersection
# ----------------------------------------------------------------------


def _as_length(space: Space, value) -> Scalar:
    if space.backend == FLOAT:
        v = float(value)
    else:
        if isinstance(value, Rad):
            value = value.as_fraction()
        if isinstance(value, float):
            raise BackendMismatchError(f"exact backend needs rational radii, got {value!r}")
        try:
            v = Fraction(value)
        except (TypeError, ValueError) as exc:
            raise BackendMismatchError(f"exact backend needs rational radii, got {value!r}") from exc
    if v < 0:
        raise GeometryError("radii must be nonnegative")
    return v


def _annulus_ok(space: Space, c: Point, radius_c, d: Point, radius_d) -> bool:
    big, small = max(radius_c, radius_d), min(radius_c, radius_d)
    if space.backend == FLOAT:
        g = space._fdist(c, d)
        tol = space.tolerance
        return float_le(big - small, g, tol) and float_le(g, big + small, tol)
    if space.norm.kind == "l2":
        g2 = space.sq_dist(c, d)
        lo, hi = big - small, big + small
        return lo * lo <= g2 <= hi * hi
    g = space._exact_len(c, d)
    return big - small <= g <= big + small


def _ball_vertices(kind: str, center: Point, radius) -> list[Point]:
    x, y = center
    if kind == "l1":
        return [Point(x + radius, y), Point(x, y + radius), Point(x - radius, y), Point(x, y - radius)]
    return [
        Point(x + radius, y + radius),
        Point(x - radius, y + radius),
        Point(x - radius, y - radius),
        Point(x + radius, y - radius),
    ]


def _segment_intersection(p1: Point, p2: Point, q1: Point, q2: Point) -> Point | None:
    u = p_sub(p2, p1)
    w = p_sub(q2, q1)
    denom = cross(u, w)
    offset = p_sub(q1, p1)
    if denom != 0:
        t = Fraction(cross(offset, w), denom)
        s = Fraction(cross(offset, u), denom)
        if 0 <= t <= 1 and 0 <= s <= 1:
            return affine_combination(p1, p2, t)
        return None
    if cross(offset, u) != 0:
        return None
    # collinear overlap: clamp the q-segment's parameter range into [0, 1]
    uu = dot(u, u)
    if uu == 0:
        return None
    t1 = Fraction(dot(offset, u), uu)
    t2 = Fraction(dot(p_sub(q2, p1), u), uu)
    lo = max(Fraction(0), min(t1, t2))
    hi = min(Fraction(1), max(t1, t2))
    if lo > hi:
        return None
    return affine_combination(p1, p2, lo)


def _polygonal_sphere_intersection(space: Space, c: Point, radius_c: Fraction, d: Point, radius_d: Fraction) -> Point:
    """Exact boundary walk for l1 diamonds and linf squares."""
    if radius_c == 0:
        return c
    if radius_d == 0:
        return d
    if c == d:
        # annulus forces equal radii; pick the +x boundary point
        if space.norm.kind == "l1":
            return Point(c.x + radius_c, c.y)
        return Point(c.x + radius_c, c.y + radius_c)
    vc = _ball_vertices(space.norm.kind, c, radius_c)
    vd = _ball_vertices(space.norm.kind, d, radius_d)
    for i in range(4):
        for j in range(4):
            hit = _segment_intersection(vc[i], vc[(i + 1) % 4], vd[j], vd[(j + 1) % 4])
            if hit is not None:
                return hit
    raise SolverError("boundary walk found no intersection despite annulus precondition")


def _l2_float_intersection(c: Point, radius_c: float, d: Point, radius_d: float) -> Point:
    g = math.hypot(d.x - c.x, d.y - c.y)
    if g == 0.0:
        return Point(c.x + radius_c, c.y)
    ux, uy = (d.x - c.x) / g, (d.y - c.y) / g
    along = (g * g + radius_c * radius_c - radius_d * radius_d) / (2.0 * g)
    h_sq = radius_c * radius_c - along * along
    h = math.sqrt(h_sq) if h_sq > 0.0 else 0.0
    return Point(c.x + along * ux - h * uy, c.y + along * uy + h * ux)


def _lp_float_intersection(space: Space, c: Point, radius_c: float, d: Point, radius_d: float) -> Point:
    p = float(space.p_value())

    def on_ball(theta: float) -> Point:
        dx, dy = math.cos(theta), math.sin(theta)
        scale = radius_c / ((abs(dx) ** p + abs(dy) ** p) ** (1.0 / p))
        return Point(c.x + scale * dx, c.y + scale * dy)

    if radius_c == 0.0:
        return c

    def residual(theta: float) -> float:
        return space._fdist(d, on_ball(theta)) - radius_d

    grid = 512
    thetas = [2.0 * math.pi * i / grid for i in range(grid + 1)]
    values = [residual(t) for t in thetas]
    best = min(range(len(values)), key=lambda i: abs(values[i]))
    bracket = None
    for i in range(grid):
        if values[i] == 0.0 or values[i] * values[i + 1] < 0.0:
            bracket = (thetas[i], thetas[i + 1], values[i])
            break
    if bracket is None:
        return on_ball(thetas[best])  # tangency: verified by caller
    lo, hi, flo = bracket
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = residual(mid)
        if fmid == 0.0:
            return on_ball(mid)
        if flo * fmid < 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return on_ball(0.5 * (lo + hi))


def sphere_intersection_point(space: Space, c: Point, radius_c, d: Point, radius_d) -> Point:
    """A point e with d(c,e) = radius_c and d(d,e) = radius_d.

    Precondition (checked): ``|R - r| <= d(c,d) <= R + r``, which in a
    two-dimensional normed plane is exactly when such a point exists.
    Exact backend: supported for l1/linf (boundary edge walk over rational
    segments); refused for l2, where the result is irrational in general.
    """
    space.check_point(c)
    space.check_point(d)
    rc = _as_length(space, radius_c)
    rd = _as_length(space, radius_d)
    if not _annulus_ok(space, c, rc, d, rd):
        raise NoIntersectionError(
            f"spheres ({c}, r={rc}) and ({d}, r={rd}) do not meet in {space.label()}"
        )
    if space.backend == EXACT:
        if space.norm.kind == "l2":
            raise ExactBackendRefusedError(
                "exact l2 sphere intersection is irrational in general; use the float backend"
            )
        e = _polygonal_sphere_intersection(space, c, rc, d, rd)
    elif space.norm.kind in ("l1", "linf"):
        helper = Space(space.norm, EXACT, 0.0)
        e_exact = _polygonal_sphere_intersection(
            helper,
            Point(Fraction(c.x), Fraction(c.y)),
            Fraction(rc),
            Point(Fraction(d.x), Fraction(d.y)),
            Fraction(rd),
        )
        e = Point(float(e_exact.x), float(e_exact.y))
    elif space.norm.kind == "l2":
        e = _l2_float_intersection(c, rc, d, rd)
    else:
        e = _lp_float_intersection(space, c, rc, d, rd)

    if space.backend == EXACT:
        ok = space._exact_len(c, e) == rc and space._exact_len(d, e) == rd
    else:
        ok = float_eq(space._fdist(c, e), rc, space.tolerance) and float_eq(
            space._fdist(d, e), rd, space.tolerance
        )
    if not ok:
        raise SolverError(f"constructed intersection fails its distance constraints in {space.label()}")
    return e


# ----------------------------------------------------------------------
# space/point (de)serialization helpers
# ----------------------------------------------------------------------


def space_from_config(cfg: dict) -> Space:
    """Build a Space from ``{"norm": ..., "backend": ..., "tolerance": ...}``."""
    raw_norm = cfg.get("norm", "l2")
    if isinstance(raw_norm, dict):
        if set(raw_norm) != {"lp"}:
            raise GeometryError(f"bad norm config {raw_norm!r}")
        norm = lp(Fraction(str(raw_norm["lp"])))
    elif isinstance(raw_norm, str):
        name = raw_norm.lower()
        if name not in ("l1", "l2", "linf"):
            raise GeometryError(f"bad norm name {raw_norm!r}")
        norm = NormSpec(name)
    else:
        raise GeometryError(f"bad norm config {raw_norm!r}")
    backend = cfg.get("backend", EXACT)
    tolerance = float(cfg.get("tolerance", 0.0 if backend == EXACT else 1e-9))
    return Space(norm, backend, tolerance)


def space_to_config(space: Space) -> dict:
    norm: object
    if space.norm.kind == "lp":
        norm = {"lp": format_exact(space.p_value())}
    else:
        norm = space.norm.kind
    return {"norm": norm, "backend": space.backend, "tolerance": space.tolerance}


def point_to_record(space: Space, p: Point) -> dict:
    if space.backend == EXACT:
        return {"x": format_exact(p.x), "y": format_exact(p.y)}
    return {"x": p.x, "y": p.y}


def point_from_record(space: Space, rec: dict) -> Point:
    if not isinstance(rec, dict) or "x" not in rec or "y" not in rec:
        raise GeometryError(f"point record needs x and y fields, got {rec!r}")
    if space.backend == EXACT and isinstance(rec["x"], float):
        raise BackendMismatchError("exact backend point files use 'p/q' strings or ints")
    return space.point(rec["x"], rec["y"])
