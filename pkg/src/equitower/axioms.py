"""Congruence-axiom checking over coordinate models.

Universal axioms are checked on seeded random instantiations; they cannot
be proved this way, only falsified, and violations are recorded with full
inputs for replay.  Existential axioms are checked constructively: the
promised point is built analytically and its defining constraints are
re-verified through the distance predicates.

Exact-backend sampling notes: constructions that scale a ray by a ratio of
two lengths need that ratio to be rational.  On l1/linf all lengths are
rational; on exact l2 the samplers draw from rational-distance triangles
(two rational right triangles glued along a common height), so segment
transport and the weak triangle inequality check with zero tolerance in
every supported norm.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .closure import _exact_length_ratio
from .formulas.schemas import TruncationParams
from .formulas.verify import verification_space, verify_layer
from .geometry import (
    NoIntersectionError,
    Point,
    Space,
    affine_combination,
    midpoint,
    p_add,
    p_sub,
    point_to_record,
    sphere_intersection_point,
)
from .oracles import (
    LE,
    oracle_B,
    oracle_collinear,
    oracle_le,
    oracle_parallelogram,
)
from .sampling import (
    equal_length_mate,
    rand_fraction,
    rand_nonzero_vector,
    rand_point,
    rand_positive_fraction,
    rand_unit_fraction,
    rational_distance_triangle,
    scale_vector,
)
from .scalars import float_eq

AXIOM_IDS = ("a", "b", "c", "d", "e", "f", "g", "h", "i")


@dataclass
class AxiomReport:
    axiom: str
    norm: str
    backend: str
    samples: int = 0
    violations: list = field(default_factory=list)
    witnesses: int = 0
    skipped: int = 0
    not_applicable: int = 0
    incomplete: int = 0
    extra: dict = field(default_factory=dict)
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return not self.violations

    def flag(self, space: Space, kind: str, points: dict) -> None:
        self.violations.append(
            {"clause": kind, "points": {k: point_to_record(space, p) for k, p in points.items()}}
        )

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "norm": self.norm,
            "backend": self.backend,
            "samples": self.samples,
            "violations": self.violations,
            "witnesses": self.witnesses,
            "skipped": self.skipped,
            "not_applicable": self.not_applicable,
            "incomplete": self.incomplete,
            "extra": self.extra,
            "seed": self.seed,
        }


def _new_report(axiom: str, space: Space, seed: int) -> AxiomReport:
    return AxiomReport(axiom=axiom, norm=space.norm.label(), backend=space.backend, seed=seed)


def check_axiom_a(space: Space, samples: int, seed: int) -> AxiomReport:
    """Equidistance is a nondegenerate equivalence between segments."""
    rng = random.Random(seed)
    rep = _new_report("a", space, seed)
    for _ in range(samples):
        rep.samples += 1
        a, b, c = (rand_point(space, rng) for _ in range(3))
        if not space.eq_dist(a, b, b, a):
            rep.flag(space, "symmetry ab=ba", {"a": a, "b": b})
        if not space.eq_dist(a, a, b, b):
            rep.flag(space, "null segments aa=bb", {"a": a, "b": b})
        # transitivity on constructed congruent segments
        v = p_sub(b, a)
        c2 = p_add(c, equal_length_mate(space, rng, v))
        e = rand_point(space, rng)
        e2 = p_add(e, equal_length_mate(space, rng, v))
        if space.eq_dist(a, b, c, c2) and space.eq_dist(a, b, e, e2):
            if not space.eq_dist(c, c2, e, e2):
                rep.flag(space, "transitivity", {"a": a, "b": b, "c": c, "c2": c2, "e": e, "e2": e2})
        # nondegeneracy: ab = cc forces a = b (checked on a=b and a!=b draws)
        probe_b = a if rng.random() < 0.5 else b
        if space.eq_dist(a, probe_b, c, c) and not space.points_eq(a, probe_b):
            rep.flag(space, "nondegeneracy ab=cc -> a=b", {"a": a, "b": probe_b, "c": c})
    return rep


def _transport_sample(space: Space, rng: random.Random) -> tuple[Point, Point, Point] | None:
    """a, b, c with a != c and |ab| / |ac| rational on this backend."""
    if space.backend == "float" or space.norm.kind != "l2":
        a, b, c = (rand_point(space, rng) for _ in range(3))
        return (a, b, c) if not space.points_eq(a, c) else None
    o, p, q = rational_distance_triangle(rng)[:3]
    return o, p, q


def check_axiom_b(space: Space, samples: int, seed: int) -> AxiomReport:
    """Segment transport: a point d on the ray opposite c from a with ab = ad."""
    rng = random.Random(seed)
    rep = _new_report("b", space, seed)
    for _ in range(samples):
        rep.samples += 1
        sample = _transport_sample(space, rng)
        if sample is None:
            rep.skipped += 1
            continue
        a, b, c = sample
        if space.points_eq(a, c):
            rep.skipped += 1
            continue
        if space.backend == "float":
            t = space._fdist(a, b) / space._fdist(a, c)
        else:
            t = _exact_length_ratio(space, (a, b), (a, c))
        away = p_sub(a, c)
        d = p_add(a, scale_vector(space, away, t))
        ok = oracle_B(space, c, a, d) and space.eq_dist(a, b, a, d)
        # second construction: scale a doubled ray vector by half the ratio
        d2 = p_add(a, scale_vector(space, away, 2))
        alt = affine_combination(a, d2, t / 2)
        if not (ok and space.points_eq(d, alt)):
            rep.flag(space, "transport/uniqueness", {"a": a, "b": b, "c": c, "d": d})
        else:
            rep.witnesses += 1
    return rep


def check_axiom_c_d_e(space: Space, samples: int, seed: int) -> AxiomReport:
    """(c) affine midpoints are equidistant; (d) parallelogram sides are
    congruent; (e) parallels to the base of an isosceles triangle cut off
    an isosceles triangle."""
    rng = random.Random(seed)
    rep = _new_report("cde", space, seed)
    for _ in range(samples):
        rep.samples += 1
        a = rand_point(space, rng)
        b = rand_point(space, rng)
        m = midpoint(a, b)
        if not space.eq_dist(a, m, m, b):
            rep.flag(space, "c midpoint", {"a": a, "b": b, "m": m})
        w = rand_nonzero_vector(space, rng)
        c = p_add(b, w)
        d = p_add(a, w)
        if oracle_parallelogram(space, a, b, c, d):
            if not (space.eq_dist(a, b, d, c) and space.eq_dist(b, c, a, d)):
                rep.flag(space, "d parallelogram", {"a": a, "b": b, "c": c, "d": d})
        else:
            rep.skipped += 1
        o = rand_point(space, rng)
        v = rand_nonzero_vector(space, rng)
        for _ in range(6):  # re-draw collinear mates; the axiom guards them out
            mate = equal_length_mate(space, rng, v)
            a1 = p_add(o, v)
            a2 = p_add(o, mate)
            t = rand_fraction(rng, span=5, max_den=4)
            if t != 0 and not oracle_collinear(space, o, a1, a2):
                break
        else:
            rep.skipped += 1
            continue
        b1 = p_add(o, scale_vector(space, v, t))
        b2 = p_add(o, scale_vector(space, mate, t))
        if not space.eq_dist(o, a1, o, a2):
            rep.flag(space, "e isosceles precondition", {"o": o, "a": a1, "a2": a2})
        elif not space.eq_dist(o, b1, o, b2):
            rep.flag(space, "e isosceles parallel", {"o": o, "a": a1, "a2": a2, "b": b1, "b2": b2})
    return rep


def _triangle_sample(space: Space, rng: random.Random):
    """b, a, c plus the rational lengths |ba|, |ac|, |bc| where available."""
    if space.backend == "exact" and space.norm.kind == "l2":
        if rng.random() < 0.3:  # collinear family along a rational-length direction
            b = rand_point(space, rng)
            lam = rand_positive_fraction(rng, span=8)
            unit = equal_length_mate(space, rng, Point(Fraction(1), Fraction(0)))
            c = p_add(b, scale_vector(space, unit, lam))
            s = rand_fraction(rng, span=4, max_den=4)
            a = affine_combination(b, c, s)
            return b, a, c, abs(s) * lam, abs(1 - s) * lam, lam
        b, a, c, r, u, lam = rational_distance_triangle(rng)
        if lam == 0:
            return None
        return b, a, c, r, u, lam
    b = rand_point(space, rng)
    c = rand_point(space, rng)
    a = rand_point(space, rng)
    if space.points_eq(b, c):
        return None
    if space.backend == "float":
        return b, a, c, space._fdist(b, a), space._fdist(a, c), space._fdist(b, c)
    return b, a, c, space._exact_len(b, a), space._exact_len(a, c), space._exact_len(b, c)


def check_axiom_f(space: Space, samples: int, seed: int) -> AxiomReport:
    """Weak triangle inequality, instantiated with a' and c' on the ray b->c."""
    rng = random.Random(seed)
    rep = _new_report("f", space, seed)
    for _ in range(samples):
        rep.samples += 1
        sample = _triangle_sample(space, rng)
        if sample is None:
            rep.skipped += 1
            continue
        b, a, c, len_ba, len_ac, len_bc = sample
        t = len_ba / len_bc
        u = len_ac / len_bc
        a_prime = affine_combination(b, c, t)
        c_prime = affine_combination(b, c, t + u)
        guards = (
            (oracle_B(space, b, a_prime, c) or oracle_B(space, b, c, a_prime))
            and space.eq_dist(b, a, b, a_prime)
            and oracle_B(space, b, a_prime, c_prime)
            and space.eq_dist(a_prime, c_prime, a, c)
        )
        if not guards:
            rep.skipped += 1
            continue
        if not oracle_B(space, b, c, c_prime):
            rep.flag(space, "f conclusion B(b,c,c')", {"a": a, "b": b, "c": c, "c2": c_prime})
    return rep


def check_axiom_g(space: Space, samples: int, seed: int) -> AxiomReport:
    """Triangles exist for any three lengths within the weak triangle bound.

    Exact l2 refuses sphere intersections (irrational apex), so the l2
    construction runs on the float twin at the default tolerance; the
    report's backend field records that.
    """
    if space.backend == "exact" and space.norm.kind == "l2":
        space = Space(space.norm, "float", 1e-9)
    rng = random.Random(seed)
    rep = _new_report("g", space, seed)
    for _ in range(samples):
        rep.samples += 1
        p = rand_positive_fraction(rng, span=8)
        q = rand_positive_fraction(rng, span=8)
        lo, hi = abs(p - q), p + q
        pick = rng.random()
        if pick < 0.1:
            r = lo
        elif pick < 0.2:
            r = hi
        elif pick < 0.3:  # out of range: not applicable, no triangle promised
            r = hi + rand_positive_fraction(rng, span=3)
        else:
            r = lo + (hi - lo) * rand_unit_fraction(rng)
        base = rand_point(space, rng)
        direction = equal_length_mate(space, rng, Point(Fraction(1), Fraction(0)))
        apex_base = p_add(base, scale_vector(space, direction, r))
        radius_p = float(p) if space.backend == "float" else p
        radius_q = float(q) if space.backend == "float" else q
        try:
            apex = sphere_intersection_point(space, base, radius_p, apex_base, radius_q)
        except NoIntersectionError:
            if lo <= r <= hi:
                rep.flag(space, "g missing triangle", {"base": base, "other": apex_base})
            else:
                rep.not_applicable += 1
            continue
        sides_ok = (
            _length_equals(space, base, apex_base, r)
            and _length_equals(space, base, apex, p)
            and _length_equals(space, apex_base, apex, q)
        )
        if sides_ok:
            rep.witnesses += 1
        else:
            rep.flag(space, "g side lengths", {"base": base, "other": apex_base, "apex": apex})
    return rep


def _length_equals(space: Space, a: Point, b: Point, value: Fraction) -> bool:
    if space.backend == "float":
        return float_eq(space._fdist(a, b), float(value), space.tolerance)
    if space.norm.kind == "l2":
        return space.sq_dist(a, b) == Fraction(value) ** 2
    return space._exact_len(a, b) == Fraction(value)


def check_axiom_h(
    space: Space,
    samples: int,
    seed: int,
    schnabel_samples: int = 0,
    trunc: TruncationParams | None = None,
) -> AxiomReport:
    """Totality of segment-length order, plus the defining order formula
    evaluated over refuter-closed universes against the order oracle."""
    rng = random.Random(seed)
    rep = _new_report("h", space, seed)
    for _ in range(samples):
        rep.samples += 1
        a, b, c, d = (rand_point(space, rng) for _ in range(4))
        if not (oracle_le(space, a, b, c, d) or oracle_le(space, c, d, a, b)):
            rep.flag(space, "h totality", {"a": a, "b": b, "c": c, "d": d})
    if schnabel_samples:
        trunc = trunc or TruncationParams()
        formula_space = verification_space(LE, space.norm, tolerance=max(space.tolerance, 1e-9))
        layer = verify_layer(formula_space, LE, trunc, schnabel_samples, seed + 1)
        rep.extra["order_formula"] = {
            "backend": formula_space.backend,
            "samples": layer.samples,
            "agreements": layer.agreements,
        }
        if not layer.passed:
            rep.violations.extend(layer.counterexamples)
    return rep


def check_axiom_i(space: Space, samples: int, seed: int, chain_cap: int = 12) -> AxiomReport:
    """Repeatedly laying off a segment along its ray passes every target on
    the ray, with parallelogram rungs transporting the step."""
    rng = random.Random(seed)
    rep = _new_report("i", space, seed)
    found_ns: list[int] = []
    for _ in range(samples):
        rep.samples += 1
        a = rand_point(space, rng)
        step = rand_nonzero_vector(space, rng)
        x1 = rand_point(space, rng)
        t_num = rng.randint(0, 4 * (chain_cap - 2))
        t = Fraction(t_num, 4)
        target = p_add(x1, scale_vector(space, step, t))
        xs = [p_add(x1, scale_vector(space, step, Fraction(i))) for i in range(chain_cap + 1)]
        rung = Point(-step.y, step.x)
        ys = [p_add(x, rung) for x in xs]
        if not (oracle_B(space, x1, xs[1], target) or oracle_B(space, x1, target, xs[1])):
            rep.flag(space, "i ray guard", {"x1": x1, "x2": xs[1], "d": target})
            continue
        found = None
        for n in range(2, chain_cap + 1):
            if oracle_B(space, x1, target, xs[n - 1]):
                found = n
                break
        if found is None:
            rep.incomplete += 1
            continue
        if found > math.ceil(t) + 2:
            rep.flag(space, "i chain length bound", {"x1": x1, "d": target})
            continue
        rungs_ok = all(
            oracle_parallelogram(space, xs[i], xs[i + 1], ys[i + 1], ys[i])
            and (i + 2 >= found or oracle_parallelogram(space, ys[i], ys[i + 1], xs[i + 2], xs[i + 1]))
            for i in range(found - 1)
        )
        if not rungs_ok:
            rep.flag(space, "i parallelogram rungs", {"x1": x1})
            continue
        rep.witnesses += 1
        found_ns.append(found)
    if found_ns:
        rep.extra["min_chain"] = min(found_ns)
        rep.extra["max_chain"] = max(found_ns)
    return rep


def check_axiom_f_g(space: Space, samples: int, seed: int, constructions: int | None = None) -> list[AxiomReport]:
    """Both triangle axioms: the sampled weak inequality and the
    constructive existence check."""
    return [
        check_axiom_f(space, samples, seed),
        check_axiom_g(space, constructions if constructions is not None else samples, seed + 1),
    ]


CHECKERS: dict[str, Callable] = {
    "a": check_axiom_a,
    "b": check_axiom_b,
    "cde": check_axiom_c_d_e,
    "f": check_axiom_f,
    "g": check_axiom_g,
    "h": check_axiom_h,
    "i": check_axiom_i,
}


def run_axiom_suite(space: Space, samples: int, seed: int, constructions: int = 1000) -> list[AxiomReport]:
    """All axiom checks: ``samples`` universal instantiations, ``constructions``
    existential ones."""
    reports = [
        check_axiom_a(space, samples, seed),
        check_axiom_b(space, constructions, seed + 1),
        check_axiom_c_d_e(space, samples, seed + 2),
        check_axiom_f(space, samples, seed + 3),
        check_axiom_g(space, constructions, seed + 4),
        check_axiom_h(space, samples, seed + 5, schnabel_samples=min(200, samples)),
        check_axiom_i(space, constructions, seed + 6),
    ]
    return reports
