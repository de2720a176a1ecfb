"""Bounded model checking over finite point universes.

Point quantifiers range over a :class:`~equitower.universe.Universe`;
countable connectives range over truncated integer index sets (``bigand``
up to K, ``bigor`` up to N).  A :class:`SchemaRef` dispatches through an
:class:`ImplMap`: either the relation's analytic oracle is called, or its
expansion is evaluated with the reference's arguments bound to the
expansion's formal parameters.

Bounded universal quantification over-approximates plane-wide truth: the
verdict is faithful only on universes that contain the relevant witnesses
and refuters (see :mod:`equitower.closure`).

GAMMA in formula mode with ``adaptive_n`` is evaluated by iterating its
truncated double tower directly: per query the disjunction bound is raised
to ``ceil(2^K * d(b,c)/d(a,b)) + 2`` and the scan starts near the only
multiplier window that can possibly fire (the disjunction is commutative,
so scan order cannot change the verdict, only the time to find it).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..geometry import Point, Space
from ..oracles import RelationId, oracle_truth
from ..universe import Universe
from .ast import (
    And,
    AtomEq,
    AtomEqui,
    Const,
    CountableAnd,
    CountableOr,
    Exists,
    ForAll,
    Formula,
    Implies,
    Not,
    Or,
    SchemaRef,
    Term,
    Var,
)
from .schemas import TruncationParams, expand_schema, schema_params

AS_ORACLE = "oracle"
AS_FORMULA = "formula"


class EvalError(ValueError):
    """Unbound variable, missing impl entry, or malformed query."""


@dataclass(frozen=True)
class ImplMap:
    """Per-relation choice between oracle and formula treatment.

    Keys are relation names; an optional default applies to every relation
    not explicitly listed.  A missing entry with no default is an error, so
    layer checks always state which layers stay symbolic.
    """

    entries: tuple[tuple[str, str], ...] = ()
    default: str | None = AS_ORACLE

    def __post_init__(self) -> None:
        for name, how in self.entries:
            if how not in (AS_ORACLE, AS_FORMULA):
                raise EvalError(f"impl for {name} must be 'oracle' or 'formula', got {how!r}")

    @staticmethod
    def from_dict(mapping: dict[str, str], default: str | None = AS_ORACLE) -> "ImplMap":
        return ImplMap(tuple(sorted(mapping.items())), default)

    @staticmethod
    def layered(top: str) -> "ImplMap":
        """Top relation as a formula, every lower layer as its oracle."""
        return ImplMap(((top, AS_FORMULA),), AS_ORACLE)

    def how(self, name: str) -> str:
        for key, how in self.entries:
            if key == name:
                return how
        if self.default is None:
            raise EvalError(f"no impl entry for relation {name}")
        return self.default

    def to_dict(self) -> dict:
        return {"entries": dict(self.entries), "default": self.default}


class _Evaluator:
    def __init__(self, space: Space, universe: Universe, trunc: TruncationParams, impl: ImplMap):
        self.space = space
        self.universe = universe
        self.trunc = trunc
        self.impl = impl

    def term_point(self, t: Term, pv: dict[str, Point]) -> Point:
        if isinstance(t, Const):
            return t.point
        p = pv.get(t.name)
        if p is None:
            raise EvalError(f"unbound point variable {t.name!r}")
        return p

    def run(self, f: Formula, pv: dict[str, Point], iv: dict[str, int]) -> bool:
        space = self.space
        if isinstance(f, AtomEqui):
            return space.eq_dist(
                self.term_point(f.t1, pv),
                self.term_point(f.t2, pv),
                self.term_point(f.t3, pv),
                self.term_point(f.t4, pv),
            )
        if isinstance(f, AtomEq):
            return space.points_eq(self.term_point(f.t1, pv), self.term_point(f.t2, pv))
        if isinstance(f, Not):
            return not self.run(f.body, pv, iv)
        if isinstance(f, And):
            return all(self.run(g, pv, iv) for g in f.items)
        if isinstance(f, Or):
            return any(self.run(g, pv, iv) for g in f.items)
        if isinstance(f, Implies):
            return (not self.run(f.left, pv, iv)) or self.run(f.right, pv, iv)
        if isinstance(f, Exists):
            return self._quantify(f.vars, f.body, pv, iv, want=True)
        if isinstance(f, ForAll):
            return not self._quantify(f.vars, f.body, pv, iv, want=False)
        if isinstance(f, CountableAnd):
            for i in range(f.start, self.trunc.K + 1):
                if not self.run(f.body, pv, {**iv, f.var: i}):
                    return False
            return True
        if isinstance(f, CountableOr):
            for i in range(f.start, self.trunc.N + 1):
                if self.run(f.body, pv, {**iv, f.var: i}):
                    return True
            return False
        if isinstance(f, SchemaRef):
            return self.schema_truth(self.resolve_rel(f, iv), self.resolve_terms(f, pv))
        raise EvalError(f"not a formula node: {f!r}")

    def _quantify(
        self, names: tuple[str, ...], body: Formula, pv: dict[str, Point], iv: dict[str, int], want: bool
    ) -> bool:
        """True iff some assignment of universe points to ``names`` makes
        ``body`` evaluate to ``want`` (ForAll negates the want=False search)."""
        if not names:
            return self.run(body, pv, iv) == want
        head, rest = names[0], names[1:]
        for p in self.universe.points:
            if self._quantify(rest, body, {**pv, head: p}, iv, want):
                return True
        return False

    def resolve_rel(self, ref: SchemaRef, iv: dict[str, int]) -> RelationId:
        indices = []
        for arg in ref.index_args:
            if isinstance(arg, int):
                indices.append(arg)
            else:
                value = iv.get(arg)
                if value is None:
                    raise EvalError(f"unbound index variable {arg!r}")
                indices.append(value)
        return RelationId(ref.name, tuple(indices))

    def resolve_terms(self, ref: SchemaRef, pv: dict[str, Point]) -> tuple[Point, ...]:
        return tuple(self.term_point(t, pv) for t in ref.terms)

    def schema_truth(self, rel: RelationId, points: tuple[Point, ...]) -> bool:
        how = self.impl.how(rel.name)
        if how == AS_ORACLE:
            return oracle_truth(self.space, rel, points)
        if rel.name == "GAMMA" and self.trunc.adaptive_n:
            return self.gamma_truncated(*points)
        expansion = expand_schema(rel, self.trunc)
        params = schema_params(rel)
        return self.run(expansion, dict(zip(params, points)), {})

    # ------------------------------------------------------------------
    # GAMMA: direct iteration of the truncated double tower
    # ------------------------------------------------------------------

    def gamma_truncated(self, a: Point, b: Point, c: Point) -> bool:
        trunc = self.trunc
        degenerate = self.space.points_eq(a, b)
        if degenerate:
            n_bound = trunc.N
        else:
            n_bound = self.space.scaled_ratio_ceil(2**trunc.K, (b, c), (a, b)) + 2
        for k in range(1, trunc.K + 1):
            if degenerate:
                order = range(1, n_bound + 1)
            else:
                guess = self.space.scaled_ratio_ceil(2**k, (b, c), (a, b))
                order = self._window_order(guess, n_bound)
            if not any(self._gamma_disjunct(n, k, a, b, c) for n in order):
                return False
        return True

    def _window_order(self, guess: int, n_bound: int):
        window = [n for n in range(max(1, guess - 2), min(n_bound, guess + 2) + 1)]
        seen = set(window)
        yield from window
        for n in range(1, n_bound + 1):
            if n not in seen:
                yield n

    def _gamma_disjunct(self, n: int, k: int, a: Point, b: Point, c: Point) -> bool:
        return self.schema_truth(RelationId("PSI", (n, k)), (a, b, b, c)) and self.schema_truth(
            RelationId("PSI", (n + 2**k, k)), (a, b, a, c)
        )


def eval_formula(
    f: Formula,
    space: Space,
    universe: Universe,
    valuation: dict[str, Point],
    trunc: TruncationParams,
    impl: ImplMap,
) -> bool:
    """Bounded truth value of ``f`` under ``valuation``.

    Existential-positive formulas (no Not/Implies/ForAll) are monotone
    under universe growth: enlarging the universe never flips true to
    false.
    """
    for name, p in valuation.items():
        space.check_point(p)
    return _Evaluator(space, universe, trunc, impl).run(f, dict(valuation), {})


def schema_query(rel: RelationId) -> tuple[Formula, tuple[str, ...]]:
    """A SchemaRef query formula for ``rel`` plus its parameter names."""
    params = schema_params(rel)
    return SchemaRef(rel.name, rel.indices, tuple(Var(p) for p in params)), params
