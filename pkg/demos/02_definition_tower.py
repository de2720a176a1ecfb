"""The definition tower: betweenness and distinctness written with nothing
but segment-equality, then checked against their analytic meanings.

Run:  python demos/02_definition_tower.py
"""

from fractions import Fraction as F

from equitower import (
    ImplMap,
    L2,
    LINF,
    Point,
    Space,
    TruncationParams,
    Universe,
    eval_formula,
    expand_schema,
    format_formula,
    parse_formula,
)
from equitower.closure import closure_for_relation
from equitower.formulas.evaluator import schema_query
from equitower.oracles import RelationId, oracle_B, oracle_gamma


def main() -> None:
    trunc = TruncationParams()
    print("== what the layers look like as formulas ==")
    for label in ("PHI:0", "BETA:2", "DELTA:3", "LE"):
        rel = RelationId.parse(label)
        print(f"  {label:7s} ->", format_formula(expand_schema(rel, trunc)))

    print("\n== evaluating a hand-written formula over a finite universe ==")
    space = Space(L2, "exact")
    uni = Universe(space, [Point(F(0), F(0)), Point(F(1), F(0))])
    formula = parse_formula("(exists (z) (equi a z a b))")
    verdict = eval_formula(
        formula, space, uni, {"a": Point(F(0), F(0)), "b": Point(F(1), F(0))}, trunc, ImplMap()
    )
    print(f"  some universe point is exactly |ab| away from a?  {verdict}")

    print("\n== metric vs affine betweenness ==")
    box = Space(LINF, "exact")
    trio = (Point(F(0), F(0)), Point(F(2), F(1)), Point(F(4), F(0)))
    print(f"  (2,1) sits on a shortest path (0,0)->(4,0) in linf: {oracle_gamma(box, *trio)}")
    print(f"  ... but on the straight segment: {oracle_B(box, *trio)}")
    query, params = schema_query(RelationId("B"))
    shallow = TruncationParams(b_depth=1)
    uni = closure_for_relation(box, RelationId("B"), trio, shallow)
    got = eval_formula(query, box, uni, dict(zip(params, trio)), shallow, ImplMap.layered("B"))
    print(f"  the subdivision tower already rejects it at depth 1: verdict {got}")

    print("\n== the dyadic blind spot of the literal tower ==")
    euclid = Space(L2, "exact")
    mid_trio = (Point(F(0), F(0)), Point(F(2), F(0)), Point(F(4), F(0)))
    for mode in ("strict-paper", "repaired"):
        tr = TruncationParams(b_mode=mode)
        uni = closure_for_relation(euclid, RelationId("B"), mid_trio, tr)
        got = eval_formula(query, euclid, uni, dict(zip(params, mid_trio)), tr, ImplMap.layered("B"))
        print(f"  B(a, midpoint, c) in {mode:12s} mode: {got}   (analytically: True)")

    print("\n== distinctness through bounded chains ==")
    neq_query, neq_params = schema_query(RelationId("NEQ"))
    x, y = Point(F(0), F(0)), Point(F(1), F(0))
    chain_uni = Universe(euclid, [x, y, Point(F(2), F(0)), Point(F(3), F(0))])
    print(
        "  x != y with universe reachable in <= 8 steps:",
        eval_formula(neq_query, euclid, chain_uni, dict(zip(neq_params, (x, y))), trunc, ImplMap.layered("NEQ")),
    )
    far_uni = chain_uni.add([Point(F(100), F(0))], "refuter")
    print(
        "  same query once a 100-far refuter joins the universe:",
        eval_formula(neq_query, euclid, far_uni, dict(zip(neq_params, (x, y))), trunc, ImplMap.layered("NEQ")),
        "(the truncation at 8 chain steps shows)",
    )


if __name__ == "__main__":
    main()
