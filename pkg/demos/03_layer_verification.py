"""Layer verification: every defined relation, evaluated as a formula over a
witness-closed universe, against its analytic oracle.

Run:  python demos/03_layer_verification.py
"""

from equitower import L1, L2, LINF, TruncationParams
from equitower.formulas.verify import verification_space, verify_layer
from equitower.oracles import ALPHA, BETA, DELTA, GAMMA, PSI, RelationId


def main() -> None:
    trunc = TruncationParams()
    plan = [
        RelationId("EQUIV2"),
        BETA(2),
        ALPHA(3),
        PSI(3, 2),
        GAMMA,
        RelationId("B"),
        DELTA(4),
        RelationId("NEQ"),
        RelationId("LE"),
    ]
    print("relation    norm  backend  agreement")
    for norm in (L1, L2, LINF):
        for rel in plan:
            space = verification_space(rel, norm)
            report = verify_layer(space, rel, trunc, samples=150, seed=2024)
            print(
                f"{rel.label():10s}  {norm.kind:4s}  {space.backend:5s}   "
                f"{report.agreements}/{report.samples}"
            )
    print()
    print("backend note: EQUIV2/PSI/DELTA/LE need constructed sphere points;")
    print("exact euclidean intersections are irrational, so those four verify")
    print("on the float backend in l2 and exactly everywhere else.")


if __name__ == "__main__":
    main()
