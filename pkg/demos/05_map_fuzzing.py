"""Map fuzzing: similarities transport segment equality both ways (and, on
every sample, betweenness); a shear, an anisotropic scale, and a cubic bend
each betray themselves with an explicit witness.

Run:  python demos/05_map_fuzzing.py
"""

from equitower import L2, Space
from equitower.preservation import (
    ANISOTROPIC,
    CUBIC_X,
    SHEAR_X,
    check_B_preservation,
    check_equidistance_preservation,
    compose,
    run_similarity_sweep,
    similarity_suite,
)


def main() -> None:
    space = Space(L2, "exact")
    suite = similarity_suite(space)
    print(f"sweeping {len(suite)} similarities (4 scales x 4 isometries x 3 shifts)...")
    reports = run_similarity_sweep(space, suite, quadruples=1500, triples=1500, seed=5)
    clean = sum(1 for r in reports if r.equidistance_preserving and r.b_violations == 0)
    print(f"  {clean}/{len(reports)} preserve segment equality both ways and betweenness\n")

    comp = compose(suite[5], suite[20])
    rep = check_equidistance_preservation(space, comp, 800, seed=6)
    print(f"composed similarity {comp.label!r}: {rep.classification}\n")

    for dirty in (SHEAR_X, ANISOTROPIC, CUBIC_X):
        rep = check_equidistance_preservation(space, dirty, 800, seed=7)
        rep = check_B_preservation(space, dirty, 800, seed=8, report=rep)
        print(f"{dirty.label}: {rep.classification}")
        wit = rep.first_witnesses.get("forward")
        if wit:
            pts = ", ".join(f"({r['x']},{r['y']})" for r in wit)
            print(f"  equal segments that the map pulls apart: {pts}")
        if rep.b_violations:
            print(f"  betweenness also breaks on {rep.b_violations} sampled triples")
        print()


if __name__ == "__main__":
    main()
