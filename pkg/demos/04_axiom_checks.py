"""Axiom checking: the congruence axioms hold in every coordinate model, by
sampled instantiation for the universal ones and by construction for the
existential ones.

Run:  python demos/04_axiom_checks.py
"""

from equitower import L1, L2, LINF, Space
from equitower.axioms import run_axiom_suite


def main() -> None:
    for norm in (L1, L2, LINF):
        space = Space(norm, "exact")
        print(f"== {space.label()} ==")
        for report in run_axiom_suite(space, samples=2000, seed=11, constructions=300):
            status = "pass" if report.passed else "FAIL"
            details = f"{report.samples} samples"
            if report.witnesses:
                details += f", {report.witnesses} witnesses"
            if report.not_applicable:
                details += f", {report.not_applicable} not applicable"
            if report.extra:
                details += f", {report.extra}"
            print(f"  axiom {report.axiom:3s}: {status} ({details})")
        print()


if __name__ == "__main__":
    main()
