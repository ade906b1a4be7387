#!/usr/bin/env python3
"""Walk through the condition battery on exact maps and violators.

An orthogonal generator passes every condition; twisting it with a
per-point sign rule keeps the sorted-pair family alive while the plain
sum and difference comparisons break; scaling or perturbing the map
breaks everything by a wide margin.
"""

from phaseiso import (
    LinearIsometry,
    PerturbedLinear,
    PhaseIsometry,
    SamplePlan,
    Scaled,
    SeededSign,
    SpaceSpec,
    random_orthogonal,
    run_battery,
)


def show(title, m, plan, tol=1e-9):
    print(f"== {title}")
    for r in run_battery(m, plan, tol):
        flag = "pass" if r.passed else "FAIL"
        print(f"   {r.condition:16s} max residual {r.max_residual:>12.3e}  {flag}")
    print()


def main():
    s = SpaceSpec("real", 4)
    plan = SamplePlan(count=100, kind="gaussian", seed=0)
    Q = random_orthogonal(4, seed=1)

    show("orthogonal generator (everything passes)", LinearIsometry(s, s, Q), plan)

    # flipping signs point by point preserves the *sets* of sum/diff norms
    # but not the individual equalities
    show("same generator with a seeded sign rule",
         PhaseIsometry(s, s, Q, SeededSign(seed=2)), plan)

    show("scaled by 1.1 (violator)", Scaled(LinearIsometry(s, s, Q), 1.1), plan)
    show("perturbed by eta = 0.1 (violator)",
         PerturbedLinear(s, s, Q, eta=0.1, seed=3), plan)


if __name__ == "__main__":
    main()
