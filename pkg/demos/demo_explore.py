#!/usr/bin/env python3
"""Exploration harnesses: l^p norms and nth-root-of-unity phase sets.

Signed coordinate permutations survive every l^p norm; a 45 degree
rotation survives only p = 2.  Over complex spaces, unitary maps twisted
by an nth-root phase rule satisfy the root distance-set identity for
their n; conjugating one coordinate out of two does not (for n >= 3),
while conjugating every coordinate does.
"""

from phaseiso import ExploreConfig, explore_p1, explore_p2


def show(report):
    for c in report.candidates:
        tag = " (control)" if c.control else ""
        print(f"   {c.name:32s} {c.max_residual:>12.3e}  {c.classification}{tag}")
    print(f"   -> verdict: {report.verdict}")
    print(f"   -> {report.note}")
    print()


def main():
    for p in (2.0, 1.0):
        print(f"== l^{p:g} norm, dimension 2")
        show(explore_p1(ExploreConfig(problem="p1", dim=2, p=p, trials=2, seed=0, pairs=200)))

    for n in (2, 3, 4):
        print(f"== roots of unity, n = {n}, C^2")
        show(explore_p2(ExploreConfig(problem="p2", dim=2, n=n, trials=2, seed=0, pairs=200)))


if __name__ == "__main__":
    main()
