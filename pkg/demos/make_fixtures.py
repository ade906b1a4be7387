#!/usr/bin/env python3
"""Regenerate the JSON fixtures under demos/fixtures/ (deterministic)."""

import json
import pathlib

from phaseiso import (
    LinearIsometry,
    PerturbedLinear,
    PhaseIsometry,
    SamplePlan,
    SeededSign,
    SpaceSpec,
    map_to_json,
    plan_to_json,
    random_orthogonal,
    sample,
    tabulate,
)

HERE = pathlib.Path(__file__).parent / "fixtures"


def dump(name, doc):
    path = HERE / name
    path.write_text(json.dumps(doc, indent=1) + "\n")
    print("wrote", path)


def main():
    HERE.mkdir(exist_ok=True)
    s4 = SpaceSpec("real", 4)

    dump("linear_isometry_d4.json", map_to_json(LinearIsometry(s4, s4, random_orthogonal(4, 1))))
    dump("plan_gauss_100.json", plan_to_json(SamplePlan(count=100, kind="gaussian", seed=0)))

    phase = PhaseIsometry(s4, s4, random_orthogonal(4, 2), SeededSign(3))
    tab = tabulate(phase, sample(SamplePlan(count=60, kind="gaussian", seed=4), s4))
    dump("tabulated_phase_d4.json", map_to_json(tab))

    noisy = PerturbedLinear(s4, s4, random_orthogonal(4, 5), 0.1, seed=5)
    noisy_tab = tabulate(noisy, sample(SamplePlan(count=60, kind="gaussian", seed=6), s4))
    dump("tabulated_perturbed_d4.json", map_to_json(noisy_tab))

    dump("explore_p1_l1.json", {
        "problem": "p1", "dim": 2, "p": 1.0, "trials": 3, "seed": 0, "pairs": 200,
        "candidate_family": ["phase_isometry", "linear_isometry"], "tol": 1e-9,
    })
    dump("explore_p2_n3.json", {
        "problem": "p2", "dim": 2, "n": 3, "trials": 3, "seed": 0, "pairs": 200,
        "candidate_family": ["phase_isometry", "linear_isometry"], "tol": 1e-9,
    })


if __name__ == "__main__":
    main()
