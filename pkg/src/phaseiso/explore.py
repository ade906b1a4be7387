"""Desk-scale search harnesses for the two open settings.

P1 asks which maps keep the sorted-pair norm identity when the ambient
norm is an l^p norm instead of the inner-product norm; P2 asks the same
for the nth-root-of-unity distance sets on complex spaces.  Neither
harness proves anything: reports are labeled as empirical evidence at a
given sample count and dimension, nothing more.

Candidate families are structured (seeded instances of the map algebra)
plus fixed named fixtures.  Known-positive controls are always present:

* P1: signed coordinate permutations, with and without a per-point sign
  rule, are isometries of every l^p norm and must classify as solutions.
* P2: unitary maps composed with a seeded nth-root phase rule satisfy
  the root-of-unity identity by the group closure of the roots.

Per-trial seeds derive from the master seed via numpy's SeedSequence
spawning, so parallel and serial runs agree; identical configs produce
bit-identical reports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RealFieldUnsupported, SchemaError
from .maps import (
    ConstantSign,
    HalfspaceSign,
    LinearIsometry,
    MapSpec,
    PerturbedLinear,
    PhaseIsometry,
    RatzConjugation,
    Scaled,
    SeededRootPhase,
    SeededSign,
    complex_to_real_matrix,
    conjugation_matrix,
    random_orthogonal,
    random_unitary,
    signed_permutation,
)
from .space import COMPLEX, REAL, GAUSSIAN, SamplePlan, SpaceSpec, roots_of_unity, sample

P1 = "p1"
P2 = "p2"

SOLUTION = "solution"
NEAR_MISS = "near-miss"
NON_SOLUTION = "non-solution"

_P1_FAMILIES = ("linear_isometry", "phase_isometry", "scaled", "perturbed_linear")
_P2_FAMILIES = ("linear_isometry", "phase_isometry", "perturbed_linear")


@dataclass(frozen=True)
class ExploreConfig:
    problem: str
    dim: int
    p: float | None = None
    n: int | None = None
    trials: int = 3
    seed: int = 0
    candidate_family: tuple[str, ...] = ("phase_isometry", "linear_isometry")
    tol: float = 1e-9
    pairs: int = 200

    def __post_init__(self):
        if self.problem not in (P1, P2):
            raise ValueError(f"problem must be '{P1}' or '{P2}'")
        if self.dim < 1 or self.trials < 1 or self.pairs < 1:
            raise ValueError("dim, trials and pairs must be positive")
        if self.dim > 8:
            raise ValueError("exploration is desk scale; dim is capped at 8")
        if self.problem == P1:
            if self.p is None or self.p < 1:
                raise ValueError("P1 needs p >= 1")
            bad = set(self.candidate_family) - set(_P1_FAMILIES)
        else:
            if self.n is None or self.n < 1:
                raise ValueError("P2 needs n >= 1")
            bad = set(self.candidate_family) - set(_P2_FAMILIES)
        if bad:
            raise ValueError(f"unknown candidate families {sorted(bad)}")
        object.__setattr__(self, "candidate_family", tuple(self.candidate_family))


@dataclass(frozen=True)
class CandidateResult:
    name: str
    max_residual: float
    classification: str
    control: bool


@dataclass(frozen=True)
class ExploreReport:
    config: ExploreConfig
    candidates: tuple[CandidateResult, ...]
    verdict: str
    note: str

    @property
    def best_candidate(self) -> str:
        return min(self.candidates, key=lambda c: (c.max_residual, c.name)).name

    @property
    def histogram(self) -> tuple[float, ...]:
        return tuple(sorted(c.max_residual for c in self.candidates))

    def result(self, name: str) -> CandidateResult:
        for c in self.candidates:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "schema_version": "1",
            "config": config_to_json(self.config),
            "candidates": [
                {
                    "name": c.name,
                    "max_residual": c.max_residual,
                    "class": c.classification,
                    "control": c.control,
                }
                for c in self.candidates
            ],
            "best": self.best_candidate,
            "histogram": list(self.histogram),
            "verdict": self.verdict,
            "note": self.note,
        }


def _classify(residual: float, tol: float) -> str:
    if residual <= tol:
        return SOLUTION
    if residual <= 100.0 * tol:
        return NEAR_MISS
    return NON_SOLUTION


def _trial_seeds(master: int, trials: int) -> list[tuple[int, int]]:
    """Documented splitting rule for per-trial seeds.

    SeedSequence(master) spawns one child per trial; each child spawns
    two grandchildren whose first state words seed, in order, the trial's
    candidate maps and its sample pairs.
    """
    out = []
    for child in np.random.SeedSequence(master).spawn(trials):
        g0, g1 = child.spawn(2)
        out.append((int(g0.generate_state(1)[0]), int(g1.generate_state(1)[0])))
    return out


def _pair_sets(space: SpaceSpec, count: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rows = sample(SamplePlan(2 * count, GAUSSIAN, seed), space)
    X, Y = rows[:count], rows[count:]
    d = space.dim
    eye = np.eye(d, dtype=space.dtype)
    fx, fy = [], []
    for i in range(d):
        for j in range(i + 1, d):
            fx.append(eye[i])
            fy.append(eye[j])
    fx += [eye[0], eye[0], eye[0]]
    fy += [-eye[0], eye[0], np.zeros(d, dtype=space.dtype)]
    if space.complex:
        fx.append(eye[0])
        fy.append(1j * eye[0])
    return np.vstack([X, fx]), np.vstack([Y, fy])


def _pnorm_rows(A: np.ndarray, p: float) -> np.ndarray:
    return np.sum(np.abs(A) ** p, axis=1) ** (1.0 / p)


def _p1_residual(m: MapSpec, X: np.ndarray, Y: np.ndarray, p: float) -> float:
    FX, FY = m.eval_many(X), m.eval_many(Y)
    sx, dx = _pnorm_rows(X + Y, p), _pnorm_rows(X - Y, p)
    sf, df = _pnorm_rows(FX + FY, p), _pnorm_rows(FX - FY, p)
    lo = np.abs(np.minimum(sf, df) - np.minimum(sx, dx))
    hi = np.abs(np.maximum(sf, df) - np.maximum(sx, dx))
    return float(np.maximum(lo, hi).max())


def _p2_residual(m: MapSpec, X: np.ndarray, Y: np.ndarray, n: int) -> float:
    betas = roots_of_unity(n)
    FX, FY = m.eval_many(X), m.eval_many(Y)
    dom = np.sort(np.stack([np.linalg.norm(X - b * Y, axis=1) for b in betas]), axis=0)
    img = np.sort(np.stack([np.linalg.norm(FX - b * FY, axis=1) for b in betas]), axis=0)
    return float(np.abs(img - dom).max())


def _rule_for_trial(t: int, seed: int, dim: int, dtype_space: SpaceSpec):
    kinds = t % 3
    if kinds == 0:
        return ConstantSign(1 if t % 2 == 0 else -1)
    if kinds == 1:
        v = np.zeros(dim, dtype=dtype_space.dtype)
        v[t % dim] = 1.0
        return HalfspaceSign(tuple(v.tolist()))
    return SeededSign(seed)


def _p1_trial_candidates(cfg: ExploreConfig, t: int, s: int) -> list[tuple[str, MapSpec, bool]]:
    rspace = SpaceSpec(REAL, cfg.dim)
    out: list[tuple[str, MapSpec, bool]] = [
        (f"signed_perm_linear[t{t}]",
         LinearIsometry(rspace, rspace, signed_permutation(cfg.dim, s)), True),
        (f"signed_perm_seeded_phase[t{t}]",
         PhaseIsometry(rspace, rspace, signed_permutation(cfg.dim, s), SeededSign(s + 1)), True),
    ]
    if "linear_isometry" in cfg.candidate_family:
        out.append((f"linear_isometry[t{t}]",
                    LinearIsometry(rspace, rspace, random_orthogonal(cfg.dim, s)), False))
    if "phase_isometry" in cfg.candidate_family:
        rule = _rule_for_trial(t, s + 2, cfg.dim, rspace)
        out.append((f"phase_isometry[t{t}]",
                    PhaseIsometry(rspace, rspace, random_orthogonal(cfg.dim, s + 3), rule), False))
    if "scaled" in cfg.candidate_family:
        base = LinearIsometry(rspace, rspace, random_orthogonal(cfg.dim, s + 4))
        out.append((f"scaled_1.1[t{t}]", Scaled(base, 1.1), False))
    if "perturbed_linear" in cfg.candidate_family:
        out.append((f"perturbed_0.1[t{t}]",
                    PerturbedLinear(rspace, rspace, random_orthogonal(cfg.dim, s + 5), 0.1, s), False))
    return out


def _p1_fixed_candidates(cfg: ExploreConfig) -> list[tuple[str, MapSpec, bool]]:
    if cfg.dim != 2:
        return []
    rspace = SpaceSpec(REAL, 2)
    c = np.sqrt(0.5)
    rot45 = np.array([[c, -c], [c, c]])
    return [("rotation45_constant", PhaseIsometry(rspace, rspace, rot45, ConstantSign(1)), False)]


def _p2_trial_candidates(cfg: ExploreConfig, t: int, s: int) -> list[tuple[str, MapSpec, bool]]:
    cspace = SpaceSpec(COMPLEX, cfg.dim)
    U = complex_to_real_matrix(random_unitary(cfg.dim, s))
    out: list[tuple[str, MapSpec, bool]] = [
        (f"unitary_root_phase[t{t}]",
         PhaseIsometry(cspace, cspace, U, SeededRootPhase(cfg.n, s + 1)), True),
    ]
    if "linear_isometry" in cfg.candidate_family:
        out.append((f"unitary_linear[t{t}]", LinearIsometry(cspace, cspace, U), False))
    if "phase_isometry" in cfg.candidate_family:
        out.append((f"unitary_sign_phase[t{t}]",
                    PhaseIsometry(cspace, cspace, U, SeededSign(s + 2)), False))
    if "perturbed_linear" in cfg.candidate_family:
        out.append((f"perturbed_0.1[t{t}]",
                    PerturbedLinear(cspace, cspace, U, 0.1, s), False))
    return out


def _p2_fixed_candidates(cfg: ExploreConfig) -> list[tuple[str, MapSpec, bool]]:
    cspace = SpaceSpec(COMPLEX, cfg.dim)
    out = [("coordinate_conjugation",
            LinearIsometry(cspace, cspace, conjugation_matrix(cfg.dim)), False)]
    if cfg.dim == 2:
        out.append(("ratz_conjugation", RatzConjugation(), False))
    return out


def _run(cfg: ExploreConfig, trial_candidates, fixed_candidates, residual_fn) -> ExploreReport:
    space = SpaceSpec(REAL if cfg.problem == P1 else COMPLEX, cfg.dim)
    results: list[CandidateResult] = []
    fixed = fixed_candidates(cfg)
    fixed_worst = {name: 0.0 for name, _, _ in fixed}
    for t, (map_seed, sample_seed) in enumerate(_trial_seeds(cfg.seed, cfg.trials)):
        X, Y = _pair_sets(space, cfg.pairs, sample_seed)
        for name, m, control in trial_candidates(cfg, t, map_seed):
            r = residual_fn(m, X, Y)
            results.append(CandidateResult(name, r, _classify(r, cfg.tol), control))
        for name, m, _ in fixed:
            fixed_worst[name] = max(fixed_worst[name], residual_fn(m, X, Y))
    for name, _, control in fixed:
        r = fixed_worst[name]
        results.append(CandidateResult(name, r, _classify(r, cfg.tol), control))
    classes = [c.classification for c in results]
    if SOLUTION in classes:
        verdict = "solutions-found"
    elif NEAR_MISS in classes:
        verdict = NEAR_MISS
    else:
        verdict = "none"
    note = (
        f"empirical at {cfg.pairs} sample pairs per trial, {cfg.trials} trials, "
        f"dim {cfg.dim}; no claim beyond the sampled instances"
    )
    return ExploreReport(cfg, tuple(results), verdict, note)


def explore_p1(cfg: ExploreConfig) -> ExploreReport:
    """Evaluate the sorted-pair identity with the l^p norm over candidates."""
    if cfg.problem != P1:
        raise ValueError("config is not a P1 config")
    return _run(cfg, _p1_trial_candidates, _p1_fixed_candidates,
                lambda m, X, Y: _p1_residual(m, X, Y, cfg.p))


def explore_p2(cfg: ExploreConfig) -> ExploreReport:
    """Evaluate the nth-root distance-set identity over complex candidates."""
    if cfg.problem != P2:
        raise ValueError("config is not a P2 config")
    if cfg.n is None:
        raise RealFieldUnsupported("P2 needs n and a complex field")
    return _run(cfg, _p2_trial_candidates, _p2_fixed_candidates,
                lambda m, X, Y: _p2_residual(m, X, Y, cfg.n))


def explore(cfg: ExploreConfig) -> ExploreReport:
    return explore_p1(cfg) if cfg.problem == P1 else explore_p2(cfg)


# --- JSON encoding ----------------------------------------------------------


def config_to_json(cfg: ExploreConfig) -> dict:
    d = {
        "problem": cfg.problem,
        "dim": cfg.dim,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "candidate_family": list(cfg.candidate_family),
        "tol": cfg.tol,
        "pairs": cfg.pairs,
    }
    if cfg.problem == P1:
        d["p"] = cfg.p
    else:
        d["n"] = cfg.n
    return d


def config_from_json(d: dict) -> ExploreConfig:
    try:
        problem = d["problem"]
        return ExploreConfig(
            problem=problem,
            dim=int(d["dim"]),
            p=float(d["p"]) if problem == P1 else None,
            n=int(d["n"]) if problem == P2 else None,
            trials=int(d.get("trials", 3)),
            seed=int(d.get("seed", 0)),
            candidate_family=tuple(d.get("candidate_family", ("phase_isometry", "linear_isometry"))),
            tol=float(d.get("tol", 1e-9)),
            pairs=int(d.get("pairs", 200)),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"bad explore config: {e}") from e
