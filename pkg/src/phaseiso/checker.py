"""Residual checks for the functional-equation conditions.

Every condition is scored as a worst-case residual over sample pairs
(or single samples, for the per-point conditions) and reported with the
argmax pair, so failures come with a witness.  The residual formulas:

==================  ========================================================
MU_ISOMETRY         | ||fx - fy|| - ||x - y|| |
T1_I                | ||fx + fy|| - ||x + y|| |
T1_II               | <<fx, fy>> - <<x, y>> |
ADDITIVE            || f(x + y) - f(x) - f(y) ||
REAL_HOMOGENEOUS    || f(c x) - c f(x) ||  over c in {-2, -1, -0.5, 0.5, 2}
NORM_PRESERVING     | ||fx|| - ||x|| |
T2_I                sorted-pair comparison of {||fx+fy||, ||fx-fy||} against
                    {||x+y||, ||x-y||}: sort both pairs, take the max
                    componentwise deviation
T2_II               | (||fx+fy|| + ||fx-fy||) - (||x+y|| + ||x-y||) |
T2_III              max( | ||fx+fy||*||fx-fy|| - ||x+y||*||x-y|| | , ||f(0)|| )
T2_IV               | |<<fx, fy>>| - |<<x, y>>| |
COMPLEX_LINEAR      || f(i x) - i f(x) ||
EQ22(n)             sorted lists {||fx - b_k fy||} vs {||x - b_k y||} over the
                    nth roots of unity b_k; max componentwise deviation
==================  ========================================================

Two-element "sets" are compared after sorting, which handles the
collapsed case ||x+y|| == ||x-y|| uniformly and avoids exact-duplicate
set semantics in floating point.

All reductions run over unordered index pairs (i <= j, diagonal
included; every formula is symmetric in the pair).  Ties in the argmax
resolve to the lowest pair in lexicographic order, so reports are
deterministic regardless of execution schedule.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np

from .errors import (
    MissingZeroImage,
    NeedsEvaluableMap,
    RealFieldUnsupported,
)
from .maps import MapSpec, Tabulated, tabulate
from .space import (
    DEFAULT_ATOL,
    SamplePlan,
    SpaceSpec,
    norm,
    real_inner,
    roots_of_unity,
    sample,
)

log = logging.getLogger("phaseiso.checker")

_HOMOGENEITY_SCALARS = (-2.0, -1.0, -0.5, 0.5, 2.0)


class ConditionId(str, enum.Enum):
    MU_ISOMETRY = "MU_ISOMETRY"
    T1_I = "T1_I"
    T1_II = "T1_II"
    ADDITIVE = "ADDITIVE"
    REAL_HOMOGENEOUS = "REAL_HOMOGENEOUS"
    NORM_PRESERVING = "NORM_PRESERVING"
    T2_I = "T2_I"
    T2_II = "T2_II"
    T2_III = "T2_III"
    T2_IV = "T2_IV"
    COMPLEX_LINEAR = "COMPLEX_LINEAR"
    EQ22 = "EQ22"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


#: Conditions that evaluate f at derived points (x+y, c*x, i*x) and
#: therefore need an evaluable map, not a bare table.
DERIVED_POINT_CONDITIONS = frozenset(
    {ConditionId.ADDITIVE, ConditionId.REAL_HOMOGENEOUS, ConditionId.COMPLEX_LINEAR}
)

PAIR_CONDITIONS = frozenset(
    {
        ConditionId.MU_ISOMETRY,
        ConditionId.T1_I,
        ConditionId.T1_II,
        ConditionId.NORM_PRESERVING,
        ConditionId.T2_I,
        ConditionId.T2_II,
        ConditionId.T2_III,
        ConditionId.T2_IV,
    }
)


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    max_residual: float
    argmax_pair: tuple[int, int]
    passed: bool
    tol: float

    def to_json(self) -> dict:
        return {
            "condition": self.condition,
            "max_residual": self.max_residual,
            "argmax": list(self.argmax_pair),
            "pass": self.passed,
            "tol": self.tol,
        }


def polarize(n_sum: float, n_x: float, n_y: float) -> float:
    """Inner product from norms: (||x+y||^2 - ||x||^2 - ||y||^2) / 2."""
    return (n_sum * n_sum - n_x * n_x - n_y * n_y) / 2.0


def pair_residual(
    cond,
    x: np.ndarray,
    y: np.ndarray,
    fx: np.ndarray,
    fy: np.ndarray,
    domain: SpaceSpec,
    codomain: SpaceSpec,
    f0: np.ndarray | None = None,
) -> float:
    """Scalar residual of a pair condition at one (x, y).

    This is the reference path used by tests to cross-check the
    vectorized battery; f0 is required only for T2_III.
    """
    cond = ConditionId(cond)
    nsx, ndx = norm(x + y, domain), norm(x - y, domain)
    nsf, ndf = norm(fx + fy, codomain), norm(fx - fy, codomain)
    if cond is ConditionId.MU_ISOMETRY:
        return abs(ndf - ndx)
    if cond is ConditionId.T1_I:
        return abs(nsf - nsx)
    if cond is ConditionId.T1_II:
        return abs(real_inner(fx, fy, codomain) - real_inner(x, y, domain))
    if cond is ConditionId.NORM_PRESERVING:
        return abs(norm(fx, codomain) - norm(x, domain))
    if cond is ConditionId.T2_I:
        img, dom = sorted((nsf, ndf)), sorted((nsx, ndx))
        return max(abs(img[0] - dom[0]), abs(img[1] - dom[1]))
    if cond is ConditionId.T2_II:
        return abs((nsf + ndf) - (nsx + ndx))
    if cond is ConditionId.T2_III:
        if f0 is None:
            raise MissingZeroImage("T2_III needs f(0)")
        return max(abs(nsf * ndf - nsx * ndx), norm(f0, codomain))
    if cond is ConditionId.T2_IV:
        return abs(abs(real_inner(fx, fy, codomain)) - abs(real_inner(x, y, domain)))
    raise ValueError(f"{cond} is not a pair condition")


# --- vectorized internals ---------------------------------------------------


class _TableStats:
    """Pairwise norms and Grams of a tabulated map, computed once per battery.

    Sum and difference norms are formed from the actual vectors, not via
    the Gram identity: near-zero combinations (antipodal pairs are
    forced into every battery) would otherwise lose half their digits to
    cancellation under the sqrt.
    """

    def __init__(self, tab: Tabulated):
        self.tab = tab
        X, F = tab.points, tab.images
        self.gx = np.real(X @ X.conj().T) if tab.domain.complex else X @ X.T
        self.gf = np.real(F @ F.conj().T) if tab.codomain.complex else F @ F.T
        self.nx = np.linalg.norm(X, axis=1)
        self.nf = np.linalg.norm(F, axis=1)
        self._sum_diff_cache: dict[bool, tuple[np.ndarray, np.ndarray]] = {}
        zero = np.flatnonzero(self.nx <= DEFAULT_ATOL)
        self.zero_index = int(zero[0]) if zero.size else None

    @property
    def scale(self) -> float:
        """Largest point or image norm; the scale in tolerance inflation."""
        return float(max(self.nx.max(), self.nf.max()))

    def beta_norms(self, images: bool, beta: complex) -> np.ndarray:
        """||v_i - beta * v_j|| over all pairs, from the vectors themselves."""
        V = self.tab.images if images else self.tab.points
        return np.linalg.norm(V[:, None, :] - beta * V[None, :, :], axis=2)

    def sum_diff(self, images: bool) -> tuple[np.ndarray, np.ndarray]:
        if images not in self._sum_diff_cache:
            V = self.tab.images if images else self.tab.points
            S = np.linalg.norm(V[:, None, :] + V[None, :, :], axis=2)
            D = np.linalg.norm(V[:, None, :] - V[None, :, :], axis=2)
            self._sum_diff_cache[images] = (S, D)
        return self._sum_diff_cache[images]


def _reduce_pair_matrix(R: np.ndarray) -> tuple[float, tuple[int, int]]:
    iu = np.triu_indices(R.shape[0])
    vals = R[iu]
    k = int(np.argmax(vals))
    return float(vals[k]), (int(iu[0][k]), int(iu[1][k]))


def _reduce_points(r: np.ndarray) -> tuple[float, tuple[int, int]]:
    k = int(np.argmax(r))
    return float(r[k]), (k, k)


def _pair_condition_matrix(cond: ConditionId, st: _TableStats) -> np.ndarray:
    Sx, Dx = st.sum_diff(images=False)
    Sf, Df = st.sum_diff(images=True)
    if cond is ConditionId.MU_ISOMETRY:
        return np.abs(Df - Dx)
    if cond is ConditionId.T1_I:
        return np.abs(Sf - Sx)
    if cond is ConditionId.T1_II:
        return np.abs(st.gf - st.gx)
    if cond is ConditionId.T2_I:
        lo = np.abs(np.minimum(Sf, Df) - np.minimum(Sx, Dx))
        hi = np.abs(np.maximum(Sf, Df) - np.maximum(Sx, Dx))
        return np.maximum(lo, hi)
    if cond is ConditionId.T2_II:
        return np.abs((Sf + Df) - (Sx + Dx))
    if cond is ConditionId.T2_III:
        return np.abs(Sf * Df - Sx * Dx)
    if cond is ConditionId.T2_IV:
        return np.abs(np.abs(st.gf) - np.abs(st.gx))
    raise ValueError(f"{cond} has no pair matrix")


def _condition_report(cond: ConditionId, st: _TableStats, m: MapSpec, tol: float) -> ConditionReport:
    label = cond.value
    if cond is ConditionId.NORM_PRESERVING:
        worst, pair = _reduce_points(np.abs(st.nf - st.nx))
    elif cond is ConditionId.T2_III:
        if st.zero_index is None:
            raise MissingZeroImage("T2_III needs a zero sample point with its image")
        worst, pair = _reduce_pair_matrix(_pair_condition_matrix(cond, st))
        f0_norm = float(st.nf[st.zero_index])
        if f0_norm > worst:
            worst, pair = f0_norm, (st.zero_index, st.zero_index)
    elif cond in PAIR_CONDITIONS:
        worst, pair = _reduce_pair_matrix(_pair_condition_matrix(cond, st))
    elif cond in DERIVED_POINT_CONDITIONS:
        worst, pair = _derived_condition(cond, st.tab, m)
    else:
        raise ValueError(f"cannot report condition {cond}")
    return ConditionReport(label, worst, pair, worst <= tol, tol)


def _derived_condition(cond: ConditionId, tab: Tabulated, m: MapSpec) -> tuple[float, tuple[int, int]]:
    if not m.evaluable:
        raise NeedsEvaluableMap(f"{cond.value} evaluates f at derived points")
    X, F = tab.points, tab.images
    n = X.shape[0]
    if cond is ConditionId.ADDITIVE:
        iu = np.triu_indices(n)
        fsum = m.eval_many(X[iu[0]] + X[iu[1]])
        r = np.linalg.norm(fsum - F[iu[0]] - F[iu[1]], axis=1)
        k = int(np.argmax(r))
        return float(r[k]), (int(iu[0][k]), int(iu[1][k]))
    if cond is ConditionId.REAL_HOMOGENEOUS:
        worst, arg = -1.0, 0
        for c in _HOMOGENEITY_SCALARS:
            r = np.linalg.norm(m.eval_many(c * X) - c * F, axis=1)
            k = int(np.argmax(r))
            if r[k] > worst:
                worst, arg = float(r[k]), k
        return worst, (arg, arg)
    if cond is ConditionId.COMPLEX_LINEAR:
        r = np.linalg.norm(m.eval_many(1j * X) - 1j * F, axis=1)
        k = int(np.argmax(r))
        return float(r[k]), (k, k)
    raise ValueError(f"{cond} is not a derived-point condition")


# --- public checks ----------------------------------------------------------


def check_condition(cond, m: MapSpec, tol: float, samples: np.ndarray | None = None) -> ConditionReport:
    """Worst-case residual report for one condition.

    Pair conditions run on a Tabulated map directly (or on ``samples``
    tabulated under an evaluable ``m``).  The derived-point conditions
    (ADDITIVE, REAL_HOMOGENEOUS, COMPLEX_LINEAR) need an evaluable map
    plus ``samples``.
    """
    cond = ConditionId(cond)
    if cond in DERIVED_POINT_CONDITIONS:
        if not m.evaluable:
            raise NeedsEvaluableMap(f"{cond.value} evaluates f at derived points")
        if samples is None:
            raise ValueError(f"{cond.value} needs sample points")
        tab = tabulate(m, samples)
        worst, pair = _derived_condition(cond, tab, m)
        return ConditionReport(cond.value, worst, pair, worst <= tol, tol)

    if isinstance(m, Tabulated):
        tab = m
    else:
        if samples is None:
            raise ValueError("pair conditions on an evaluable map need sample points")
        tab = tabulate(m, samples)
    if len(tab) < 2:
        raise ValueError("pair conditions need at least 2 samples")
    return _condition_report(cond, _TableStats(tab), m, tol)


def battery_points(m: MapSpec, plan: SamplePlan) -> np.ndarray:
    """Plan samples plus the forced points {0, +-basis vectors}.

    Forced points already present in the sample (within tolerance) are
    not appended twice.
    """
    pts = sample(plan, m.domain)
    d = m.domain.dim
    eye = np.eye(d, dtype=m.domain.dtype)
    forced = np.vstack([np.zeros((1, d), dtype=m.domain.dtype), eye, -eye])
    keep = []
    for f in forced:
        dist = np.linalg.norm(pts - f[None, :], axis=1)
        if keep:
            dist = np.concatenate([dist, np.linalg.norm(np.array(keep) - f[None, :], axis=1)])
        if np.all(dist > DEFAULT_ATOL):
            keep.append(f)
    if keep:
        pts = np.vstack([pts, np.array(keep)])
    return pts


def battery_table(m: MapSpec, plan: SamplePlan) -> Tabulated:
    """Tabulate ``m`` over the battery sample set."""
    if isinstance(m, Tabulated):
        return m
    return tabulate(m, battery_points(m, plan))


def _battery_conditions(m: MapSpec) -> list[ConditionId]:
    conds = [
        ConditionId.MU_ISOMETRY,
        ConditionId.NORM_PRESERVING,
        ConditionId.T1_I,
        ConditionId.T1_II,
        ConditionId.T2_I,
        ConditionId.T2_II,
        ConditionId.T2_III,
        ConditionId.T2_IV,
    ]
    if m.evaluable:
        conds += [ConditionId.ADDITIVE, ConditionId.REAL_HOMOGENEOUS]
        if m.domain.complex and m.codomain.complex:
            conds.append(ConditionId.COMPLEX_LINEAR)
    return conds


def run_battery(m: MapSpec, plan: SamplePlan, tol: float) -> list[ConditionReport]:
    """Reports for every condition applicable to ``m``.

    The map is tabulated once over the plan samples plus the forced
    points {0, +-basis vectors}; the derived-point conditions run only
    when ``m`` is evaluable, and COMPLEX_LINEAR only on complex spaces.
    Root-of-unity comparisons are appended for n = 1, 2 (real spaces)
    and n = 1..4 (complex spaces).
    """
    tab = battery_table(m, plan)
    st = _TableStats(tab)
    reports = [_condition_report(c, st, m, tol) for c in _battery_conditions(m)]
    ns = (1, 2, 3, 4) if m.domain.complex else (1, 2)
    for n in ns:
        reports.append(_eq22_report(st, n, tol))
    return reports


def _eq22_report(st: _TableStats, n: int, tol: float) -> ConditionReport:
    betas = roots_of_unity(n)
    img = np.stack([st.beta_norms(True, b) for b in betas])
    dom = np.stack([st.beta_norms(False, b) for b in betas])
    img.sort(axis=0)
    dom.sort(axis=0)
    resid = np.abs(img - dom).max(axis=0)
    worst, pair = _reduce_pair_matrix(resid)
    if n >= 2:
        dup = np.abs(np.diff(img, axis=0)) <= DEFAULT_ATOL
        n_dup = int(np.triu(dup.any(axis=0)).sum())
        if n_dup:
            log.info(
                "EQ22(n=%d): %d pairs have coinciding root distances; "
                "sorted-list (multiset) comparison applied", n, n_dup,
            )
    return ConditionReport(f"EQ22(n={n})", worst, pair, worst <= tol, tol)


def check_eq22(m: MapSpec, plan: SamplePlan | None, n: int, tol: float) -> ConditionReport:
    """Sorted-list comparison of the root-of-unity distance sets.

    ``n = 1`` is the plain isometry comparison and ``n = 2`` coincides
    with T2_I; those two run on real spaces as well, larger ``n``
    requires a complex field.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not m.domain.complex and n > 2:
        raise RealFieldUnsupported(f"EQ22 with n={n} needs a complex space")
    if isinstance(m, Tabulated):
        tab = m
    else:
        if plan is None:
            raise ValueError("check_eq22 needs a plan for evaluable maps")
        tab = battery_table(m, plan)
    if len(tab) < 2:
        raise ValueError("EQ22 needs at least 2 samples")
    return _eq22_report(_TableStats(tab), n, tol)


# --- verdict implications ---------------------------------------------------

#: (antecedent, consequent) pairs whose verdicts must chain on any data set.
IMPLICATIONS = (
    ("T1_I", "T1_II"),
    ("T2_I", "T2_II"),
    ("T2_II", "T2_III"),
    ("T2_II", "NORM_PRESERVING"),
    ("T2_III", "T2_IV"),
)


def implication_bounds(tol: float, scale: float) -> dict[tuple[str, str], float]:
    """Inflated tolerances under which each verdict implication holds.

    ``scale`` is the largest point or image norm in the table (see
    ``_TableStats.scale``); write M = max(scale, 1).  Sketches:

    * T1_I -> T1_II: polarization turns a sum-norm deviation r into an
      inner-product deviation of at most 3*M*r (each squared norm moves
      by at most r times the norm sum).  Bound: tol * (1 + 3M).
    * T2_I -> T2_II: the sum of the two sorted deviations is at most
      twice the max deviation.  Bound: 4 * tol.
    * T2_II -> T2_III: squaring the sum identity and eliminating the
      squared norms with the parallelogram law moves the product by at
      most 6*M*r; the diagonal pair (0, 0) bounds ||f(0)|| by r/2.
      Bound: tol * 4 * (1 + M^2), which dominates 6M.
    * T2_II -> NORM_PRESERVING: the diagonal pair (x, x) gives
      2*| ||fx|| - ||x|| | <= r.  Bound: tol.
    * T2_III -> T2_IV: squaring the product identity bounds the squared
      inner-product deviation by 6*M^2*(1+M)*r, and
      | |a| - |b| | <= sqrt(|a^2 - b^2|).  Bound: M * sqrt(6*(1+M)*tol).
    """
    M = max(scale, 1.0)
    return {
        ("T1_I", "T1_II"): tol * (1.0 + 3.0 * M),
        ("T2_I", "T2_II"): 4.0 * tol,
        ("T2_II", "T2_III"): tol * 4.0 * (1.0 + M * M),
        ("T2_II", "NORM_PRESERVING"): tol,
        ("T2_III", "T2_IV"): M * float(np.sqrt(6.0 * (1.0 + M) * tol)),
    }


def reports_to_json(reports: list[ConditionReport]) -> dict:
    return {
        "schema_version": "1",
        "reports": [r.to_json() for r in reports],
        "all_pass": all(r.passed for r in reports),
    }
