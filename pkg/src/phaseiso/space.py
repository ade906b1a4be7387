"""Finite-dimensional real and complex inner product spaces.

Vectors are plain numpy arrays: ``float64`` rows for real spaces,
``complex128`` rows for complex ones.  The inner product used throughout
the toolkit is the *real* inner product ``Re<x, y>``; for complex spaces
it coincides with the standard inner product of the realified
(interleaved re/im) coordinates and induces the same norm.

Sampling is deterministic: gaussian draws use numpy's PCG64 bit
generator seeded directly with the plan seed, so corpora are
reproducible across runs and platforms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import AlreadyReal, DimensionMismatch, SchemaError, UnsupportedNorm

REAL = "real"
COMPLEX = "complex"

GAUSSIAN = "gaussian"
SPHERE = "sphere"
GRID = "grid"

#: Defaults for the combined comparison |a - b| <= atol + rtol * max(|a|, |b|).
DEFAULT_ATOL = 1e-9
DEFAULT_RTOL = 1e-9

_GRID_CAP = 200_000


def approx_equal(a: float, b: float, atol: float = DEFAULT_ATOL, rtol: float = DEFAULT_RTOL) -> bool:
    """Combined-tolerance scalar comparison."""
    return abs(a - b) <= atol + rtol * max(abs(a), abs(b))


@dataclass(frozen=True)
class SpaceSpec:
    """A finite-dimensional vector space over the reals or complexes.

    Parameters
    ----------
    field:
        ``"real"`` or ``"complex"``.
    dim:
        Number of coordinates, at least 1.
    p:
        ``None`` selects the euclidean (inner product) norm.  A float
        ``p >= 1`` selects the l^p norm; p-norms are allowed on real
        spaces only and exist for the exploration harness.
    """

    field: str
    dim: int
    p: float | None = None

    def __post_init__(self):
        if self.field not in (REAL, COMPLEX):
            raise ValueError(f"field must be 'real' or 'complex', got {self.field!r}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.p is not None:
            if self.field != REAL:
                raise UnsupportedNorm("p-norms are supported on real spaces only")
            if self.p < 1:
                raise ValueError(f"p must be >= 1, got {self.p}")

    @property
    def euclidean(self) -> bool:
        return self.p is None

    @property
    def complex(self) -> bool:
        return self.field == COMPLEX

    @property
    def real_dim(self) -> int:
        """Dimension of the space viewed over the reals."""
        return 2 * self.dim if self.complex else self.dim

    @property
    def dtype(self) -> np.dtype:
        return np.dtype(np.complex128 if self.complex else np.float64)


def as_vector(s: SpaceSpec, entries) -> np.ndarray:
    """Validate ``entries`` as a vector of ``s`` and return it as an array.

    Complex entries may be given as scalars or as ``[re, im]`` pairs (the
    JSON encoding).  Raises DimensionMismatch on wrong length and
    ValueError on non-finite entries.
    """
    if s.complex and isinstance(entries, (list, tuple)) and entries and isinstance(entries[0], (list, tuple)):
        entries = [complex(re, im) for re, im in entries]
    x = np.asarray(entries, dtype=s.dtype)
    if x.ndim != 1 or x.shape[0] != s.dim:
        raise DimensionMismatch(f"expected {s.dim} entries, got shape {x.shape}")
    if not np.all(np.isfinite(x.view(np.float64) if s.complex else x)):
        raise ValueError("vector entries must be finite")
    return x


def _check_pair(x: np.ndarray, y: np.ndarray, s: SpaceSpec) -> None:
    if x.shape != (s.dim,) or y.shape != (s.dim,):
        raise DimensionMismatch(f"vectors {x.shape}, {y.shape} do not conform to dim {s.dim}")


def real_inner(x: np.ndarray, y: np.ndarray, s: SpaceSpec) -> float:
    """Real inner product Re<x, y> = sum_k Re(x_k * conj(y_k)).

    Symmetric and bilinear over the reals; requires the euclidean norm.
    """
    if not s.euclidean:
        raise UnsupportedNorm("real_inner is defined for euclidean spaces only")
    _check_pair(x, y, s)
    return float(np.real(np.sum(x * np.conj(y))))


def norm(x: np.ndarray, s: SpaceSpec) -> float:
    """Norm of ``x`` in ``s``: euclidean sqrt(<<x,x>>) or the l^p sum."""
    if x.shape != (s.dim,):
        raise DimensionMismatch(f"vector {x.shape} does not conform to dim {s.dim}")
    if s.euclidean:
        return float(np.sqrt(np.real(np.sum(x * np.conj(x)))))
    return float(np.sum(np.abs(x) ** s.p) ** (1.0 / s.p))


def realify(x: np.ndarray) -> np.ndarray:
    """Interleave a complex vector into real coordinates (Re x1, Im x1, Re x2, ...).

    The real inner product and the euclidean norm are preserved exactly.
    Raises AlreadyReal for real input.
    """
    x = np.asarray(x)
    if not np.iscomplexobj(x):
        raise AlreadyReal("realify expects a complex-field vector")
    out = np.empty(2 * x.shape[-1], dtype=np.float64)
    out[0::2] = x.real
    out[1::2] = x.imag
    return out


def unrealify(xr: np.ndarray) -> np.ndarray:
    """Inverse of :func:`realify`."""
    xr = np.asarray(xr, dtype=np.float64)
    if xr.shape[-1] % 2:
        raise DimensionMismatch("realified vector must have even length")
    return xr[0::2] + 1j * xr[1::2]


def realify_space(s: SpaceSpec) -> SpaceSpec:
    """The real space a complex ``s`` is identified with."""
    if not s.complex:
        raise AlreadyReal("space is already real")
    return SpaceSpec(REAL, 2 * s.dim)


def to_real_rows(X: np.ndarray) -> np.ndarray:
    """Rows of ``X`` in real coordinates (identity for real input)."""
    X = np.atleast_2d(X)
    if not np.iscomplexobj(X):
        return np.asarray(X, dtype=np.float64)
    out = np.empty((X.shape[0], 2 * X.shape[1]), dtype=np.float64)
    out[:, 0::2] = X.real
    out[:, 1::2] = X.imag
    return out


def from_real_rows(Xr: np.ndarray, s: SpaceSpec) -> np.ndarray:
    """Fold realified rows back into vectors of ``s``."""
    Xr = np.atleast_2d(Xr)
    if s.complex:
        return Xr[:, 0::2] + 1j * Xr[:, 1::2]
    return Xr


@dataclass(frozen=True)
class SamplePlan:
    """Deterministic sampling recipe.

    kind:
        ``gaussian``  iid standard-normal coordinates (per real coordinate),
        ``sphere``    gaussian rows normalized to unit euclidean norm,
        ``grid``      axis-aligned lattice with spacing ``step`` on
                      ``[-half_width, half_width]`` per real coordinate,
                      ordered by increasing norm then lexicographically
                      and truncated to ``count`` points.
    """

    count: int
    kind: str = GAUSSIAN
    seed: int = 0
    half_width: float = 1.0
    step: float = 1.0

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.kind not in (GAUSSIAN, SPHERE, GRID):
            raise ValueError(f"unknown sample kind {self.kind!r}")
        if self.kind == GRID and (self.step <= 0 or self.half_width <= 0):
            raise ValueError("grid plans need positive step and half_width")


def sample(plan: SamplePlan, s: SpaceSpec) -> np.ndarray:
    """Draw sample vectors per ``plan``; rows of the returned array are vectors.

    Deterministic for a fixed seed (PCG64).
    """
    rdim = s.real_dim
    if plan.kind == GRID:
        values = np.arange(-plan.half_width, plan.half_width + 0.5 * plan.step, plan.step)
        if len(values) ** rdim > _GRID_CAP:
            raise ValueError("grid lattice too large; shrink half_width or raise step")
        pts = np.array(list(itertools.product(values, repeat=rdim)), dtype=np.float64)
        norm2 = np.round(np.sum(pts * pts, axis=1), 12)
        order = np.lexsort(tuple(pts[:, k] for k in reversed(range(rdim))) + (norm2,))
        pts = pts[order][: plan.count]
        return from_real_rows(pts, s)

    rng = np.random.Generator(np.random.PCG64(plan.seed))
    rows = rng.standard_normal((plan.count, rdim))
    if plan.kind == SPHERE:
        rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    return from_real_rows(rows, s)


def roots_of_unity(n: int) -> np.ndarray:
    """The n complex numbers exp(2*pi*i*k/n), k = 0..n-1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.exp(2j * np.pi * np.arange(n) / n)


# --- JSON encoding ---------------------------------------------------------
#
# SpaceSpec: {"field": "real"|"complex", "dim": d, "norm": "euclidean"|{"p": v}}
# Vector:    [x1, ...] for real fields, [[re, im], ...] for complex ones.
# SamplePlan: {"count": n, "kind": k, "seed": s, "half_width": w, "step": t}


def space_to_json(s: SpaceSpec) -> dict:
    return {
        "field": s.field,
        "dim": s.dim,
        "norm": "euclidean" if s.euclidean else {"p": s.p},
    }


def space_from_json(d: dict) -> SpaceSpec:
    try:
        field, dim, nrm = d["field"], int(d["dim"]), d["norm"]
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"bad space object: {e}") from e
    if nrm == "euclidean":
        p = None
    elif isinstance(nrm, dict) and "p" in nrm:
        p = float(nrm["p"])
    else:
        raise SchemaError(f"bad norm spec {nrm!r}")
    try:
        return SpaceSpec(field, dim, p)
    except (ValueError, UnsupportedNorm) as e:
        raise SchemaError(str(e)) from e


def vector_to_json(x: np.ndarray, s: SpaceSpec) -> list:
    if s.complex:
        return [[float(z.real), float(z.imag)] for z in x]
    return [float(v) for v in x]


def vector_from_json(data, s: SpaceSpec) -> np.ndarray:
    try:
        return as_vector(s, data)
    except (DimensionMismatch, ValueError, TypeError) as e:
        raise SchemaError(f"bad vector: {e}") from e


def plan_to_json(p: SamplePlan) -> dict:
    return {
        "count": p.count,
        "kind": p.kind,
        "seed": p.seed,
        "half_width": p.half_width,
        "step": p.step,
    }


def plan_from_json(d: dict) -> SamplePlan:
    try:
        return SamplePlan(
            count=int(d["count"]),
            kind=d.get("kind", GAUSSIAN),
            seed=int(d.get("seed", 0)),
            half_width=float(d.get("half_width", 1.0)),
            step=float(d.get("step", 1.0)),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"bad sample plan: {e}") from e
