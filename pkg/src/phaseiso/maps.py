"""A closed algebra of map specifications f: X -> Y.

The families cover everything the checker and recovery modules consume:
linear isometries given by an orthogonal generator over realified
coordinates, their sign-phase-twisted versions f(x) = eps(x) * Q x, the
coordinate-conjugation map on C^2 (real linear but not complex linear),
the absolute-value map on a one-dimensional line, tabulated samples, and
two deliberate violators for negative testing.

All values are immutable after construction and safe to share across
threads; the seeded sign rules derive their value from a keyed hash of
the point bytes, so every evaluation of the same point sees the same
sign.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidMapSpec, OutOfDomain, SchemaError
from .space import (
    COMPLEX,
    DEFAULT_ATOL,
    DEFAULT_RTOL,
    SpaceSpec,
    as_vector,
    from_real_rows,
    roots_of_unity,
    space_from_json,
    space_to_json,
    to_real_rows,
    vector_from_json,
    vector_to_json,
)

_ORTHO_TOL = 1e-10


def _point_digest(seed: int, x: np.ndarray) -> int:
    """Stable 64-bit digest of (seed, exact float bytes of x)."""
    h = hashlib.blake2b(digest_size=8, key=str(int(seed)).encode())
    h.update(np.ascontiguousarray(x).tobytes())
    return int.from_bytes(h.digest(), "little")


# --- sign rules ------------------------------------------------------------


class SignRule:
    """Base for the phase rules eps: X -> {unit scalars}."""

    def phases(self, X: np.ndarray, domain: SpaceSpec) -> np.ndarray:
        raise NotImplementedError

    def phase_at(self, x: np.ndarray, domain: SpaceSpec):
        return self.phases(np.atleast_2d(x), domain)[0]


@dataclass(frozen=True)
class ConstantSign(SignRule):
    """eps(x) = s for every x."""

    s: int = 1

    def __post_init__(self):
        if self.s not in (1, -1):
            raise InvalidMapSpec("constant sign must be +1 or -1")

    def phases(self, X, domain):
        return np.full(np.atleast_2d(X).shape[0], float(self.s))


@dataclass(frozen=True)
class HalfspaceSign(SignRule):
    """eps(x) = +1 on the closed halfspace <<x, v>> >= 0, else -1.

    Ties (<<x, v>> == 0) take +1 so the rule is total.
    """

    v: tuple

    def phases(self, X, domain):
        v = as_vector(domain, list(self.v))
        proj = np.real(np.atleast_2d(X) @ np.conj(v))
        return np.where(proj >= 0.0, 1.0, -1.0)


@dataclass(frozen=True)
class SeededSign(SignRule):
    """Pseudo-random +-1 per evaluated point, fixed by the seed.

    The sign is a deterministic function of (seed, point bytes); a small
    memo cache only avoids rehashing.
    """

    seed: int = 0
    _memo: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def phases(self, X, domain):
        X = np.atleast_2d(X)
        out = np.empty(X.shape[0])
        # memo writes are idempotent: the value is a pure function of the key
        for k in range(X.shape[0]):
            key = X[k].tobytes()
            s = self._memo.get(key)
            if s is None:
                s = 1.0 if _point_digest(self.seed, X[k]) & 1 else -1.0
                self._memo[key] = s
            out[k] = s
        return out


@dataclass(frozen=True)
class SeededRootPhase(SignRule):
    """Pseudo-random nth root of unity per point (complex codomains only).

    Generalizes the +-1 rules for the root-of-unity harness; n = 2
    reduces to a seeded sign rule with the same determinism guarantee.
    """

    n: int = 2
    seed: int = 0
    _memo: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidMapSpec("root phase needs n >= 1")

    def phases(self, X, domain):
        X = np.atleast_2d(X)
        betas = roots_of_unity(self.n)
        out = np.empty(X.shape[0], dtype=np.complex128)
        for k in range(X.shape[0]):
            key = X[k].tobytes()
            b = self._memo.get(key)
            if b is None:
                b = betas[_point_digest(self.seed, X[k]) % self.n]
                self._memo[key] = b
            out[k] = b
        return out


# --- map specifications ----------------------------------------------------


class MapSpec:
    """Base class; concrete variants define ``eval_many``."""

    domain: SpaceSpec
    codomain: SpaceSpec

    #: False for bare tables, which cannot be evaluated at derived points.
    evaluable = True

    def eval_many(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def eval(self, x) -> np.ndarray:
        x = as_vector(self.domain, x) if not isinstance(x, np.ndarray) else x
        return self.eval_many(np.atleast_2d(x))[0]


def _check_generator(Q: np.ndarray, domain: SpaceSpec, codomain: SpaceSpec, tol: float) -> np.ndarray:
    Q = np.asarray(Q, dtype=np.float64)
    if Q.shape != (codomain.real_dim, domain.real_dim):
        raise InvalidMapSpec(
            f"generator shape {Q.shape} does not map realified "
            f"{domain.real_dim} -> {codomain.real_dim}"
        )
    err = np.abs(Q.T @ Q - np.eye(domain.real_dim)).max()
    if err > tol:
        raise InvalidMapSpec(f"generator is not orthogonal: max |Q^T Q - I| = {err:.3e}")
    return Q


@dataclass(frozen=True)
class LinearIsometry(MapSpec):
    """f(x) = Q x with Q^T Q = I over realified coordinates."""

    domain: SpaceSpec
    codomain: SpaceSpec
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _check_generator(self.matrix, self.domain, self.codomain, _ORTHO_TOL))

    def eval_many(self, X):
        return from_real_rows(to_real_rows(X) @ self.matrix.T, self.codomain)


@dataclass(frozen=True)
class PhaseIsometry(MapSpec):
    """f(x) = eps(x) * Q x for a unit-scalar rule eps."""

    domain: SpaceSpec
    codomain: SpaceSpec
    matrix: np.ndarray
    rule: SignRule

    def __post_init__(self):
        object.__setattr__(self, "matrix", _check_generator(self.matrix, self.domain, self.codomain, _ORTHO_TOL))
        if isinstance(self.rule, SeededRootPhase) and self.rule.n > 2 and not self.codomain.complex:
            raise InvalidMapSpec("root phases with n > 2 need a complex codomain")

    def eval_many(self, X):
        base = from_real_rows(to_real_rows(X) @ self.matrix.T, self.codomain)
        phases = self.rule.phases(X, self.domain)
        return base * phases[:, None]


@dataclass(frozen=True)
class RatzConjugation(MapSpec):
    """f(x1, x2) = (x1, conj(x2)) on C^2."""

    domain: SpaceSpec = SpaceSpec(COMPLEX, 2)
    codomain: SpaceSpec = SpaceSpec(COMPLEX, 2)

    def __post_init__(self):
        if self.domain != SpaceSpec(COMPLEX, 2) or self.codomain != SpaceSpec(COMPLEX, 2):
            raise InvalidMapSpec("coordinate conjugation is defined on C^2 -> C^2")

    def eval_many(self, X):
        F = np.array(np.atleast_2d(X), dtype=np.complex128)
        F[:, 1] = np.conj(F[:, 1])
        return F

    @property
    def real_matrix(self) -> np.ndarray:
        """The exact generator of the map over realified coordinates."""
        return np.diag([1.0, 1.0, 1.0, -1.0])


@dataclass(frozen=True)
class AbsOneDim(MapSpec):
    """f(lambda * a) = |lambda| * b on the line through the unit vector a.

    Defined only on real multiples of ``a``; evaluation off the line is
    an OutOfDomain error rather than an extension.
    """

    domain: SpaceSpec
    codomain: SpaceSpec
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = as_vector(self.domain, self.a) if not isinstance(self.a, np.ndarray) else self.a
        b = as_vector(self.codomain, self.b) if not isinstance(self.b, np.ndarray) else self.b
        for name, v in (("a", a), ("b", b)):
            n = float(np.sqrt(np.real(np.sum(v * np.conj(v)))))
            if abs(n - 1.0) > 1e-12:
                raise InvalidMapSpec(f"{name} must be a unit vector, got norm {n!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def eval_many(self, X):
        X = np.atleast_2d(X)
        lam = np.real(X @ np.conj(self.a))
        resid = np.linalg.norm(X - lam[:, None] * self.a, axis=1)
        bad = resid > DEFAULT_ATOL + DEFAULT_RTOL * np.abs(lam)
        if np.any(bad):
            raise OutOfDomain(f"point index {int(np.argmax(bad))} is not on the line through a")
        return np.abs(lam)[:, None] * np.asarray(self.b)[None, :]


@dataclass(frozen=True)
class Tabulated(MapSpec):
    """A map known only through sample pairs (x_i, f_i)."""

    domain: SpaceSpec
    codomain: SpaceSpec
    points: np.ndarray
    images: np.ndarray

    evaluable = False

    def __post_init__(self):
        P = np.atleast_2d(np.asarray(self.points, dtype=self.domain.dtype))
        F = np.atleast_2d(np.asarray(self.images, dtype=self.codomain.dtype))
        if P.shape[0] != F.shape[0]:
            raise InvalidMapSpec("points and images must have equal length")
        if P.shape[1] != self.domain.dim or F.shape[1] != self.codomain.dim:
            raise InvalidMapSpec("table rows do not conform to the declared spaces")
        d2 = _pairwise_sq_dists(to_real_rows(P))
        iu = np.triu_indices(P.shape[0], k=1)
        if iu[0].size and np.any(d2[iu] <= DEFAULT_ATOL**2):
            k = int(np.argmax(d2[iu] <= DEFAULT_ATOL**2))
            raise InvalidMapSpec(f"duplicate domain points at pair {(int(iu[0][k]), int(iu[1][k]))}")
        object.__setattr__(self, "points", P)
        object.__setattr__(self, "images", F)

    def __len__(self) -> int:
        return self.points.shape[0]

    def eval_many(self, X):
        X = np.atleast_2d(X)
        out = np.empty((X.shape[0], self.codomain.dim), dtype=self.codomain.dtype)
        for k in range(X.shape[0]):
            d = np.linalg.norm(self.points - X[k][None, :], axis=1)
            i = int(np.argmin(d))
            if d[i] > DEFAULT_ATOL + DEFAULT_RTOL * np.linalg.norm(X[k]):
                raise OutOfDomain("point is absent from the table")
            out[k] = self.images[i]
        return out


def _pairwise_sq_dists(R: np.ndarray) -> np.ndarray:
    n2 = np.sum(R * R, axis=1)
    d2 = n2[:, None] + n2[None, :] - 2.0 * (R @ R.T)
    return np.maximum(d2, 0.0)


@dataclass(frozen=True)
class Scaled(MapSpec):
    """Violator: f(x) = c * base(x) with c != +-1, breaking norm preservation."""

    base: MapSpec
    factor: float

    def __post_init__(self):
        if self.factor in (1.0, -1.0):
            raise InvalidMapSpec("scaling by +-1 is not a violator")

    @property
    def domain(self):
        return self.base.domain

    @property
    def codomain(self):
        return self.base.codomain

    def eval_many(self, X):
        return self.factor * self.base.eval_many(X)


@dataclass(frozen=True)
class PerturbedLinear(MapSpec):
    """Violator: f(x) = Q x + eta * noise(x) with seeded per-point gaussian noise."""

    domain: SpaceSpec
    codomain: SpaceSpec
    matrix: np.ndarray
    eta: float
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "matrix", _check_generator(self.matrix, self.domain, self.codomain, _ORTHO_TOL))
        if self.eta <= 0:
            raise InvalidMapSpec("eta must be positive")

    def eval_many(self, X):
        X = np.atleast_2d(X)
        base = to_real_rows(X) @ self.matrix.T
        noise = np.empty_like(base)
        for k in range(X.shape[0]):
            rng = np.random.Generator(np.random.PCG64(_point_digest(self.seed, X[k])))
            noise[k] = rng.standard_normal(base.shape[1])
        return from_real_rows(base + self.eta * noise, self.codomain)


# --- constructors and helpers ----------------------------------------------


def eval_map(m: MapSpec, x) -> np.ndarray:
    """Evaluate ``m`` at a single vector."""
    return m.eval(x)


def tabulate(m: MapSpec, xs: np.ndarray) -> Tabulated:
    """Record (x, f(x)) pairs so downstream consumers work from samples alone."""
    X = np.atleast_2d(np.asarray(xs, dtype=m.domain.dtype))
    return Tabulated(m.domain, m.codomain, X, m.eval_many(X))


def random_orthogonal(dim: int, seed: int = 0) -> np.ndarray:
    """Seeded orthogonal matrix via QR with positive-diagonal sign correction.

    The correction makes the factorization unique, so the output is a
    deterministic function of the seed; max |Q^T Q - I| <= 1e-12.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    d = np.sign(np.diag(r))
    d[d == 0] = 1.0
    Q = q * d
    assert np.abs(Q.T @ Q - np.eye(dim)).max() <= 1e-12
    return Q


def random_unitary(dim: int, seed: int = 0) -> np.ndarray:
    """Seeded unitary matrix (complex QR with unit-phase diagonal correction)."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    A = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(A)
    d = np.diag(r)
    phase = d / np.abs(d)
    return q * phase


def complex_to_real_matrix(U: np.ndarray) -> np.ndarray:
    """Generator of x -> U x over interleaved realified coordinates."""
    U = np.asarray(U, dtype=np.complex128)
    n, m = U.shape
    M = np.zeros((2 * n, 2 * m))
    M[0::2, 0::2] = U.real
    M[0::2, 1::2] = -U.imag
    M[1::2, 0::2] = U.imag
    M[1::2, 1::2] = U.real
    return M


def conjugation_matrix(dim: int) -> np.ndarray:
    """Generator of coordinatewise conjugation on C^dim over realified coordinates."""
    return np.diag([1.0 if k % 2 == 0 else -1.0 for k in range(2 * dim)])


def signed_permutation(dim: int, seed: int = 0) -> np.ndarray:
    """Seeded signed permutation matrix; an isometry of every l^p norm."""
    rng = np.random.Generator(np.random.PCG64(seed))
    perm = rng.permutation(dim)
    signs = rng.integers(0, 2, size=dim) * 2 - 1
    M = np.zeros((dim, dim))
    M[np.arange(dim), perm] = signs
    return M


# --- JSON encoding ----------------------------------------------------------
#
# MapSpec documents carry a "variant" discriminator; matrices are row-major
# nested arrays; see FORMATS.md for the full schema.


def _rule_to_json(rule: SignRule) -> dict:
    if isinstance(rule, ConstantSign):
        return {"kind": "constant", "sign": rule.s}
    if isinstance(rule, HalfspaceSign):
        if any(isinstance(c, complex) for c in rule.v):
            normal = [[complex(c).real, complex(c).imag] for c in rule.v]
        else:
            normal = [float(c) for c in rule.v]
        return {"kind": "halfspace", "normal": normal}
    if isinstance(rule, SeededSign):
        return {"kind": "seeded", "seed": rule.seed}
    if isinstance(rule, SeededRootPhase):
        return {"kind": "root_phase", "n": rule.n, "seed": rule.seed}
    raise SchemaError(f"unknown sign rule {type(rule).__name__}")


def _rule_from_json(d: dict) -> SignRule:
    kind = d.get("kind")
    if kind == "constant":
        return ConstantSign(int(d["sign"]))
    if kind == "halfspace":
        entries = d["normal"]
        if entries and isinstance(entries[0], (list, tuple)):
            entries = [complex(re, im) for re, im in entries]
        return HalfspaceSign(tuple(entries))
    if kind == "seeded":
        return SeededSign(int(d["seed"]))
    if kind == "root_phase":
        return SeededRootPhase(int(d["n"]), int(d["seed"]))
    raise SchemaError(f"unknown sign rule kind {kind!r}")


def map_to_json(m: MapSpec) -> dict:
    if isinstance(m, LinearIsometry):
        return {
            "variant": "linear_isometry",
            "domain": space_to_json(m.domain),
            "codomain": space_to_json(m.codomain),
            "matrix": m.matrix.tolist(),
        }
    if isinstance(m, PhaseIsometry):
        return {
            "variant": "phase_isometry",
            "domain": space_to_json(m.domain),
            "codomain": space_to_json(m.codomain),
            "matrix": m.matrix.tolist(),
            "rule": _rule_to_json(m.rule),
        }
    if isinstance(m, RatzConjugation):
        return {"variant": "ratz_conjugation"}
    if isinstance(m, AbsOneDim):
        return {
            "variant": "abs_one_dim",
            "domain": space_to_json(m.domain),
            "codomain": space_to_json(m.codomain),
            "a": vector_to_json(m.a, m.domain),
            "b": vector_to_json(m.b, m.codomain),
        }
    if isinstance(m, Tabulated):
        return {
            "variant": "tabulated",
            "domain": space_to_json(m.domain),
            "codomain": space_to_json(m.codomain),
            "points": [vector_to_json(x, m.domain) for x in m.points],
            "images": [vector_to_json(f, m.codomain) for f in m.images],
        }
    if isinstance(m, Scaled):
        return {"variant": "scaled", "base": map_to_json(m.base), "factor": m.factor}
    if isinstance(m, PerturbedLinear):
        return {
            "variant": "perturbed_linear",
            "domain": space_to_json(m.domain),
            "codomain": space_to_json(m.codomain),
            "matrix": m.matrix.tolist(),
            "eta": m.eta,
            "seed": m.seed,
        }
    raise SchemaError(f"unknown map variant {type(m).__name__}")


def map_from_json(d: dict) -> MapSpec:
    if not isinstance(d, dict) or "variant" not in d:
        raise SchemaError("map object needs a 'variant' discriminator")
    v = d["variant"]
    try:
        if v == "linear_isometry":
            return LinearIsometry(space_from_json(d["domain"]), space_from_json(d["codomain"]),
                                  np.asarray(d["matrix"], dtype=float))
        if v == "phase_isometry":
            return PhaseIsometry(space_from_json(d["domain"]), space_from_json(d["codomain"]),
                                 np.asarray(d["matrix"], dtype=float), _rule_from_json(d["rule"]))
        if v == "ratz_conjugation":
            return RatzConjugation()
        if v == "abs_one_dim":
            dom, cod = space_from_json(d["domain"]), space_from_json(d["codomain"])
            return AbsOneDim(dom, cod, vector_from_json(d["a"], dom), vector_from_json(d["b"], cod))
        if v == "tabulated":
            dom, cod = space_from_json(d["domain"]), space_from_json(d["codomain"])
            pts = np.array([vector_from_json(x, dom) for x in d["points"]], dtype=dom.dtype)
            ims = np.array([vector_from_json(f, cod) for f in d["images"]], dtype=cod.dtype)
            return Tabulated(dom, cod, pts, ims)
        if v == "scaled":
            return Scaled(map_from_json(d["base"]), float(d["factor"]))
        if v == "perturbed_linear":
            return PerturbedLinear(space_from_json(d["domain"]), space_from_json(d["codomain"]),
                                   np.asarray(d["matrix"], dtype=float), float(d["eta"]),
                                   int(d.get("seed", 0)))
    except (KeyError, TypeError, ValueError, InvalidMapSpec) as e:
        raise SchemaError(f"bad {v} map: {e}") from e
    raise SchemaError(f"unknown map variant {v!r}")
