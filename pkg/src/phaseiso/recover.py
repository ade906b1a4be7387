"""Reconstruction of the sign function and the linear generator.

Given tabulated samples (x_i, f_i) of a map that preserves absolute
inner products, the relative sign eps(x_i) * eps(x_j) is determined
wherever the pair couples: s_ij = sign(<<x_i, x_j>> * <<f_i, f_j>>).
The pipeline

    build_sign_graph -> propagate_signs -> fit_linear -> certify

builds the graph of determinable relative signs, anchors each connected
component at its lowest-index node with sign +1, propagates by breadth
first search (checking every edge, including non-tree edges), fits the
generator G by least squares over realified coordinates, and certifies
the result with two residuals:

    gram_residual = max |G^T G - I|        (orthogonality certificate)
    fit_residual  = max_i ||sign_i * f_i - G x_i||

The fit is unconstrained; the orthogonality certificate is the
diagnostic, and :func:`polar_factor` offers an explicit projection onto
the orthogonal matrices that is never applied silently.

Signs are canonical only up to a global flip per component, so outputs
anchor every component at +1 on its lowest node index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InconsistentCycle,
    MagnitudeMismatch,
    NotPhaseEquivalent,
    RankDeficient,
    TooManyNodes,
)
from .checker import ConditionId, ConditionReport, check_condition
from .maps import Tabulated
from .space import DEFAULT_ATOL, to_real_rows

RANK_TOL = 1e-8
DEFAULT_DELTA = 1e-6
DEFAULT_EDGE_TOL = 1e-6


@dataclass(frozen=True)
class SignGraph:
    """Sample points as nodes, determinable relative signs as edges.

    nodes hold original sample indices (zero vectors are excluded; the
    sign at 0 is immaterial).  Edge arrays are aligned: edge k joins
    (edge_i[k], edge_j[k]) with relative sign edge_sign[k] and recorded
    magnitude deviation | |<<x_i,x_j>>| - |<<f_i,f_j>>| |.
    """

    nodes: tuple[int, ...]
    edge_i: np.ndarray
    edge_j: np.ndarray
    edge_sign: np.ndarray
    edge_ratio_error: np.ndarray
    components: tuple[tuple[int, ...], ...]

    def edges(self) -> list[tuple[int, int, int, float]]:
        return [
            (int(i), int(j), int(s), float(e))
            for i, j, s, e in zip(self.edge_i, self.edge_j, self.edge_sign, self.edge_ratio_error)
        ]

    @property
    def n_edges(self) -> int:
        return int(self.edge_i.size)


@dataclass(frozen=True)
class SignAssignment:
    """Node index -> +-1, with one +1 anchor per component."""

    signs: dict[int, int]
    component_anchors: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class RecoveryResult:
    assignment: SignAssignment
    matrix: np.ndarray
    gram_residual: float
    fit_residual: float
    certified: bool
    component_count: int

    def sign_array(self, n_samples: int) -> np.ndarray:
        """Signs as an array over all sample indices (+1 for non-nodes)."""
        out = np.ones(n_samples, dtype=int)
        for i, s in self.assignment.signs.items():
            out[i] = s
        return out

    def component_labels(self, n_samples: int) -> np.ndarray:
        """Component ordinal per sample index, -1 for excluded samples."""
        out = np.full(n_samples, -1, dtype=int)
        for label, comp in enumerate(self.assignment.components):
            for i in comp:
                out[i] = label
        return out

    def to_json(self, n_samples: int | None = None) -> dict:
        n = n_samples if n_samples is not None else (max(self.assignment.signs, default=-1) + 1)
        return {
            "schema_version": "1",
            "signs": self.sign_array(n).tolist(),
            "component_labels": self.component_labels(n).tolist(),
            "component_count": self.component_count,
            "matrix": self.matrix.tolist(),
            "gram_residual": self.gram_residual,
            "fit_residual": self.fit_residual,
            "certified": self.certified,
        }


class _UnionFind:
    def __init__(self, items):
        self.parent = {i: i for i in items}

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def build_sign_graph(
    samples: np.ndarray,
    images: np.ndarray,
    delta: float = DEFAULT_DELTA,
    edge_tol: float = DEFAULT_EDGE_TOL,
) -> SignGraph:
    """Build the relative-sign graph over nonzero sample points.

    An edge joins (i, j) when both inner products clear the relative
    threshold: |<<x_i, x_j>>| >= delta * ||x_i|| * ||x_j|| and likewise
    for the images.  Near-orthogonal pairs are omitted because the sign
    of their ratio is numerically meaningless.

    Raises MagnitudeMismatch when an edge's inner-product magnitudes
    disagree beyond ``edge_tol`` (scaled by the norm product): the input
    then violates the absolute-inner-product condition and carries no
    consistent sign structure.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    X = np.atleast_2d(np.asarray(samples))
    F = np.atleast_2d(np.asarray(images))
    if X.shape[0] != F.shape[0]:
        raise ValueError("samples and images must have equal length")

    gx = np.real(X @ X.conj().T)
    gf = np.real(F @ F.conj().T)
    nx = np.sqrt(np.maximum(np.diag(gx), 0.0))
    nf = np.sqrt(np.maximum(np.diag(gf), 0.0))

    nodes = tuple(int(i) for i in np.flatnonzero(nx > DEFAULT_ATOL))
    idx = np.array(nodes, dtype=int)
    ax, af = np.abs(gx), np.abs(gf)
    ok = (
        (ax >= delta * np.outer(nx, nx))
        & (af >= delta * np.outer(nf, nf))
        & (ax > 0.0)
        & (af > 0.0)
    )
    mask = np.zeros_like(ok)
    if idx.size:
        mask[np.ix_(idx, idx)] = ok[np.ix_(idx, idx)]
    mask &= np.triu(np.ones_like(mask), k=1).astype(bool)

    ei, ej = np.nonzero(mask)
    sgn = np.sign(gx[ei, ej] * gf[ei, ej]).astype(int)
    ratio_err = np.abs(ax[ei, ej] - af[ei, ej])

    bad = ratio_err > edge_tol * np.maximum(1.0, nx[ei] * nx[ej])
    if np.any(bad):
        k = int(np.argmax(bad))
        raise MagnitudeMismatch(
            f"edge ({int(ei[k])}, {int(ej[k])}) has inner-product magnitude "
            f"deviation {float(ratio_err[k]):.3e}; input violates T2_IV"
        )

    uf = _UnionFind(nodes)
    for i, j in zip(ei, ej):
        uf.union(int(i), int(j))
    roots: dict[int, list[int]] = {}
    for i in nodes:
        roots.setdefault(uf.find(i), []).append(i)
    components = tuple(tuple(sorted(c)) for c in sorted(roots.values(), key=min))

    return SignGraph(nodes, ei, ej, sgn, ratio_err, components)


def propagate_signs(g: SignGraph) -> SignAssignment:
    """Breadth-first sign propagation from each component's anchor.

    The anchor is the lowest node index of the component and is fixed to
    +1.  After propagation every edge is verified, including non-tree
    edges; a contradiction raises InconsistentCycle with the offending
    pair, which signals that the data is not phase-equivalent to a
    linear isometry within tolerance.
    """
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in g.nodes}
    for i, j, s, _ in g.edges():
        adj[i].append((j, s))
        adj[j].append((i, s))
    for lst in adj.values():
        lst.sort()

    signs: dict[int, int] = {}
    anchors = []
    for comp in g.components:
        anchor = comp[0]
        anchors.append(anchor)
        signs[anchor] = 1
        frontier = [anchor]
        while frontier:
            nxt = []
            for i in frontier:
                for j, s in adj[i]:
                    if j not in signs:
                        signs[j] = signs[i] * s
                        nxt.append(j)
            frontier = sorted(nxt)

    for i, j, s, _ in g.edges():
        if signs[i] * signs[j] != s:
            raise InconsistentCycle(i, j)
    return SignAssignment(signs, tuple(anchors), g.components)


@dataclass(frozen=True)
class BruteForceResult:
    """Zero- (or minimum-) violation assignments over the graph nodes.

    ``assignments`` holds sign tuples aligned with ``nodes``;
    ``violations`` is the minimum edge-violation count they achieve.
    """

    assignments: frozenset
    violations: int
    nodes: tuple[int, ...]


def brute_force_signs(
    samples: np.ndarray,
    images: np.ndarray,
    max_n: int = 16,
    delta: float = DEFAULT_DELTA,
    edge_tol: float = DEFAULT_EDGE_TOL,
) -> BruteForceResult:
    """Enumerate all 2^n sign assignments; the oracle for propagate_signs."""
    g = build_sign_graph(samples, images, delta, edge_tol)
    n = len(g.nodes)
    if n > max_n:
        raise TooManyNodes(f"{n} nodes exceed the brute-force cap {max_n}")
    pos = {node: k for k, node in enumerate(g.nodes)}
    bits = np.arange(2**n, dtype=np.int64)
    signs = 1 - 2 * ((bits[:, None] >> np.arange(n)) & 1).astype(np.int8)
    viol = np.zeros(2**n, dtype=np.int32)
    for i, j, s, _ in g.edges():
        viol += signs[:, pos[i]] * signs[:, pos[j]] != s
    best = int(viol.min()) if viol.size else 0
    winners = frozenset(tuple(int(v) for v in row) for row in signs[viol == best])
    return BruteForceResult(winners, best, g.nodes)


def fit_linear(samples: np.ndarray, images: np.ndarray, a: SignAssignment) -> np.ndarray:
    """Least-squares generator G minimizing sum_i ||sign_i * f_i - G x_i||^2.

    Works over realified coordinates; indices missing from the
    assignment (zero samples) enter with sign +1, which is immaterial.
    Raises RankDeficient when the samples do not span the domain, in
    which case G is underdetermined and the caller should enlarge the
    sample plan.
    """
    X = np.atleast_2d(np.asarray(samples))
    F = np.atleast_2d(np.asarray(images))
    Xr = to_real_rows(X)
    sign_vec = np.array([a.signs.get(i, 1) for i in range(X.shape[0])], dtype=float)
    Yr = to_real_rows(F) * sign_vec[:, None]

    sv = np.linalg.svd(Xr, compute_uv=False)
    rank = int(np.sum(sv > RANK_TOL * sv[0])) if sv.size and sv[0] > 0 else 0
    if rank < Xr.shape[1]:
        raise RankDeficient(f"sample rank {rank} < domain dimension {Xr.shape[1]}")
    G, *_ = np.linalg.lstsq(Xr, Yr, rcond=None)
    return G.T


def certify(
    samples: np.ndarray,
    images: np.ndarray,
    a: SignAssignment,
    G: np.ndarray,
    tol: float,
) -> RecoveryResult:
    """Orthogonality and fit certificates for a recovered (signs, G) pair.

    The reported component count is the number of sign-graph components;
    densely sampled continuous maps on domains of real dimension >= 2
    are expected to yield a single component.
    """
    X = np.atleast_2d(np.asarray(samples))
    F = np.atleast_2d(np.asarray(images))
    Xr, Fr = to_real_rows(X), to_real_rows(F)
    sign_vec = np.array([a.signs.get(i, 1) for i in range(X.shape[0])], dtype=float)
    resid = np.linalg.norm(Fr * sign_vec[:, None] - Xr @ G.T, axis=1)
    fit_residual = float(resid.max()) if resid.size else 0.0
    gram_residual = float(np.abs(G.T @ G - np.eye(G.shape[1])).max())
    certified = gram_residual <= tol and fit_residual <= tol
    return RecoveryResult(a, G, gram_residual, fit_residual, certified, len(a.component_anchors))


def recover(
    m: Tabulated,
    tol: float = 1e-9,
    delta: float = DEFAULT_DELTA,
) -> RecoveryResult:
    """Full pipeline on a tabulated map.

    The absolute-inner-product condition (T2_IV) is checked first; a
    failure, or an inconsistent sign cycle downstream, raises
    NotPhaseEquivalent.  Output signs are canonical: each component's
    lowest-index node carries +1.
    """
    if not isinstance(m, Tabulated):
        raise TypeError("recover consumes Tabulated maps; use tabulate() first")
    report: ConditionReport = check_condition(ConditionId.T2_IV, m, tol)
    if not report.passed:
        raise NotPhaseEquivalent(
            f"T2_IV fails with residual {report.max_residual:.3e} at pair {report.argmax_pair}"
        )
    g = build_sign_graph(m.points, m.images, delta)
    try:
        a = propagate_signs(g)
    except InconsistentCycle as e:
        raise NotPhaseEquivalent(f"inconsistent sign cycle at edge {e.pair}") from e
    G = fit_linear(m.points, m.images, a)
    return certify(m.points, m.images, a, G, tol)


def polar_factor(G: np.ndarray) -> np.ndarray:
    """Nearest orthogonal matrix (polar factor via SVD).

    Offered as an explicit post-processing step; the pipeline never
    applies it silently because the unprojected residual is the
    diagnostic signal.
    """
    U, _, Vt = np.linalg.svd(G)
    return U @ Vt
