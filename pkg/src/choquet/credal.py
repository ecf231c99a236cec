"""Credal sets: the core polytope of a convex capacity and operations on vertex lists.

A credal set is stored by its generating probability vectors as a (k, n)
array in canonical form (rows clipped at 0, sorted lexicographically,
deduplicated within the tolerance), so identical sets print and serialize
identically regardless of how they were produced.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .capacity import Capacity, StateSpace, _require_same_space, is_convex
from .errors import (
    AlphaOutOfRangeError,
    NotConvexError,
    NullEventError,
    SpaceMismatchError,
    ZeroConditioningMassError,
)
from .tolerance import default_tol, resolve_tol


@lru_cache(maxsize=None)
def _indicator(n: int) -> np.ndarray:
    """(2^n, n) matrix whose row for mask A marks the states inside A."""
    masks = np.arange(1 << n)
    ind = ((masks[:, None] >> np.arange(n)[None, :]) & 1).astype(np.float64)
    ind.flags.writeable = False
    return ind


def event_probabilities(vertices: np.ndarray, n: int) -> np.ndarray:
    """Per-vertex probability of every event: (k, 2^n) from a (k, n) vertex array."""
    return np.asarray(vertices, dtype=np.float64) @ _indicator(n).T


def _canonical_vertices(space: StateSpace, vertices, tol: float) -> np.ndarray:
    arr = np.array(vertices, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != space.n or arr.shape[0] == 0:
        raise ValueError(f"expected a non-empty (k, {space.n}) vertex array, got shape {arr.shape}")
    if arr.min(initial=0.0) < -tol:
        raise ValueError(f"vertex entry {arr.min()!r} below -{tol}")
    arr = np.clip(arr, 0.0, None)
    sums = arr.sum(axis=1)
    off = np.abs(sums - 1.0)
    if off.max() > tol:
        raise ValueError(f"vertex sums off by up to {off.max()!r}, expected 1 within {tol}")
    order = np.lexsort(arr.T[::-1])
    arr = arr[order]
    if arr.shape[0] > 1:
        gaps = np.abs(np.diff(arr, axis=0)).max(axis=1)
        arr = arr[np.r_[True, gaps > tol]]
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """A single probability distribution over the states."""

    space: StateSpace
    p: np.ndarray

    def __post_init__(self):
        arr = _canonical_vertices(self.space, self.p, default_tol())[0]
        object.__setattr__(self, "p", arr)

    def prob(self, mask: int) -> float:
        self.space.check_mask(mask)
        return float(event_probabilities(self.p.reshape(1, -1), self.space.n)[0, mask])


@dataclass(frozen=True, eq=False)
class CredalSet:
    """Finitely generated set of probability vectors (the convex hull of its rows)."""

    space: StateSpace
    vertices: np.ndarray
    flags: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        arr = _canonical_vertices(self.space, self.vertices, default_tol())
        object.__setattr__(self, "vertices", arr)

    @property
    def k(self) -> int:
        return self.vertices.shape[0]

    def all_event_probabilities(self) -> np.ndarray:
        """Cached (k, 2^n) matrix of vertex probabilities for every event."""
        cached = getattr(self, "_probs", None)
        if cached is None:
            cached = event_probabilities(self.vertices, self.space.n)
            cached.flags.writeable = False
            object.__setattr__(self, "_probs", cached)
        return cached


def _as_row(space: StateSpace, p) -> np.ndarray:
    if isinstance(p, ProbabilityVector):
        _require_same_space(space, p.space)
        return p.p
    arr = np.asarray(p, dtype=np.float64)
    if arr.shape != (space.n,):
        raise SpaceMismatchError(f"probability vector of shape {arr.shape} does not fit {space.n} states")
    return arr


def _require_convex(c: Capacity, tol: float) -> None:
    chk = is_convex(c, tol)
    if not chk:
        a, b = chk.violating_pair
        raise NotConvexError(
            f"capacity is not convex: events {{{c.space.event_key(a)}}}, {{{c.space.event_key(b)}}} "
            f"violate supermodularity by {-chk.margin:.3e}",
            pair=chk.violating_pair,
        )


def _require_nonnull(c: Capacity, event: int, tol: float) -> None:
    c.space.check_mask(event)
    if c.values[event] <= tol:
        raise NullEventError(f"event {{{c.space.event_key(event)}}} has capacity {c.values[event]!r} <= {tol}")


def core_vertices(c: Capacity, tol: float | None = None) -> CredalSet:
    """Enumerate the extreme points of the core of a convex capacity.

    One marginal vector per state ordering: the vector giving each state the
    capacity increment of adding it along that order. For convex capacities
    these are exactly the core's extreme points; duplicates collapse in the
    canonical form. Raises NotConvexError otherwise, since marginal vectors
    of a non-convex capacity may leave the core.
    """
    tol = resolve_tol(tol)
    _require_convex(c, tol)
    n = c.space.n
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    bits = np.left_shift(1, perms)
    masks = np.bitwise_or.accumulate(bits, axis=1)
    prev = np.concatenate([np.zeros((perms.shape[0], 1), dtype=np.int64), masks[:, :-1]], axis=1)
    margins = c.values[masks] - c.values[prev]
    verts = np.empty_like(margins)
    verts[np.arange(perms.shape[0])[:, None], perms] = margins
    return CredalSet(c.space, verts)


def membership(c: Capacity, p, tol: float | None = None) -> bool:
    """True when p dominates the capacity on every event (lies in the core)."""
    tol = resolve_tol(tol)
    row = _as_row(c.space, p)
    probs = event_probabilities(row.reshape(1, -1), c.space.n)[0]
    return bool(np.all(probs >= c.values - tol))


def max_prob(c: Capacity, event: int, tol: float | None = None) -> float:
    """Largest probability the core assigns to an event: 1 - v(complement)."""
    tol = resolve_tol(tol)
    _require_convex(c, tol)
    c.space.check_mask(event)
    return float(1.0 - c.values[c.space.complement(event)])


def maximizer_set(
    c: Capacity, event: int, tol: float | None = None, *, core: CredalSet | None = None
) -> CredalSet:
    """Core vertices assigning maximal probability to the event.

    ``core`` may carry a precomputed ``core_vertices(c)`` to skip the
    permutation sweep. The event must be nonnull.
    """
    tol = resolve_tol(tol)
    _require_nonnull(c, event, tol)
    if core is None:
        core = core_vertices(c, tol)
    probs = core.all_event_probabilities()[:, event]
    attain = probs >= probs.max() - tol
    return CredalSet(c.space, core.vertices[attain])


def mixture(a: CredalSet, b: CredalSet, alpha: float, tol: float | None = None) -> CredalSet:
    """Vertex set of the Minkowski mixture alpha*A + (1-alpha)*B.

    Emits every pairwise combination alpha*u + (1-alpha)*v; the extreme
    points of the mixture are a subset of these, so the hull is exact.
    """
    tol = resolve_tol(tol)
    _require_same_space(a.space, b.space)
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise AlphaOutOfRangeError(f"mixing weight {alpha!r} outside [0, 1]")
    va, vb = a.vertices, b.vertices
    combo = alpha * va[:, None, :] + (1.0 - alpha) * vb[None, :, :]
    return CredalSet(a.space, combo.reshape(-1, a.space.n))


def _conditional_ratios(credal: CredalSet, event: int, tol: float) -> np.ndarray:
    """Per-vertex Bayes ratios p(A & E)/p(E) for every event A: shape (k, 2^n)."""
    credal.space.check_mask(event)
    probs = credal.all_event_probabilities()
    pe = probs[:, event]
    if np.any(pe <= tol):
        worst = float(pe.min())
        raise ZeroConditioningMassError(
            f"a vertex assigns probability {worst!r} <= {tol} to event "
            f"{{{credal.space.event_key(event)}}}; conditional minima are ill-defined"
        )
    cols = np.arange(credal.space.n_events) & event
    return probs[:, cols] / pe[:, None]


def min_conditional(credal: CredalSet, a: int, event: int, tol: float | None = None) -> float:
    """Smallest conditional probability of A given E over the generating vertices.

    The minimised functional is linear-fractional, so its minimum over the
    hull is attained at a vertex; scanning the vertex list is exact.
    """
    tol = resolve_tol(tol)
    credal.space.check_mask(a)
    return float(_conditional_ratios(credal, event, tol)[:, a].min())


def conditional_envelope(credal: CredalSet, event: int, tol: float | None = None) -> np.ndarray:
    """min_conditional for every event A at once, as a dense (2^n,) array."""
    tol = resolve_tol(tol)
    return _conditional_ratios(credal, event, tol).min(axis=0)
