"""Decide whether a credal set is the core of a convex capacity.

The criterion: along every maximal chain of events (one per state ordering)
some single member of the set must attain the maximal probability of every
event in the chain simultaneously. Checking maximal chains suffices because
any nested sequence of events extends to a maximal chain, and a common
maximizer for the extension also serves the subsequence.

A common maximizer can always be found among the generating vertices when
one exists at all: the per-event maximizer sets are faces of the hull, the
intersection of faces is a face, and a non-empty face of a polytope
contains an extreme point, which is one of the generating vertices. The
vertex scan below is therefore a complete decision procedure, not a
heuristic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .capacity import Capacity
from .credal import CredalSet
from .tolerance import resolve_tol


@dataclass(frozen=True)
class ChainWitness:
    """A maximal chain of nested events plus a common maximizer, when one exists."""

    chain: tuple[int, ...]
    witness: np.ndarray | None


@dataclass(frozen=True)
class ComonotonicityResult:
    comonotonic: bool
    failing: ChainWitness | None

    def __bool__(self) -> bool:
        return self.comonotonic


def _attainment(credal: CredalSet, tol: float) -> np.ndarray:
    """Boolean (2^n, k): entry [A, i] marks vertex i attaining max p(A) within tol."""
    probs = credal.all_event_probabilities()
    return (probs >= probs.max(axis=0)[None, :] - tol).T


def find_chain_witness(credal: CredalSet, chain: tuple[int, ...], tol: float | None = None) -> ChainWitness:
    """Search the vertex list for a member maximizing every event of a nested chain."""
    tol = resolve_tol(tol)
    for a, b in itertools.pairwise(chain):
        if a & ~b or a == b:
            raise ValueError(f"chain is not strictly nested at masks {a:#x}, {b:#x}")
    att = _attainment(credal, tol)
    common = np.ones(credal.k, dtype=bool)
    for mask in chain:
        credal.space.check_mask(mask)
        common &= att[mask]
    hits = np.flatnonzero(common)
    witness = credal.vertices[hits[0]] if hits.size else None
    return ChainWitness(tuple(chain), witness)


def is_comonotonic(credal: CredalSet, tol: float | None = None) -> ComonotonicityResult:
    """Check every maximal chain for a common likelihood maximizer.

    Chains are enumerated in lexicographic order of the underlying state
    ordering, so the reported failure is deterministic. The full event and
    the empty event are maximized by every member and are skipped.
    """
    tol = resolve_tol(tol)
    att = _attainment(credal, tol)
    n = credal.space.n
    for perm in itertools.permutations(range(n)):
        common = np.ones(credal.k, dtype=bool)
        mask = 0
        ok = True
        for s in perm[:-1]:
            mask |= 1 << s
            common &= att[mask]
            if not common.any():
                ok = False
                break
        if not ok:
            chain = []
            mask = 0
            for s in perm:
                mask |= 1 << s
                chain.append(mask)
            return ComonotonicityResult(False, ChainWitness(tuple(chain), None))
    return ComonotonicityResult(True, None)


def envelope_capacity(credal: CredalSet, tol: float | None = None) -> Capacity:
    """Lower envelope of the set: v(A) = min over vertices of p(A).

    When the set is comonotonic this is the convex capacity whose core is
    the set's hull, and enumerating that capacity's core recovers the hull.
    """
    resolve_tol(tol)
    env = credal.all_event_probabilities().min(axis=0)
    env = np.clip(env, 0.0, 1.0)
    env[0] = 0.0
    env[-1] = 1.0
    return Capacity(credal.space, env)
