"""Seeded random instance generators for tests and the CLI.

All generators return valid convex capacities. Nonnegative random point
masses give total monotonicity, hence convexity; the contamination and
additive families are convex by direct inspection. Generator parameters are
stashed in the capacity's ``meta`` so emitted files can be replayed.
"""

from __future__ import annotations

import numpy as np

from .capacity import Capacity, MoebiusMasses, StateSpace, from_moebius
from .credal import event_probabilities
from .errors import InputError

KINDS = ("belief-function", "epsilon-contamination", "additive")

MAX_GENERATED_STATES = 8

# Additive instances mix a Dirichlet draw with the uniform distribution so
# every state keeps visible mass and all events stay nonnull.
_UNIFORM_SHARE = 0.1


def _default_space(n: int) -> StateSpace:
    return StateSpace(tuple(f"s{i + 1}" for i in range(n)))


def _as_rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def belief_function(n: int, seed_or_rng, density: float = 0.5, space: StateSpace | None = None) -> Capacity:
    """Random capacity from nonnegative point masses on a random event family."""
    rng = _as_rng(seed_or_rng)
    space = space or _default_space(n)
    events = np.arange(1, space.n_events)
    chosen = events[rng.random(events.size) < density]
    if chosen.size == 0:
        chosen = np.array([space.full_mask])
    weights = rng.dirichlet(np.ones(chosen.size))
    masses = MoebiusMasses(space, {int(e): float(w) for e, w in zip(chosen, weights)})
    return from_moebius(masses)


def epsilon_contamination(
    n: int, seed_or_rng, epsilon: float | None = None, space: StateSpace | None = None
) -> Capacity:
    """Shrink a random additive measure by epsilon everywhere except the full event."""
    rng = _as_rng(seed_or_rng)
    space = space or _default_space(n)
    if epsilon is None:
        epsilon = float(rng.uniform(0.05, 0.5))
    if not 0.0 <= epsilon <= 1.0:
        raise InputError(f"epsilon {epsilon!r} outside [0, 1]")
    p = _floored_dirichlet(rng, space.n)
    values = (1.0 - epsilon) * event_probabilities(p.reshape(1, -1), space.n)[0]
    values[0] = 0.0
    values[-1] = 1.0
    return Capacity(space, values, meta={"epsilon": epsilon})


def additive(n: int, seed_or_rng, space: StateSpace | None = None) -> Capacity:
    """Random probability measure, represented as a capacity."""
    rng = _as_rng(seed_or_rng)
    space = space or _default_space(n)
    p = _floored_dirichlet(rng, space.n)
    values = event_probabilities(p.reshape(1, -1), space.n)[0]
    values[0] = 0.0
    values[-1] = 1.0
    return Capacity(space, values)


def _floored_dirichlet(rng: np.random.Generator, n: int) -> np.ndarray:
    raw = rng.dirichlet(np.ones(n))
    return (1.0 - _UNIFORM_SHARE) * raw + _UNIFORM_SHARE / n


def generate(kind: str, n: int, seed: int, **params) -> Capacity:
    """CLI-facing entry point: seeded generation with replay metadata attached."""
    if kind not in KINDS:
        raise InputError(f"unknown generator kind {kind!r}, expected one of {KINDS}")
    if not 1 <= n <= MAX_GENERATED_STATES:
        raise InputError(f"generation supports 1..{MAX_GENERATED_STATES} states, got {n}")
    rng = np.random.default_rng(seed)
    if kind == "belief-function":
        cap = belief_function(n, rng, **params)
    elif kind == "epsilon-contamination":
        cap = epsilon_contamination(n, rng, **params)
    else:
        cap = additive(n, rng, **params)
    meta = dict(cap.meta or {})
    meta.update({"kind": kind, "n": n, "seed": int(seed)})
    return Capacity(cap.space, cap.values, meta=meta)
