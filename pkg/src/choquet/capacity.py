"""Capacities on finite state spaces.

Events are n-bit masks over the states of a :class:`StateSpace`, so a set
function lives in one dense array of ``2**n`` values indexed by mask. This
module holds the representation plus the basic machinery: validation,
convexity (supermodularity) testing, the mass/zeta transform pair, and
Choquet integration. Everything is a pure function over immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import InputError, MassSumError, SpaceMismatchError
from .tolerance import resolve_tol

MAX_STATES = 16

# Above this size the all-pairs supermodularity check would need a
# (2^n x 2^n) scratch matrix, so we fall back to the equivalent local
# exchange condition (see is_convex).
_PAIRWISE_CONVEXITY_LIMIT = 10


@dataclass(frozen=True)
class StateSpace:
    """Ordered finite set of labeled states; events are bitmasks over positions."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if not 1 <= len(self.labels) <= MAX_STATES:
            raise ValueError(f"need between 1 and {MAX_STATES} states, got {len(self.labels)}")
        if any(not isinstance(lab, str) or not lab for lab in self.labels):
            raise ValueError("state labels must be non-empty strings")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate state labels in {self.labels!r}")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def n_events(self) -> int:
        return 1 << self.n

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def complement(self, mask: int) -> int:
        return self.full_mask & ~self.check_mask(mask)

    def check_mask(self, mask: int) -> int:
        mask = int(mask)
        if not 0 <= mask <= self.full_mask:
            raise ValueError(f"event mask {mask:#x} has bits outside positions 0..{self.n - 1}")
        return mask

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            mask |= 1 << self._index(name)
        return mask

    def members(self, mask: int) -> tuple[str, ...]:
        mask = self.check_mask(mask)
        return tuple(lab for i, lab in enumerate(self.labels) if mask >> i & 1)

    def event_key(self, mask: int) -> str:
        """Encode an event as '|'-joined labels; the empty event is ''."""
        return "|".join(self.members(mask))

    def parse_event(self, key: str) -> int:
        """Decode a '|'-joined label string into an event mask."""
        if key == "":
            return 0
        mask = 0
        for token in key.split("|"):
            mask |= 1 << self._index(token)
        return mask

    def _index(self, name: str) -> int:
        try:
            return self.labels.index(name)
        except ValueError:
            raise InputError(f"unknown state label {name!r} (states: {', '.join(self.labels)})") from None


@dataclass(frozen=True, eq=False)
class Capacity:
    """A set function on all ``2**n`` events, normalised to 0 at the empty set and 1 at the full one.

    ``values[mask]`` is the weight of the event identified by ``mask``. The
    array is copied on construction and frozen; ``meta`` carries optional
    bookkeeping (e.g. degenerate events hit by an updating rule) and takes
    no part in any numeric contract.
    """

    space: StateSpace
    values: np.ndarray
    meta: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64)
        if arr.shape != (self.space.n_events,):
            raise ValueError(
                f"capacity needs {self.space.n_events} values for {self.space.n} states, got shape {arr.shape}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def value(self, mask: int) -> float:
        return float(self.values[self.space.check_mask(mask)])


@dataclass(frozen=True)
class MoebiusMasses:
    """Sparse point masses on events; the inclusion-exclusion inverse of a capacity."""

    space: StateSpace
    masses: dict[int, float]

    def __post_init__(self):
        cleaned = {self.space.check_mask(m): float(v) for m, v in self.masses.items()}
        object.__setattr__(self, "masses", cleaned)

    def total(self) -> float:
        return float(sum(self.masses.values()))


@dataclass(frozen=True, eq=False)
class Act:
    """A utility-valued simple act: one real payoff per state."""

    space: StateSpace
    utils: np.ndarray

    def __post_init__(self):
        arr = np.array(self.utils, dtype=np.float64)
        if arr.shape != (self.space.n,):
            raise ValueError(f"act needs {self.space.n} utilities, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("act utilities must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "utils", arr)


@dataclass(frozen=True)
class Violation:
    kind: str  # "normalization" | "range" | "monotonicity"
    events: tuple[int, ...]
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self, space: StateSpace) -> dict:
        return {
            "valid": self.ok,
            "violations": [
                {
                    "kind": v.kind,
                    "events": [space.event_key(e) for e in v.events],
                    "message": v.message,
                }
                for v in self.violations
            ],
        }


@dataclass(frozen=True)
class ConvexityCheck:
    convex: bool
    violating_pair: tuple[int, int] | None = None
    margin: float = 0.0

    def __bool__(self) -> bool:
        return self.convex


def _require_same_space(a: StateSpace, b: StateSpace) -> None:
    if a.labels != b.labels:
        raise SpaceMismatchError(f"state spaces differ: {a.labels!r} vs {b.labels!r}")


def validate_capacity(c: Capacity, tol: float | None = None) -> ValidationReport:
    """Check boundary normalisation, the [0, 1] range, and monotonicity.

    Report-style: collects every violation instead of raising. Boundary
    values must hold exactly; range and monotonicity are checked within the
    tolerance. Monotonicity is verified on all covering pairs (A, A+state),
    which is equivalent to the full subset ordering.
    """
    tol = resolve_tol(tol)
    v = c.values
    space = c.space
    out: list[Violation] = []
    if v[0] != 0.0:
        out.append(Violation("normalization", (0,), f"value at the empty event is {v[0]!r}, expected exactly 0"))
    if v[-1] != 1.0:
        out.append(
            Violation(
                "normalization",
                (space.full_mask,),
                f"value at the full event is {v[-1]!r}, expected exactly 1",
            )
        )
    bad_range = np.flatnonzero(~((v >= -tol) & (v <= 1.0 + tol)))
    for mask in bad_range:
        out.append(Violation("range", (int(mask),), f"value {v[mask]!r} outside [0, 1]"))
    idx = np.arange(space.n_events)
    for i in range(space.n):
        bit = 1 << i
        lo = idx[(idx & bit) == 0]
        hi = lo | bit
        bad = np.flatnonzero(v[hi] < v[lo] - tol)
        for j in bad:
            a, b = int(lo[j]), int(hi[j])
            out.append(
                Violation(
                    "monotonicity",
                    (a, b),
                    f"value drops from {v[a]!r} at {{{space.event_key(a)}}} to {v[b]!r} at {{{space.event_key(b)}}}",
                )
            )
    return ValidationReport(tuple(out))


def is_convex(c: Capacity, tol: float | None = None) -> ConvexityCheck:
    """Test supermodularity: v(A|B) + v(A&B) >= v(A) + v(B) - tol for all pairs.

    For small spaces the check enumerates all pairs directly; above
    ``_PAIRWISE_CONVEXITY_LIMIT`` states it switches to the equivalent local
    exchange condition v(S+i+j) + v(S) >= v(S+i) + v(S+j). Either way the
    returned pair is a genuine violating (A, B) and is deterministic for a
    given capacity.
    """
    tol = resolve_tol(tol)
    v = c.values
    n = c.space.n
    if n <= _PAIRWISE_CONVEXITY_LIMIT:
        idx = np.arange(c.space.n_events)
        a = idx[:, None]
        b = idx[None, :]
        margin = v[a | b] + v[a & b] - v[a] - v[b]
        bad = margin < -tol
        if bad.any():
            where = np.argwhere(bad)[0]  # row-major: lexicographically first (A, B)
            pair = (int(where[0]), int(where[1]))
            return ConvexityCheck(False, pair, float(margin[bad].min()))
        return ConvexityCheck(True, None, float(margin.min()))
    worst = np.inf
    idx = np.arange(c.space.n_events)
    for i in range(n):
        for j in range(i + 1, n):
            bi, bj = 1 << i, 1 << j
            base = idx[(idx & (bi | bj)) == 0]
            margin = v[base | bi | bj] + v[base] - v[base | bi] - v[base | bj]
            bad = np.flatnonzero(margin < -tol)
            if bad.size:
                k = int(bad[0])
                return ConvexityCheck(False, (int(base[k] | bi), int(base[k] | bj)), float(margin[bad].min()))
            worst = min(worst, float(margin.min()))
    return ConvexityCheck(True, None, worst)


def _zeta_transform(masses: np.ndarray, n: int) -> np.ndarray:
    """Subset-sum transform: out[A] = sum of masses over subsets of A."""
    out = masses.copy()
    idx = np.arange(out.size)
    for i in range(n):
        bit = 1 << i
        hi = idx[(idx & bit) != 0]
        out[hi] += out[hi ^ bit]
    return out


def _moebius_transform(values: np.ndarray, n: int) -> np.ndarray:
    """Inverse of the subset-sum transform (same per-bit order, subtraction)."""
    out = values.copy()
    idx = np.arange(out.size)
    for i in range(n):
        bit = 1 << i
        hi = idx[(idx & bit) != 0]
        out[hi] -= out[hi ^ bit]
    return out


def from_moebius(m: MoebiusMasses, tol: float | None = None) -> Capacity:
    """Build the capacity whose value at A is the total mass of subsets of A.

    Raises MassSumError when the masses do not total 1 within the tolerance
    or when the empty event carries mass. Boundary values are snapped to
    exact 0 and 1 afterwards.
    """
    tol = resolve_tol(tol)
    space = m.space
    dense = np.zeros(space.n_events)
    for mask, mass in m.masses.items():
        dense[mask] = mass
    total = dense.sum()
    if abs(total - 1.0) > tol:
        raise MassSumError(f"masses sum to {total!r}, expected 1 within {tol}")
    if abs(dense[0]) > tol:
        raise MassSumError(f"the empty event carries mass {dense[0]!r}")
    dense[0] = 0.0
    values = _zeta_transform(dense, space.n)
    values[0] = 0.0
    values[-1] = 1.0
    return Capacity(space, values)


def to_moebius(c: Capacity) -> MoebiusMasses:
    """Recover the point masses of a capacity (sparse: exact zeros dropped)."""
    masses = _moebius_transform(np.asarray(c.values), c.space.n)
    sparse = {int(mask): float(val) for mask, val in enumerate(masses) if val != 0.0}
    return MoebiusMasses(c.space, sparse)


def choquet_integral(c: Capacity, f: Act) -> float:
    """Integrate an act against a capacity via descending level sets.

    States are ranked by payoff, ties broken by state index (the value is
    tie-invariant); the integral telescopes as
    ``sum_i u_(i) * (v(top i states) - v(top i-1 states))``, which reduces
    to the ordinary expectation for additive capacities and to the constant
    for constant acts.
    """
    _require_same_space(c.space, f.space)
    order = np.argsort(-f.utils, kind="stable")
    total = 0.0
    prev = 0.0
    mask = 0
    values = c.values
    utils = f.utils
    for s in order:
        mask |= 1 << int(s)
        cur = values[mask]
        total += utils[s] * (cur - prev)
        prev = cur
    return float(total)
