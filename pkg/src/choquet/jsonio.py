"""JSON formats for capacities and credal sets.

Capacity files: ``{"states": [...], "form": "explicit"|"moebius",
"values": {"s1|s2": 0.4, ...}}`` with event keys given by '|'-joined state
labels and '' denoting the empty event. Explicit form lists all ``2**n``
events; moebius form lists only nonzero point masses. Writers emit events
in mask order; readers accept any order and ignore unknown top-level keys.

Credal files: ``{"states": [...], "vertices": [[...], ...]}`` with vertices
in the set's canonical (lexicographic) order.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .capacity import Capacity, MoebiusMasses, StateSpace, from_moebius, to_moebius
from .credal import CredalSet
from .errors import ChoquetError, InputError

FORMS = ("explicit", "moebius")


def _no_duplicate_keys(pairs):
    seen = set()
    for key, _ in pairs:
        if key in seen:
            raise InputError(f"duplicate key {key!r} in JSON object")
        seen.add(key)
    return dict(pairs)


def loads_strict(text: str) -> dict:
    try:
        data = json.loads(text, object_pairs_hook=_no_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError(f"expected a JSON object at the top level, got {type(data).__name__}")
    return data


def _parse_states(data: dict) -> StateSpace:
    states = data.get("states")
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise InputError("field 'states' must be a list of strings")
    try:
        return StateSpace(tuple(states))
    except ValueError as exc:
        raise InputError(f"field 'states': {exc}") from None


def _parse_number(key: str, raw) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise InputError(f"value for event {key!r} must be a number, got {raw!r}")
    return float(raw)


def capacity_to_dict(c: Capacity, form: str = "explicit") -> dict:
    if form not in FORMS:
        raise InputError(f"unknown form {form!r}, expected one of {FORMS}")
    space = c.space
    out: dict = {"states": list(space.labels), "form": form}
    if form == "explicit":
        out["values"] = {space.event_key(mask): float(c.values[mask]) for mask in range(space.n_events)}
    else:
        masses = to_moebius(c).masses
        out["values"] = {space.event_key(mask): masses[mask] for mask in sorted(masses)}
    if c.meta and "kind" in c.meta:
        out["generator"] = {k: c.meta[k] for k in sorted(c.meta)}
    return out


def capacity_from_dict(data: dict) -> Capacity:
    space = _parse_states(data)
    form = data.get("form")
    if form not in FORMS:
        raise InputError(f"field 'form' must be one of {FORMS}, got {form!r}")
    raw_values = data.get("values")
    if not isinstance(raw_values, dict):
        raise InputError("field 'values' must be an object mapping event keys to numbers")
    by_mask: dict[int, float] = {}
    for key, raw in raw_values.items():
        mask = space.parse_event(key)
        if mask in by_mask:
            raise InputError(f"event {key!r} repeats an earlier event key")
        by_mask[mask] = _parse_number(key, raw)
    if form == "explicit":
        missing = [m for m in range(space.n_events) if m not in by_mask]
        if missing:
            raise InputError(
                f"explicit form must list all {space.n_events} events; "
                f"missing {{{space.event_key(missing[0])}}} and {len(missing) - 1} more"
            )
        values = np.array([by_mask[m] for m in range(space.n_events)])
        return Capacity(space, values)
    try:
        return from_moebius(MoebiusMasses(space, by_mask))
    except ChoquetError as exc:
        raise InputError(f"moebius values rejected: {exc}") from None


def credal_to_dict(credal: CredalSet) -> dict:
    return {
        "states": list(credal.space.labels),
        "vertices": [[float(x) for x in row] for row in credal.vertices],
    }


def credal_from_dict(data: dict) -> CredalSet:
    space = _parse_states(data)
    vertices = data.get("vertices")
    if not isinstance(vertices, list) or not vertices:
        raise InputError("field 'vertices' must be a non-empty list of probability vectors")
    try:
        return CredalSet(space, np.array(vertices, dtype=np.float64))
    except ValueError as exc:
        raise InputError(f"vertices rejected: {exc}") from None


def load_capacity(path: str | Path) -> Capacity:
    return capacity_from_dict(loads_strict(Path(path).read_text(encoding="utf-8")))


def load_credal(path: str | Path) -> CredalSet:
    return credal_from_dict(loads_strict(Path(path).read_text(encoding="utf-8")))


def dumps(data: dict) -> str:
    return json.dumps(data, indent=2) + "\n"
