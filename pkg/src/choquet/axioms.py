"""Executable consistency axioms over conditional binary acts.

A conditional binary act pays ``high`` on a sub-event A of the conditioning
event E, ``low`` on the rest of E, and an arbitrary outside value on E's
complement. For an oracle pairing a convex prior with an updating rule, the
three checks below probe whether the rule's conditional certainty
equivalents cohere with the prior's unconditional Choquet values:

* ``check_cr_uo``: replacing the act outside E by its own conditional
  certainty equivalent x can only undershoot x, and replacing it by any
  sufficiently good reference level can only overshoot the matching step
  act.
* ``check_dc_cs``: two acts that are unconditionally indifferent both at
  the certainty equivalent and at sufficiently good reference levels must
  share their conditional certainty equivalent.
* ``check_ec``: the same coherence across two different conditioning
  events, with reference levels matched through the unconditional step-act
  equation.

``mixing_alpha`` extracts, from a single act, the weight at which the
undershoot and overshoot gaps balance; for an interpolation-rule oracle it
is the rule's weight wherever determinate, which is what makes the weight
identifiable from preferences.

All margins are signed: a check passes when every margin is at least
``-tol_ax``. The default tolerance is looser than the numeric one because
each margin composes several Choquet evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .capacity import Act, Capacity, choquet_integral
from .credal import _require_nonnull
from .errors import (
    GridViolationError,
    NoMatchingPairError,
    NotRationalizableError,
)
from .tolerance import default_tol, resolve_tol
from .updating import UpdateRule, _family_parts, _ratio_with_degenerate, erml_update

AXIOM_TOL = 1e-7

_PAIR_TOL = 1e-12


@dataclass(frozen=True)
class ConditionalBinaryAct:
    """Pays ``high`` on ``inside``, ``low`` on the rest of ``event``; outside value supplied later."""

    event: int
    inside: int
    high: float
    low: float

    def __post_init__(self):
        if self.inside & ~self.event:
            raise ValueError(
                f"payoff event {self.inside:#x} is not a subset of the conditioning event {self.event:#x}"
            )
        if not (np.isfinite(self.high) and np.isfinite(self.low)):
            raise ValueError("act payoffs must be finite")
        if self.high < self.low:
            raise ValueError(f"high payoff {self.high!r} below low payoff {self.low!r}")

    def max_inside(self) -> float:
        """Largest payoff the act takes on the conditioning event."""
        return self.high if self.inside else self.low

    def to_json_dict(self, space) -> dict:
        return {
            "event": space.event_key(self.event),
            "inside": space.event_key(self.inside),
            "high": self.high,
            "low": self.low,
        }


class PreferenceOracle:
    """A prior capacity plus an updating rule.

    Unconditional acts are priced by the prior's Choquet integral;
    conditional binary acts by the rule-updated capacity. ``rule`` is either
    an :class:`UpdateRule` or any callable ``(prior, event) -> Capacity``,
    which is how deliberately inconsistent rules are plugged in for
    falsification tests. Conditional capacities are memoized per event.
    """

    def __init__(self, prior: Capacity, rule):
        self.prior = prior
        self.rule = rule
        self._conditionals: dict[int, Capacity] = {}

    def conditional_capacity(self, event: int) -> Capacity:
        cached = self._conditionals.get(event)
        if cached is None:
            if isinstance(self.rule, UpdateRule):
                cached = self.rule.apply(self.prior, event)
            else:
                cached = self.rule(self.prior, event)
            self._conditionals[event] = cached
        return cached

    def utility(self, act: Act) -> float:
        return choquet_integral(self.prior, act)

    def conditional_value(self, event: int, a: int) -> float:
        return float(self.conditional_capacity(event).values[a])


def composite_act(space, f: ConditionalBinaryAct, outside: float) -> Act:
    """The act equal to f on its conditioning event and to ``outside`` elsewhere."""
    utils = np.empty(space.n)
    for i in range(space.n):
        bit = 1 << i
        if bit & f.inside:
            utils[i] = f.high
        elif bit & f.event:
            utils[i] = f.low
        else:
            utils[i] = outside
    return Act(space, utils)


def step_act(space, event: int, on_event: float, outside: float) -> Act:
    """The act paying ``on_event`` on the event and ``outside`` off it."""
    utils = np.empty(space.n)
    for i in range(space.n):
        utils[i] = on_event if (1 << i) & event else outside
    return Act(space, utils)


def default_grid(floor: float) -> tuple[float, float, float]:
    """Reference levels above the act maximum: two points suffice, a third adds redundancy."""
    return (floor, floor + 0.5, floor + 1.0)


def _check_grid(grid, floor: float, label: str) -> tuple[float, ...]:
    grid = tuple(float(x) for x in grid)
    if not grid:
        raise GridViolationError("reference grid is empty")
    for xs in grid:
        if xs < floor - _PAIR_TOL:
            raise GridViolationError(
                f"reference level {xs!r} is below the act maximum {floor!r} on {label}"
            )
    return grid


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    passed: bool
    vacuous: bool
    margins: tuple[float, ...]
    worst_margin: float
    detail: dict

    def to_json_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "passed": self.passed,
            "vacuous": self.vacuous,
            "margins": list(self.margins),
            "worst_margin": self.worst_margin,
            "detail": self.detail,
        }


def conditional_ce(oracle: PreferenceOracle, event: int, f: ConditionalBinaryAct, tol: float | None = None) -> float:
    """Certainty equivalent of the act under the conditional preference.

    Equals high * v_E(A) + low * (1 - v_E(A)) for the rule's conditional
    capacity, which is the conditional Choquet value of a binary act.
    """
    tol = resolve_tol(tol)
    if f.event != event:
        raise ValueError(f"act conditions on {f.event:#x}, expected {event:#x}")
    _require_nonnull(oracle.prior, event, tol)
    weight = oracle.conditional_value(event, f.inside)
    return f.high * weight + f.low * (1.0 - weight)


def check_cr_uo(
    oracle: PreferenceOracle,
    event: int,
    f: ConditionalBinaryAct,
    xstar_grid,
    tol_ax: float = AXIOM_TOL,
) -> AxiomReport:
    """Undershoot at the certainty equivalent, overshoot at good reference levels."""
    space = oracle.prior.space
    grid = _check_grid(xstar_grid, f.max_inside(), "the conditioning event")
    x = conditional_ce(oracle, event, f)
    under = x - oracle.utility(composite_act(space, f, x))
    margins = [under]
    for xs in grid:
        over = oracle.utility(composite_act(space, f, xs)) - oracle.utility(step_act(space, event, x, xs))
        margins.append(over)
    margins = tuple(margins)
    worst = min(margins)
    return AxiomReport(
        axiom="cr-uo",
        passed=worst >= -tol_ax,
        vacuous=False,
        margins=margins,
        worst_margin=worst,
        detail={
            "event": space.event_key(event),
            "act": f.to_json_dict(space),
            "certainty_equivalent": x,
            "grid": list(grid),
        },
    )


def mixing_alpha(
    oracle: PreferenceOracle,
    event: int,
    f: ConditionalBinaryAct,
    xstar_grid=None,
    tol_ax: float = AXIOM_TOL,
) -> float | None:
    """Weight balancing the overshoot gap against the undershoot gap.

    Solved at two reference levels; the overshoot gap must agree across
    them because the outside contribution cancels from both sides. Returns
    None when both gaps vanish (the weight is unidentified there).
    """
    space = oracle.prior.space
    if xstar_grid is None:
        xstar_grid = default_grid(f.max_inside())
    grid = _check_grid(xstar_grid, f.max_inside(), "the conditioning event")
    if len(grid) < 2:
        raise ValueError("need at least two reference levels to confirm independence")
    x = conditional_ce(oracle, event, f)
    undershoot = x - oracle.utility(composite_act(space, f, x))
    overshoots = [
        oracle.utility(composite_act(space, f, xs)) - oracle.utility(step_act(space, event, x, xs))
        for xs in grid[:2]
    ]
    if abs(overshoots[0] - overshoots[1]) > tol_ax:
        raise NotRationalizableError(
            f"overshoot gap depends on the reference level "
            f"({overshoots[0]!r} vs {overshoots[1]!r}); no single weight exists"
        )
    overshoot = overshoots[0]
    if abs(overshoot) <= tol_ax and abs(undershoot) <= tol_ax:
        return None
    denominator = overshoot + undershoot
    if abs(denominator) <= _PAIR_TOL:
        return None
    return undershoot / denominator


def check_dc_cs(
    oracle: PreferenceOracle,
    event: int,
    f: ConditionalBinaryAct,
    g: ConditionalBinaryAct,
    xstar_grid,
    tol_ax: float = AXIOM_TOL,
) -> AxiomReport:
    """Unconditional indifference at the equivalent and at good levels forces conditional indifference.

    The reference floor uses the maximum of both acts (the statement only
    bounds the grid by the first act; using both keeps every closed-form
    evaluation in its valid range and only shrinks the probed set).
    """
    space = oracle.prior.space
    if g.event != event or f.event != event:
        raise ValueError("both acts must condition on the same event")
    floor = max(f.max_inside(), g.max_inside())
    grid = _check_grid(xstar_grid, floor, "the conditioning event")
    x = conditional_ce(oracle, event, g)
    gaps = [oracle.utility(composite_act(space, f, x)) - oracle.utility(composite_act(space, g, x))]
    for xs in grid:
        gaps.append(
            oracle.utility(composite_act(space, f, xs)) - oracle.utility(composite_act(space, g, xs))
        )
    premises_hold = all(abs(gap) <= tol_ax for gap in gaps)
    detail = {
        "event": space.event_key(event),
        "f": f.to_json_dict(space),
        "g": g.to_json_dict(space),
        "certainty_equivalent_g": x,
        "grid": list(grid),
        "premise_gaps": gaps,
    }
    if not premises_hold:
        return AxiomReport("dc-cs", True, True, (), 0.0, detail)
    gap = conditional_ce(oracle, event, f) - x
    detail["conclusion_gap"] = gap
    margin = -abs(gap)
    return AxiomReport("dc-cs", margin >= -tol_ax, False, (margin,), margin, detail)


def _matched_reference(prior: Capacity, e1: int, e2: int, x: float, x1s: float, g_floor: float) -> float:
    """Solve the step-act indifference x_E1 x1* ~ x_E2 x2* for x2*."""
    nu1c = float(prior.values[prior.space.complement(e1)])
    nu2c = float(prior.values[prior.space.complement(e2)])
    if nu2c > _PAIR_TOL:
        x2s = (x * (nu2c - nu1c) + x1s * nu1c) / nu2c
        if x2s < g_floor - _PAIR_TOL:
            raise NoMatchingPairError(
                f"matched reference {x2s!r} falls below the partner act's maximum {g_floor!r}"
            )
        return x2s
    if nu1c > _PAIR_TOL:
        if abs(x1s - x) > _PAIR_TOL:
            raise NoMatchingPairError(
                "the second event's complement is null, so only the equivalent itself can be matched"
            )
        return max(x1s, g_floor)
    # Both complements null: the outside value never matters, any level works.
    return max(x1s, g_floor)


def check_ec(
    oracle: PreferenceOracle,
    e1: int,
    e2: int,
    f: ConditionalBinaryAct,
    g: ConditionalBinaryAct,
    xstar_grid,
    tol_ax: float = AXIOM_TOL,
) -> AxiomReport:
    """Cross-event coherence: matched indifference pins the equivalent across events.

    f conditions on the first event, g on the second; the grid supplies
    reference levels for f, each matched to the second event through the
    unconditional step-act equation.
    """
    space = oracle.prior.space
    if f.event != e1 or g.event != e2:
        raise ValueError("acts must condition on their respective events")
    grid = _check_grid(xstar_grid, f.max_inside(), "the first event")
    x = conditional_ce(oracle, e2, g)
    gaps = [oracle.utility(composite_act(space, f, x)) - oracle.utility(composite_act(space, g, x))]
    pairs = []
    for x1s in grid:
        x2s = _matched_reference(oracle.prior, e1, e2, x, x1s, g.max_inside())
        pairs.append((x1s, x2s))
        gaps.append(
            oracle.utility(composite_act(space, f, x1s)) - oracle.utility(composite_act(space, g, x2s))
        )
    premises_hold = all(abs(gap) <= tol_ax for gap in gaps)
    detail = {
        "event_1": space.event_key(e1),
        "event_2": space.event_key(e2),
        "f": f.to_json_dict(space),
        "g": g.to_json_dict(space),
        "certainty_equivalent_g": x,
        "matched_pairs": pairs,
        "premise_gaps": gaps,
    }
    if not premises_hold:
        return AxiomReport("ec", True, True, (), 0.0, detail)
    gap = conditional_ce(oracle, e1, f) - x
    detail["conclusion_gap"] = gap
    margin = -abs(gap)
    return AxiomReport("ec", margin >= -tol_ax, False, (margin,), margin, detail)


# ---------------------------------------------------------------------------
# Instance sampling and the sampled suite
# ---------------------------------------------------------------------------


def _submasks(event: int) -> list[int]:
    bits = [1 << i for i in range(event.bit_length()) if event >> i & 1]
    out = [0]
    for b in bits:
        out += [m | b for m in out]
    return sorted(out)


def _pick_event(rng, cap: Capacity, tol: float, min_mass: float, proper: bool = True) -> int | None:
    top = cap.space.n_events - (1 if proper else 0)
    candidates = [e for e in range(1, top) if cap.values[e] >= min_mass]
    if not candidates:
        candidates = [e for e in range(1, top) if cap.values[e] > tol]
    if not candidates:
        if proper:
            return cap.space.full_mask
        return None
    return int(candidates[rng.integers(len(candidates))])


def _random_act(rng, event: int) -> ConditionalBinaryAct:
    inner = [m for m in _submasks(event) if m]
    inside = int(inner[rng.integers(len(inner))])
    low = float(rng.uniform(0.0, 1.0))
    high = low + float(rng.uniform(0.1, 2.0))
    return ConditionalBinaryAct(event, inside, high, low)


def sample_cr_uo_instance(rng, oracle: PreferenceOracle, tol: float, min_mass: float = 0.05):
    event = _pick_event(rng, oracle.prior, tol, min_mass)
    if event is None:
        return None
    f = _random_act(rng, event)
    return event, f, default_grid(f.max_inside())


def _solve_partner(
    oracle: PreferenceOracle,
    g: ConditionalBinaryAct,
    x: float,
    a_f: int,
    e1: int,
    r2: float,
) -> ConditionalBinaryAct | None:
    """Solve for the partner act's payoffs so both indifference premises hold.

    The premises are linear in (high, low) once the payoff ordering
    high >= x >= low is imposed; candidates breaking that ordering, or with
    a near-singular system, are rejected so the caller can resample.
    """
    prior = oracle.prior
    v = prior.values
    ec1 = prior.space.complement(e1)
    p_coef = float(v[a_f | ec1] - v[ec1])
    q_coef = float(1.0 - v[a_f | ec1])
    n_a = float(v[a_f])
    u_gx = oracle.utility(composite_act(prior.space, g, x))
    r1 = u_gx - x * (float(v[a_f | ec1]) - n_a)
    det = p_coef - n_a
    if abs(det) < 1e-9:
        return None
    high = (r2 - r1) / det
    low = (r2 - high * p_coef) / q_coef if q_coef > 1e-9 else x
    if not (high >= x - _PAIR_TOL and x >= low - _PAIR_TOL):
        return None
    if abs(high) > 100 or abs(low) > 100:
        return None
    return ConditionalBinaryAct(e1, a_f, high, min(low, high))


def sample_dc_cs_instance(rng, oracle: PreferenceOracle, tol: float, min_mass: float = 0.05, max_tries: int = 60):
    """Construct a premise-satisfying act pair; random sampling alone would almost never hit one."""
    prior = oracle.prior
    v = prior.values
    for _ in range(max_tries):
        event = _pick_event(rng, prior, tol, min_mass)
        if event is None:
            return None
        g = _random_act(rng, event)
        inner = [m for m in _submasks(event) if m]
        a_f = int(inner[rng.integers(len(inner))])
        x = conditional_ce(oracle, event, g)
        ec = prior.space.complement(event)
        r2 = g.high * float(v[g.inside | ec] - v[ec]) + g.low * float(1.0 - v[g.inside | ec])
        f = _solve_partner(oracle, g, x, a_f, event, r2)
        if f is None:
            continue
        grid = default_grid(max(f.max_inside(), g.max_inside()))
        if _premises_verify_dc_cs(oracle, event, f, g, x, grid):
            return event, f, g, grid
    return None


def _premises_verify_dc_cs(oracle, event, f, g, x, grid) -> bool:
    space = oracle.prior.space
    gaps = [oracle.utility(composite_act(space, f, x)) - oracle.utility(composite_act(space, g, x))]
    gaps += [
        oracle.utility(composite_act(space, f, xs)) - oracle.utility(composite_act(space, g, xs))
        for xs in grid
    ]
    return max(abs(gap) for gap in gaps) <= 1e-9


def sample_ec_instance(rng, oracle: PreferenceOracle, tol: float, min_mass: float = 0.05, max_tries: int = 60):
    """Construct a premise-satisfying cross-event instance with matched reference levels."""
    prior = oracle.prior
    v = prior.values
    for _ in range(max_tries):
        e1 = _pick_event(rng, prior, tol, min_mass)
        e2 = _pick_event(rng, prior, tol, min_mass)
        if e1 is None or e2 is None:
            return None
        g = _random_act(rng, e2)
        inner = [m for m in _submasks(e1) if m]
        a_f = int(inner[rng.integers(len(inner))])
        x = conditional_ce(oracle, e2, g)
        ec2 = prior.space.complement(e2)
        nu1c = float(v[prior.space.complement(e1)])
        nu2c = float(v[ec2])
        r2 = (
            g.high * float(v[g.inside | ec2] - v[ec2])
            + g.low * float(1.0 - v[g.inside | ec2])
            + x * (nu2c - nu1c)
        )
        f = _solve_partner(oracle, g, x, a_f, e1, r2)
        if f is None:
            continue
        base = f.max_inside()
        if nu2c > _PAIR_TOL and nu1c > _PAIR_TOL:
            # Raise the floor until every matched level clears the partner's maximum.
            needed = (g.max_inside() * nu2c - x * (nu2c - nu1c)) / nu1c
            base = max(base, needed)
        grid = default_grid(base)
        try:
            report = check_ec(oracle, e1, e2, f, g, grid, tol_ax=1e-9)
        except (NoMatchingPairError, GridViolationError):
            continue
        if report.vacuous:
            continue
        return e1, e2, f, g, grid
    return None


@dataclass(frozen=True)
class AxiomStats:
    axiom: str
    requested: int
    checked: int
    passed: int
    vacuous: int
    worst_margin: float
    failures: tuple[dict, ...]

    @property
    def all_passed(self) -> bool:
        return self.passed == self.checked

    def to_json_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "requested": self.requested,
            "checked": self.checked,
            "passed": self.passed,
            "vacuous": self.vacuous,
            "worst_margin": self.worst_margin,
            "failures": list(self.failures),
        }


@dataclass(frozen=True)
class SuiteReport:
    stats: tuple[AxiomStats, ...]
    seed: int
    tol_ax: float

    @property
    def all_passed(self) -> bool:
        return all(s.all_passed for s in self.stats)

    def to_json_dict(self) -> dict:
        return {
            "all_passed": self.all_passed,
            "seed": self.seed,
            "tolerance": self.tol_ax,
            "axioms": [s.to_json_dict() for s in self.stats],
        }


def run_axiom_suite(
    oracle: PreferenceOracle,
    *,
    seed: int,
    samples: int = 500,
    axioms: tuple[str, ...] = ("cr-uo", "dc-cs", "ec"),
    tol_ax: float = AXIOM_TOL,
    min_event_mass: float = 0.05,
    max_failures_kept: int = 10,
) -> SuiteReport:
    """Run the sampled/constructed instance suite against one oracle.

    Identical seeds give identical reports. Universally quantified axioms
    are probed by stratified random instances; the premise-conditional ones
    use constructive premise satisfaction, so vacuous checks only appear
    when construction is impossible for the prior at hand.
    """
    tol = default_tol()
    stats = []
    for axiom in axioms:
        rng = np.random.default_rng([seed, _axiom_tag(axiom)])
        checked = passed = vacuous = 0
        worst = np.inf
        failures: list[dict] = []
        attempts = 0
        budget = samples * 40
        while checked < samples and attempts < budget:
            attempts += 1
            report = _run_one(rng, oracle, axiom, tol, tol_ax, min_event_mass)
            if report is None:
                continue
            if report.vacuous:
                vacuous += 1
                continue
            checked += 1
            worst = min(worst, report.worst_margin)
            if report.passed:
                passed += 1
            elif len(failures) < max_failures_kept:
                failures.append(report.to_json_dict())
        stats.append(
            AxiomStats(
                axiom=axiom,
                requested=samples,
                checked=checked,
                passed=passed,
                vacuous=vacuous,
                worst_margin=float(worst) if checked else 0.0,
                failures=tuple(failures),
            )
        )
    return SuiteReport(tuple(stats), seed=seed, tol_ax=tol_ax)


def _axiom_tag(axiom: str) -> int:
    try:
        return ("cr-uo", "dc-cs", "ec").index(axiom)
    except ValueError:
        raise ValueError(f"unknown axiom {axiom!r}") from None


def _run_one(rng, oracle, axiom, tol, tol_ax, min_mass) -> AxiomReport | None:
    if axiom == "cr-uo":
        inst = sample_cr_uo_instance(rng, oracle, tol, min_mass)
        if inst is None:
            return None
        event, f, grid = inst
        return check_cr_uo(oracle, event, f, grid, tol_ax)
    if axiom == "dc-cs":
        inst = sample_dc_cs_instance(rng, oracle, tol, min_mass)
        if inst is None:
            return None
        event, f, g, grid = inst
        return check_dc_cs(oracle, event, f, g, grid, tol_ax)
    inst = sample_ec_instance(rng, oracle, tol, min_mass)
    if inst is None:
        return None
    e1, e2, f, g, grid = inst
    try:
        return check_ec(oracle, e1, e2, f, g, grid, tol_ax)
    except NoMatchingPairError:
        return None


# ---------------------------------------------------------------------------
# Deliberately inconsistent rules, used to show the checks have teeth
# ---------------------------------------------------------------------------


def per_event_alpha_rule(alpha_by_event: dict[int, float], default_alpha: float) -> Callable:
    """Updater whose mixing weight changes with the conditioning event."""

    def rule(prior: Capacity, event: int) -> Capacity:
        return erml_update(prior, event, alpha_by_event.get(event, default_alpha))

    return rule


def per_act_alpha_rule(weight_of_event: Callable[[int], float]) -> Callable:
    """Updater whose mixing weight changes with the evaluated event inside one conditional."""

    def rule(prior: Capacity, event: int) -> Capacity:
        _require_nonnull(prior, event, default_tol())
        gain, inside, slack, e_weight = _family_parts(prior, event)
        alphas = np.array([float(weight_of_event(a)) for a in range(prior.space.n_events)])
        if alphas.min() < 0.0 or alphas.max() > 1.0:
            raise ValueError("event weights must stay in [0, 1]")
        num = alphas * gain + (1.0 - alphas) * inside
        den = alphas * (1.0 - e_weight) + (1.0 - alphas) * slack
        values, _ = _ratio_with_degenerate(num, den)
        values[0] = 0.0
        values[-1] = 1.0
        return Capacity(prior.space, values)

    return rule


def perturbed_rule(base_alpha: float, bump_inside: int, delta: float = 0.05) -> Callable:
    """Updater that inflates one conditional value, then restores monotonicity.

    ``bump_inside`` selects the support class (all events meeting the
    conditioning event in ``bump_inside & event``) whose value is raised.
    """

    def rule(prior: Capacity, event: int) -> Capacity:
        updated = erml_update(prior, event, base_alpha)
        values = np.array(updated.values)
        target = bump_inside & event
        idx = np.arange(prior.space.n_events)
        values[(idx & event) == target] += delta
        for i in range(prior.space.n):
            bit = 1 << i
            lo = idx[(idx & bit) == 0]
            values[lo | bit] = np.maximum(values[lo | bit], values[lo])
        values = np.clip(values, 0.0, 1.0)
        values[0] = 0.0
        values[-1] = 1.0
        return Capacity(prior.space, values)

    return rule
