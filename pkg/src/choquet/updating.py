"""Conditioning rules for convex capacities and their credal-set counterparts.

Three rules share one algebraic family: with conditioning event E,
complement weight e = v(E^c), and per-event shorthands

    g(A) = v(A | E^c) - e          (gain over the complement)
    h(A) = v(A & E)                (mass inside the event)
    s(A) = h(A) + 1 - v(A | E^c)   (inside mass plus outside slack)

the rules are

    ds(A)           = g(A) / (1 - e)
    fh(A)           = h(A) / s(A)
    erml(A, alpha)  = (alpha*g(A) + (1-alpha)*h(A)) / (alpha*(1-e) + (1-alpha)*s(A))

so ``erml`` interpolates the family with ds at alpha=1 and fh at alpha=0,
bit for bit. Every rule's output is supported on E since the formulas only
read v at A|E^c and A&E.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .capacity import Capacity, _require_same_space, is_convex
from .comonotonic import is_comonotonic
from .credal import (
    CredalSet,
    _require_nonnull,
    conditional_envelope,
    core_vertices,
    maximizer_set,
    mixture,
)
from .errors import (
    AlphaOutOfRangeError,
    NotRationalizableError,
    ZeroConditioningMassError,
)
from .tolerance import resolve_tol

RULE_KINDS = ("ds", "fh", "erml")

NONCOMONOTONIC_FLAG = "not-core-of-convex-capacity"


@dataclass(frozen=True)
class UpdateRule:
    """Tagged rule descriptor: 'ds', 'fh', or 'erml' with a mixing weight."""

    kind: str
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise ValueError(f"unknown rule kind {self.kind!r}, expected one of {RULE_KINDS}")
        if self.kind == "erml":
            if self.alpha is None:
                raise AlphaOutOfRangeError("rule 'erml' needs a mixing weight alpha in [0, 1]")
            if not 0.0 <= float(self.alpha) <= 1.0:
                raise AlphaOutOfRangeError(f"alpha {self.alpha!r} outside [0, 1]")
        elif self.alpha is not None:
            raise ValueError(f"rule {self.kind!r} takes no alpha")

    def apply(self, c: Capacity, event: int, tol: float | None = None) -> Capacity:
        if self.kind == "ds":
            return ds_update(c, event, tol)
        if self.kind == "fh":
            return fh_update(c, event, tol)
        return erml_update(c, event, float(self.alpha), tol)


def _family_parts(c: Capacity, event: int):
    idx = np.arange(c.space.n_events)
    ec = c.space.complement(event)
    e_weight = c.values[ec]
    union = c.values[idx | ec]
    gain = union - e_weight
    inside = c.values[idx & event]
    slack = inside + (1.0 - union)
    return gain, inside, slack, e_weight


def _ratio_with_degenerate(num: np.ndarray, den: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    # 0/0 only happens when the inside mass is zero while the complement-union
    # saturates; the limit from below is 0, which also keeps monotonicity.
    deg = den == 0.0
    out = np.divide(num, den, out=np.zeros_like(num), where=~deg)
    return out, tuple(int(m) for m in np.flatnonzero(deg))


def _finish(c: Capacity, values: np.ndarray, degenerate: tuple[int, ...]) -> Capacity:
    meta = {"degenerate_events": degenerate} if degenerate else None
    return Capacity(c.space, values, meta=meta)


def ds_update(c: Capacity, event: int, tol: float | None = None) -> Capacity:
    """Condition by renormalising the gain over the complement.

    Needs a nonnull event; for a convex capacity that makes the denominator
    1 - v(E^c) >= v(E) > 0. The result's core is exactly the set of core
    members maximizing the event's probability, conditioned on the event.
    """
    tol = resolve_tol(tol)
    _require_nonnull(c, event, tol)
    gain, _, _, e_weight = _family_parts(c, event)
    return _finish(c, gain / (1.0 - e_weight), ())


def fh_update(c: Capacity, event: int, tol: float | None = None) -> Capacity:
    """Condition by weighing inside mass against the outside slack.

    Equals the pointwise minimum of vertex-wise Bayes conditioning over the
    whole core when the capacity is convex. The degenerate 0/0 corner is
    defined as 0 and recorded in the result's meta.
    """
    tol = resolve_tol(tol)
    _require_nonnull(c, event, tol)
    _, inside, slack, _ = _family_parts(c, event)
    values, degenerate = _ratio_with_degenerate(inside, slack)
    return _finish(c, values, degenerate)


def erml_update(c: Capacity, event: int, alpha: float, tol: float | None = None) -> Capacity:
    """The one-parameter family interpolating ds_update (alpha=1) and fh_update (alpha=0).

    Computed by the closed form; the credal route (conditioning the
    alpha-mixture of likelihood maximizers with the full core and taking the
    lower envelope) reproduces it and serves as the test oracle.
    """
    tol = resolve_tol(tol)
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise AlphaOutOfRangeError(f"alpha {alpha!r} outside [0, 1]")
    _require_nonnull(c, event, tol)
    gain, inside, slack, e_weight = _family_parts(c, event)
    num = alpha * gain + (1.0 - alpha) * inside
    den = alpha * (1.0 - e_weight) + (1.0 - alpha) * slack
    values, degenerate = _ratio_with_degenerate(num, den)
    return _finish(c, values, degenerate)


def nu_prime(c: Capacity, event: int, alpha: float, tol: float | None = None) -> Capacity:
    """Auxiliary prior blending the maximizer face's envelope into the capacity.

    Closed form alpha*(v(A|E^c) + v(A&E^c) - v(E^c)) + (1-alpha)*v(A). The
    first summand is the lower envelope of the core members that maximize
    the event's probability, so the result satisfies, for all A:

      * value(A) = alpha * min over maximizers of p(A) + (1-alpha) * v(A);
      * value(A) = v(A) exactly whenever A contains E^c;
      * fh_update of it on the event equals erml_update(c, event, alpha).
    """
    tol = resolve_tol(tol)
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise AlphaOutOfRangeError(f"alpha {alpha!r} outside [0, 1]")
    _require_nonnull(c, event, tol)
    idx = np.arange(c.space.n_events)
    ec = c.space.complement(event)
    values = alpha * (c.values[idx | ec] + c.values[idx & ec] - c.values[ec]) + (1.0 - alpha) * c.values
    contains_ec = (idx & ec) == ec
    values[contains_ec] = c.values[contains_ec]
    values[0] = 0.0
    return Capacity(c.space, values)


def _bayes_rows(credal: CredalSet, event: int, tol: float) -> np.ndarray:
    probs = credal.all_event_probabilities()
    pe = probs[:, event]
    if np.any(pe <= tol):
        raise ZeroConditioningMassError(
            f"a vertex assigns probability {float(pe.min())!r} <= {tol} to event "
            f"{{{credal.space.event_key(event)}}}"
        )
    inside = _event_indicator_row(credal.space.n, event)
    return credal.vertices * inside[None, :] / pe[:, None]


def _event_indicator_row(n: int, event: int) -> np.ndarray:
    return ((event >> np.arange(n)) & 1).astype(np.float64)


def _flag_comonotonicity(result: CredalSet, tol: float, enabled: bool) -> CredalSet:
    if not enabled:
        return result
    if is_comonotonic(result, tol):
        return result
    return CredalSet(result.space, result.vertices, flags=result.flags + (NONCOMONOTONIC_FLAG,))


def credal_fb_update(
    credal: CredalSet, event: int, tol: float | None = None, *, flag_noncomonotonic: bool = True
) -> CredalSet:
    """Vertex-wise Bayes conditioning of every generating vector.

    The result keeps one posterior per vertex (duplicates collapse); it is
    flagged when the posterior set stops being the core of any convex
    capacity, which vertex-wise conditioning can do even for cores.
    """
    tol = resolve_tol(tol)
    credal.space.check_mask(event)
    posterior = CredalSet(credal.space, _bayes_rows(credal, event, tol))
    return _flag_comonotonicity(posterior, tol, flag_noncomonotonic)


def credal_ml_update(
    credal: CredalSet, event: int, tol: float | None = None, *, flag_noncomonotonic: bool = True
) -> CredalSet:
    """Bayes conditioning restricted to the vertices maximizing the event's probability."""
    tol = resolve_tol(tol)
    credal.space.check_mask(event)
    probs = credal.all_event_probabilities()[:, event]
    keep = probs >= probs.max() - tol
    top = CredalSet(credal.space, credal.vertices[keep])
    posterior = CredalSet(credal.space, _bayes_rows(top, event, tol))
    return _flag_comonotonicity(posterior, tol, flag_noncomonotonic)


def credal_rml_update(
    credal: CredalSet,
    event: int,
    alpha: float,
    tol: float | None = None,
    *,
    flag_noncomonotonic: bool = True,
) -> CredalSet:
    """Bayes conditioning of the alpha-mixture of event maximizers with the full set."""
    tol = resolve_tol(tol)
    credal.space.check_mask(event)
    probs = credal.all_event_probabilities()[:, event]
    keep = probs >= probs.max() - tol
    top = CredalSet(credal.space, credal.vertices[keep])
    mixed = mixture(top, credal, alpha, tol)
    posterior = CredalSet(credal.space, _bayes_rows(mixed, event, tol))
    return _flag_comonotonicity(posterior, tol, flag_noncomonotonic)


def infer_alpha(
    prior: Capacity,
    posterior: Capacity,
    event: int,
    tol: float | None = None,
    *,
    spread_tol: float = 1e-6,
) -> float | None:
    """Recover the mixing weight that turns the prior into the posterior on an event.

    At each event where the ds and fh conditionals disagree beyond the
    tolerance, the interpolation identity is linear in alpha and is solved
    directly; the per-event estimates are aggregated by median. Returns None
    (weight unidentified) when ds and fh coincide everywhere. Raises
    NotRationalizableError when the estimates spread beyond ``spread_tol``,
    when the median leaves [0, 1], or when the reconstructed conditional
    fails to match the posterior.
    """
    tol = resolve_tol(tol)
    _require_same_space(prior.space, posterior.space)
    _require_nonnull(prior, event, tol)
    idx = np.arange(prior.space.n_events)
    support_gap = np.abs(posterior.values - posterior.values[idx & event]).max()
    if support_gap > tol:
        raise NotRationalizableError(
            f"posterior is not supported on {{{prior.space.event_key(event)}}}"
            f" (off-event dependence up to {support_gap:.3e})"
        )
    ds = ds_update(prior, event, tol)
    fh = fh_update(prior, event, tol)
    informative = np.flatnonzero(np.abs(ds.values - fh.values) > tol)
    if informative.size == 0:
        gap = np.abs(posterior.values - ds.values).max()
        if gap > spread_tol:
            raise NotRationalizableError(
                f"the two endpoint rules coincide but the posterior differs by {gap:.3e}"
            )
        return None
    gain, inside, slack, e_weight = _family_parts(prior, event)
    t = posterior.values[informative]
    num_ds, num_fh = gain[informative], inside[informative]
    den_ds, den_fh = 1.0 - e_weight, slack[informative]
    denom = (num_ds - t * den_ds) - (num_fh - t * den_fh)
    numer = t * den_fh - num_fh
    usable = np.abs(denom) > 1e-12
    if not usable.any():
        raise NotRationalizableError("no event pins down the mixing weight despite ds != fh")
    estimates = numer[usable] / denom[usable]
    spread = float(estimates.max() - estimates.min())
    if spread > spread_tol:
        raise NotRationalizableError(
            f"per-event weight estimates spread by {spread:.3e} > {spread_tol}; "
            "the posterior is not in the interpolation family"
        )
    alpha = float(np.median(estimates))
    if not -tol <= alpha <= 1.0 + tol:
        raise NotRationalizableError(f"recovered weight {alpha!r} outside [0, 1]")
    alpha = min(1.0, max(0.0, alpha))
    residual = np.abs(erml_update(prior, event, alpha, tol).values - posterior.values).max()
    if residual > max(spread_tol, 10 * tol):
        raise NotRationalizableError(
            f"reconstructed conditional misses the posterior by {residual:.3e}"
        )
    return alpha


@dataclass(frozen=True)
class Prop1Report:
    """Outcome of checking the closed form against the credal-mixture envelope."""

    alphas: tuple[float, ...]
    events_checked: int
    comparisons: int
    max_deviation: float
    all_convex: bool
    first_convexity_failure: tuple[int, float, tuple[int, int]] | None
    ds_dominates_fh: bool  # empirical observation, not an enforced law
    check_tol: float

    @property
    def ok(self) -> bool:
        return self.all_convex and self.max_deviation <= self.check_tol

    def to_json_dict(self) -> dict:
        return {
            "passed": self.ok,
            "alphas": list(self.alphas),
            "events_checked": self.events_checked,
            "comparisons": self.comparisons,
            "max_deviation": self.max_deviation,
            "all_outputs_convex": self.all_convex,
            "ds_dominates_fh": self.ds_dominates_fh,
            "tolerance": self.check_tol,
        }


def verify_prop1(
    c: Capacity,
    alphas: tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0),
    tol: float | None = None,
    *,
    check_tol: float = 1e-9,
    core: CredalSet | None = None,
    events=None,
) -> Prop1Report:
    """Cross-check the interpolation rule against its credal-set definition.

    For every nonnull event and every weight in ``alphas``, the closed form
    must agree with the lower envelope of Bayes-conditioning the mixture of
    event maximizers with the full core, and the output must stay convex.
    """
    tol = resolve_tol(tol)
    if core is None:
        core = core_vertices(c, tol)
    if events is None:
        events = [e for e in range(1, c.space.n_events) if c.values[e] > tol]
    max_dev = 0.0
    comparisons = 0
    all_convex = True
    first_fail = None
    ds_ge_fh = True
    for event in events:
        ds = ds_update(c, event, tol)
        fh = fh_update(c, event, tol)
        if np.any(ds.values < fh.values - check_tol):
            ds_ge_fh = False
        top = maximizer_set(c, event, tol, core=core)
        for alpha in alphas:
            updated = erml_update(c, event, alpha, tol)
            mixed = mixture(top, core, alpha, tol)
            envelope = conditional_envelope(mixed, event, tol)
            max_dev = max(max_dev, float(np.abs(updated.values - envelope).max()))
            comparisons += c.space.n_events
            chk = is_convex(updated, tol)
            if not chk and all_convex:
                all_convex = False
                first_fail = (event, float(alpha), chk.violating_pair)
    return Prop1Report(
        alphas=tuple(float(a) for a in alphas),
        events_checked=len(events),
        comparisons=comparisons,
        max_deviation=max_dev,
        all_convex=all_convex,
        first_convexity_failure=first_fail,
        ds_dominates_fh=ds_ge_fh,
        check_tol=check_tol,
    )
