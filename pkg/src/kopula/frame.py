"""Recursive construction of joint tables from marginals and intersections.

The construction picks a frame event x and splits any first-kind table
over n events into two joint slices over the remaining n-1 events: the
cells where x occurred and the cells where it did not.  Each slice is a
"pseudo" distribution: nonnegative, but summing to the cell mass (p_x
or 1 - p_x) rather than 1.  Adding the missing mass to the empty-set
entry of a slice turns it into a genuine distribution whose marginals
and intersections are plain unconditional probabilities:

    in-slice:   marginal of k is P(x and k),  intersections P(x and S)
    out-slice:  marginal of k is p_k - P(x and k), etc.

So a full table over n events is determined by the per-event
probabilities plus one intersection probability per subset of size >= 2,
applied recursively.  ``build_nset_epd`` runs this end to end for an
arbitrary marginal point; ``triplet_epd`` and ``quadruplet_epd`` are the
closed forms for ordered half-rare triples and quadruples.

Feasibility of the intersection table is a chain of interval
constraints: given its facet values, each intersection must lie inside
a closed interval (``frechet_bounds``).  Table validation walks those
intervals in ascending subset size for the top-level frame split;
anything infeasible deeper down surfaces as a negative cell in the
final table and is rejected there.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .core import (
    CompositionError,
    ConditioningError,
    DependencyError,
    Epd1,
    Epd2,
    EventSetContext,
    InfeasibleParameterError,
    InvalidDistributionError,
    MarginalSet,
    ParameterRangeError,
    VALUE_ATOL,
    validate_epd1,
)
from .phenomena import half_rare_projection, renumber_epd1

__all__ = [
    "PseudoDistribution",
    "FrameParams",
    "FrechetInterval",
    "FullProbabilityReport",
    "conditional_epd",
    "pseudo_from_conditional",
    "conditional_from_pseudo",
    "frame_split",
    "frame_compose",
    "frechet_bounds",
    "triplet_epd",
    "quadruplet_epd",
    "build_nset_epd",
    "full_probability_check",
]

_MASS_EPS = 1e-15


def _insert_bit(sub: np.ndarray, pos: int) -> np.ndarray:
    """Spread submasks over n-1 positions into n positions, bit ``pos`` clear."""
    return ((sub >> pos) << (pos + 1)) | (sub & ((1 << pos) - 1))


def _drop_event_context(ctx: EventSetContext, frame_events: int) -> EventSetContext:
    labels = tuple(
        lab for k, lab in enumerate(ctx.labels) if not frame_events & (1 << k)
    )
    if not labels:
        raise ConditioningError("conditioning must leave at least one free event")
    return EventSetContext(len(labels), labels)


# ---------------------------------------------------------------------------
# pseudo distributions and the frame split


@dataclass(frozen=True, eq=False)
class PseudoDistribution:
    """A joint slice: one frame cell of a larger table, mass below 1.

    ``values[S]`` is the probability of pattern S among the remaining
    events AND the frame cell; the values sum to the cell probability.
    """

    context: EventSetContext
    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if arr.shape != (self.context.size,):
            raise CompositionError(
                f"expected {self.context.size} values, got {arr.shape[0]}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def mass(self) -> float:
        return float(self.values.sum())

    def own_epd(self) -> Epd1:
        """The slice as a distribution in its own right.

        The missing mass goes to the empty set; every other entry is
        unchanged, so marginals of the result are the plain joint
        probabilities P(frame cell and event k).
        """
        v = self.values.copy()
        v[0] += 1.0 - self.mass
        return Epd1(self.context, v)

    @classmethod
    def from_own_epd(cls, epd: Epd1, cell_mass: float) -> "PseudoDistribution":
        """Inverse of ``own_epd`` for a cell of the given probability."""
        if not 0.0 <= cell_mass <= 1.0:
            raise ParameterRangeError(f"cell mass {cell_mass} outside [0, 1]")
        v = epd.values.copy()
        v[0] -= 1.0 - cell_mass
        return cls(epd.context, v)


def conditional_epd(
    joint: Epd1, y_subset: int, frame_events: int | None = None
) -> Epd1:
    """Restrict a table to one frame cell and renormalize.

    ``frame_events`` names the events being pinned; ``y_subset`` (a
    submask of it) says which of them occurred.  By default the two
    coincide: condition on every event of ``y_subset`` occurring.  The
    result lives on the remaining events.
    """
    ctx = joint.context
    if frame_events is None:
        frame_events = y_subset
    ctx.check_mask(frame_events)
    ctx.check_mask(y_subset)
    if y_subset & ~frame_events:
        raise ConditioningError(
            f"pattern {ctx.mask_label(y_subset)!r} is not a submask of the "
            f"frame events {ctx.mask_label(frame_events)!r}"
        )
    sub_ctx = _drop_event_context(ctx, frame_events)
    masks = np.arange(ctx.size)
    sel = (masks & frame_events) == y_subset
    # ascending mask order compacts to ascending submask order
    block = joint.values[sel]
    mass = float(block.sum())
    if mass <= _MASS_EPS:
        raise ConditioningError(
            f"frame cell {{{ctx.mask_label(y_subset)}}} of "
            f"{{{ctx.mask_label(frame_events)}}} has numerically zero mass ({mass:g})"
        )
    return Epd1(sub_ctx, block / mass)


def pseudo_from_conditional(cond: Epd1, frame_prob: float) -> PseudoDistribution:
    """Scale a conditional table back into a joint slice."""
    if not 0.0 <= frame_prob <= 1.0:
        raise ParameterRangeError(f"frame probability {frame_prob} outside [0, 1]")
    if frame_prob == 0.0:
        # the inverse map is undefined on a massless slice
        raise ConditioningError("frame probability is zero")
    return PseudoDistribution(cond.context, cond.values * frame_prob)


def conditional_from_pseudo(pseudo: PseudoDistribution) -> Epd1:
    mass = pseudo.mass
    if mass <= _MASS_EPS:
        raise ConditioningError(f"slice has numerically zero mass ({mass:g})")
    return Epd1(pseudo.context, pseudo.values / mass)


def frame_split(joint: Epd1, frame_event: int) -> tuple[PseudoDistribution, PseudoDistribution]:
    """The two slices of a table along one event: (occurred, did not)."""
    ctx = joint.context
    if not 0 <= frame_event < ctx.n_events:
        raise ConditioningError(f"no event with index {frame_event}")
    if ctx.n_events == 1:
        raise ConditioningError("splitting needs at least two events")
    sub_ctx = _drop_event_context(ctx, 1 << frame_event)
    sub = np.arange(ctx.size >> 1)
    full = _insert_bit(sub, frame_event)
    bit = 1 << frame_event
    return (
        PseudoDistribution(sub_ctx, joint.values[full | bit]),
        PseudoDistribution(sub_ctx, joint.values[full]),
    )


def frame_compose(
    pseudo_in: PseudoDistribution,
    pseudo_out: PseudoDistribution,
    p0: float,
    frame_label: str | None = None,
) -> Epd1:
    """Reassemble a table from its two slices along a new lowest event.

    The frame event becomes bit 0 of the result; the slice events shift
    up one position.  ``p0`` must match the in-slice mass, and the two
    masses must sum to 1 (both within 1e-9).
    """
    pseudo_in.context.require_same(pseudo_out.context, "frame_compose")
    m_in, m_out = pseudo_in.mass, pseudo_out.mass
    if abs(m_in - p0) > 1e-9:
        raise CompositionError(
            f"in-slice mass {m_in!r} does not match the frame probability {p0!r}"
        )
    if abs(m_in + m_out - 1.0) > 1e-9:
        raise CompositionError(f"slice masses sum to {m_in + m_out!r}, not 1")
    old = pseudo_in.context.labels
    if frame_label is None:
        k = 0
        while f"f{k}" in old:
            k += 1
        frame_label = f"f{k}"
    ctx = EventSetContext(len(old) + 1, (frame_label,) + old)
    out = np.empty(ctx.size)
    sub = np.arange(pseudo_in.context.size)
    out[(sub << 1) | 1] = pseudo_in.values
    out[sub << 1] = pseudo_out.values
    return Epd1(ctx, out)


# ---------------------------------------------------------------------------
# intersection parameters and their feasibility intervals


@dataclass(frozen=True)
class FrechetInterval:
    """Closed admissible interval for one intersection probability."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        lo, up = float(self.lower), float(self.upper)
        if lo > up:
            if lo - up > 1e-9:
                raise InfeasibleParameterError(
                    f"empty feasibility interval [{lo!r}, {up!r}]"
                )
            lo = up = 0.5 * (lo + up)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)

    def contains(self, value: float, tol: float = VALUE_ATOL) -> bool:
        return self.lower - tol <= value <= self.upper + tol

    def clamp(self, value: float) -> float:
        return min(max(value, self.lower), self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower


def frechet_bounds(
    known: Mapping[int, float],
    target: int,
    p: float | None,
    frame_prob: float,
) -> FrechetInterval:
    """Admissible interval for one slice intersection value.

    ``frame_prob`` is the mass of the slice being filled.  For a single
    event (``target`` has one bit) the interval is the classical pair
    window against that mass, and ``p`` must carry the event's own
    probability.  For larger targets the interval comes from the facet
    values in ``known``, keyed by ``target`` with one bit removed:
    below every facet, and above their sum less (size-1) slice masses.
    """
    bits = [b for b in range(target.bit_length()) if target & (1 << b)]
    if not bits:
        raise ParameterRangeError("target subset must be non-empty")
    if len(bits) == 1:
        if p is None:
            raise DependencyError(
                "single-event bounds need the event's own probability"
            )
        return FrechetInterval(max(0.0, frame_prob + p - 1.0), min(frame_prob, p))
    facets = []
    for b in bits:
        key = target & ~(1 << b)
        if key not in known:
            raise DependencyError(
                f"facet value for submask {key:#b} of target {target:#b} not supplied"
            )
        facets.append(float(known[key]))
    lower = max(0.0, sum(facets) - (len(facets) - 1) * frame_prob)
    return FrechetInterval(lower, min(facets))


@dataclass(frozen=True)
class FrameParams:
    """Intersection probabilities for every subset of size two or more.

    Keys are subset masks of the event set the table will be built
    over; for ``build_nset_epd`` that is the ordered half-rare image of
    the caller's events, largest projected marginal first.
    """

    n_events: int
    intersections: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not 1 <= self.n_events <= 24:
            raise ParameterRangeError(f"n_events {self.n_events} outside [1, 24]")
        full = (1 << self.n_events) - 1
        clean: dict[int, float] = {}
        for mask, value in self.intersections.items():
            mask = int(mask)
            if not 0 <= mask <= full or bin(mask).count("1") < 2:
                raise ParameterRangeError(
                    f"parameter keys must be subsets of size >= 2, got {mask:#b}"
                )
            v = float(value)
            if -1e-12 < v < 0.0:
                v = 0.0
            if not 0.0 <= v <= 1.0:
                raise ParameterRangeError(f"intersection for {mask:#b} is {v}, outside [0, 1]")
            clean[mask] = v
        object.__setattr__(self, "intersections", clean)

    @classmethod
    def independence(cls, probs: Sequence[float]) -> "FrameParams":
        """Product intersections of the given per-event probabilities."""
        n = len(probs)
        inter: dict[int, float] = {}
        for r in range(2, n + 1):
            for bits in combinations(range(n), r):
                v = 1.0
                for b in bits:
                    v *= float(probs[b])
                inter[sum(1 << b for b in bits)] = v
        return cls(n, inter)

    @classmethod
    def from_triplet(
        cls, a1: float, a2: float, t_in: float, t_out: float
    ) -> "FrameParams":
        """Three-event parameters from the frame decomposition values.

        a1 = P(x and y), a2 = P(x and z), t_in = P(x and y and z),
        t_out = P(not-x and y and z); events ordered x, y, z.
        """
        return cls(
            3,
            {
                0b011: a1,
                0b101: a2,
                0b110: t_in + t_out,
                0b111: t_in,
            },
        )

    @classmethod
    def from_epd2(cls, d: Epd2) -> "FrameParams":
        inter = {
            mask: float(d.values[mask])
            for mask in range(d.context.size)
            if bin(mask).count("1") >= 2
        }
        return cls(d.context.n_events, inter)

    @classmethod
    def from_labels(
        cls, context: EventSetContext, named: Mapping[str, float]
    ) -> "FrameParams":
        return cls(
            context.n_events,
            {context.mask_from_label(k): v for k, v in named.items()},
        )

    def to_labels(self, context: EventSetContext) -> dict[str, float]:
        return {
            context.mask_label(mask): v
            for mask, v in sorted(self.intersections.items())
        }

    def complete_table(self, probs: Sequence[float]) -> np.ndarray:
        """Dense intersection array: 1 at the empty set, marginals, parameters.

        Every subset of size >= 2 must be present; a missing one is a
        dependency error, since each recursion level consumes them all.
        """
        n = self.n_events
        if len(probs) != n:
            raise ParameterRangeError(f"expected {n} marginals, got {len(probs)}")
        t = np.empty(1 << n)
        t[0] = 1.0
        for k in range(n):
            t[1 << k] = float(probs[k])
        for mask in range(1 << n):
            if bin(mask).count("1") >= 2:
                if mask not in self.intersections:
                    raise DependencyError(
                        f"no intersection value supplied for subset mask {mask:#b}"
                    )
                t[mask] = self.intersections[mask]
        return t


# ---------------------------------------------------------------------------
# feasibility walk and the recursive composition


def _fit_value(value: float, iv: FrechetInterval, what: str, policy: str) -> float:
    if iv.lower <= value <= iv.upper:
        return value
    if iv.contains(value) or policy == "clamp":
        warnings.warn(
            f"{what} = {value!r} clamped into [{iv.lower!r}, {iv.upper!r}]",
            RuntimeWarning,
            stacklevel=4,
        )
        return iv.clamp(value)
    raise InfeasibleParameterError(
        f"{what} = {value!r} outside the admissible interval "
        f"[{iv.lower!r}, {iv.upper!r}]"
    )


def _validate_table(t: np.ndarray, policy: str) -> None:
    """Walk the top-level frame split of a dense intersection table.

    Event 0 is the frame.  Values are checked (and possibly clamped in
    place) in ascending subset size, so every interval is built from
    already-vetted facets.  Only this split is walked; an infeasibility
    that hides deeper down the recursion surfaces later as a negative
    cell of the finished table.
    """
    if policy not in ("raise", "clamp"):
        raise ParameterRangeError(f"policy must be 'raise' or 'clamp', got {policy!r}")
    size = t.shape[0]
    n = size.bit_length() - 1
    p0 = float(t[1])
    rest = [k for k in range(1, n)]
    for k in rest:
        iv = frechet_bounds({}, 1 << k, float(t[1 << k]), p0)
        name = f"pair intersection of ordered events (0, {k})"
        t[(1 << k) | 1] = _fit_value(float(t[(1 << k) | 1]), iv, name, policy)
    higher = sorted(
        (
            mask
            for mask in range(size)
            if not mask & 1 and bin(mask).count("1") >= 2
        ),
        key=lambda m: (bin(m).count("1"), m),
    )
    for s in higher:
        bits = tuple(b for b in range(n) if s & (1 << b))
        known_in = {s & ~(1 << b): float(t[(s & ~(1 << b)) | 1]) for b in bits}
        iv_in = frechet_bounds(known_in, s, None, p0)
        name_in = f"frame-side intersection of ordered events {(0,) + bits}"
        v_in = _fit_value(float(t[s | 1]), iv_in, name_in, policy)
        t[s | 1] = v_in
        known_out = {
            s & ~(1 << b): float(t[s & ~(1 << b)]) - float(t[(s & ~(1 << b)) | 1])
            for b in bits
        }
        iv_out = frechet_bounds(known_out, s, None, 1.0 - p0)
        name_out = f"off-frame intersection of ordered events {bits}"
        v_out = _fit_value(float(t[s]) - v_in, iv_out, name_out, policy)
        t[s] = v_out + v_in


def _compose(t: np.ndarray) -> np.ndarray:
    """Exact-pattern table from a dense intersection table, recursively.

    At each level the largest-marginal event (lowest index on ties)
    frames the split; both slices are completed as distributions of
    their own, re-sliced, and interleaved back.
    """
    size = t.shape[0]
    if size == 2:
        return np.array([1.0 - t[1], t[1]])
    n = size.bit_length() - 1
    marg = t[1 << np.arange(n)]
    f = int(np.argmax(marg))
    p0 = float(marg[f])
    sub = np.arange(size >> 1)
    full = _insert_bit(sub, f)
    bit = 1 << f
    t_in = t[full | bit].copy()
    t_out = t[full] - t_in
    t_in[0] = 1.0
    t_out[0] = 1.0
    q_in = _compose(t_in)
    q_out = _compose(t_out)
    q_in[0] -= 1.0 - p0
    q_out[0] -= p0
    out = np.empty(size)
    out[full | bit] = q_in
    out[full] = q_out
    return out


def _require_ordered_half_rare(p: MarginalSet, n: int, who: str) -> np.ndarray:
    if p.context.n_events != n:
        raise ParameterRangeError(f"{who} needs exactly {n} events, got {p.context.n_events}")
    probs = np.asarray(p.probs)
    if probs.max() > 0.5:
        raise ParameterRangeError(
            f"{who} needs half-rare marginals (all <= 1/2); project the point first"
        )
    if not all(probs[i] >= probs[i + 1] for i in range(n - 1)):
        raise ParameterRangeError(
            f"{who} needs marginals in nonincreasing order, got {tuple(p.probs)}"
        )
    return probs


def triplet_epd(p: MarginalSet, params: FrameParams, policy: str = "raise") -> Epd1:
    """Closed-form three-event table for ordered half-rare marginals.

    Bits are x = 0, y = 1, z = 2 with p_x >= p_y >= p_z.  The eight
    cells are inclusion-exclusion sums of the four parameters; the
    parameters are vetted against their intervals first.
    """
    probs = _require_ordered_half_rare(p, 3, "triplet_epd")
    t = params.complete_table(probs)
    _validate_table(t, policy)
    px, py, pz = (float(v) for v in probs)
    a1, a2 = float(t[0b011]), float(t[0b101])
    t_in = float(t[0b111])
    t_out = float(t[0b110]) - t_in
    out = np.empty(8)
    out[0b111] = t_in
    out[0b011] = a1 - t_in
    out[0b101] = a2 - t_in
    out[0b001] = px - a1 - a2 + t_in
    out[0b110] = t_out
    out[0b010] = py - a1 - t_out
    out[0b100] = pz - a2 - t_out
    out[0b000] = 1.0 - px - py - pz + a1 + a2 + t_out
    return _finish_table(out, p.context, "triplet_epd")


def quadruplet_epd(p: MarginalSet, params: FrameParams, policy: str = "raise") -> Epd1:
    """Closed-form four-event table for ordered half-rare marginals.

    Bits are x = 0, y = 1, z = 2, v = 3 with nonincreasing marginals.
    Eleven intersection parameters feed two inclusion-exclusion
    half-tables, one per frame cell of x.
    """
    probs = _require_ordered_half_rare(p, 4, "quadruplet_epd")
    t = params.complete_table(probs)
    _validate_table(t, policy)
    px, py, pz, pv = (float(v) for v in probs)
    a1, a2, a3 = float(t[0b0011]), float(t[0b0101]), float(t[0b1001])
    b12, b13, b23 = float(t[0b0111]), float(t[0b1011]), float(t[0b1101])
    c = float(t[0b1111])
    d12 = float(t[0b0110]) - b12
    d13 = float(t[0b1010]) - b13
    d23 = float(t[0b1100]) - b23
    e = float(t[0b1110]) - c
    out = np.empty(16)
    out[0b1111] = c
    out[0b0111] = b12 - c
    out[0b1011] = b13 - c
    out[0b1101] = b23 - c
    out[0b0011] = a1 - b12 - b13 + c
    out[0b0101] = a2 - b12 - b23 + c
    out[0b1001] = a3 - b13 - b23 + c
    out[0b0001] = px - a1 - a2 - a3 + b12 + b13 + b23 - c
    out[0b1110] = e
    out[0b0110] = d12 - e
    out[0b1010] = d13 - e
    out[0b1100] = d23 - e
    out[0b0010] = (py - a1) - d12 - d13 + e
    out[0b0100] = (pz - a2) - d12 - d23 + e
    out[0b1000] = (pv - a3) - d13 - d23 + e
    out[0b0000] = 1.0 - px - py - pz - pv + a1 + a2 + a3 + d12 + d13 + d23 - e
    return _finish_table(out, p.context, "quadruplet_epd")


def _finish_table(raw: np.ndarray, ctx: EventSetContext, who: str) -> Epd1:
    worst = int(np.argmin(raw))
    if raw[worst] < -VALUE_ATOL:
        raise InfeasibleParameterError(
            f"{who}: parameters pass their top-level intervals but drive the cell "
            f"{{{ctx.mask_label(worst)}}} to {raw[worst]:.6e}"
        )
    neg = raw < 0.0
    if neg.any():
        warnings.warn(
            f"{who}: clamped {int(neg.sum())} slightly negative cell(s) to 0",
            RuntimeWarning,
            stacklevel=3,
        )
        raw = np.where(neg, 0.0, raw)
    d = Epd1(ctx, raw)
    report = validate_epd1(d)
    if not report.ok:
        raise InfeasibleParameterError(f"{who}: {report.describe()}")
    return d


def build_nset_epd(
    p: MarginalSet, params: FrameParams, policy: str = "raise"
) -> Epd1:
    """Joint table for an arbitrary marginal point from intersection parameters.

    The point is first folded to its half-rare image and the events
    sorted by decreasing folded probability; ``params`` is keyed by
    subsets IN THAT ordering (event 0 = largest folded marginal).  The
    recursive frame composition runs on the sorted table, and the
    result is mapped back through the sort and the folding.

    policy applies to the top-level interval walk: "raise" rejects
    anything beyond 1e-9 outside its interval, "clamp" pulls every
    value in (with a warning).
    """
    ctx = p.context
    n = ctx.n_events
    if params.n_events != n:
        raise ParameterRangeError(
            f"params cover {params.n_events} events, marginal point has {n}"
        )
    proj = half_rare_projection(p)
    q = [proj.point.probs[k] for k in proj.permutation]
    t = params.complete_table(q)
    _validate_table(t, policy)
    e_sorted = _compose(t)
    # undo the sort: sorted bit j belongs to projected event permutation[j]
    masks = np.arange(ctx.size)
    target = np.zeros(ctx.size, dtype=np.int64)
    for j, orig in enumerate(proj.permutation):
        target |= ((masks >> j) & 1) << orig
    e_proj = np.empty(ctx.size)
    e_proj[target] = e_sorted[masks]
    folded = Epd1(ctx, e_proj)
    unfolded = renumber_epd1(folded, proj.keep)
    return _finish_table(np.array(unfolded.values), ctx, "build_nset_epd")


# ---------------------------------------------------------------------------
# consistency report for a joint table against its frame pieces


@dataclass(frozen=True)
class FullProbabilityReport:
    """Deviations of a joint table from its frame-cell decomposition."""

    frame_events: int
    tol: float
    block_masses: tuple[float, ...]
    frame_deviation: float
    mixture_residual: float
    reconstruction_residual: float

    @property
    def ok(self) -> bool:
        return (
            self.frame_deviation <= self.tol
            and self.mixture_residual <= self.tol
            and self.reconstruction_residual <= self.tol
        )

    def describe(self) -> str:
        verdict = "consistent" if self.ok else "INCONSISTENT"
        return (
            f"{verdict} frame decomposition (tol {self.tol:g}): "
            f"frame-cell deviation {self.frame_deviation:.3e}, "
            f"total-probability residual {self.mixture_residual:.3e}, "
            f"reconstruction residual {self.reconstruction_residual:.3e}"
        )


def full_probability_check(
    joint: Epd1,
    frame_events: int,
    conditionals: Sequence[Epd1] | None = None,
    frame_epd: Epd1 | None = None,
    tol: float = 1e-9,
) -> FullProbabilityReport:
    """Check a joint table against frame-cell masses and conditionals.

    ``frame_events`` is the pinned subset; its 2**q cells index both
    ``conditionals`` (tables over the remaining events, compacted cell
    pattern order) and ``frame_epd`` (a table over the pinned events).
    Whatever is supplied gets compared: cell masses against
    ``frame_epd``, the conditional mixture against the remaining-events
    marginal, and cell-by-cell reconstruction against the joint.
    """
    ctx = joint.context
    ctx.check_mask(frame_events)
    if frame_events == 0:
        raise ConditioningError("frame subset must contain at least one event")
    q = bin(frame_events).count("1")
    n_cells = 1 << q
    masks = np.arange(ctx.size)

    free = ctx.full_mask & ~frame_events
    free_bits = [b for b in range(ctx.n_events) if free & (1 << b)]
    frame_bits = [b for b in range(ctx.n_events) if frame_events & (1 << b)]

    compact_free = np.zeros(ctx.size, dtype=np.int64)
    for j, b in enumerate(free_bits):
        compact_free |= ((masks >> b) & 1) << j
    m_free = len(free_bits)

    block_mass = np.zeros(n_cells)
    free_marginal = np.zeros(1 << m_free)
    recon = np.zeros(ctx.size)
    have_conds = conditionals is not None
    if have_conds and len(conditionals) != n_cells:
        raise CompositionError(
            f"need {n_cells} conditionals for {q} frame events, got {len(conditionals)}"
        )

    frame_dev = 0.0
    for cell in range(n_cells):
        y = 0
        for j, b in enumerate(frame_bits):
            y |= ((cell >> j) & 1) << b
        sel = (masks & frame_events) == y
        mass = float(joint.values[sel].sum())
        block_mass[cell] = mass
        np.add.at(free_marginal, compact_free[sel], joint.values[sel])
        if have_conds:
            cond = conditionals[cell]
            if cond.context.n_events != m_free:
                raise CompositionError(
                    f"conditional {cell} covers {cond.context.n_events} events, "
                    f"expected {m_free}"
                )
            recon[sel] = mass * cond.values[compact_free[sel]]
    if frame_epd is not None:
        if frame_epd.context.n_events != q:
            raise CompositionError(
                f"frame table covers {frame_epd.context.n_events} events, expected {q}"
            )
        frame_dev = float(np.max(np.abs(block_mass - frame_epd.values)))

    mixture_res = 0.0
    recon_res = 0.0
    if have_conds:
        mixture = np.zeros(1 << m_free)
        for cell in range(n_cells):
            mixture += block_mass[cell] * conditionals[cell].values
        mixture_res = float(np.max(np.abs(mixture - free_marginal)))
        recon_res = float(np.max(np.abs(recon - joint.values)))

    return FullProbabilityReport(
        frame_events=frame_events,
        tol=tol,
        block_masses=tuple(float(v) for v in block_mass),
        frame_deviation=frame_dev,
        mixture_residual=mixture_res,
        reconstruction_residual=recon_res,
    )
