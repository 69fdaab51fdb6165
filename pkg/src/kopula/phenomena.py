"""Complementation geometry on the marginal hypercube.

A point w in [0,1]**N holds one occurrence probability per event.  For
any subset Z (the "keep" set) there is a mirrored point

    w'[k] = w[k]        if k in Z
    w'[k] = 1 - w[k]    otherwise

obtained by rephrasing the non-kept events as their complements.  The
same rephrasing acts on a first-kind table as an exact permutation of
its cells: the occurrence pattern T under the new reading corresponds
to the old pattern that agrees with T on Z and disagrees off Z, i.e.

    new[T] = old[~(keep ^ T) & full_mask]

Every marginal point has exactly one mirror image with all coordinates
at most 1/2 (ties at 1/2 are resolved toward keeping the event).  That
canonical image, its keep-set, and the ordering of its coordinates by
decreasing probability drive the constructions in ``kopula.frame``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import VALUE_ATOL, Epd1, EventSetContext, MarginalSet

__all__ = [
    "HalfRareProjection",
    "phenomenon_point",
    "phenomenon_marginals",
    "half_rare_projection",
    "renumber_epd1",
]


@dataclass(frozen=True)
class HalfRareProjection:
    """Canonical half-rare image of a marginal point.

    point        mirrored probabilities, all <= 1/2
    keep         mask of events left uncomplemented (p <= 1/2 originally)
    permutation  event indices sorted by decreasing mirrored probability,
                 ties broken by ascending index
    """

    point: MarginalSet
    keep: int
    permutation: tuple[int, ...]


def phenomenon_point(m: MarginalSet, keep: int) -> MarginalSet:
    """Mirror a marginal point: keep coordinates in ``keep``, flip the rest."""
    m.context.check_mask(keep)
    probs = tuple(
        p if keep & (1 << k) else 1.0 - p for k, p in enumerate(m.probs)
    )
    return MarginalSet.from_values(m.context, probs)


# The mirror map is a coordinate-wise involution, so the same function
# inverts it; phenomenon_marginals is just the semantic alias.
phenomenon_marginals = phenomenon_point


def _rank_folded(probs: tuple[float, ...]) -> tuple[int, ...]:
    # Coordinates within VALUE_ATOL of the current run leader count as
    # tied and fall back to index order; folding computes 1 - p, whose
    # rounding would otherwise split ties like 1 - 0.9 vs 0.1.
    by_value = sorted(range(len(probs)), key=lambda k: (-probs[k], k))
    order: list[int] = []
    i = 0
    while i < len(by_value):
        head = probs[by_value[i]]
        j = i
        while j < len(by_value) and head - probs[by_value[j]] <= VALUE_ATOL:
            j += 1
        order.extend(sorted(by_value[i:j]))
        i = j
    return tuple(order)


def half_rare_projection(m: MarginalSet) -> HalfRareProjection:
    """Fold every coordinate into [0, 1/2] and rank the folded values.

    A coordinate exactly at 1/2 is never complemented.
    """
    keep = 0
    for k, p in enumerate(m.probs):
        if p <= 0.5:
            keep |= 1 << k
    folded = phenomenon_point(m, keep)
    return HalfRareProjection(
        point=MarginalSet(m.context, folded.probs, half_rare=True),
        keep=keep,
        permutation=_rank_folded(folded.probs),
    )


def renumber_epd1(d: Epd1, keep: int) -> Epd1:
    """Re-read a first-kind table with the events outside ``keep`` complemented.

    A pure cell permutation (an involution for fixed ``keep``); the
    marginals of the result are the mirrored marginals of the input.
    """
    ctx = d.context
    ctx.check_mask(keep)
    masks = np.arange(ctx.size)
    source = (~(keep ^ masks)) & ctx.full_mask
    return Epd1(ctx, d.values[source])
