"""Brute-force reference implementations.

Everything here is deliberately slow and obvious: plain double loops
over subset pairs, no tensor tricks.  The fast paths in ``core`` and
``phenomena`` are tested against these on small N, and the ``oracle``
CLI subcommand cross-checks them at runtime.
"""

from __future__ import annotations

import numpy as np

from .core import Epd1, Epd2, EventSetContext, MarginalSet

__all__ = [
    "naive_epd2_from_epd1",
    "naive_epd1_from_epd2",
    "naive_marginals",
    "naive_renumber",
    "product_epd1",
]


def naive_epd2_from_epd1(d: Epd1) -> Epd2:
    """Superset sums by direct enumeration, O(4**N)."""
    size = d.context.size
    out = np.zeros(size)
    for x in range(size):
        for y in range(size):
            if x & y == x:
                out[x] += d.values[y]
    return Epd2(d.context, out)


def naive_epd1_from_epd2(d: Epd2) -> Epd1:
    """Alternating superset sums by direct enumeration, O(4**N)."""
    size = d.context.size
    out = np.zeros(size)
    for x in range(size):
        for y in range(size):
            if x & y == x:
                sign = -1.0 if bin(y & ~x).count("1") % 2 else 1.0
                out[x] += sign * d.values[y]
    return Epd1(d.context, out)


def naive_marginals(d: Epd1) -> MarginalSet:
    n = d.context.n_events
    probs = [0.0] * n
    for mask in range(d.context.size):
        for k in range(n):
            if mask & (1 << k):
                probs[k] += float(d.values[mask])
    return MarginalSet.from_values(d.context, probs)


def naive_renumber(d: Epd1, keep: int) -> Epd1:
    """Event-by-event complementation by re-deriving each output cell.

    Output cell T collects the input mass of the unique pattern S whose
    kept events agree with T and whose complemented events disagree.
    """
    n = d.context.n_events
    size = d.context.size
    out = np.zeros(size)
    for t in range(size):
        s = 0
        for k in range(n):
            bit = 1 << k
            t_has = bool(t & bit)
            if keep & bit:
                s_has = t_has
            else:
                s_has = not t_has
            if s_has:
                s |= bit
        out[t] = d.values[s]
    return Epd1(d.context, out)


def product_epd1(context: EventSetContext, probs) -> Epd1:
    """Exact-pattern table of fully independent events."""
    size = context.size
    out = np.empty(size)
    for mask in range(size):
        v = 1.0
        for k in range(context.n_events):
            p = float(probs[k])
            v *= p if mask & (1 << k) else 1.0 - p
        out[mask] = v
    return Epd1(context, out)
