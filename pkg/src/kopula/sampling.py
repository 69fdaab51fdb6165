"""Seeded categorical sampling of occurrence patterns.

The generator is PCG64 behind numpy's Generator front end: named,
seedable, and stable across platforms, so a summary produced from the
same table, sample count, and seed is reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Epd1, InvalidDistributionError, ParameterRangeError, validate_epd1

__all__ = ["SampleSpec", "sample_epd1", "sample_summary"]


@dataclass(frozen=True)
class SampleSpec:
    n_samples: int
    seed: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.n_samples, int) or self.n_samples < 1:
            raise ParameterRangeError(f"n_samples must be >= 1, got {self.n_samples!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 1 << 64:
            raise ParameterRangeError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")


def sample_epd1(d: Epd1, spec: SampleSpec) -> np.ndarray:
    """Draw occurrence-pattern masks, distributed per the table.

    Inverse-CDF draws from one PCG64 stream; a fixed seed fixes the
    output exactly.
    """
    report = validate_epd1(d)
    if not report.ok:
        raise InvalidDistributionError(f"refusing to sample: {report.describe()}")
    cdf = np.cumsum(d.values)
    cdf /= cdf[-1]
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    u = rng.random(spec.n_samples)
    masks = np.searchsorted(cdf, u, side="right")
    return np.minimum(masks, d.context.size - 1).astype(np.int64)


def sample_summary(d: Epd1, spec: SampleSpec) -> dict:
    """Empirical terrace frequencies and marginals, with standard errors.

    Plain-python values throughout so the dict serializes to identical
    bytes on reruns (keys sorted at dump time).
    """
    masks = sample_epd1(d, spec)
    n = d.context.n_events
    counts = np.bincount(masks, minlength=d.context.size)
    freq = counts / spec.n_samples
    marg = [float(((masks >> k) & 1).mean()) for k in range(n)]
    se = [float(np.sqrt(m * (1.0 - m) / spec.n_samples)) for m in marg]
    return {
        "n_events": n,
        "n_samples": spec.n_samples,
        "seed": spec.seed,
        "labels": list(d.context.labels),
        "counts": [int(c) for c in counts],
        "frequencies": [float(f) for f in freq],
        "marginals": marg,
        "marginal_se": se,
    }
