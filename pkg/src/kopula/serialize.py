"""JSON and CSV formats, and the config dispatch used by the CLI.

Tables travel as one JSON object:

    {"kind": "epd1" | "epd2", "n": 2, "labels": ["x0", "x1"],
     "values": [0.56, 0.24, 0.14, 0.06]}

with values in subset-mask order.  Loading validates against the
axioms of the declared kind.  CSV is export-only, one labelled subset
per row.

Family and build configs are flat JSON objects; ``family_from_config``
and ``build_from_config`` are the single dispatch points, so the CLI
and tests share one vocabulary.  See the README for the full schema.
"""

from __future__ import annotations

import json
from typing import IO, Mapping

import numpy as np

from .core import (
    Epd1,
    Epd2,
    EventSetContext,
    InvalidDistributionError,
    KopulaError,
    MarginalSet,
    validate_epd1,
    validate_epd2,
)
from .correlation import params_from_kor3
from .families import (
    KopulaFamily,
    classical_pair_param,
    conjugated_2kopula,
    constant_weight,
    convex_combination,
    convex_updown_2kopula,
    epd_from_kopula,
    frechet_lower_2,
    frechet_upper_2,
    independent_kopula,
    parametric_2kopula,
    quarter_sum_2,
    sine_diff_weight,
)
from .frame import FrameParams, build_nset_epd, triplet_epd
from .phenomena import half_rare_projection

__all__ = [
    "ConfigError",
    "epd_to_dict",
    "epd_from_dict",
    "save_epd",
    "load_epd",
    "write_epd_csv",
    "dump_json",
    "family_from_config",
    "build_from_config",
    "CLASSICAL_FAMILIES",
]

CLASSICAL_FAMILIES = ("amh", "clayton", "frank", "gumbel", "joe")


class ConfigError(KopulaError, ValueError):
    """A config document is structurally wrong or missing required keys."""


def dump_json(obj, fp: IO[str] | None = None) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if fp is not None:
        fp.write(text)
    return text


# ---------------------------------------------------------------------------
# table round trip


def epd_to_dict(d: Epd1 | Epd2) -> dict:
    return {
        "kind": "epd1" if isinstance(d, Epd1) else "epd2",
        "n": d.context.n_events,
        "labels": list(d.context.labels),
        "values": [float(v) for v in d.values],
    }


def epd_from_dict(obj: Mapping) -> Epd1 | Epd2:
    try:
        kind = obj["kind"]
        n = obj["n"]
        values = obj["values"]
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"table document is missing {exc}") from None
    if kind not in ("epd1", "epd2"):
        raise ConfigError(f"unknown table kind {kind!r}")
    labels = tuple(obj.get("labels", ()))
    ctx = EventSetContext(int(n), labels)
    if kind == "epd1":
        d = Epd1(ctx, np.asarray(values, dtype=np.float64))
        report = validate_epd1(d)
    else:
        d = Epd2(ctx, np.asarray(values, dtype=np.float64))
        report = validate_epd2(d)
    if not report.ok:
        raise InvalidDistributionError(report.describe())
    return d


def save_epd(d: Epd1 | Epd2, fp: IO[str]) -> None:
    dump_json(epd_to_dict(d), fp)


def load_epd(fp: IO[str]) -> Epd1 | Epd2:
    try:
        obj = json.load(fp)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {exc}") from None
    return epd_from_dict(obj)


def write_epd_csv(d: Epd1 | Epd2, fp: IO[str]) -> None:
    fp.write("mask,subset_labels,value\n")
    for mask in range(d.context.size):
        fp.write(f"{mask},{d.context.mask_label(mask)},{float(d.values[mask])!r}\n")


# ---------------------------------------------------------------------------
# family configs


def _weight_from_config(obj, what: str):
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return constant_weight(float(obj))
    if isinstance(obj, Mapping):
        kind = obj.get("kind")
        if kind == "constant":
            return constant_weight(float(obj.get("value", 0.0)))
        if kind == "sine_diff":
            return sine_diff_weight(float(obj.get("scale", 15.0)))
        raise ConfigError(f"{what}: unknown weight kind {kind!r}")
    raise ConfigError(f"{what}: expected a number or a weight object, got {obj!r}")


def family_from_config(obj: Mapping) -> KopulaFamily:
    """Build a family from a flat config object.

    The "family" key selects the kind; the rest is per-kind:
    independent takes "n" (or "labels"), the classical names take
    "theta", convex_updown and conjugated take "alpha", and convex
    takes parallel "weights" and "parts" lists of nested configs.
    """
    if not isinstance(obj, Mapping):
        raise ConfigError(f"family config must be an object, got {type(obj).__name__}")
    name = obj.get("family")
    if not isinstance(name, str):
        raise ConfigError("family config needs a 'family' name")
    name = name.strip().lower()

    if name == "independent":
        labels = tuple(obj.get("labels", ()))
        n = int(obj.get("n", len(labels) or 0))
        if n < 1:
            raise ConfigError("independent family needs 'n' or 'labels'")
        return independent_kopula(EventSetContext(n, labels))
    if name == "frechet_upper":
        return frechet_upper_2()
    if name == "frechet_lower":
        return frechet_lower_2()
    if name == "quarter_sum":
        return quarter_sum_2()
    if name in CLASSICAL_FAMILIES:
        if "theta" not in obj:
            raise ConfigError(f"{name} family needs 'theta'")
        pf = classical_pair_param(name, float(obj["theta"]))
        return parametric_2kopula(
            pf, f"{name}({pf.theta:g})", params={"theta": pf.theta}
        )
    if name == "convex_updown":
        return convex_updown_2kopula(_weight_from_config(obj.get("alpha", 0.0), name))
    if name == "conjugated":
        return conjugated_2kopula(_weight_from_config(obj.get("alpha", 0.0), name))
    if name == "convex":
        parts = obj.get("parts")
        weights = obj.get("weights")
        if not isinstance(parts, list) or not isinstance(weights, list):
            raise ConfigError("convex family needs 'parts' and 'weights' lists")
        return convex_combination(
            [family_from_config(part) for part in parts],
            [float(w) for w in weights],
        )
    raise ConfigError(f"unknown family {name!r}")


# ---------------------------------------------------------------------------
# build configs


def _marginals_from_config(obj: Mapping) -> MarginalSet:
    probs = obj.get("marginals")
    if not isinstance(probs, list) or not probs:
        raise ConfigError("build config needs a non-empty 'marginals' list")
    labels = tuple(obj.get("labels", ()))
    ctx = EventSetContext(len(probs), labels)
    return MarginalSet.from_values(ctx, [float(v) for v in probs])


def _frame_params_from_config(p: MarginalSet, named: Mapping) -> FrameParams:
    """Translate label-keyed intersections to sorted-event masks.

    Keys name the caller's events; each stands for its folded (half-rare)
    image.  The masks are then rewritten into the sorted ordering that
    the composition uses internally.
    """
    proj = half_rare_projection(p)
    position = {orig: j for j, orig in enumerate(proj.permutation)}
    inter: dict[int, float] = {}
    for key, value in named.items():
        mask = p.context.mask_from_label(str(key))
        canon = 0
        for b in range(p.context.n_events):
            if mask & (1 << b):
                canon |= 1 << position[b]
        inter[canon] = float(value)
    return FrameParams(p.context.n_events, inter)


def build_from_config(obj: Mapping) -> Epd1:
    """One of three builds: a family, frame parameters, or correlations.

    A "family" key evaluates that family at the marginal point; a
    "frame_params" mapping runs the recursive composition; a "kor"
    object (keys xy, xz, in, out, three events only) goes through the
    correlation parametrization first.
    """
    if not isinstance(obj, Mapping):
        raise ConfigError("build config must be a JSON object")
    p = _marginals_from_config(obj)
    routes = [key for key in ("family", "frame_params", "kor") if key in obj]
    if len(routes) != 1:
        raise ConfigError(
            f"build config needs exactly one of 'family', 'frame_params', 'kor'; got {routes}"
        )
    route = routes[0]
    if route == "family":
        fam_obj = obj["family"]
        if isinstance(fam_obj, str):
            fam_obj = {key: value for key, value in obj.items() if key != "marginals"}
        if (
            isinstance(fam_obj, Mapping)
            and fam_obj.get("family") == "independent"
            and "n" not in fam_obj
            and "labels" not in fam_obj
        ):
            fam_obj = {**fam_obj, "n": p.context.n_events}
        fam = family_from_config(fam_obj)
        if fam.context.n_events != p.context.n_events:
            raise ConfigError(
                f"family {fam.name!r} covers {fam.context.n_events} events, "
                f"marginals have {p.context.n_events}"
            )
        # rebind to the marginal point's labels
        fam = KopulaFamily(p.context, fam.base, fam.name, fam.params)
        return epd_from_kopula(fam, p)
    if route == "frame_params":
        named = obj["frame_params"]
        if not isinstance(named, Mapping):
            raise ConfigError("'frame_params' must map subset labels to probabilities")
        params = _frame_params_from_config(p, named)
        policy = obj.get("policy", "raise")
        return build_nset_epd(p, params, policy=policy)
    kor = obj["kor"]
    if not isinstance(kor, Mapping):
        raise ConfigError("'kor' must be an object with keys xy, xz, in, out")
    missing = [key for key in ("xy", "xz", "in", "out") if key not in kor]
    if missing:
        raise ConfigError(f"'kor' is missing {missing}")
    params = params_from_kor3(
        p,
        float(kor["xy"]),
        float(kor["xz"]),
        float(kor["in"]),
        float(kor["out"]),
        modification=int(obj.get("modification", 1)),
    )
    return triplet_epd(p, params)
