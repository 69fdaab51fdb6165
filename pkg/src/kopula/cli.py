"""Command line front end.

Subcommands: build, grid, sample, validate, oracle, mobius, renumber.
Exit codes are a stable contract:

    0  success
    1  unusable input: bad flags, malformed config, parameter outside
       its declared range
    2  infeasible: parameters violate a probability bound (the bound is
       printed)
    3  axiom violation found by validate
    4  oracle cross-check mismatch

Configs are single JSON documents; see the README for the schema.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Mapping

import numpy as np

from .core import (
    Epd1,
    Epd2,
    EventSetContext,
    InfeasibleParameterError,
    InvalidDistributionError,
    KopulaError,
    MarginalSet,
    ParameterRangeError,
    epd1_from_epd2,
    epd2_from_epd1,
    marginals,
)
from .families import epd_from_kopula, independent_kopula, verify_one_function
from .frame import FrameParams, frechet_bounds, triplet_epd, build_nset_epd
from .oracles import (
    naive_epd1_from_epd2,
    naive_epd2_from_epd1,
    naive_marginals,
    naive_renumber,
    product_epd1,
)
from .phenomena import half_rare_projection, renumber_epd1
from .sampling import SampleSpec, sample_summary
from .serialize import (
    build_from_config,
    dump_json,
    epd_to_dict,
    family_from_config,
    load_epd,
    write_epd_csv,
)

__all__ = ["GridSpec", "main", "run"]

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_INFEASIBLE = 2
EXIT_AXIOM = 3
EXIT_ORACLE = 4


class _CliFailure(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code
        self.message = message


class _Parser(argparse.ArgumentParser):
    # argparse wants exit code 2 for usage errors; the contract says 1
    def error(self, message: str) -> None:
        raise _CliFailure(EXIT_PARSE, f"{self.prog}: {message}")


@dataclass(frozen=True)
class GridSpec:
    """Which events sweep the unit interval, and where the rest are held."""

    resolution: int
    axes: tuple[int, ...]
    fixed: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.resolution < 2:
            raise ParameterRangeError(f"grid resolution must be >= 2, got {self.resolution}")
        for k, v in self.fixed.items():
            if not 0.0 <= float(v) <= 1.0:
                raise ParameterRangeError(f"fixed value for event {k} is {v}, outside [0, 1]")


def _read_config(path: str) -> dict:
    import json

    try:
        with open(path, "r", encoding="utf-8") as fp:
            obj = json.load(fp)
    except OSError as exc:
        raise _CliFailure(EXIT_PARSE, f"{path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise _CliFailure(EXIT_PARSE, f"{path}: not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise _CliFailure(EXIT_PARSE, f"{path}: expected a JSON object at top level")
    return obj


def _load_epd_file(path: str) -> Epd1 | Epd2:
    try:
        with open(path, "r", encoding="utf-8") as fp:
            return load_epd(fp)
    except OSError as exc:
        raise _CliFailure(EXIT_PARSE, f"{path}: {exc}") from None
    except KopulaError as exc:
        raise _CliFailure(EXIT_PARSE, f"{path}: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)


def _guarded(fn: Callable[[], object]) -> object:
    """Map library errors onto the exit-code contract."""
    try:
        return fn()
    except (InfeasibleParameterError, InvalidDistributionError) as exc:
        raise _CliFailure(EXIT_INFEASIBLE, str(exc)) from None
    except KopulaError as exc:
        raise _CliFailure(EXIT_PARSE, str(exc)) from None


def _epd_text(d: Epd1 | Epd2, fmt: str) -> str:
    if fmt == "csv":
        import io

        buf = io.StringIO()
        write_epd_csv(d, buf)
        return buf.getvalue()
    return dump_json(epd_to_dict(d))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_build(args: argparse.Namespace) -> int:
    cfg = _read_config(args.config)
    d = _guarded(lambda: build_from_config(cfg))
    _emit(_epd_text(d, args.format), args.out)
    return EXIT_OK


def _cmd_grid(args: argparse.Namespace) -> int:
    cfg = _read_config(args.config)
    fam = _guarded(lambda: family_from_config(cfg))
    ctx = fam.context
    n = ctx.n_events

    def event_index(key) -> int:
        if isinstance(key, int):
            k = key
        else:
            text = str(key)
            k = int(text) if text.lstrip("-").isdigit() else ctx.index_of(text)
        if not 0 <= k < n:
            raise ParameterRangeError(f"no event with index {k}")
        return k

    def make_spec() -> GridSpec:
        axes = tuple(event_index(a) for a in cfg.get("axes", range(n)))
        fixed = {event_index(k): float(v) for k, v in cfg.get("fixed", {}).items()}
        missing = [k for k in range(n) if k not in axes and k not in fixed]
        if missing:
            raise ParameterRangeError(
                f"events {missing} neither swept nor fixed; add them to 'axes' or 'fixed'"
            )
        resolution = args.resolution if args.resolution else int(cfg.get("resolution", 9))
        return GridSpec(resolution, axes, fixed)

    spec = _guarded(make_spec)
    axis_values = np.linspace(0.0, 1.0, spec.resolution)
    header = (
        ",".join(f"w_{k}" for k in range(n))
        + ",terrace_mask,"
        + ",".join(f"v_{m}" for m in range(ctx.size))
    )
    lines = [header]
    skipped = 0
    for combo in product(axis_values, repeat=len(spec.axes)):
        w = [0.0] * n
        for k, v in spec.fixed.items():
            w[k] = float(v)
        for k, v in zip(spec.axes, combo):
            w[k] = float(v)
        point = MarginalSet.from_values(ctx, w)
        keep = half_rare_projection(point).keep
        try:
            values = epd_from_kopula(fam, point).values
        except InfeasibleParameterError as exc:
            values = np.full(ctx.size, np.nan)
            skipped += 1
            print(f"grid: infeasible at {tuple(w)}: {exc}", file=sys.stderr)
        lines.append(
            ",".join(repr(float(v)) for v in w)
            + f",{keep},"
            + ",".join(repr(float(v)) for v in values)
        )
    if skipped:
        print(f"grid: {skipped} infeasible row(s) written as nan", file=sys.stderr)
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_sample(args: argparse.Namespace) -> int:
    d = _load_epd_file(args.config)
    if not isinstance(d, Epd1):
        raise _CliFailure(EXIT_PARSE, "sampling needs a first-kind table (kind 'epd1')")
    spec = _guarded(lambda: SampleSpec(args.n, args.seed))
    summary = _guarded(lambda: sample_summary(d, spec))
    _emit(dump_json(summary), args.out)
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    cfg = _read_config(args.config)
    fam = _guarded(lambda: family_from_config(cfg))
    report = _guarded(lambda: verify_one_function(fam, args.resolution, args.tol))
    print(report.describe())
    return EXIT_OK if report.ok else EXIT_AXIOM


def _cmd_mobius(args: argparse.Namespace) -> int:
    d = _load_epd_file(args.config)
    out = _guarded(lambda: epd2_from_epd1(d) if isinstance(d, Epd1) else epd1_from_epd2(d))
    _emit(_epd_text(out, args.format), args.out)
    return EXIT_OK


def _cmd_renumber(args: argparse.Namespace) -> int:
    d = _load_epd_file(args.config)
    if not isinstance(d, Epd1):
        raise _CliFailure(EXIT_PARSE, "renumbering needs a first-kind table (kind 'epd1')")
    text = str(args.keep).strip()
    try:
        keep = int(text, 0)
    except ValueError:
        keep = _guarded(lambda: d.context.mask_from_label(text))
    out = _guarded(lambda: renumber_epd1(d, keep))
    _emit(_epd_text(out, args.format), args.out)
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace) -> int:
    n = args.n
    if not 1 <= n <= 6:
        raise _CliFailure(EXIT_PARSE, f"oracle runs need n <= 6 events, got {n}")
    trials = args.trials
    rng = np.random.Generator(np.random.PCG64(args.seed))
    ctx = EventSetContext(n)
    size = ctx.size
    checks: list[tuple[str, float]] = []

    def track(name: str, diff: float) -> None:
        checks.append((name, float(diff)))

    worst = 0.0
    diff = 0.0
    for _ in range(trials):
        v = rng.random(size)
        d1 = Epd1(ctx, v / v.sum())
        fast = epd2_from_epd1(d1)
        slow = naive_epd2_from_epd1(d1)
        diff = max(diff, float(np.max(np.abs(fast.values - slow.values))))
        back = epd1_from_epd2(fast)
        diff = max(diff, float(np.max(np.abs(back.values - d1.values))))
    track("superset transform, fast vs naive + roundtrip", diff)

    diff = 0.0
    for _ in range(trials):
        v = rng.random(size)
        d1 = Epd1(ctx, v / v.sum())
        a = np.array(marginals(d1).probs)
        b = np.array(naive_marginals(d1).probs)
        diff = max(diff, float(np.max(np.abs(a - b))))
    track("marginals, tensor vs enumeration", diff)

    diff = 0.0
    for _ in range(trials):
        v = rng.random(size)
        d1 = Epd1(ctx, v / v.sum())
        keep = int(rng.integers(0, size))
        fast = renumber_epd1(d1, keep)
        slow = naive_renumber(d1, keep)
        diff = max(diff, float(np.max(np.abs(fast.values - slow.values))))
        twice = renumber_epd1(fast, keep)
        diff = max(diff, float(np.max(np.abs(twice.values - d1.values))))
    track("renumbering, permutation vs re-derivation + involution", diff)

    diff = 0.0
    for _ in range(trials):
        probs = rng.random(n)
        d = epd_from_kopula(independent_kopula(ctx), MarginalSet.from_values(ctx, probs))
        ref = product_epd1(ctx, probs)
        diff = max(diff, float(np.max(np.abs(d.values - ref.values))))
    track("independent family vs product formula", diff)

    ctx3 = EventSetContext(3)
    diff = 0.0
    for _ in range(trials):
        px, py, pz = np.sort(rng.uniform(0.0, 0.5, 3))[::-1]
        p = MarginalSet(ctx3, (float(px), float(py), float(pz)), half_rare=True)
        w1 = frechet_bounds({}, 0b1, py, px)
        a1 = float(rng.uniform(w1.lower, w1.upper))
        w2 = frechet_bounds({}, 0b1, pz, px)
        a2 = float(rng.uniform(w2.lower, w2.upper))
        wi = frechet_bounds({0b01: a1, 0b10: a2}, 0b11, None, px)
        t_in = float(rng.uniform(wi.lower, wi.upper))
        wo = frechet_bounds({0b01: py - a1, 0b10: pz - a2}, 0b11, None, 1.0 - px)
        t_out = float(rng.uniform(wo.lower, wo.upper))
        params = FrameParams.from_triplet(a1, a2, t_in, t_out)
        d = triplet_epd(p, params)
        ref = naive_epd1_from_epd2(Epd2(ctx3, params.complete_table(p.probs)))
        diff = max(diff, float(np.max(np.abs(d.values - ref.values))))
    track("frame triplet vs alternating superset sums", diff)

    diff = 0.0
    for _ in range(trials):
        probs = rng.random(n)
        p = MarginalSet.from_values(ctx, probs)
        proj = half_rare_projection(p)
        q = [proj.point.probs[k] for k in proj.permutation]
        d = build_nset_epd(p, FrameParams.independence(q))
        ref = product_epd1(ctx, probs)
        diff = max(diff, float(np.max(np.abs(d.values - ref.values))))
    track("recursive composition (independence) vs product formula", diff)

    lines = [f"oracle cross-checks: n = {n}, trials = {trials}, seed = {args.seed}"]
    for name, value in checks:
        worst = max(worst, value)
        lines.append(f"  {name}: max |diff| = {value:.3e}")
    verdict = "agree" if worst <= args.tol else "DISAGREE"
    lines.append(f"kernels {verdict} within {args.tol:g} (worst {worst:.3e})")
    print("\n".join(lines))
    return EXIT_OK if worst <= args.tol else EXIT_ORACLE


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> _Parser:
    parser = _Parser(prog="kopula", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: _Parser, *, fmt: bool = False) -> None:
        p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
        if fmt:
            p.add_argument(
                "--format", choices=("json", "csv"), default="json", help="output format"
            )

    p = sub.add_parser("build", help="construct a table from a config")
    p.add_argument("--config", metavar="PATH", required=True)
    common(p, fmt=True)
    p.set_defaults(fn=_cmd_build)

    p = sub.add_parser("grid", help="sweep a family over marginal grid points (CSV)")
    p.add_argument("--config", metavar="PATH", required=True)
    p.add_argument("--resolution", metavar="K", type=int, default=0,
                   help="points per axis (overrides the config)")
    common(p)
    p.set_defaults(fn=_cmd_grid)

    p = sub.add_parser("sample", help="draw seeded occurrence patterns from a table")
    p.add_argument("--config", metavar="PATH", required=True, help="table JSON file")
    p.add_argument("--n", metavar="N", type=int, default=10000, help="sample count")
    p.add_argument("--seed", metavar="S", type=int, default=0)
    common(p)
    p.set_defaults(fn=_cmd_sample)

    p = sub.add_parser("validate", help="grid-check the 1-function properties of a family")
    p.add_argument("--config", metavar="PATH", required=True)
    p.add_argument("--resolution", metavar="K", type=int, default=9)
    p.add_argument("--tol", metavar="X", type=float, default=1e-8)
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("oracle", help="cross-check fast kernels against brute force")
    p.add_argument("--n", metavar="N", type=int, default=5, help="events per instance (<= 6)")
    p.add_argument("--trials", metavar="T", type=int, default=100)
    p.add_argument("--seed", metavar="S", type=int, default=0)
    p.add_argument("--tol", metavar="X", type=float, default=1e-10)
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("mobius", help="convert between the two table kinds")
    p.add_argument("--config", metavar="PATH", required=True, help="table JSON file")
    common(p, fmt=True)
    p.set_defaults(fn=_cmd_mobius)

    p = sub.add_parser("renumber", help="complement the events outside a kept subset")
    p.add_argument("--config", metavar="PATH", required=True, help="table JSON file")
    p.add_argument("--keep", metavar="MASK", required=True,
                   help="kept events: an integer mask or a label expression like x0&x2")
    common(p, fmt=True)
    p.set_defaults(fn=_cmd_renumber)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except _CliFailure as failure:
        print(failure.message, file=sys.stderr)
        return failure.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
