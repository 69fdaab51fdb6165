#!/usr/bin/env python3
"""Sweep correlation coordinates for a three-event set and export tables.

Fixes ordered half-rare marginals, then walks (kor_xy, kor_in) over a
square grid with kor_xz and kor_out held, building the full table at
each point.  The CSV records the four frame parameters and the whole
eight-cell table, so downstream plotting can show how mass migrates as
the coordinates move.

    python3 scripts/kor_sweep.py --marginals 0.5 0.4 0.3 --resolution 21
"""

import argparse
import csv
import sys

import numpy as np

import kopula as ko


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--marginals", type=float, nargs=3, default=(0.5, 0.4, 0.3),
                    metavar=("PX", "PY", "PZ"),
                    help="ordered half-rare marginals, largest first")
    ap.add_argument("--resolution", type=int, default=21, help="points per swept axis")
    ap.add_argument("--kor-xz", type=float, default=0.0)
    ap.add_argument("--kor-out", type=float, default=0.0)
    ap.add_argument("--modification", type=int, default=1, choices=(1, 2))
    ap.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    args = ap.parse_args()

    ctx = ko.EventSetContext(3)
    try:
        p = ko.MarginalSet(ctx, tuple(args.marginals), half_rare=True)
    except ko.KopulaError as exc:
        sys.exit(str(exc))

    fp = sys.stdout if args.out == "-" else open(args.out, "w", encoding="utf-8", newline="")
    writer = csv.writer(fp)
    writer.writerow(
        ["kor_xy", "kor_in", "a1", "a2", "t_in", "t_out"]
        + [f"v_{m}" for m in range(8)]
    )
    axis = np.linspace(-1.0, 1.0, args.resolution)
    skipped = 0
    for kxy in axis:
        for kin in axis:
            try:
                params = ko.params_from_kor3(
                    p, float(kxy), args.kor_xz, float(kin), args.kor_out,
                    modification=args.modification,
                )
                d = ko.triplet_epd(p, params)
            except ko.KopulaError as exc:
                skipped += 1
                print(f"skip kor_xy={kxy:+.3f} kor_in={kin:+.3f}: {exc}", file=sys.stderr)
                continue
            t = params.intersections
            t_in = t[0b111]
            writer.writerow(
                [repr(float(kxy)), repr(float(kin)),
                 repr(t[0b011]), repr(t[0b101]), repr(t_in), repr(t[0b110] - t_in)]
                + [repr(float(v)) for v in d.values]
            )
    if fp is not sys.stdout:
        fp.close()
        print(f"wrote {args.out} ({args.resolution ** 2 - skipped} rows, {skipped} skipped)")
    elif skipped:
        print(f"{skipped} grid points skipped", file=sys.stderr)


if __name__ == "__main__":
    main()
