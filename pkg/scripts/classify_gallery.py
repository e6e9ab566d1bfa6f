#!/usr/bin/env python3
"""Classify every gallery field and analyze every gallery family.

Prints one row per file; a quick end-to-end sanity sweep over the shipped
examples.  Run from the repository root: python scripts/classify_gallery.py
"""

import argparse
import pathlib

from flowbif import (
    AnalysisRefusal,
    CurveZeroError,
    analyze,
    classify_point,
    parse_field_file,
    winding_index,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gallery", default="gallery", type=pathlib.Path)
    ap.add_argument("--radius", type=float, default=0.1)
    args = ap.parse_args()

    for path in sorted(args.gallery.glob("*.field")):
        field = parse_field_file(path)
        pt = classify_point(field, (0.0, 0.0))
        try:
            idx = f"{winding_index(field, (0.0, 0.0), args.radius).winding:+d}"
        except CurveZeroError:
            # the S5 normal form vanishes along a whole curve
            idx = "n/a (zero on curve)"
        d = pt.degeneracy
        label = d.case_label if d is not None else pt.kind
        print(f"{path.name:24s} {label:10s} winding={idx}")

    for path in sorted(args.gallery.glob("*.family")):
        family = parse_field_file(path)
        try:
            rep = analyze(family, (0.0, 0.0), run_verification=False)
        except AnalysisRefusal as exc:
            print(f"{path.name:24s} refused: {exc}")
            continue
        print(
            f"{path.name:24s} {rep.degeneracy.case_label:10s} "
            f"decision={rep.decision} side={rep.side}"
        )


if __name__ == "__main__":
    main()
