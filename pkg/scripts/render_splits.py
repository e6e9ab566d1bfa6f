#!/usr/bin/env python3
"""Render separatrix portraits of the split families on both sides of t0.

Writes SVG + CSV pairs into --dest (default out/).  The saddle-split family
shows one saddle turning into two saddles sharing connections with a center
between them; the center-split family shows the figure-eight.
"""

import argparse
import pathlib

from flowbif import parse_field_file, render_portrait, write_portrait

# family file -> (eps magnitude, box half-width)
PORTRAITS = {
    "saddle_split.family": (1e-2, 0.3),
    "center_split.family": (1e-3, 0.3),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gallery", default="gallery", type=pathlib.Path)
    ap.add_argument("--dest", default="out", type=pathlib.Path)
    args = ap.parse_args()
    args.dest.mkdir(parents=True, exist_ok=True)

    for name, (mag, half) in PORTRAITS.items():
        family = parse_field_file(args.gallery / name)
        box = (-half, -half, half, half)
        for eps in (mag, -mag):
            side = "minus" if eps < 0 else "plus"
            portrait = render_portrait(family.at_offset(eps), box)
            stem = name.split(".")[0]
            svg, csv = write_portrait(portrait, args.dest / f"{stem}_{side}.svg")
            sig = portrait.signature
            print(f"{svg}: nodes={sig.nodes} loops={sig.loops} index={sig.index_total}")


if __name__ == "__main__":
    main()
