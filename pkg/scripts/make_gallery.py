#!/usr/bin/env python3
"""Regenerate gallery/ field and family files from the normal-form builder.

Run from the repository root:  python scripts/make_gallery.py
"""

import argparse
import pathlib

from flowbif import PolyVectorField, Poly2, TimeFamily, family_to_text, field_to_text
from flowbif.singular import make_normal_form

# one representative per case label: (alpha, beta, lam, k, n)
CASES = {
    "s1": (1, 1, 1, 2, 2),
    "s2": (1, 1, 1, 3, 3),
    "s3": (1, -1, 1, 3, 3),
    "s4": (1, 1, 1, 2, 3),
    "s5": (1, -2, 1, 2, 3),  # lam^2*k + alpha*beta = 0
    "s6": (1, -3, 1, 2, 3),
    "s7": (1, 1, 1, 2, 5),
}


def _accel(terms_u, terms_v):
    return PolyVectorField(Poly2.from_terms(terms_u), Poly2.from_terms(terms_v))


# family name -> (base params, u1 terms, expected decision)
FAMILIES = {
    "persistent_root": ((1, 1, 1, 2, 3), ({}, {(0, 0): 1.0})),
    "saddle_split": ((1, 1, 1, 2, 3), ({(0, 0): 1.0}, {})),
    "center_split": ((1, -1, 1, 3, 3), ({}, {(1, 0): 1.0})),
    "quartic_split": ((1, 1, 1, 3, 5), ({}, {(1, 0): 1.0})),
    "slow_split": ((1, 1, 1, 3, 7), ({}, {(1, 0): 1.0})),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--dest", default="gallery", type=pathlib.Path, help="output directory"
    )
    args = ap.parse_args()
    args.dest.mkdir(parents=True, exist_ok=True)

    for name, params in sorted(CASES.items()):
        path = args.dest / f"{name}.field"
        path.write_text(field_to_text(make_normal_form(*params), name))
        print("wrote", path)

    for name, (params, (tu, tv)) in sorted(FAMILIES.items()):
        fam = TimeFamily(make_normal_form(*params), _accel(tu, tv))
        path = args.dest / f"{name}.family"
        path.write_text(family_to_text(fam))
        print("wrote", path)


if __name__ == "__main__":
    main()
