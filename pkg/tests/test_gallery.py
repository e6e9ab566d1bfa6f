"""Every shipped gallery file parses and analyzes to its documented outcome."""

import pytest

from flowbif import analyze, extract_degeneracy, parse_field_file

from conftest import GALLERY

FIELD_LABELS = {
    "s1": "S1",
    "s2": "S2",
    "s3": "S3",
    "s4": "S4",
    "s5": "S5",
    "s6": "S6",
    "s7": "S7",
}

FAMILY_DECISIONS = {
    "persistent_root": ("no-bifurcation", "n/a"),
    "saddle_split": ("saddle-split", "t<t0"),
    "center_split": ("center-split", "t>t0"),
    "quartic_split": ("saddle-split", "t<t0"),
    "slow_split": ("saddle-split", "t<t0"),
}


@pytest.mark.parametrize("stem,label", sorted(FIELD_LABELS.items()))
def test_gallery_field_labels(stem, label):
    f = parse_field_file(GALLERY / f"{stem}.field")
    assert extract_degeneracy(f, (0.0, 0.0)).case_label == label


@pytest.mark.parametrize("stem,expect", sorted(FAMILY_DECISIONS.items()))
def test_gallery_family_decisions(stem, expect):
    fam = parse_field_file(GALLERY / f"{stem}.family")
    rep = analyze(fam, (0.0, 0.0), run_verification=False)
    assert (rep.decision, rep.side) == expect


def test_gallery_complete():
    assert len(list(GALLERY.glob("*.field"))) == 7
    assert len(list(GALLERY.glob("*.family"))) == 5
