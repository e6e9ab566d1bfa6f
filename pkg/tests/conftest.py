import pathlib

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from flowbif import Poly2, PolyVectorField, TimeFamily
from flowbif.singular import make_normal_form

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

GALLERY = pathlib.Path(__file__).resolve().parent.parent / "gallery"


def field(u_terms, v_terms) -> PolyVectorField:
    return PolyVectorField(Poly2.from_terms(u_terms), Poly2.from_terms(v_terms))


@pytest.fixture
def s4_field():
    return make_normal_form(1, 1, 1, 2, 3)


@pytest.fixture
def saddle_split_family(s4_field):
    # base saddle splits into two saddles and a center as eps turns positive
    return TimeFamily(s4_field, field({(0, 0): 1.0}, {}))


@pytest.fixture
def persistent_family(s4_field):
    return TimeFamily(s4_field, field({}, {(0, 0): 1.0}))


@pytest.fixture
def center_split_family():
    base = make_normal_form(1, -1, 1, 3, 3)
    return TimeFamily(base, field({}, {(1, 0): 1.0}))


def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
