import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowbif import (
    BudgetExceededError,
    Frame,
    NotSimpleError,
    classify_point,
    extract_degeneracy,
    find_singular_points,
    newton_polish,
)
from flowbif.singular import CASE_INDEX, case_label, make_normal_form, with_options

from conftest import field

BOX = (-1.0, -1.0, 1.0, 1.0)

CASE_PARAMS = {
    "S1": (1, 1, 1, 2, 2),
    "S2": (1, 1, 1, 3, 3),
    "S3": (1, -1, 1, 3, 3),
    "S4": (1, 1, 1, 2, 3),
    "S5": (1, -2, 1, 2, 3),
    "S6": (1, -3, 1, 2, 3),
    "S7": (1, 1, 1, 2, 5),
}


# ---------------------------------------------------------------------------
# case labelling


@pytest.mark.parametrize("label,params", sorted(CASE_PARAMS.items()))
def test_case_label_table(label, params):
    assert case_label(*params) == (label, CASE_INDEX[label])


def test_case_label_branches_exhaustive():
    # 2k > n+1 splits on parity of n and the sign of alpha*beta
    assert case_label(1, 1, 1, 3, 4)[0] == "S1"
    assert case_label(1, 1, 1, 4, 3)[0] == "S2"
    assert case_label(-1, 1, 1, 4, 3)[0] == "S3"
    # 2k = n+1 splits on lam^2*k + alpha*beta
    assert case_label(1, 1, 2, 3, 5)[0] == "S4"
    assert case_label(1, -12, 2, 3, 5)[0] == "S5"
    assert case_label(1, -13, 2, 3, 5)[0] == "S6"
    # 2k < n+1: always S7, whatever the sign of alpha*beta
    assert case_label(1, 1, 1, 3, 7)[0] == "S7"
    assert case_label(1, -1, 1, 3, 7)[0] == "S7"


@pytest.mark.parametrize("label,params", sorted(CASE_PARAMS.items()))
def test_extract_degeneracy_on_normal_forms(label, params):
    alpha, beta, lam, k, n = params
    d = extract_degeneracy(make_normal_form(*params), (0.0, 0.0))
    assert d.case_label == label
    assert (d.k, d.n) == (k, n)
    assert d.alpha * d.beta == pytest.approx(alpha * beta, rel=1e-9)
    assert d.index == CASE_INDEX[label]


@given(st.floats(0.0, 2 * np.pi), st.sampled_from(sorted(CASE_PARAMS)))
@settings(max_examples=40)
def test_case_label_rotation_invariant(theta, label):
    f = make_normal_form(*CASE_PARAMS[label])
    rotated = f.in_frame(Frame.rotation((0.0, 0.0), theta))
    d = extract_degeneracy(rotated, (0.0, 0.0))
    assert d.case_label == label
    assert (d.k, d.n) == CASE_PARAMS[label][3:]


def test_extract_degeneracy_off_origin():
    f = make_normal_form(1, 1, 1, 2, 3).recentered((-0.4, 0.3))
    d = extract_degeneracy(f, (0.4, -0.3))
    assert d.case_label == "S4"


def test_not_simple_rejected():
    # zero Jacobian at origin: all terms quadratic or higher
    f = field({(2, 0): 1.0}, {(1, 1): -2.0})
    with pytest.raises(NotSimpleError):
        extract_degeneracy(f, (0.0, 0.0))


def test_classify_nondegenerate():
    assert classify_point(field({(1, 0): 1.0}, {(0, 1): -1.0}), (0, 0)).kind == "saddle"
    assert classify_point(field({(0, 1): -1.0}, {(1, 0): 1.0}), (0, 0)).kind == "center"
    pt = classify_point(make_normal_form(1, 1, 1, 2, 3), (0, 0))
    assert pt.kind == "degenerate"
    assert pt.degeneracy.case_label == "S4"


# ---------------------------------------------------------------------------
# newton polishing


def test_newton_polish_converges():
    f = field({(2, 0): 1.0, (0, 0): -1.0}, {(1, 1): -2.0})
    p, residual = newton_polish(f, (1.2, 0.1))
    assert residual < 1e-13
    assert np.allclose(p, (1.0, 0.0), atol=1e-12)


# ---------------------------------------------------------------------------
# global search


def test_find_single_degenerate_point(s4_field):
    pts = find_singular_points(s4_field, BOX)
    assert len(pts) == 1
    assert pts[0].kind == "degenerate"
    assert pts[0].degeneracy.case_label == "S4"
    assert np.allclose(pts[0].location, 0.0, atol=1e-9)


def test_find_split_roots(s4_field, saddle_split_family):
    eps = 1e-4
    pts = find_singular_points(saddle_split_family.at_offset(eps), (-0.1, -0.1, 0.1, 0.1))
    assert [p.kind for p in pts] == ["saddle", "center", "saddle"]
    xs = sorted(float(p.location[0]) for p in pts)
    expect = np.sqrt(2 * eps / 3)
    assert xs[0] == pytest.approx(-expect, rel=2e-2)
    assert xs[2] == pytest.approx(expect, rel=2e-2)


def test_find_nothing_in_empty_box():
    f = field({(0, 0): 1.0}, {(0, 0): 2.0})
    assert find_singular_points(f, BOX) == []


def test_find_separated_zeros():
    # u = (y, 1 - x^2): saddle at (-1, 0), center at (1, 0)
    f = field({(0, 1): 1.0}, {(0, 0): 1.0, (2, 0): -1.0})
    pts = find_singular_points(f, (-2.0, -1.0, 2.0, 1.0))
    assert [p.kind for p in pts] == ["saddle", "center"]
    assert np.allclose([p.location[0] for p in pts], [-1.0, 1.0], atol=1e-10)


def test_budget_guard():
    with pytest.raises(BudgetExceededError):
        find_singular_points(
            make_normal_form(1, 1, 1, 2, 3), BOX, with_options(max_cells=8)
        )


def test_cluster_radius_merges_near_roots(saddle_split_family):
    # at tiny eps the three roots straddle the dedup radius
    w = saddle_split_family.at_offset(1e-14)
    pts = find_singular_points(w, (-0.01, -0.01, 0.01, 0.01))
    assert len(pts) == 1  # merged: separation ~8e-8 < cluster radius


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=15)
def test_found_points_have_small_residual(seed):
    g = np.random.default_rng(seed)
    coef = {
        (i, j): float(c)
        for (i, j), c in np.ndenumerate(g.normal(size=(3, 3)))
    }
    from flowbif import Poly2, PolyVectorField

    f = PolyVectorField.from_stream(Poly2.from_terms(coef))
    scale = max(1.0, f.u.max_abs_coef(), f.v.max_abs_coef())
    for pt in find_singular_points(f, BOX):
        assert np.hypot(*f(pt.location)) <= 1e-8 * scale
