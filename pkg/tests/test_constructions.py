import numpy as np
import pytest
from hypothesis import given, strategies as st

from chaoscope.classifier import classify
from chaoscope.constructions import NAMES, gallery, gallery_names, identity_perturbation, path_picture
from chaoscope.operators import SparseVector, apply
from chaoscope.spectral import picture_to_dict, spectral_picture


@pytest.mark.parametrize("name", NAMES)
def test_gallery_entry_reproduces_expected_data(name):
    assert gallery(name).mismatches() == []


def test_gallery_names_and_unknown():
    assert gallery_names() == list(NAMES) and len(NAMES) == 8
    with pytest.raises(KeyError):
        gallery("nope")


def test_gallery_mismatch_is_named():
    from dataclasses import replace

    e = gallery("fiveB")
    bad = replace(e, expected_verdict={"F": False})
    assert bad.mismatches() == ["F: expected False, got True"]


def test_five_b_squared_acts_as_square():
    B5 = gallery("fiveB").spec
    B5sq = gallery("fiveB-squared").spec
    for i in range(12):
        assert apply(B5sq, SparseVector.basis(i)) == apply(B5, SparseVector.basis(i), 2) * 0.2


# --- identity perturbation -------------------------------------------------


def test_norm_of_K_two_ways():
    r = identity_perturbation(0.5, (4, 16, 64), report_blocks=())
    assert r.norm_of_K == 0.25 < 0.5
    assert abs(r.norm_of_K - r.norm_of_K_numeric) <= 1e-10


def test_perturbation_acts_as_identity_plus_chain():
    r = identity_perturbation(0.5, (4, 16), report_blocks=())
    top = SparseVector.basis(3)
    assert apply(r.spec, top) == top + SparseVector.basis(2, 0.25)
    tail = SparseVector.basis(100)
    assert apply(r.spec, tail) == tail


def test_binomial_growth_inside_block():
    r = identity_perturbation(0.5, (4, 16), report_blocks=())
    v = apply(r.spec, SparseVector.basis(19), 5)  # top of the 16-block
    from math import comb

    for j in range(6):
        assert v[19 - j] == pytest.approx(comb(5, j) * 0.25**j, rel=1e-14)


def test_scramble_report_on_small_block():
    r = identity_perturbation(0.5, (4, 16), report_blocks=(16,))
    (b,) = r.scramble_report
    assert b["horizon"] == 64 and b["separation"] >= 0.5
    assert b["finite_witness_family"] is True


@pytest.mark.parametrize("eps", [0.0, 1.0, -0.3])
def test_epsilon_out_of_range(eps):
    with pytest.raises(ValueError):
        identity_perturbation(eps, (4,))


def test_block_dims_must_increase():
    with pytest.raises(ValueError):
        identity_perturbation(0.5, (16, 4))


# --- path ------------------------------------------------------------------


def test_path_endpoints_match_gallery():
    assert picture_to_dict(path_picture(-1).picture) == picture_to_dict(spectral_picture(gallery("fiveB").spec))
    assert picture_to_dict(path_picture(2).picture) == picture_to_dict(
        spectral_picture(gallery("fiveB-squared").spec)
    )


def test_path_midpoint_disks():
    pt = path_picture(0.5)
    (a, b) = pt.positive_index_regions
    assert (a.center, a.radius, b.center, b.radius) == (-2.5, 2.5, 2.5, 2.5)
    assert pt.picture.region_at(-2.5).index == 2 and pt.picture.region_at(2.5).index == 1


def test_path_out_of_range():
    with pytest.raises(ValueError):
        path_picture(2.5)


@pytest.mark.parametrize("t", np.linspace(-1, 2, 31))
def test_path_stays_in_interior(t):
    assert classify(path_picture(t).picture).F is True


def _curve_shift(p, q):
    """Largest |dc| + |dr| over the best matching of curves (a bound on the
    Hausdorff distance between the curve sets)."""
    from itertools import permutations

    a, b = p.essential_curves, q.essential_curves
    assert len(a) == len(b)
    return min(
        max(abs(x.center - y.center) + abs(x.radius - y.radius) for x, y in zip(a, perm))
        for perm in permutations(b)
    )


@given(st.floats(0.01, 0.98), st.floats(1e-4, 0.01))
def test_path_is_lipschitz(t, dt):
    assert _curve_shift(path_picture(t).picture, path_picture(t + dt).picture) <= 10 * dt + 1e-12
