import cmath
import math

import pytest
from hypothesis import given, strategies as st

from chaoscope.classifier import (
    PREDICATES,
    classify,
    random_operator,
    random_picture,
    relation_suite,
    t_and,
    t_not,
    t_or,
    unit_circle_relation,
)
from chaoscope.constructions import NAMES, backward_shift, gallery, path_picture
from chaoscope.operators import ScalarShift, Scale
from chaoscope.spectral import spectral_picture

from strategies import direct_sum_pair


def verdict(name):
    return classify(spectral_picture(gallery(name).spec))


def values(v):
    return {k: v.value(k) for k in PREDICATES}


def test_kleene_logic():
    assert t_and(True, None) is None and t_and(False, None) is False
    assert t_or(True, None) is True and t_or(False, None) is None
    assert t_not(None) is None


def test_relation_for_coincident_circle():
    rel = unit_circle_relation(spectral_picture(gallery("ex-3.6-unimodal-boundary").spec))
    assert rel.meets_essential and not rel.tangency_flag and rel.arcs == ()


def test_relation_inside_positive_disk():
    rel = unit_circle_relation(spectral_picture(gallery("fiveB").spec))
    assert not rel.meets_essential
    assert len(rel.arcs) == 1 and rel.arcs[0].region.index == 1


def test_relation_for_path_midpoint():
    rel = unit_circle_relation(path_picture(0.5).picture)
    assert rel.meets_essential and not rel.tangency_flag
    assert len(rel.contact_points) == 4
    assert all(abs(abs(z) - 1) < 1e-12 for z in rel.contact_points)


def test_annulus_outside_closure():
    v = verdict("ex-2.10-annulus")
    assert not any(v.value(k) for k in ("E1", "E2", "F", "G0", "G1", "G2"))
    assert v.in_closure_DC is False


def test_boundary_example():
    v = verdict("ex-2.15-dc-boundary")
    assert v.G1 and v.E2 and not v.F
    assert v.in_closure_DC and v.in_closure_DC_minus_interior and not v.in_interior_DC


def test_unimodal_boundary():
    v = verdict("ex-3.6-unimodal-boundary")
    assert v.E1 and v.G2 and not v.F


def test_five_b():
    v = verdict("fiveB")
    assert v.F and v.G0 and v.in_closure_DC and v.HC_closure


def test_half_backward_all_false():
    assert not any(values(verdict("half-backward")).values())


def test_tangency_is_indeterminate():
    # disk |z - 1| < 2 holds the unit circle, touching it from inside at -1
    op = ScalarShift(1.0, Scale(2.0, backward_shift()))
    rel = unit_circle_relation(spectral_picture(op))
    assert rel.tangency_flag
    v = classify(spectral_picture(op))
    assert v.E1 is None and v.E2 is None and v.F is True
    assert v.G2 is False  # meets-and-not-F is false once F holds


def test_verdict_json_shape():
    d = verdict("ex-2.15-dc-boundary").to_dict()
    assert d["G1"]["value"] is True and d["derived"]["in_interior_DC"] is False
    assert set(d) == set(PREDICATES) | {"derived"}


def test_gallery_relations_hold():
    rep = relation_suite([spectral_picture(gallery(n).spec) for n in NAMES], NAMES)
    assert rep.violations == () and rep.checked == len(NAMES)


def test_random_picture_budget():
    p = random_picture(0, 0)
    assert len(p.essential_curves) == 1 and p.essential_curves[0].is_point
    assert len(random_picture(0, 2).essential_curves) <= 2
    with pytest.raises(ValueError):
        random_picture(0, 9)


def test_random_picture_is_deterministic():
    from chaoscope.spectral import picture_to_dict

    assert picture_to_dict(random_picture(42, 6)) == picture_to_dict(random_picture(42, 6))


# --- properties ------------------------------------------------------------


@given(st.integers(0, 10**6), st.integers(0, 8))
def test_random_pictures_satisfy_relations(seed, budget):
    p = random_picture(seed, budget)
    assert len(p.essential_curves) <= max(budget, 1)
    assert relation_suite([p]).violations == ()
    for r in p.regions:
        if r.dim_ker is not None and r.dim_coker is not None:
            assert r.index == r.dim_ker - r.dim_coker
    assert p.regions[0].index == 0


@given(st.integers(0, 10**6), st.integers(1, 6), st.floats(0, 2 * math.pi))
def test_rotation_covariance(seed, budget, theta):
    op = random_operator(seed, budget)
    a = values(classify(spectral_picture(op)))
    b = values(classify(spectral_picture(Scale(cmath.exp(1j * theta), op))))
    for k in PREDICATES:
        # rounding can turn a near-tangency into an indeterminate value
        assert a[k] == b[k] or None in (a[k], b[k])


@given(st.integers(0, 10**6), st.floats(0, 2 * math.pi), st.floats(0.2, 1.5))
def test_positive_region_on_circle_forces_F(seed, theta, r):
    # a disk of index +1 centred on the unit circle always covers an arc of it
    base = random_operator(seed, 2)
    if base.domain() != (0, None):
        base = Scale(0.5, backward_shift())
    disk = ScalarShift(cmath.exp(1j * theta), Scale(r, backward_shift()))
    v = classify(spectral_picture(direct_sum_pair(base, disk)))
    assert v.F is True and v.G0 is True


@given(st.integers(0, 10**6), st.integers(1, 8))
def test_F_witness_verifies(seed, budget):
    p = random_picture(seed, budget)
    v = classify(p)
    if v.F:
        z = complex(*v.witnesses["F"])
        assert abs(abs(z) - 1) <= 1e-12
        assert p.region_at(z).index > 0
