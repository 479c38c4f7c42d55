import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chaoscope.constructions import backward_shift, gallery
from chaoscope.operators import Diagonal, FiniteMatrix, Scale, SparseVector, apply, identity
from chaoscope.orbits import (
    NoCertificate,
    default_tau_grid,
    dichotomy_check,
    distance_sequence,
    li_yorke_score,
    orbit,
    pair_profile,
    profile_from_distances,
    unimodal_certify,
)

from strategies import complexes, operators, vectors_for


def e(i, c=1.0):
    return SparseVector.basis(i, c)


def test_orbit_of_2B_dies_after_six_steps():
    tr = orbit(gallery("backward-shift-2B").spec, e(5), 10)
    assert tr.norms == (1, 2, 4, 8, 16, 32, 0, 0, 0, 0, 0)
    assert not tr.overflow_flag


def test_identity_orbit_is_constant():
    assert orbit(identity(), e(0), 5).norms == (1.0,) * 6


def test_unimodal_example_orbit():
    tr = orbit(gallery("ex-3.6-unimodal-boundary").spec, e(3), 10)
    want = [1, 2, 4, 8, 8, 4, 8 / 3, 2, 8 / 5, 4 / 3, 8 / 7]
    assert np.allclose(tr.norms, want, rtol=1e-12, atol=0)


def test_overflow_truncates_with_flag():
    tr = orbit(gallery("ex-2.10-annulus").spec, e(0), 2000)
    assert tr.overflow_flag
    assert len(tr.norms) < 2001 and max(tr.norms) <= 1e300


def test_horizon_cap():
    with pytest.raises(ValueError):
        orbit(identity(), e(0), 10**6 + 1)


# --- distributional profiles ----------------------------------------------


def test_profile_of_killed_difference():
    # x - y = e_0 is a kernel vector: d = (1, 0, 0, ...)
    A = gallery("ex-2.15-dc-boundary").spec
    prof = pair_profile(A, e(0) + e(3), e(3), 10, [0.5, 1.0, 1.5])
    F = prof.F_n
    for n in range(1, 11):
        assert F[n - 1, 0] == F[n - 1, 1] == pytest.approx(1 - 1 / n)
        assert F[n - 1, 2] == 1.0


def test_profile_of_constant_distance():
    prof = profile_from_distances(np.ones(20), [0.5, 1.0, 2.0])
    assert np.all(prof.F_n[:, :2] == 0) and np.all(prof.F_n[:, 2] == 1)


def test_profile_of_growing_then_killed_pair():
    m = 8
    prof = pair_profile(gallery("backward-shift-2B").spec, e(m), e(m, 2.0), 200, [1e-3])
    assert list(prof.distances[: m + 2]) == [2.0**i for i in range(m + 1)] + [0.0]
    assert prof.upper_envelope[0] > 0.9
    assert prof.F_n[m, 0] == 0.0


def test_equal_points_rejected():
    with pytest.raises(ValueError):
        pair_profile(identity(), e(0), e(0), 5)
    with pytest.raises(ValueError):
        li_yorke_score(identity(), e(0), e(0), 5)


def test_default_tau_grid():
    g = default_tau_grid()
    assert len(g) == 33 and g[0] == pytest.approx(1e-6) and g[-1] == pytest.approx(1e2)


@given(st.lists(st.floats(0, 10, allow_nan=False), min_size=1, max_size=40))
def test_F_values_are_exact_fractions_and_monotone(ds):
    prof = profile_from_distances(ds, [0.1, 1.0, 5.0])
    for n in range(1, len(ds) + 1):
        row = prof.counts[n - 1]
        assert all(np.diff(row) >= 0)
        for k, tau in enumerate(prof.tau_grid):
            want = Fraction(sum(d < tau for d in ds[:n]), n)
            assert Fraction(int(row[k]), n) == want
            assert prof.value(n, tau) == float(want)


@given(st.data())
def test_distance_two_ways(data):
    op = data.draw(operators())
    x, y = data.draw(vectors_for(op)), data.draw(vectors_for(op))
    if x == y:
        return
    d = distance_sequence(op, x, y, 12)
    tx, ty = x, y
    for i in range(12):
        if not math.isfinite(d[i]):
            break
        direct = (tx - ty).norm()
        assert abs(direct - d[i]) <= 1e-10 * max(1.0, d[i], tx.norm(), ty.norm())
        tx, ty = op.apply(tx), op.apply(ty)


@given(st.floats(0.05, 0.95), st.lists(complexes, min_size=1, max_size=5))
def test_contractions_decrease_strictly(c, vals):
    v = SparseVector.from_array(vals)
    if not v:
        return
    op = Scale(c, Diagonal((), (1.0, -1j)))
    norms = orbit(op, v, 30).norms
    assert all(b < a for a, b in zip(norms, norms[1:]) if a > 1e-280)


# --- Li-Yorke verdicts -----------------------------------------------------


def test_identity_pair_is_separated():
    s = li_yorke_score(identity(), e(0), e(1), 50)
    assert s.verdict == "separated"
    assert s.inf_estimate == pytest.approx(math.sqrt(2)) == s.sup_estimate


def test_half_backward_pair_is_asymptotic():
    s = li_yorke_score(gallery("half-backward").spec, e(0), e(1), 100)
    assert s.verdict == "asymptotic"


def test_proximal_only_verdict():
    # d_n = 10 * 2^-n: window [20, 40] spans 9.5e-6 down to 9e-12
    s = li_yorke_score(Diagonal((), (0.5,)), e(0, 10.0), SparseVector(), 40)
    assert s.verdict == "proximal-only"


# --- certificates ----------------------------------------------------------


def test_2B_certificate():
    c = unimodal_certify(gallery("backward-shift-2B").spec, 2.0, 20, 80)
    assert c and c.witness == e(20)
    assert c.growth_norms == tuple(2.0**i for i in range(1, 21))
    assert set(c.decay_tail) == {0.0}
    assert c.verify(gallery("backward-shift-2B").spec)


def test_unimodal_boundary_certificate():
    A = gallery("ex-3.6-unimodal-boundary").spec
    c = unimodal_certify(A, 2.0, 50, 2000)
    assert c and c.witness == e(50)
    assert c.verify(A)
    for j, t in enumerate(c.decay_tail[:20]):
        assert t == pytest.approx(2.0**50 / (j + 1), rel=1e-12)


def test_identity_has_no_certificate():
    res = unimodal_certify(identity(), 1.5, 3, 12)
    assert isinstance(res, NoCertificate) and not res


def test_certificate_preconditions():
    with pytest.raises(ValueError):
        unimodal_certify(identity(), 1.0, 3, 12)
    with pytest.raises(ValueError):
        unimodal_certify(identity(), 2.0, 3, 11)


# --- dichotomy -------------------------------------------------------------


def test_half_backward_dichotomy():
    rng = np.random.default_rng(1)
    samples = [SparseVector.from_array(rng.standard_normal(10)) for _ in range(10)]
    rep = dichotomy_check(gallery("half-backward").spec, samples, 200)
    assert rep.violations == 0


def test_diagonal_single_mode_decay():
    rep = dichotomy_check(Diagonal((0.5, 2.0)), [e(0)], 100)
    s = rep.samples[0]
    assert s.liminf_proxy < 1e-8 and s.tail_norm < 1e-8 and s.consistent


def test_constant_and_nilpotent_orbits_are_consistent():
    rep = dichotomy_check(Diagonal((), (1.0,)), [e(0)], 10, delta=2.0)
    assert rep.violations == 0
    rep = dichotomy_check(FiniteMatrix([[0.0]]), [e(0)], 10)
    assert rep.samples[0].liminf_proxy == 0 and rep.violations == 0


@given(st.lists(st.sampled_from([0.3, 0.9, 1.0, 1j, 1.5, -2.0]), min_size=1, max_size=6), st.integers(0, 1000))
def test_diagonal_kernel_mass(entries, seed):
    rng = np.random.default_rng(seed)
    op = Diagonal(tuple(entries))
    x = SparseVector.from_array(rng.standard_normal(len(entries)) * (rng.random(len(entries)) < 0.6))
    if not x:
        return
    rep = dichotomy_check(op, [x], 400)
    if rep.samples[0].liminf_proxy < 1e-8 * x.norm():
        big = SparseVector({i: z for i, z in x.items() if abs(entries[i]) >= 1})
        assert big.norm() < 1e-6 * x.norm()
