import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chaoscope.constructions import gallery
from chaoscope.geometry import sign_vector
from chaoscope.operators import (
    Diagonal,
    FiniteMatrix,
    FiniteRankPerturbation,
    ScalarShift,
    Scale,
    SparseVector,
    Term,
    UnilateralShift,
    WeightRule,
    adjoint,
)
from chaoscope.spectral import (
    BoundaryPointError,
    formal_cokernel_dim,
    formal_kernel_dim,
    picture_from_dict,
    picture_to_csv,
    picture_to_dict,
    spectral_picture,
    weyl_spectrum,
)

from strategies import complexes, direct_sum_pair, operators, positive


def radii(p):
    return sorted(c.radius for c in p.essential_curves)


def test_annulus_picture():
    p = spectral_picture(gallery("ex-2.10-annulus").spec)
    assert radii(p) == [0.5, 2.0]
    ring = p.region_at(1.0)
    assert (ring.index, ring.dim_ker, ring.dim_coker, ring.in_spectrum) == (-1, 0, 1, True)
    inner = p.region_at(0.1)
    assert (inner.index, inner.dim_ker, inner.dim_coker, inner.in_spectrum) == (0, 0, 0, False)


def test_boundary_example_has_kernel_and_cokernel():
    p = spectral_picture(gallery("ex-2.15-dc-boundary").spec)
    r = p.region_at(0.3 + 0.2j)
    assert (r.index, r.dim_ker, r.dim_coker) == (0, 1, 1)
    assert r.in_spectrum


def test_five_b_and_square():
    assert spectral_picture(gallery("fiveB").spec).region_at(1).index == 1
    sq = spectral_picture(gallery("fiveB-squared").spec).region_at(1)
    assert (sq.index, sq.dim_ker) == (2, 2)


def test_unbounded_region_first_and_trivial():
    p = spectral_picture(gallery("ex-3.6-unimodal-boundary").spec)
    r = p.regions[0]
    assert r is p.unbounded_region
    assert (r.index, r.in_spectrum) == (0, False)


def test_formal_dims_annulus():
    A = gallery("ex-2.10-annulus").spec
    assert formal_kernel_dim(A, 1.0) == 0
    assert formal_cokernel_dim(A, 1.0) == 1
    with pytest.raises(BoundaryPointError):
        formal_kernel_dim(A, 2.0)


def test_finite_matrix_eigenvalues_become_sigma_zero():
    p = spectral_picture(FiniteMatrix(np.diag([0.5, 0.5, 2.0])))
    assert p.essential_curves == ()
    assert sorted((z.real, n) for z, n in p.sigma_zero) == [(0.5, 2), (2.0, 1)]


def test_nilpotent_chain_has_single_eigenvalue():
    m = np.diag(np.full(63, 0.25), 1)
    p = spectral_picture(FiniteMatrix(m))
    assert p.sigma_zero == ((0j, 64),)


def test_diagonal_tail_gives_point_curves_and_head_eigenvalues():
    p = spectral_picture(Diagonal((3.0,), (0.5, 2.0)))
    assert sorted(c.center.real for c in p.essential_curves) == [0.5, 2.0]
    assert all(c.is_point for c in p.essential_curves)
    assert p.sigma_zero == ((3 + 0j, 1),)


def test_perturbed_infinite_operator_reports_unknown_kernel():
    B = UnilateralShift("backward", WeightRule.constant(2.0, "N"))
    op = FiniteRankPerturbation(B, (Term(SparseVector.basis(0), SparseVector.basis(3), 1.0),))
    p = spectral_picture(op)
    r = p.region_at(0.5)
    assert r.index == 1 and r.dim_ker is None and not p.sigma_zero_known
    assert formal_kernel_dim(op, 0.5) is None


def test_perturbed_finite_operator_is_exact():
    op = FiniteRankPerturbation(FiniteMatrix(np.zeros((2, 2))), (Term(SparseVector.basis(0), SparseVector.basis(0), 3.0),))
    p = spectral_picture(op)
    assert p.sigma_zero_known
    assert sorted(z.real for z, _ in p.sigma_zero) == [0.0, 3.0]


def test_weyl_spectrum_of_boundary_example_is_a_circle():
    w = weyl_spectrum(spectral_picture(gallery("ex-2.15-dc-boundary").spec))
    assert not w.regions and len(w.curves) == 1
    assert w.contains(2.0) and not w.contains(0.5)


def test_picture_dict_round_trip_and_csv():
    p = spectral_picture(gallery("ex-3.6-unimodal-boundary").spec)
    q = picture_from_dict(picture_to_dict(p))
    assert picture_to_dict(q) == picture_to_dict(p)
    lines = picture_to_csv(p, points=8).splitlines()
    assert lines[0] == "curve,k,x,y" and len(lines) == 1 + 2 * 9


# --- properties ------------------------------------------------------------


def _samples(p, rng, k=20):
    reach = max([abs(c.center) + c.radius for c in p.essential_curves] + [1.0])
    pts = [r.representative for r in p.regions]
    pts += [complex(rng.uniform(-1.2, 1.2) * reach, rng.uniform(-1.2, 1.2) * reach) for _ in range(k)]
    return [z for z in pts if not p.on_curve(z, 1e-9)]


@st.composite
def n_operators(draw):
    """Operators on l2(N): affine unilateral shifts and diagonals with tails."""
    if draw(st.booleans()):
        B = UnilateralShift(draw(st.sampled_from(["forward", "backward"])), WeightRule.constant(draw(positive), "N"))
        return ScalarShift(draw(complexes), Scale(draw(complexes), B))
    tail = draw(st.lists(complexes, min_size=1, max_size=2))
    return Diagonal((), tuple(tail))


@given(n_operators(), n_operators(), st.integers(0, 100))
def test_index_additivity(a, b, seed):
    pa, pb = spectral_picture(a), spectral_picture(b)
    ps = spectral_picture(direct_sum_pair(a, b))
    for z in _samples(ps, random.Random(seed)):
        if pa.on_curve(z, 1e-9) or pb.on_curve(z, 1e-9):
            continue
        assert ps.region_at(z).index == pa.region_at(z).index + pb.region_at(z).index


@given(operators(), st.integers(0, 100))
def test_finite_rank_invariance(op, seed):
    lo, _ = op.domain()
    base = 0 if lo is None or lo >= 0 else lo
    if lo is None:
        base = 0
    u, v = SparseVector.basis(base), SparseVector.basis(base + 1 if op.domain()[1] != base else base)
    pert = FiniteRankPerturbation(op, (Term(u, v, 0.7 - 0.2j),))
    p, q = spectral_picture(op), spectral_picture(pert)
    if op.domain()[1] is not None:
        return  # finite-dimensional: no essential data to compare
    assert len(p.essential_curves) == len(q.essential_curves)
    for c, d in zip(p.essential_curves, q.essential_curves):
        assert c.same_as(d)
    for z in _samples(p, random.Random(seed)):
        assert p.region_at(z).index == q.region_at(z).index


@given(operators())
def test_duality(op):
    p, q = spectral_picture(op), spectral_picture(adjoint(op))
    for r in p.regions:
        # matched by inside/outside pattern, exact even for tiny circles
        signs = sign_vector(q.essential_curves, r.representative.conjugate())
        assert q.region_with(signs).index == -r.index


@given(operators())
def test_resolvent_outside_norm_bound(op):
    p = spectral_picture(op)
    for r in p.regions:
        if abs(r.representative) > p.norm_bound * (1 + 1e-9):
            assert r.index == 0 and not r.in_spectrum
            assert r.dim_ker in (0, None) and r.dim_coker in (0, None)


@given(operators())
def test_fredholm_arithmetic(op):
    for r in spectral_picture(op).regions:
        if r.dim_ker is not None and r.dim_coker is not None:
            assert r.index == r.dim_ker - r.dim_coker


@given(operators())
def test_kernel_dims_agree_with_formal_query(op):
    p = spectral_picture(op)
    for r in p.regions:
        if p.on_curve(r.representative):
            continue  # cell thinner than the curve tolerance
        k = formal_kernel_dim(op, r.representative)
        assert k == r.dim_ker or r.dim_ker is None
