"""
Named example operators with their expected spectral data.

Each entry stores what the spectral engine and the classifier must reproduce,
so a mismatch names the disagreeing quantity.  Also here: a compact
perturbation ``I + K`` of the identity with a scrambling report, and the
spectral pictures along a path from ``5B`` to ``5B^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .classifier import ClassificationVerdict, classify
from .geometry import Circle
from .operators import (
    BilateralShift,
    Block,
    Const,
    Diagonal,
    DirectSum,
    FiniteMatrix,
    OperatorSpec,
    Rational,
    ScalarShift,
    Scale,
    SparseVector,
    UnilateralShift,
    WeightRule,
    Zone,
    zero_operator,
)
from .oracle import window_matrix
from .orbits import li_yorke_score, pair_profile
from .spectral import Piece, SpectralPicture, picture_from_pieces, spectral_picture

__all__ = [
    "NAMES",
    "ExpectedRegion",
    "ExpectedPicture",
    "GalleryEntry",
    "gallery",
    "gallery_names",
    "backward_shift",
    "PerturbationReport",
    "identity_perturbation",
    "PathPoint",
    "path_picture",
]

GEOM_TOL = 1e-12


def backward_shift() -> UnilateralShift:
    """The unweighted backward shift B on l2(N)."""
    return UnilateralShift("backward", WeightRule.constant(1.0, "N"))


@dataclass(frozen=True)
class ExpectedRegion:
    point: complex
    index: int
    dim_ker: int | None = None
    dim_coker: int | None = None
    in_spectrum: bool | None = None


@dataclass(frozen=True)
class ExpectedPicture:
    """Expected curves (center, radius) and region data sampled at points."""

    curves: tuple[tuple[complex, float], ...]
    regions: tuple[ExpectedRegion, ...]
    sigma_zero: tuple[complex, ...] = ()

    def mismatches(self, p: SpectralPicture) -> list[str]:
        out = []
        got = sorted((c.radius, c.center.real, c.center.imag) for c in p.essential_curves)
        want = sorted((float(r), complex(c).real, complex(c).imag) for c, r in self.curves)
        if len(got) != len(want) or any(
            max(abs(a - b) for a, b in zip(g, w)) > GEOM_TOL for g, w in zip(got, want)
        ):
            out.append(f"curves: expected {want}, got {got}")
        for e in self.regions:
            r = p.region_at(e.point)
            if r is None:
                out.append(f"point {e.point} lies on a curve")
                continue
            for name in ("index", "dim_ker", "dim_coker", "in_spectrum"):
                want_v = getattr(e, name)
                if want_v is not None and getattr(r, name) != want_v:
                    out.append(f"{name} at {e.point}: expected {want_v}, got {getattr(r, name)}")
        eigs = sorted((round(z.real, 9), round(z.imag, 9)) for z, _ in p.sigma_zero)
        want_e = sorted((round(z.real, 9), round(z.imag, 9)) for z in self.sigma_zero)
        if eigs != want_e:
            out.append(f"sigma_zero: expected {want_e}, got {eigs}")
        return out


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    spec: OperatorSpec
    expected_picture: ExpectedPicture
    expected_verdict: dict
    provenance: str
    description: str = ""

    def picture(self) -> SpectralPicture:
        return spectral_picture(self.spec)

    def mismatches(self) -> list[str]:
        """Every disagreement between computed and stored data (empty if none)."""
        p = self.picture()
        out = self.expected_picture.mismatches(p)
        v = classify(p)
        for name, want in self.expected_verdict.items():
            if v.value(name) != want:
                out.append(f"{name}: expected {want}, got {v.value(name)}")
        return out


ALL_FALSE = dict.fromkeys(("E1", "E2", "F", "G0", "G1", "G2"), False)


def _annulus() -> GalleryEntry:
    w = WeightRule((Zone(None, -2, Const(0.5)), Zone(-1, None, Const(2.0))))
    return GalleryEntry(
        "ex-2.10-annulus",
        BilateralShift("forward", w),
        ExpectedPicture(
            ((0, 0.5), (0, 2.0)),
            (
                ExpectedRegion(0.0, 0, 0, 0, False),
                ExpectedRegion(1.0, -1, 0, 1, True),
                ExpectedRegion(3.0, 0, 0, 0, False),
            ),
        ),
        ALL_FALSE,
        "worked example: annulus spectrum, interior of the non-chaotic set",
        "forward shift, weight 1/2 for i <= -2 and 2 for i > -2",
    )


def _dc_boundary() -> GalleryEntry:
    w = WeightRule.constant(2.0, "Z", [(0, 0.0)])
    return GalleryEntry(
        "ex-2.15-dc-boundary",
        BilateralShift("backward", w),
        ExpectedPicture(
            ((0, 2.0),),
            (ExpectedRegion(0.0, 0, 1, 1, True), ExpectedRegion(3.0, 0, 0, 0, False)),
        ),
        {"E1": False, "E2": True, "F": False, "G0": False, "G1": True, "G2": False},
        "worked example: distributionally chaotic, not interior",
        "backward shift, weight 2 except a zero weight at index 0",
    )


def _unimodal_boundary() -> GalleryEntry:
    # |i| / (|i| + 1) for i <= -1, written as (-i) / (1 - i)
    w = WeightRule(
        (
            Zone(None, -1, Rational((0.0, -1.0), (1.0, -1.0), 1.0)),
            Zone(0, 0, Const(1.0)),
            Zone(1, None, Const(2.0)),
        )
    )
    return GalleryEntry(
        "ex-3.6-unimodal-boundary",
        BilateralShift("backward", w),
        ExpectedPicture(
            ((0, 1.0), (0, 2.0)),
            (
                ExpectedRegion(0.0, 0, 0, 0, False),
                ExpectedRegion(1.5, 1, 1, 0, True),
                ExpectedRegion(3.0, 0, 0, 0, False),
            ),
        ),
        {"E1": True, "F": False, "G0": True, "G2": True},
        "worked example: norm-unimodal, not interior",
        "backward shift, weight 2 for i >= 1, 1 at 0, |i|/(|i|+1) for i <= -1",
    )


def _scaled_backward(name: str, c: float, provenance: str, verdict: dict) -> GalleryEntry:
    inside = 0.5 * c
    index = 1 if c > 0 else 0
    return GalleryEntry(
        name,
        Scale(c, backward_shift()),
        ExpectedPicture(
            ((0, abs(c)),),
            (ExpectedRegion(inside, index, index, 0, True), ExpectedRegion(abs(c) + 1, 0, 0, 0, False)),
        ),
        verdict,
        provenance,
        f"{c:g} times the backward shift on l2(N)",
    )


def _five_b_squared() -> GalleryEntry:
    B = backward_shift()
    return GalleryEntry(
        "fiveB-squared",
        Scale(5.0, DirectSum((Block(0, B, stride=2), Block(1, B, stride=2)))),
        ExpectedPicture(
            ((0, 5.0),),
            (ExpectedRegion(0.5, 2, 2, 0, True), ExpectedRegion(6.0, 0, 0, 0, False)),
        ),
        {"F": True, "G0": True, "E1": False, "E2": True, "HC_closure": True},
        "worked example: endpoint of a path inside the interior",
        "25 B^2 split over even and odd indices; B^2 = B (+) B",
    )


def _diagonal_mixed() -> GalleryEntry:
    return GalleryEntry(
        "diagonal-mixed",
        Diagonal((), (0.5, 2.0, 1j)),
        ExpectedPicture(
            ((0.5, 0.0), (2.0, 0.0), (1j, 0.0)),
            (ExpectedRegion(0.0, 0, 0, 0, False), ExpectedRegion(3.0, 0, 0, 0, False)),
        ),
        {"E1": True, "E2": False, "F": False, "G0": True, "G1": False, "G2": True, "HC_closure": False},
        "derived: normal operator, contracting, expanding and unimodular modes",
        "diagonal with entries 1/2, 2, i repeated",
    )


_BUILDERS = {
    "ex-2.10-annulus": _annulus,
    "ex-2.15-dc-boundary": _dc_boundary,
    "ex-3.6-unimodal-boundary": _unimodal_boundary,
    "backward-shift-2B": lambda: _scaled_backward(
        "backward-shift-2B", 2.0, "worked example: restriction of the boundary example",
        {"F": True, "G0": True, "HC_closure": True},
    ),
    "fiveB": lambda: _scaled_backward(
        "fiveB", 5.0, "worked example: start of a path inside the interior",
        {"F": True, "G0": True, "E1": False, "E2": True, "HC_closure": True},
    ),
    "fiveB-squared": _five_b_squared,
    "half-backward": lambda: _scaled_backward(
        "half-backward", 0.5, "derived: spectrum inside the open unit disk", ALL_FALSE
    ),
    "diagonal-mixed": _diagonal_mixed,
}

NAMES = tuple(_BUILDERS)


def gallery_names() -> list[str]:
    return list(NAMES)


def gallery(name: str) -> GalleryEntry:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown gallery entry {name!r}; known: {', '.join(NAMES)}") from None


# ---------------------------------------------------------------------------
# compact perturbation of the identity


def _chain(d: int, w: float) -> FiniteMatrix:
    """Nilpotent backward shift on C^d with constant weight ``w``."""
    m = np.zeros((d, d), dtype=complex)
    for i in range(1, d):
        m[i - 1, i] = w
    return FiniteMatrix(m)


@dataclass(frozen=True)
class PerturbationReport:
    epsilon: float
    block_dims: tuple[int, ...]
    offsets: tuple[int, ...]
    spec: OperatorSpec
    K: OperatorSpec
    norm_of_K: float
    norm_of_K_numeric: float
    scramble_report: tuple[dict, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "block_dims": list(self.block_dims),
            "norm_of_K": self.norm_of_K,
            "norm_of_K_numeric": self.norm_of_K_numeric,
            "norm_below_epsilon": self.norm_of_K < self.epsilon,
            "scramble_report": list(self.scramble_report),
        }


def _block_report(op: OperatorSpec, top: int, d: int, eps: float, horizon: int) -> dict:
    e_top = SparseVector.basis(top)
    x = SparseVector.basis(top - d + 1)
    prof = pair_profile(op, x, x + e_top, horizon, [eps / 4, 2.0])
    F = prof.F_n
    hi2, lo_eps = float(F[:, 1].max()), float(F[:, 0].min())
    # a small multiple of e_top, scaled so the window [N/2, N] crosses both thresholds
    half = SparseVector(e_top)
    for _ in range(math.ceil(horizon / 2)):
        half = op.apply(half)
    s = 0.5e-6 / half.norm()
    ly = li_yorke_score(op, SparseVector(), e_top * s, horizon)
    return {
        "block_dim": d,
        "horizon": horizon,
        "pair": {"x": top - d + 1, "y": "x + e_top", "top": top},
        "max_F_at_2": hi2,
        "min_F_at_eps_over_4": lo_eps,
        "separation": hi2 - lo_eps,
        "li_yorke_witness_scale": s,
        "li_yorke": ly.to_dict(),
        "finite_witness_family": True,
    }


def identity_perturbation(epsilon: float, block_dims=(4, 16, 64, 256), report_blocks=None) -> PerturbationReport:
    """``I + K`` with K block-diagonal nilpotent backward shifts of weight eps/2.

    ``report_blocks`` selects which block dimensions get a scrambling report
    (all by default); each uses horizon ``4 * d``.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    dims = tuple(int(d) for d in block_dims)
    if not dims or any(d < 2 for d in dims) or any(b <= a for a, b in zip(dims, dims[1:])):
        raise ValueError("block_dims must be an increasing list of integers >= 2")
    w = epsilon / 2
    blocks, offsets, pos = [], [], 0
    for d in dims:
        blocks.append(Block(pos, _chain(d, w)))
        offsets.append(pos)
        pos += d
    blocks.append(Block(pos, zero_operator()))
    K = DirectSum(tuple(blocks))
    spec = ScalarShift(1.0, K)
    symbolic = max(float(np.abs(b.op.matrix).max()) for b in blocks[:-1])
    numeric = float(np.linalg.svd(window_matrix(K, 0, pos), compute_uv=False)[0])
    chosen = dims if report_blocks is None else tuple(report_blocks)
    reports = tuple(
        _block_report(spec, off + d - 1, d, epsilon, 4 * d)
        for off, d in zip(offsets, dims)
        if d in chosen
    )
    return PerturbationReport(float(epsilon), dims, tuple(offsets), spec, K, symbolic, numeric, reports)


# ---------------------------------------------------------------------------
# path from 5B to 5B^2


@dataclass(frozen=True)
class PathPoint:
    t: float
    picture: SpectralPicture
    positive_index_regions: tuple[Circle, ...]

    def to_dict(self) -> dict:
        from .spectral import picture_to_dict

        return {
            "t": self.t,
            "picture": picture_to_dict(self.picture),
            "positive_index_regions": [
                {"center": [c.center.real, c.center.imag], "radius": c.radius}
                for c in self.positive_index_regions
            ],
        }


def _disk_piece(c: Circle, index: int) -> Piece:
    def local(z):
        inside = c.inside(z)
        return inside, index if inside else 0, 0

    return Piece([c], local)


def path_picture(t: float) -> PathPoint:
    """Spectral picture at time ``t`` in [-1, 2] of the path from 5B to 5B^2.

    For ``0 < t < 1`` the picture consists of the index-2 disk
    ``|z + 5(1-t)| < 5t`` and the index-1 disk ``|z - 5t| < 5(1-t)``; kernel
    dimensions there are not determined and are reported unknown.
    """
    t = float(t)
    if not -1.0 <= t <= 2.0:
        raise ValueError("t must lie in [-1, 2]")
    if t <= 0:
        p = gallery("fiveB").picture()
        return PathPoint(t, p, (Circle(0, 5.0),))
    if t >= 1:
        p = gallery("fiveB-squared").picture()
        return PathPoint(t, p, (Circle(0, 5.0),))
    left = Circle(-5 * (1 - t), 5 * t)
    right = Circle(5 * t, 5 * (1 - t))
    p = picture_from_pieces([_disk_piece(left, 2), _disk_piece(right, 1)], 5.0, exact=False)
    return PathPoint(t, p, (left, right))
