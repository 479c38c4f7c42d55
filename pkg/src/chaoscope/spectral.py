"""
Spectral pictures of the supported operator class.

For a zero-free weighted shift whose weights converge to ``r`` at an
infinite end, the eigenvector recurrence ``x_{i+1} = (w_i / lam) x_i`` (or its
backward analogue) is square-summable at that end exactly when the ratio
``r / |lam|`` (resp. ``|lam| / r``) is below one.  That decides kernel and
cokernel dimensions everywhere off the circles ``|lam| = r``; direct sums add
them, affine maps ``a*S + b`` move the circles, and finite-rank parts leave
curves and indices alone.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import TANGENCY_TOL, Circle, arrangement_cells, sign_vector
from .normal_form import AtomBlock, normalize
from .operators import (
    BilateralShift,
    Diagonal,
    FiniteMatrix,
    OperatorSpec,
    UnilateralShift,
    WeightRule,
    adjoint,
)

__all__ = [
    "Circle",
    "Region",
    "SpectralPicture",
    "WeylSpectrum",
    "BoundaryPointError",
    "limit_radii",
    "formal_kernel_dim",
    "formal_cokernel_dim",
    "spectral_picture",
    "picture_from_pieces",
    "Piece",
    "weyl_spectrum",
    "picture_to_dict",
    "picture_from_dict",
    "picture_to_csv",
]

CURVE_TOL = 1e-12
EIG_TOL = 1e-9


class BoundaryPointError(ValueError):
    """The requested point lies on an essential curve."""


@dataclass(frozen=True)
class Region:
    """One cell of the picture: points sharing an inside/outside pattern.

    ``dim_ker``/``dim_coker``/``min_index`` are None when unknown.  A cell may
    in principle be disconnected; index and kernel data are constant on it.
    """

    description: str
    representative: complex
    in_spectrum: bool
    index: int
    dim_ker: int | None
    dim_coker: int | None
    inside: tuple[bool, ...]
    boundary: tuple[int, ...] = ()
    semi_fredholm: bool = True

    @property
    def min_index(self) -> int | None:
        if self.dim_ker is None or self.dim_coker is None:
            return None
        return min(self.dim_ker, self.dim_coker)

    @property
    def bounded(self) -> bool:
        return any(self.inside)


@dataclass(frozen=True)
class SpectralPicture:
    essential_curves: tuple[Circle, ...]
    regions: tuple[Region, ...]
    sigma_zero: tuple[tuple[complex, int], ...]
    norm_bound: float
    sigma_zero_known: bool = True

    def on_curve(self, z: complex, tol: float = CURVE_TOL) -> bool:
        return any(c.distance(z) <= tol for c in self.essential_curves)

    def region_at(self, z: complex) -> Region | None:
        if self.on_curve(z):
            return None
        key = sign_vector(self.essential_curves, z)
        for r in self.regions:
            if r.inside == key:
                return r
        raise LookupError(f"no region with pattern {key}")

    def region_with(self, signs: tuple[bool, ...]) -> Region:
        for r in self.regions:
            if r.inside == signs:
                return r
        raise LookupError(f"no region with pattern {signs}")

    def in_spectrum(self, z: complex) -> bool:
        if self.on_curve(z):
            return True
        if any(abs(z - s) <= EIG_TOL for s, _ in self.sigma_zero):
            return True
        return self.region_at(z).in_spectrum

    @property
    def unbounded_region(self) -> Region:
        return self.regions[0]


# ---------------------------------------------------------------------------
# pieces: spectral contributions of atoms


@dataclass
class Piece:
    """Spectral contribution of one direct summand.

    ``local(z)`` returns ``(in_spectrum, dim_ker, dim_coker)`` at a point off
    the piece's curves, valid throughout the cell containing ``z`` apart from
    the isolated ``eigenvalues``; ``kernel_at(z)`` is exact at ``z`` itself.
    """

    curves: list[Circle]
    local: callable
    kernel_at: callable = None
    eigenvalues: list = field(default_factory=list)

    def __post_init__(self):
        if self.kernel_at is None:
            self.kernel_at = lambda z: self.local(z)[1]


def limit_radii(w: WeightRule) -> tuple[float | None, float]:
    """(|limit at -inf| or None, |limit at +inf|) of a weight rule."""
    lm = w.limit_minus
    return (None if lm is None else abs(lm), abs(w.limit_plus))


def _shift_piece(atom, a: complex, b: complex) -> Piece:
    r_minus, r_plus = limit_radii(atom.weights)
    bilateral = isinstance(atom, BilateralShift)
    forward = atom.direction == "forward"
    radii = sorted({r_plus} if not bilateral else {r_minus, r_plus})
    curves = [Circle(b, abs(a) * r) for r in radii]

    def local(z):
        mod = abs((z - b) / a)
        if not bilateral:
            inside = mod < r_plus
            if forward:
                return inside, 0, int(inside)
            return inside, int(inside), 0
        # forward: kernel iff r+ < |lam| < r-, cokernel iff r- < |lam| < r+
        upper = r_plus < mod < r_minus
        lower = r_minus < mod < r_plus
        if forward:
            ker, coker = upper, lower
        else:
            ker, coker = lower, upper
        return bool(ker or coker), int(ker), int(coker)

    return Piece(curves, local)


def _triangular_eigs(m: np.ndarray) -> np.ndarray:
    if np.array_equal(m, np.triu(m)) or np.array_equal(m, np.tril(m)):
        return np.diag(m).copy()
    return np.linalg.eigvals(m)


def _group(values, tol=EIG_TOL) -> list[tuple[complex, int]]:
    out: list[list] = []
    for v in sorted(values, key=lambda z: (round(z.real, 9), round(z.imag, 9))):
        for slot in out:
            if abs(slot[0] - v) <= tol * max(1.0, abs(v)):
                slot[1] += 1
                break
        else:
            out.append([complex(v), 1])
    return [(complex(v), n) for v, n in out]


def _nullity(m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    tol = max(m.shape) * np.finfo(float).eps * max(1.0, s[0])
    return int(np.sum(s <= tol))


def _finite_piece(m: np.ndarray) -> Piece:
    eigs = _group(_triangular_eigs(m))
    n = m.shape[0]

    def kernel_at(z):
        return _nullity(z * np.eye(n) - m)

    return Piece([], lambda z: (False, 0, 0), kernel_at, eigs)


def _scalar_point_piece(b: complex) -> Piece:
    return Piece([Circle(b, 0.0)], lambda z: (False, 0, 0))


def _diagonal_piece(atom: Diagonal, a: complex, b: complex) -> Piece:
    if atom.finite:
        return _finite_piece(np.diag([a * h + b for h in atom.head]))
    points = _group([a * t + b for t in atom.tail], CURVE_TOL)
    curves = [Circle(p, 0.0) for p, _ in points]
    heads = [a * h + b for h in atom.head]
    heads = [h for h in heads if all(abs(h - p) > CURVE_TOL for p, _ in points)]
    eigs = _group(heads)

    def kernel_at(z):
        return sum(1 for h in heads if abs(h - z) <= EIG_TOL * max(1.0, abs(z)))

    return Piece(curves, lambda z: (False, 0, 0), kernel_at, eigs)


def _atom_piece(block: AtomBlock) -> Piece:
    atom, a, b = block.atom, complex(block.a), complex(block.b)
    if isinstance(atom, FiniteMatrix):
        return _finite_piece(a * np.asarray(atom.matrix) + b * np.eye(atom.size))
    if a == 0:
        if block.infinite:
            return _scalar_point_piece(b)
        n = atom.domain()[1] + 1
        return _finite_piece(b * np.eye(n, dtype=complex))
    if isinstance(atom, (BilateralShift, UnilateralShift)):
        return _shift_piece(atom, a, b)
    if isinstance(atom, Diagonal):
        return _diagonal_piece(atom, a, b)
    raise TypeError(f"unexpected atom {type(atom).__name__}")


def _dense(op: OperatorSpec) -> np.ndarray:
    from .oracle import window_matrix

    lo, hi = op.domain()
    return window_matrix(op, lo, hi + 1)


def _pieces(op: OperatorSpec) -> tuple[list[Piece], bool]:
    """Pieces of ``op`` and whether their kernel data is exact."""
    nf = normalize(op)
    if nf.perturbation and nf.finite_dimensional:
        return [_finite_piece(_dense(op))], True
    return [_atom_piece(b) for b in nf.blocks], not nf.perturbation


def _dedupe(curves: list[Circle]) -> list[Circle]:
    out: list[Circle] = []
    for c in curves:
        if not any(c.same_as(o) for o in out):
            out.append(c)
    out.sort(key=lambda c: (c.radius == 0, round(c.radius, 12), round(c.center.real, 12), round(c.center.imag, 12)))
    return out


def _describe(curves, signs) -> str:
    parts = []
    for c, s in zip(curves, signs):
        if c.is_point:
            continue
        ctr = "z" if c.center == 0 else f"z-({c.center.real:g}{c.center.imag:+g}j)"
        parts.append(f"|{ctr}|{'<' if s else '>'}{c.radius:g}")
    return ", ".join(parts) if parts else "C"


def picture_from_pieces(
    pieces: list[Piece], norm: float, exact: bool = True
) -> SpectralPicture:
    curves = _dedupe([c for p in pieces for c in p.curves])
    regions = []
    for cell in arrangement_cells(curves):
        rep = cell.rep
        spec, ker, coker = False, 0, 0
        for p in pieces:
            s, k, c = p.local(rep)
            spec = spec or s
            ker = None if ker is None or k is None else ker + k
            coker = None if coker is None or c is None else coker + c
        index = ker - coker if ker is not None and coker is not None else None
        if index is None:
            raise ValueError("piece data must determine the index")
        if not exact:
            ker = coker = None
            spec = spec or index != 0
        regions.append(
            Region(
                description=_describe(curves, cell.signs),
                representative=rep,
                in_spectrum=bool(spec),
                index=int(index),
                dim_ker=ker,
                dim_coker=coker,
                inside=cell.signs,
                boundary=tuple(sorted(cell.boundary)),
            )
        )
    picture = SpectralPicture(tuple(curves), tuple(regions), (), float(norm), exact)
    if not exact:
        return picture
    eigs = []
    for p in pieces:
        for v, n in p.eigenvalues:
            if picture.on_curve(v, EIG_TOL):
                continue
            if picture.region_at(v).in_spectrum:
                continue
            eigs.extend([v] * n)
    return SpectralPicture(tuple(curves), tuple(regions), tuple(_group(eigs)), float(norm), True)


def spectral_picture(op: OperatorSpec) -> SpectralPicture:
    """Essential curves, index/kernel data per region and normal eigenvalues.

    When ``op`` carries a finite-rank part on an infinite-dimensional space,
    curves and indices are those of the unperturbed operator; kernel dims and
    ``sigma_zero`` are reported unknown, and ``in_spectrum`` of an index-0
    region follows the unperturbed operator.
    """
    pieces, exact = _pieces(op)
    return picture_from_pieces(pieces, op.norm_bound(), exact)


def formal_kernel_dim(op: OperatorSpec, lam: complex) -> int | None:
    """dim Ker(lam - op), or None when a finite-rank part makes it unknown.

    Raises :class:`BoundaryPointError` on an essential curve.
    """
    lam = complex(lam)
    pieces, exact = _pieces(op)
    for p in pieces:
        for c in p.curves:
            if c.distance(lam) <= CURVE_TOL:
                raise BoundaryPointError(f"boundary point: {lam} lies on an essential curve")
    if not exact:
        return None
    return int(sum(p.kernel_at(lam) for p in pieces))


def formal_cokernel_dim(op: OperatorSpec, lam: complex) -> int | None:
    return formal_kernel_dim(adjoint(op), complex(lam).conjugate())


# ---------------------------------------------------------------------------
# Weyl spectrum


@dataclass(frozen=True)
class WeylSpectrum:
    """Essential curves together with the closures of nonzero-index regions."""

    curves: tuple[Circle, ...]
    regions: tuple[Region, ...]

    def contains(self, z: complex, tol: float = CURVE_TOL) -> bool:
        if any(c.distance(z) <= tol for c in self.curves):
            return True
        key = sign_vector(self.curves, z)
        return any(r.inside == key for r in self.regions)

    @property
    def is_empty(self) -> bool:
        return not self.curves and not self.regions


def weyl_spectrum(p: SpectralPicture) -> WeylSpectrum:
    return WeylSpectrum(p.essential_curves, tuple(r for r in p.regions if r.index != 0))


# ---------------------------------------------------------------------------
# serialization


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _opt(v):
    return "unknown" if v is None else int(v)


def picture_to_dict(p: SpectralPicture) -> dict:
    return {
        "curves": [{"center": _pair(c.center), "radius": c.radius} for c in p.essential_curves],
        "regions": [
            {
                "description": r.description,
                "rep": _pair(r.representative),
                "inside": list(r.inside),
                "boundary": list(r.boundary),
                "in_spectrum": r.in_spectrum,
                "semi_fredholm": r.semi_fredholm,
                "index": int(r.index) if r.semi_fredholm else "na",
                "dim_ker": _opt(r.dim_ker),
                "dim_coker": _opt(r.dim_coker),
                "min_index": _opt(r.min_index),
            }
            for r in p.regions
        ],
        "sigma_zero": [{"value": _pair(v), "multiplicity": n} for v, n in p.sigma_zero],
        "sigma_zero_known": p.sigma_zero_known,
        "norm_bound": p.norm_bound,
    }


def picture_from_dict(d: dict) -> SpectralPicture:
    def cx(pair):
        return complex(pair[0], pair[1])

    def opt(v):
        return None if v == "unknown" else int(v)

    curves = tuple(Circle(cx(c["center"]), c["radius"]) for c in d["curves"])
    regions = tuple(
        Region(
            description=r.get("description", ""),
            representative=cx(r["rep"]),
            in_spectrum=bool(r["in_spectrum"]),
            index=int(r["index"]),
            dim_ker=opt(r["dim_ker"]),
            dim_coker=opt(r["dim_coker"]),
            inside=tuple(bool(b) for b in r["inside"]),
            boundary=tuple(int(k) for k in r.get("boundary", [])),
        )
        for r in d["regions"]
    )
    sz = tuple((cx(s["value"]), int(s["multiplicity"])) for s in d["sigma_zero"])
    return SpectralPicture(curves, regions, sz, float(d["norm_bound"]), bool(d.get("sigma_zero_known", True)))


def picture_to_csv(p: SpectralPicture, points: int = 128) -> str:
    """Boundary polylines of the essential curves: curve, k, x, y."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["curve", "k", "x", "y"])
    for idx, c in enumerate(p.essential_curves):
        n = 1 if c.is_point else points + 1
        for k in range(n):
            z = c.point_at(2 * math.pi * k / points)
            w.writerow([idx, k, repr(float(z.real)), repr(float(z.imag))])
    return buf.getvalue()
