"""
Membership predicates of a spectral picture relative to the unit circle.

Values are three-valued: True, False, or None (indeterminate).  None arises
from unknown kernel dimensions, an unknown set of normal eigenvalues, or a
tangency between the unit circle and an essential curve.

    E1  the unit circle meets an essential curve
    E2  it avoids all curves and dim Ker(lam - T) > 0 on all of it
    F   some point of it lies in a positive-index region
    G0  it is not contained in the union of index <= 0 regions
    G1  it lies in index <= 0 regions with dim Ker(lam - T) > 0 throughout
    G2  it meets an essential curve and no point lies in a positive-index region
    HC  sigma_w u circle connected, no normal eigenvalues, all indices >= 0
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

from .geometry import TANGENCY_TOL, Circle, arcs_of, circle_intersections, circles_touch, sign_vector
from .operators import (
    BilateralShift,
    Block,
    DirectSum,
    FiniteMatrix,
    ScalarShift,
    Scale,
    UnilateralShift,
    WeightRule,
    Zone,
    Const,
    Rational,
    zero_operator,
)
from .spectral import Region, SpectralPicture, spectral_picture, weyl_spectrum

__all__ = [
    "UNIT_CIRCLE",
    "ArcInfo",
    "CircleRelation",
    "ClassificationVerdict",
    "unit_circle_relation",
    "classify",
    "relation_suite",
    "RelationReport",
    "random_picture",
    "random_operator",
    "PREDICATES",
]

UNIT_CIRCLE = Circle(0.0, 1.0)
PREDICATES = ("E1", "E2", "F", "G0", "G1", "G2", "HC_closure")


# three-valued helpers (Kleene logic, None = indeterminate)


def t_not(a):
    return None if a is None else not a


def t_and(*xs):
    if any(x is False for x in xs):
        return False
    return None if any(x is None for x in xs) else True


def t_or(*xs):
    if any(x is True for x in xs):
        return True
    return None if any(x is None for x in xs) else False


def t_all(xs):
    return t_and(True, *xs)


def t_any(xs):
    return t_or(False, *xs)


@dataclass(frozen=True)
class ArcInfo:
    start: float
    end: float
    midpoint: complex
    region: Region


@dataclass(frozen=True)
class CircleRelation:
    meets_essential: bool
    arcs: tuple[ArcInfo, ...]
    tangency_flag: bool
    contact_points: tuple[complex, ...] = ()
    contact_curves: tuple[int, ...] = ()

    @property
    def contained_regions(self) -> list[tuple[Region, tuple[float, float]]]:
        return [(a.region, (a.start, a.end)) for a in self.arcs]


def unit_circle_relation(p: SpectralPicture) -> CircleRelation:
    """Intersect the unit circle with every essential curve and split it into arcs."""
    meets, tangent = False, False
    points: list[complex] = []
    touching: list[int] = []
    covered = False
    for k, c in enumerate(p.essential_curves):
        if c.is_point:
            if UNIT_CIRCLE.distance(c.center) <= TANGENCY_TOL:
                meets = True
                points.append(c.center)
                touching.append(k)
            continue
        angles, tan = circle_intersections(UNIT_CIRCLE, c)
        if angles is None:
            meets, covered = True, True
            touching.append(k)
        elif angles:
            meets = True
            tangent = tangent or tan
            points.extend(cmath.exp(1j * a) for a in angles)
            touching.append(k)
    arcs = []
    if not covered:
        for start, end, mid in arcs_of(UNIT_CIRCLE, p.essential_curves):
            z = cmath.exp(1j * mid)
            arcs.append(ArcInfo(start, end, z, p.region_with(sign_vector(p.essential_curves, z))))
    return CircleRelation(meets, tuple(arcs), tangent, tuple(points), tuple(touching))


def _has_kernel(r: Region):
    if r.index > 0:
        return True
    if r.dim_ker is None:
        return None
    return r.dim_ker >= 1


def _hc_connected(p: SpectralPicture, rel: CircleRelation) -> bool:
    """Connectedness of sigma_w u circle via the curve/region adjacency graph."""
    w = weyl_spectrum(p)
    curves = list(w.curves)
    n = len(curves)
    regions = list(w.regions)
    # nodes: curves 0..n-1, regions n..n+R-1, unit circle last
    total = n + len(regions) + 1
    circle_node = total - 1
    parent = list(range(total))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        parent[find(a)] = find(b)

    for i in range(n):
        for j in range(i + 1, n):
            if circles_touch(curves[i], curves[j]):
                union(i, j)
    for k, r in enumerate(regions):
        for b in r.boundary:
            union(n + k, b)
        for i, c in enumerate(curves):
            if c.is_point and r.inside == sign_vector(curves, c.center):
                union(n + k, i)
    for k in rel.contact_curves:
        union(circle_node, k)
    for a in rel.arcs:
        for k, r in enumerate(regions):
            if r.inside == a.region.inside:
                union(circle_node, n + k)
    roots = {find(i) for i in range(total)}
    return len(roots) == 1


@dataclass(frozen=True)
class ClassificationVerdict:
    E1: bool | None
    E2: bool | None
    F: bool | None
    G0: bool | None
    G1: bool | None
    G2: bool | None
    HC_closure: bool | None
    witnesses: dict = field(default_factory=dict)

    @property
    def in_closure_DC(self):
        return t_or(self.E1, self.E2)

    @property
    def in_interior_DC(self):
        return self.F

    @property
    def in_closure_DC_minus_interior(self):
        return t_or(self.G1, self.G2)

    @property
    def in_closure_interior(self):
        return self.G0

    def value(self, name: str):
        return getattr(self, name)

    def to_dict(self) -> dict:
        def enc(v):
            return "indeterminate" if v is None else v

        out = {
            name: {"value": enc(getattr(self, name)), "witness": self.witnesses.get(name)}
            for name in PREDICATES
        }
        out["derived"] = {
            "in_closure_DC": enc(self.in_closure_DC),
            "in_interior_DC": enc(self.in_interior_DC),
            "in_closure_DC_minus_interior": enc(self.in_closure_DC_minus_interior),
            "in_closure_interior": enc(self.in_closure_interior),
        }
        return out


def _pt(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def classify(p: SpectralPicture) -> ClassificationVerdict:
    rel = unit_circle_relation(p)
    meets = None if rel.tangency_flag else rel.meets_essential
    positive = [a for a in rel.arcs if a.region.index > 0]
    F = bool(positive)
    kernels = t_all(_has_kernel(a.region) for a in rel.arcs) if rel.arcs else False
    nonpos = all(a.region.index <= 0 for a in rel.arcs)

    E1 = meets
    E2 = t_and(t_not(meets), kernels)
    G0 = t_or(meets, F)
    G1 = t_and(t_not(meets), nonpos, kernels)
    G2 = t_and(meets, not F)

    no_eigs = (not p.sigma_zero) if p.sigma_zero_known else None
    indices_ok = all(r.index >= 0 for r in p.regions)
    HC = t_and(indices_ok, no_eigs, None if rel.tangency_flag else _hc_connected(p, rel))

    wit: dict = {}
    if rel.contact_points:
        wit["E1"] = _pt(rel.contact_points[0])
        wit["G2"] = _pt(rel.contact_points[0])
    elif rel.meets_essential:
        k = rel.contact_curves[0]
        wit["E1"] = {"curve": k}
        wit["G2"] = {"curve": k}
    if positive:
        wit["F"] = _pt(positive[0].midpoint)
        wit["G0"] = _pt(positive[0].midpoint)
    elif rel.contact_points:
        wit["G0"] = _pt(rel.contact_points[0])
    if rel.arcs and not rel.meets_essential:
        wit["E2"] = _pt(rel.arcs[0].region.representative)
        wit["G1"] = _pt(rel.arcs[0].region.representative)
    return ClassificationVerdict(E1, E2, F, G0, G1, G2, HC, wit)


# ---------------------------------------------------------------------------
# relation suite


RELATIONS = (
    ("F => E1 or E2", lambda v: t_or(t_not(v.F), v.E1, v.E2)),
    ("F => G0", lambda v: t_or(t_not(v.F), v.G0)),
    ("G1 => E2", lambda v: t_or(t_not(v.G1), v.E2)),
    ("G2 => E1", lambda v: t_or(t_not(v.G2), v.E1)),
    ("E1 or E2 <=> G0 or G1 or G2", lambda v: None if None in (v.E1, v.E2, v.G0, v.G1, v.G2)
        else (v.E1 or v.E2) == (v.G0 or v.G1 or v.G2)),
    ("HC_closure => G0", lambda v: t_or(t_not(v.HC_closure), v.G0)),
)


@dataclass(frozen=True)
class RelationReport:
    checked: int
    violations: tuple[dict, ...]
    indeterminate: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "relations": [name for name, _ in RELATIONS],
            "violations": list(self.violations),
            "indeterminate": list(self.indeterminate),
        }


def relation_suite(pictures, labels=None) -> RelationReport:
    """Check the set identities on every picture; report violations with witnesses."""
    pictures = list(pictures)
    labels = list(labels) if labels is not None else [str(i) for i in range(len(pictures))]
    violations, skipped = [], []
    for label, p in zip(labels, pictures):
        v = classify(p)
        if any(v.value(n) is None for n in PREDICATES):
            skipped.append(label)
            continue
        for name, check in RELATIONS:
            if check(v) is False:
                violations.append({"picture": label, "relation": name, "verdict": v.to_dict()})
    return RelationReport(len(pictures), tuple(violations), tuple(skipped))


# ---------------------------------------------------------------------------
# random pictures


def _random_weights(rng: random.Random, domain: str) -> WeightRule:
    r = rng.uniform(0.3, 2.0)
    if domain == "Z":
        r2 = r if rng.random() < 0.2 else rng.uniform(0.3, 2.0)
        return WeightRule((Zone(None, -1, Const(r2)), Zone(0, None, Const(r))), (), "Z")
    if rng.random() < 0.3:
        # (r*i + 1) / (i + 2), tends to r
        return WeightRule((Zone(0, None, Rational((1.0, r), (2.0, 1.0), r)),), (), "N")
    return WeightRule.constant(r, "N")


def _affine(rng: random.Random, op):
    a = cmath.rect(rng.uniform(0.4, 2.0), rng.uniform(0, 2 * math.pi))
    b = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
    return ScalarShift(b, Scale(a, op))


def random_operator(seed: int, budget: int = 4):
    """A random direct sum of affinely moved shifts with at most ``budget`` curves."""
    if not 0 <= budget <= 8:
        raise ValueError("budget must lie in [0, 8]")
    rng = random.Random(seed)
    if budget == 0:
        c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        return ScalarShift(c, zero_operator())
    blocks = []
    if rng.random() < 0.4 and budget >= 2:
        k = rng.randint(1, budget // 2)
        for j in range(k):
            op = BilateralShift(rng.choice(["forward", "backward"]), _random_weights(rng, "Z"))
            blocks.append(Block(j, _affine(rng, op), stride=k))
    else:
        k = max(1, rng.randint(1, budget) // 2) if budget > 1 else 1
        lead = rng.random() < 0.3
        start = 0
        if lead:
            n = rng.randint(1, 3)
            m = [[complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)] for _ in range(n)]
            blocks.append(Block(0, FiniteMatrix(m)))
            start = n
        for j in range(k):
            pos = UnilateralShift(rng.choice(["forward", "backward"]), _random_weights(rng, "N"))
            blocks.append(Block(start + j, _affine(rng, pos), stride=k))
            if budget > 1 and 2 * k <= budget:
                neg = UnilateralShift(rng.choice(["forward", "backward"]), _random_weights(rng, "N"))
                blocks.append(Block(-1 - j, _affine(rng, neg), reflect=True, stride=k))
    return DirectSum(tuple(blocks))



def random_picture(seed: int, budget: int = 4) -> SpectralPicture:
    """Spectral picture of :func:`random_operator` (deterministic per seed)."""
    return spectral_picture(random_operator(seed, budget))
