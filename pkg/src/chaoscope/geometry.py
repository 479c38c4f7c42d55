"""
Exact-ish circle geometry: intersections, arrangement cells and arcs.

A *cell* of a circle arrangement is the set of points with a given
inside/outside pattern with respect to every circle.  Cells are found by
walking the arcs between consecutive intersection points: each arc borders
exactly the two cells obtained by flipping its own circle's bit, and the
other bits are fixed at the arc midpoint.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

TANGENCY_TOL = 1e-12

__all__ = [
    "Circle",
    "TANGENCY_TOL",
    "circle_intersections",
    "circles_touch",
    "arrangement_cells",
    "arcs_of",
    "sign_vector",
]


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius >= 0:
            raise ValueError("circle radius must be non-negative")

    @property
    def is_point(self) -> bool:
        return self.radius == 0.0

    def inside(self, z: complex) -> bool:
        """Strictly inside (always False for a point circle)."""
        d = z - self.center
        return d.real * d.real + d.imag * d.imag < self.radius * self.radius

    def distance(self, z: complex) -> float:
        return abs(abs(z - self.center) - self.radius)

    def point_at(self, theta: float) -> complex:
        return self.center + self.radius * cmath.exp(1j * theta)

    def same_as(self, other: "Circle", tol: float = TANGENCY_TOL) -> bool:
        return abs(self.center - other.center) <= tol and abs(self.radius - other.radius) <= tol


def sign_vector(circles, z: complex) -> tuple[bool, ...]:
    return tuple(c.inside(z) for c in circles)


def circle_intersections(a: Circle, b: Circle, tol: float = TANGENCY_TOL):
    """Intersection angles on ``a`` and whether the contact is a tangency.

    Returns ``(angles, tangent)``; coincident circles return ``(None, False)``.
    """
    d = abs(b.center - a.center)
    ra, rb = a.radius, b.radius
    if d <= tol and abs(ra - rb) <= tol:
        return None, False
    outer = d - (ra + rb)
    inner = abs(ra - rb) - d
    if outer > tol or inner > tol:
        return [], False
    tangent = abs(outer) <= tol or abs(inner) <= tol
    u = (b.center - a.center) / d
    base = cmath.phase(u)
    x = (ra * ra - rb * rb + d * d) / (2 * d)
    cosv = max(-1.0, min(1.0, x / ra)) if ra > 0 else 1.0
    if tangent:
        # exact contact direction, avoiding an ill-conditioned acos
        ang = base if x >= 0 else base + math.pi
        return [ang % (2 * math.pi)], True
    half = math.acos(cosv)
    return sorted({(base + half) % (2 * math.pi), (base - half) % (2 * math.pi)}), False


def circles_touch(a: Circle, b: Circle, tol: float = TANGENCY_TOL) -> bool:
    if a.is_point and b.is_point:
        return abs(a.center - b.center) <= tol
    if a.is_point:
        return b.distance(a.center) <= tol
    if b.is_point:
        return a.distance(b.center) <= tol
    angles, _ = circle_intersections(a, b, tol)
    return angles is None or bool(angles)


def arcs_of(circle: Circle, others) -> list[tuple[float, float, float]]:
    """Arcs (start, end, midpoint angle) of ``circle`` cut by ``others``."""
    cuts: list[float] = []
    for o in others:
        if o.is_point:
            if circle.distance(o.center) <= TANGENCY_TOL:
                cuts.append(cmath.phase(o.center - circle.center) % (2 * math.pi))
            continue
        angles, _ = circle_intersections(circle, o)
        if angles:
            cuts.extend(angles)
    cuts = sorted(set(cuts))
    if not cuts:
        return [(0.0, 2 * math.pi, 0.0)]
    arcs = []
    for k, start in enumerate(cuts):
        end = cuts[k + 1] if k + 1 < len(cuts) else cuts[0] + 2 * math.pi
        arcs.append((start, end, 0.5 * (start + end)))
    return arcs


@dataclass
class Cell:
    signs: tuple[bool, ...]
    rep: complex
    clearance: float
    boundary: set


def arrangement_cells(circles: list[Circle]) -> list[Cell]:
    """All non-empty cells of the arrangement, each with a representative.

    Point circles never separate the plane; their bit is always False.
    The all-outside cell is always first.
    """
    proper = [k for k, c in enumerate(circles) if not c.is_point]
    reach = max([abs(c.center) + c.radius for c in circles] + [1.0])
    far = complex(2 * reach + 1, 0.0)
    cells: dict[tuple[bool, ...], Cell] = {}
    outside = tuple(False for _ in circles)
    cells[outside] = Cell(outside, far, reach + 1, set())

    for k in proper:
        c = circles[k]
        others = [circles[j] for j in proper if j != k]
        for _, _, mid in arcs_of(c, others):
            p = c.point_at(mid)
            gaps = [circles[j].distance(p) for j in proper if j != k]
            h = 0.5 * min([c.radius] + gaps)
            if h <= 0:
                continue
            n = cmath.exp(1j * mid)
            for inward in (True, False):
                rep = p - h * n if inward else p + h * n
                signs = list(sign_vector(circles, rep))
                if signs[k] != inward:
                    continue
                key = tuple(signs)
                cell = cells.get(key)
                if cell is None:
                    cells[key] = Cell(key, rep, h, {k})
                else:
                    cell.boundary.add(k)
                    if h > cell.clearance and key != outside:
                        cell.rep, cell.clearance = rep, h
    ordered = [cells.pop(outside)]
    ordered += [cells[key] for key in sorted(cells)]
    return ordered
