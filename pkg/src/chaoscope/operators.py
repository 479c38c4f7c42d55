"""
Symbolic operators on l2(Z) / l2(N) / C^n and their exact action on
finitely supported vectors.

Every operator lives in one global integer index space.  Shifts over Z use
all of Z, shifts and diagonals over N use the indices 0, 1, 2, ..., finite
matrices use 0..n-1, and a :class:`DirectSum` places its blocks on explicit,
disjoint arithmetic progressions of indices.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
from numpy.polynomial import Polynomial

__all__ = [
    "SparseVector",
    "Const",
    "Rational",
    "Zone",
    "WeightRule",
    "OperatorSpec",
    "BilateralShift",
    "UnilateralShift",
    "FiniteMatrix",
    "Diagonal",
    "Scale",
    "ScalarShift",
    "Block",
    "DirectSum",
    "Term",
    "FiniteRankPerturbation",
    "SpecError",
    "apply",
    "adjoint",
    "norm_bound",
    "identity",
    "zero_operator",
]

LIMIT_PROBE = 10**6
LIMIT_TOLERANCE = 0.01


class SpecError(ValueError):
    """Raised for invalid operator descriptions."""


# ---------------------------------------------------------------------------
# vectors


def _scaled_norm(values: Iterable[complex]) -> float:
    mags = [abs(z) for z in values]
    if not mags:
        return 0.0
    scale = max(mags)
    if scale == 0.0 or math.isinf(scale):
        return scale
    return scale * math.sqrt(math.fsum((m / scale) ** 2 for m in mags))


class SparseVector:
    """Finitely supported complex sequence indexed by integers.

    Stored entries are never exactly zero.  Small but nonzero coefficients
    are kept as they are.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[int, complex] | None = None):
        clean = {}
        if entries:
            for i, z in entries.items():
                z = complex(z)
                if z != 0:
                    clean[int(i)] = z
        self._entries = dict(sorted(clean.items()))

    @classmethod
    def basis(cls, i: int, coeff: complex = 1.0) -> "SparseVector":
        return cls({i: coeff})

    @classmethod
    def from_array(cls, values, start: int = 0) -> "SparseVector":
        return cls({start + k: z for k, z in enumerate(np.asarray(values).ravel())})

    @property
    def entries(self) -> dict[int, complex]:
        return dict(self._entries)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._entries)

    def items(self):
        return self._entries.items()

    def __getitem__(self, i: int) -> complex:
        return self._entries.get(i, 0j)

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, SparseVector) and self._entries == other._entries

    def __hash__(self) -> int:
        return hash(tuple(self._entries.items()))

    def __repr__(self) -> str:
        return f"SparseVector({self._entries!r})"

    def norm(self) -> float:
        return _scaled_norm(self._entries.values())

    def inner(self, other: "SparseVector") -> complex:
        """<self, other>, linear in the first argument."""
        small, large = (self, other) if len(self) <= len(other) else (other, self)
        total = 0j
        for i in small._entries:
            if i in large._entries:
                total += self._entries[i] * other._entries[i].conjugate()
        return total

    def __add__(self, other: "SparseVector") -> "SparseVector":
        out = dict(self._entries)
        for i, z in other._entries.items():
            out[i] = out.get(i, 0j) + z
        return SparseVector(out)

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        return self + (-1.0) * other

    def __mul__(self, c: complex) -> "SparseVector":
        return SparseVector({i: c * z for i, z in self._entries.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "SparseVector":
        return -1.0 * self

    def to_array(self, lo: int, hi: int) -> np.ndarray:
        """Dense copy of the entries with lo <= i < hi."""
        out = np.zeros(hi - lo, dtype=complex)
        for i, z in self._entries.items():
            if lo <= i < hi:
                out[i - lo] = z
        return out

    def remap(self, fn) -> "SparseVector":
        return SparseVector({fn(i): z for i, z in self._entries.items()})


# ---------------------------------------------------------------------------
# weight rules


@dataclass(frozen=True)
class Const:
    value: float

    def __call__(self, i: int) -> float:
        return self.value

    def reindexed(self, offset: int, sign: int) -> "Const":
        return self

    def extrema(self, lo, hi) -> tuple[float, float]:
        return self.value, self.value


@dataclass(frozen=True)
class Rational:
    """p(i)/q(i) with coefficients in ascending powers of i."""

    num: tuple[float, ...]
    den: tuple[float, ...]
    limit: float

    def __call__(self, i: int) -> float:
        p = np.polynomial.polynomial.polyval(float(i), self.num)
        q = np.polynomial.polynomial.polyval(float(i), self.den)
        return float(p / q)

    def reindexed(self, offset: int, sign: int) -> "Rational":
        lin = Polynomial([float(offset), float(sign)])
        num = Polynomial(self.num)(lin).coef
        den = Polynomial(self.den)(lin).coef
        return Rational(tuple(float(c) for c in num), tuple(float(c) for c in den), self.limit)

    def _real_roots(self, coeffs, lo, hi):
        p = Polynomial(coeffs).trim()
        if p.degree() < 1:
            return []
        roots = p.roots()
        out = []
        for r in roots:
            if abs(r.imag) > 1e-9 * max(1.0, abs(r.real)):
                continue
            x = float(r.real)
            if (lo is None or x >= lo - 1e-9) and (hi is None or x <= hi + 1e-9):
                out.append(x)
        return out

    def extrema(self, lo, hi) -> tuple[float, float]:
        """Min and sup of the formula over the real interval [lo, hi]."""
        if self._real_roots(self.den, lo, hi):
            raise SpecError("rational weight has a pole inside its zone")
        p, q = Polynomial(self.num), Polynomial(self.den)
        crit = (p.deriv() * q - p * q.deriv()).coef
        xs = [x for x in (lo, hi) if x is not None]
        xs += self._real_roots(crit, lo, hi)
        vals = [float(p(x) / q(x)) for x in xs]
        if lo is None or hi is None:
            vals.append(self.limit)
        return min(vals), max(vals)


@dataclass(frozen=True)
class Zone:
    lo: int | None  # None = -inf
    hi: int | None  # None = +inf
    formula: Const | Rational

    def contains(self, i: int) -> bool:
        return (self.lo is None or i >= self.lo) and (self.hi is None or i <= self.hi)


def _zone_key(z: Zone):
    return -math.inf if z.lo is None else z.lo


@dataclass(frozen=True)
class WeightRule:
    """Piecewise weight sequence over Z (``domain='Z'``) or N (``domain='N'``).

    Zones partition the domain; ``exceptions`` override single indices and are
    the only place a weight may be exactly zero.
    """

    zones: tuple[Zone, ...]
    exceptions: tuple[tuple[int, float], ...] = ()
    domain: str = "Z"

    def __post_init__(self):
        object.__setattr__(self, "zones", tuple(sorted(self.zones, key=_zone_key)))
        object.__setattr__(self, "exceptions", tuple(sorted((int(i), float(w)) for i, w in self.exceptions)))
        self.validate()

    @classmethod
    def constant(cls, w: float, domain: str = "Z", exceptions=()) -> "WeightRule":
        lo = None if domain == "Z" else 0
        return cls((Zone(lo, None, Const(float(w))),), tuple(exceptions), domain)

    # -- validation -------------------------------------------------------

    def validate(self) -> None:
        if self.domain not in ("Z", "N"):
            raise SpecError(f"unknown weight domain {self.domain!r}")
        if not self.zones:
            raise SpecError("weight rule needs at least one zone")
        expect_lo = None if self.domain == "Z" else 0
        first = self.zones[0]
        if first.lo != expect_lo:
            raise SpecError("zones do not start at the beginning of the index range")
        for a, b in zip(self.zones, self.zones[1:]):
            if a.hi is None or b.lo is None:
                raise SpecError("overlapping zones")
            if b.lo <= a.hi:
                raise SpecError(f"overlapping zones at index {b.lo}")
            if b.lo != a.hi + 1:
                raise SpecError(f"gap between zones after index {a.hi}")
        if self.zones[-1].hi is not None:
            raise SpecError("zones must extend to +inf")
        for z in self.zones:
            if z.lo is not None and z.hi is not None and z.hi < z.lo:
                raise SpecError("empty zone")
            if self.domain == "N" and z.lo is not None and z.lo < 0:
                raise SpecError("zone below 0 in a unilateral weight rule")
            lo_w, _ = z.formula.extrema(z.lo, z.hi)
            if not lo_w > 0:
                raise SpecError("zone weights must be positive; put zero weights in exceptions")
            if isinstance(z.formula, Rational):
                if not z.formula.limit > 0:
                    raise SpecError("declared limits must be positive")
                for side, probe in ((z.lo, -LIMIT_PROBE), (z.hi, LIMIT_PROBE)):
                    if side is None and abs(z.formula(probe) - z.formula.limit) >= LIMIT_TOLERANCE:
                        raise SpecError("rational weight does not approach its declared limit")
        for i, w in self.exceptions:
            if not (w >= 0 and math.isfinite(w)):
                raise SpecError("weights must be finite and non-negative")
            if self.domain == "N" and i < 0:
                raise SpecError("exception below 0 in a unilateral weight rule")

    # -- evaluation -------------------------------------------------------

    def zone_of(self, i: int) -> Zone:
        keys = [_zone_key(z) for z in self.zones]
        k = bisect.bisect_right(keys, i) - 1
        return self.zones[max(k, 0)]

    def __call__(self, i: int) -> float:
        for j, w in self.exceptions:
            if j == i:
                return w
        return float(self.zone_of(i).formula(i))

    @property
    def limit_plus(self) -> float:
        f = self.zones[-1].formula
        return f.value if isinstance(f, Const) else f.limit

    @property
    def limit_minus(self) -> float | None:
        if self.domain == "N":
            return None
        f = self.zones[0].formula
        return f.value if isinstance(f, Const) else f.limit

    def zero_indices(self) -> list[int]:
        return [i for i, w in self.exceptions if w == 0.0]

    def sup(self) -> float:
        vals = [z.formula.extrema(z.lo, z.hi)[1] for z in self.zones]
        vals += [w for _, w in self.exceptions]
        return max(vals)

    def reindexed(self, offset: int, sign: int, domain: str = "N") -> "WeightRule":
        """Rule ``n -> w(offset + sign*n)`` restricted to the target domain.

        For an N target, an index 0 left uncovered (possible only when the
        source does not reach it) is filled with the weight of index 1.
        """
        zones = []
        floor = 0 if domain == "N" else None
        for z in self.zones:
            ends = []
            for e in (z.lo, z.hi):
                ends.append(None if e is None else sign * (e - offset))
            if sign < 0:
                ends.reverse()
            lo, hi = ends
            if floor is not None:
                if hi is not None and hi < floor:
                    continue
                if lo is None or lo < floor:
                    lo = floor
            zones.append(Zone(lo, hi, z.formula.reindexed(offset, sign)))
        zones.sort(key=_zone_key)
        exceptions = []
        for i, w in self.exceptions:
            n = sign * (i - offset)
            if floor is None or n >= floor:
                exceptions.append((n, w))
        if domain == "N" and zones and zones[0].lo != 0:
            fill = zones[0].formula(zones[0].lo)
            zones.insert(0, Zone(0, zones[0].lo - 1, Const(float(fill))))
        return WeightRule(tuple(zones), tuple(exceptions), domain)


# ---------------------------------------------------------------------------
# operators


class OperatorSpec:
    """Base class of the symbolic operator variants."""

    def apply(self, v: SparseVector) -> SparseVector:
        raise NotImplementedError

    def adjoint(self) -> "OperatorSpec":
        raise NotImplementedError

    def norm_bound(self) -> float:
        raise NotImplementedError

    def domain(self) -> tuple[int | None, int | None]:
        """Index range (lo, hi), inclusive, None for an infinite end."""
        raise NotImplementedError

    def _check_support(self, v: SparseVector) -> None:
        lo, hi = self.domain()
        for i in v.support:
            if (lo is not None and i < lo) or (hi is not None and i > hi):
                raise SpecError(f"vector index {i} outside the operator's index range")


def _check_direction(direction: str) -> None:
    if direction not in ("forward", "backward"):
        raise SpecError(f"shift direction must be 'forward' or 'backward', got {direction!r}")


@dataclass(frozen=True)
class BilateralShift(OperatorSpec):
    """Forward: e_i -> w(i) e_{i+1}.  Backward: e_i -> w(i) e_{i-1}.  Over Z."""

    direction: str
    weights: WeightRule

    def __post_init__(self):
        _check_direction(self.direction)
        if self.weights.domain != "Z":
            raise SpecError("bilateral shift needs a weight rule over Z")

    def domain(self):
        return (None, None)

    def apply(self, v):
        step = 1 if self.direction == "forward" else -1
        w = self.weights
        return SparseVector({i + step: w(i) * z for i, z in v.items()})

    def adjoint(self):
        if self.direction == "forward":
            return BilateralShift("backward", self.weights.reindexed(-1, 1, "Z"))
        return BilateralShift("forward", self.weights.reindexed(1, 1, "Z"))

    def norm_bound(self):
        return self.weights.sup()


@dataclass(frozen=True)
class UnilateralShift(OperatorSpec):
    """Forward: e_i -> w(i) e_{i+1}.  Backward: e_i -> w(i) e_{i-1}, e_0 -> 0.  Over N.

    The weight at index 0 of a backward shift is never used.
    """

    direction: str
    weights: WeightRule

    def __post_init__(self):
        _check_direction(self.direction)
        if self.weights.domain != "N":
            raise SpecError("unilateral shift needs a weight rule over N")

    def domain(self):
        return (0, None)

    def apply(self, v):
        self._check_support(v)
        w = self.weights
        if self.direction == "forward":
            return SparseVector({i + 1: w(i) * z for i, z in v.items()})
        return SparseVector({i - 1: w(i) * z for i, z in v.items() if i > 0})

    def adjoint(self):
        if self.direction == "forward":
            return UnilateralShift("backward", self.weights.reindexed(-1, 1, "N"))
        return UnilateralShift("forward", self.weights.reindexed(1, 1, "N"))

    def norm_bound(self):
        if self.direction == "backward":
            rest = [z for z in self.weights.zones if z.hi is None or z.hi >= 1]
            vals = [z.formula.extrema(max(z.lo, 1), z.hi)[1] for z in rest]
            vals += [w for i, w in self.weights.exceptions if i >= 1]
            return max(vals)
        return self.weights.sup()


@dataclass(frozen=True, eq=False)
class FiniteMatrix(OperatorSpec):
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise SpecError("finite matrix must be square and non-empty")
        if not np.all(np.isfinite(m)):
            raise SpecError("finite matrix has non-finite entries")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __eq__(self, other):
        return isinstance(other, FiniteMatrix) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def domain(self):
        return (0, self.size - 1)

    def apply(self, v):
        self._check_support(v)
        if not v:
            return SparseVector()
        idx = np.fromiter(v.support, dtype=int)
        vals = np.fromiter((v[i] for i in idx), dtype=complex, count=len(idx))
        out = self.matrix[:, idx] @ vals
        return SparseVector.from_array(out)

    def adjoint(self):
        return FiniteMatrix(self.matrix.conj().T)

    def norm_bound(self):
        return float(np.linalg.norm(self.matrix, 2))


@dataclass(frozen=True)
class Diagonal(OperatorSpec):
    """diag(head..., tail, tail, ...) with ``tail`` repeated cyclically.

    An empty tail makes the operator finite-dimensional (size ``len(head)``);
    otherwise it acts on N and its limit set is ``set(tail)``.
    """

    head: tuple[complex, ...] = ()
    tail: tuple[complex, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(complex(z) for z in self.head))
        object.__setattr__(self, "tail", tuple(complex(z) for z in self.tail))
        if not self.head and not self.tail:
            raise SpecError("diagonal needs at least one entry")

    @property
    def finite(self) -> bool:
        return not self.tail

    def entry(self, i: int) -> complex:
        if i < len(self.head):
            return self.head[i]
        return self.tail[(i - len(self.head)) % len(self.tail)]

    def domain(self):
        return (0, len(self.head) - 1) if self.finite else (0, None)

    def apply(self, v):
        self._check_support(v)
        return SparseVector({i: self.entry(i) * z for i, z in v.items()})

    def adjoint(self):
        return Diagonal(tuple(z.conjugate() for z in self.head), tuple(z.conjugate() for z in self.tail))

    def norm_bound(self):
        return max(abs(z) for z in self.head + self.tail)


@dataclass(frozen=True)
class Scale(OperatorSpec):
    c: complex
    inner: OperatorSpec

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))

    def domain(self):
        return self.inner.domain()

    def apply(self, v):
        return self.c * self.inner.apply(v)

    def adjoint(self):
        return Scale(self.c.conjugate(), self.inner.adjoint())

    def norm_bound(self):
        return abs(self.c) * self.inner.norm_bound()


@dataclass(frozen=True)
class ScalarShift(OperatorSpec):
    """lam * I + inner."""

    lam: complex
    inner: OperatorSpec

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))

    def domain(self):
        return self.inner.domain()

    def apply(self, v):
        return self.inner.apply(v) + self.lam * v

    def adjoint(self):
        return ScalarShift(self.lam.conjugate(), self.inner.adjoint())

    def norm_bound(self):
        return abs(self.lam) + self.inner.norm_bound()


@dataclass(frozen=True)
class Block:
    """Places ``op`` on the global indices ``offset + sign*stride*n``.

    ``sign`` is -1 when ``reflect`` is set; ``n`` runs over the native index
    range of ``op``.
    """

    offset: int
    op: OperatorSpec
    reflect: bool = False
    stride: int = 1

    def __post_init__(self):
        if self.stride < 1:
            raise SpecError("block stride must be >= 1")

    @property
    def step(self) -> int:
        return -self.stride if self.reflect else self.stride

    def to_global(self, n: int) -> int:
        return self.offset + self.step * n

    def to_native(self, g: int) -> int | None:
        d = g - self.offset
        if d % self.stride:
            return None
        n = d // self.step
        lo, hi = self.op.domain()
        if (lo is not None and n < lo) or (hi is not None and n > hi):
            return None
        return n

    def image_bounds(self) -> tuple[int | None, int | None]:
        lo, hi = self.op.domain()
        a = None if lo is None else self.to_global(lo)
        b = None if hi is None else self.to_global(hi)
        return (b, a) if self.reflect else (a, b)


@dataclass(frozen=True)
class DirectSum(OperatorSpec):
    blocks: tuple[Block, ...]
    _lookup: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise SpecError("direct sum needs at least one block")
        self._validate_layout()

    def _validate_layout(self) -> None:
        bounds = [b.image_bounds() for b in self.blocks]
        lo = None if any(a is None for a, _ in bounds) else min(a for a, _ in bounds)
        hi = None if any(b is None for _, b in bounds) else max(b for _, b in bounds)
        reach = max(
            [abs(b.offset) + b.stride for b in self.blocks]
            + [abs(e) for pair in bounds for e in pair if e is not None]
        )
        window = 4 * reach + 64
        wlo = -window if lo is None else lo
        whi = window if hi is None else hi
        for g in range(wlo, whi + 1):
            owners = [k for k, b in enumerate(self.blocks) if b.to_native(g) is not None]
            if len(owners) > 1:
                raise SpecError(f"direct sum blocks overlap at index {g}")
            if not owners:
                raise SpecError(f"direct sum blocks leave index {g} uncovered")
        object.__setattr__(self, "_domain", (lo, hi))

    def domain(self):
        return self._domain

    def locate(self, g: int) -> tuple[int, int]:
        hit = self._lookup.get(g)
        if hit is None:
            for k, b in enumerate(self.blocks):
                n = b.to_native(g)
                if n is not None:
                    hit = (k, n)
                    break
            else:
                raise SpecError(f"vector index {g} outside the operator's index range")
            if len(self._lookup) < 1 << 16:
                self._lookup[g] = hit
        return hit

    def split(self, v: SparseVector) -> list[SparseVector]:
        parts: list[dict] = [{} for _ in self.blocks]
        for g, z in v.items():
            k, n = self.locate(g)
            parts[k][n] = z
        return [SparseVector(p) for p in parts]

    def apply(self, v):
        out = {}
        for b, part in zip(self.blocks, self.split(v)):
            if part:
                for n, z in b.op.apply(part).items():
                    out[b.to_global(n)] = z
        return SparseVector(out)

    def adjoint(self):
        return DirectSum(tuple(Block(b.offset, b.op.adjoint(), b.reflect, b.stride) for b in self.blocks))

    def norm_bound(self):
        return max(b.op.norm_bound() for b in self.blocks)


@dataclass(frozen=True)
class Term:
    """Rank-one operator x -> c * <x, v> * u."""

    u: SparseVector
    v: SparseVector
    c: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))

    def apply(self, x: SparseVector) -> SparseVector:
        return (self.c * x.inner(self.v)) * self.u

    def adjoint(self) -> "Term":
        return Term(self.v, self.u, self.c.conjugate())


@dataclass(frozen=True)
class FiniteRankPerturbation(OperatorSpec):
    inner: OperatorSpec
    terms: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            self.inner._check_support(t.u)
            self.inner._check_support(t.v)

    def domain(self):
        return self.inner.domain()

    def apply(self, v):
        out = self.inner.apply(v)
        for t in self.terms:
            out = out + t.apply(v)
        return out

    def adjoint(self):
        return FiniteRankPerturbation(self.inner.adjoint(), tuple(t.adjoint() for t in self.terms))

    def norm_bound(self):
        return self.inner.norm_bound() + sum(abs(t.c) * t.u.norm() * t.v.norm() for t in self.terms)


# ---------------------------------------------------------------------------
# module-level operations


def apply(op: OperatorSpec, v: SparseVector, power: int = 1) -> SparseVector:
    """Image of ``v`` under ``op**power``."""
    for _ in range(power):
        v = op.apply(v)
    return v


def adjoint(op: OperatorSpec) -> OperatorSpec:
    return op.adjoint()


def norm_bound(op: OperatorSpec) -> float:
    return float(op.norm_bound())


def zero_operator() -> Diagonal:
    """The zero operator on l2(N)."""
    return Diagonal((), (0.0,))


def identity() -> ScalarShift:
    return ScalarShift(1.0, zero_operator())
