"""
Orbits and finite-horizon chaos statistics.

Limits are never asserted: lim inf / lim sup are replaced by the min / max
over the window ``n in [N/2, N]``, and distributional functions are reported
for every ``n <= N`` together with their envelopes over ``n >= N/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .operators import OperatorSpec, SparseVector

__all__ = [
    "OVERFLOW",
    "DELTA_LOW",
    "DELTA_HIGH",
    "default_tau_grid",
    "iterate",
    "OrbitTrace",
    "orbit",
    "DistributionalProfile",
    "distance_sequence",
    "pair_profile",
    "profile_from_distances",
    "LiYorkeScore",
    "li_yorke_score",
    "UnimodalCertificate",
    "NoCertificate",
    "unimodal_certify",
    "DichotomySample",
    "DichotomyReport",
    "dichotomy_check",
]

OVERFLOW = 1e300
DELTA_LOW = 1e-6
DELTA_HIGH = 1e-1
MAX_HORIZON = 10**6


def default_tau_grid() -> np.ndarray:
    return np.logspace(-6, 2, 33)


def _window_start(horizon: int) -> int:
    return math.ceil(horizon / 2)


def iterate(op: OperatorSpec, x: SparseVector, horizon: int) -> Iterator[SparseVector]:
    """x, Tx, ..., T^N x (stops early once a norm exceeds ``OVERFLOW``)."""
    v = x
    yield v
    for _ in range(horizon):
        v = op.apply(v)
        yield v
        if v.norm() > OVERFLOW:
            return


@dataclass(frozen=True)
class OrbitTrace:
    norms: tuple[float, ...]
    horizon: int
    overflow_flag: bool = False

    def to_rows(self) -> list[tuple[int, float]]:
        return list(enumerate(self.norms))


def _check_horizon(horizon: int) -> None:
    if not 0 <= horizon <= MAX_HORIZON:
        raise ValueError(f"horizon must lie in [0, {MAX_HORIZON}]")


def orbit(op: OperatorSpec, x: SparseVector, horizon: int) -> OrbitTrace:
    """Norms ||T^n x|| for n = 0..N, truncated before the first overflow."""
    _check_horizon(horizon)
    norms = []
    overflow = False
    for v in iterate(op, x, horizon):
        nv = v.norm()
        if nv > OVERFLOW:
            overflow = True
            break
        norms.append(nv)
    return OrbitTrace(tuple(norms), horizon, overflow)


# ---------------------------------------------------------------------------
# distributional functions


@dataclass(frozen=True)
class DistributionalProfile:
    """F^n_xy(tau) = counts[n-1, k] / n for n = 1..N and tau = tau_grid[k]."""

    tau_grid: np.ndarray
    distances: np.ndarray
    counts: np.ndarray = field(repr=False)
    lower_envelope: np.ndarray = field(default=None)
    upper_envelope: np.ndarray = field(default=None)

    @property
    def horizon(self) -> int:
        return self.counts.shape[0]

    @property
    def F_n(self) -> np.ndarray:
        n = np.arange(1, self.horizon + 1)[:, None]
        return self.counts / n

    def value(self, n: int, tau: float) -> float:
        """F^n(tau) for an arbitrary tau, counted directly."""
        return float(np.count_nonzero(self.distances[:n] < tau)) / n

    def to_rows(self) -> list[tuple[int, float, float]]:
        rows = []
        F = self.F_n
        for n in range(self.horizon):
            for k, tau in enumerate(self.tau_grid):
                rows.append((n + 1, float(tau), float(F[n, k])))
        return rows


def distance_sequence(op: OperatorSpec, x: SparseVector, y: SparseVector, horizon: int) -> np.ndarray:
    """d_i = ||T^i (x - y)|| for i = 0..N-1; +inf past an overflow."""
    d = np.full(horizon, np.inf)
    for i, v in enumerate(iterate(op, x - y, max(horizon - 1, 0))):
        nv = v.norm()
        if nv > OVERFLOW or i >= horizon:
            break
        d[i] = nv
    return d


def profile_from_distances(distances: Sequence[float], tau_grid=None) -> DistributionalProfile:
    tau = np.asarray(default_tau_grid() if tau_grid is None else tau_grid, dtype=float)
    if tau.ndim != 1 or tau.size == 0 or np.any(tau <= 0) or np.any(np.diff(tau) <= 0):
        raise ValueError("tau grid must be increasing positive reals")
    d = np.asarray(distances, dtype=float)
    below = d[:, None] < tau[None, :]
    counts = np.cumsum(below, axis=0, dtype=np.int64)
    N = len(d)
    F = counts / np.arange(1, N + 1)[:, None]
    tail = F[max(_window_start(N) - 1, 0):]
    return DistributionalProfile(tau, d, counts, tail.min(axis=0), tail.max(axis=0))


def pair_profile(op: OperatorSpec, x: SparseVector, y: SparseVector, horizon: int, tau_grid=None) -> DistributionalProfile:
    if x == y:
        raise ValueError("x and y must differ")
    _check_horizon(horizon)
    if horizon < 1:
        raise ValueError("horizon must be positive")
    return profile_from_distances(distance_sequence(op, x, y, horizon), tau_grid)


# ---------------------------------------------------------------------------
# Li-Yorke pairs


@dataclass(frozen=True)
class LiYorkeScore:
    inf_estimate: float
    sup_estimate: float
    verdict: str
    delta_low: float
    delta_high: float
    horizon: int

    def to_dict(self) -> dict:
        return {
            "inf_estimate": self.inf_estimate,
            "sup_estimate": self.sup_estimate,
            "verdict": self.verdict,
            "thresholds": {"delta_low": self.delta_low, "delta_high": self.delta_high},
            "horizon": self.horizon,
        }


def _verdict(lo: float, hi: float, delta_low: float, delta_high: float) -> str:
    if lo >= delta_low:
        return "separated"
    if hi > delta_high:
        return "chaotic-pair-at-horizon"
    if hi < delta_low:
        return "asymptotic"
    return "proximal-only"


def li_yorke_score(
    op: OperatorSpec,
    x: SparseVector,
    y: SparseVector,
    horizon: int,
    delta_low: float = DELTA_LOW,
    delta_high: float = DELTA_HIGH,
) -> LiYorkeScore:
    """Window estimates of lim inf / lim sup of ||T^n x - T^n y||.

    Verdicts: ``separated`` (inf >= delta_low), ``chaotic-pair-at-horizon``
    (inf < delta_low and sup > delta_high), ``asymptotic`` (sup < delta_low),
    otherwise ``proximal-only``.
    """
    if x == y:
        raise ValueError("x and y must differ")
    _check_horizon(horizon)
    d = distance_sequence(op, x, y, horizon + 1)
    window = d[_window_start(horizon):]
    lo, hi = float(window.min()), float(window.max())
    return LiYorkeScore(lo, hi, _verdict(lo, hi, delta_low, delta_high), delta_low, delta_high, horizon)


# ---------------------------------------------------------------------------
# norm-unimodality


@dataclass(frozen=True)
class UnimodalCertificate:
    gamma: float
    m: int
    witness: SparseVector
    growth_norms: tuple[float, ...]
    decay_tail: tuple[float, ...]

    def verify(self, op: OperatorSpec) -> bool:
        """Re-run the orbit independently and re-check the growth inequality."""
        v = self.witness
        base = v.norm()
        for i in range(1, self.m + 1):
            v = op.apply(v)
            if v.norm() < self.gamma**i * base:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "m": self.m,
            "witness": {str(i): [z.real, z.imag] for i, z in self.witness.items()},
            "growth_norms": list(self.growth_norms),
            "decay_tail_last": self.decay_tail[-1] if self.decay_tail else None,
            "decay_tail_length": len(self.decay_tail),
        }


@dataclass(frozen=True)
class NoCertificate:
    """No candidate passed; says nothing about the operator beyond this horizon."""

    reason: str
    tried: int

    def __bool__(self) -> bool:
        return False


def _decays(tail: Sequence[float], base: float, peak: float, abs_tol: float, rel_tol: float) -> bool:
    if not tail:
        return False
    last = tail[-1]
    if last <= abs_tol * base:
        return True
    half = tail[len(tail) // 2:]
    monotone = all(b <= a for a, b in zip(half, half[1:]))
    return monotone and last <= rel_tol * peak


def unimodal_certify(
    op: OperatorSpec,
    gamma: float,
    m: int,
    horizon: int,
    candidates: Iterable[int] | None = None,
    witnesses: Iterable[SparseVector] = (),
    decay_abs: float = 1e-6,
    decay_rel: float = 1e-3,
) -> UnimodalCertificate | NoCertificate:
    """Search basis vectors (then extra ``witnesses``) for a growth/decay certificate.

    Growth: ``||T^i x|| >= gamma**i ||x||`` for 1 <= i <= m, checked exactly.
    Decay: the last tail norm is below ``decay_abs * ||x||``, or the second
    half of the tail is non-increasing and ends below ``decay_rel`` times the
    growth peak.
    """
    if not gamma > 1:
        raise ValueError("gamma must exceed 1")
    if m < 1 or horizon < 4 * m:
        raise ValueError("need m >= 1 and horizon >= 4m")
    _check_horizon(horizon)
    if candidates is None:
        lo, hi = op.domain()
        start = 0 if lo is None else lo
        stop = 4 * m if hi is None else min(hi, 4 * m)
        candidates = range(start, stop + 1)
    pool = [SparseVector.basis(i) for i in candidates] + list(witnesses)
    for x in pool:
        base = x.norm()
        if base == 0:
            continue
        trace = orbit(op, x, horizon)
        norms = trace.norms
        if trace.overflow_flag or len(norms) <= horizon:
            continue
        growth = norms[1 : m + 1]
        if any(growth[i - 1] < gamma**i * base for i in range(1, m + 1)):
            continue
        tail = norms[m + 1 :]
        if _decays(tail, base, max(growth), decay_abs, decay_rel):
            return UnimodalCertificate(float(gamma), m, x, tuple(growth), tuple(tail))
    return NoCertificate(f"no candidate satisfied growth and decay up to horizon {horizon}", len(pool))


# ---------------------------------------------------------------------------
# orbit dichotomy


@dataclass(frozen=True)
class DichotomySample:
    liminf_proxy: float
    tail_norm: float
    consistent: bool


@dataclass(frozen=True)
class DichotomyReport:
    samples: tuple[DichotomySample, ...]
    horizon: int
    delta: float

    @property
    def violations(self) -> int:
        return sum(not s.consistent for s in self.samples)

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "delta": self.delta,
            "violations": self.violations,
            "samples": [
                {"liminf_proxy": s.liminf_proxy, "tail_norm": s.tail_norm, "consistent": s.consistent}
                for s in self.samples
            ],
        }


def dichotomy_check(op: OperatorSpec, samples: Iterable[SparseVector], horizon: int, delta: float = 1e-8) -> DichotomyReport:
    """Check that a small lim inf forces a small tail, sample by sample.

    ``consistent = liminf_proxy >= delta or tail_norm <= 10*liminf_proxy + delta``
    with ``liminf_proxy`` the min of ||T^n x|| over n in [N/2, N].  Overflowed
    orbits count as consistent (their norms are far above delta).
    """
    _check_horizon(horizon)
    out = []
    for x in samples:
        trace = orbit(op, x, horizon)
        if trace.overflow_flag:
            out.append(DichotomySample(math.inf, math.inf, True))
            continue
        window = trace.norms[_window_start(horizon):]
        low = min(window)
        tail = trace.norms[-1]
        out.append(DichotomySample(low, tail, low >= delta or tail <= 10 * low + delta))
    return DichotomyReport(tuple(out), horizon, delta)
