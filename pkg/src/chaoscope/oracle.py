"""
Brute-force cross-check: dense central truncations and their SVD.

A small singular value of a truncation of ``lam - T`` can come from a genuine
kernel vector or from the artificial cut.  The numerically null subspace is
therefore projected onto the interior of the window (away from every
artificial edge) and only directions that keep most of their mass there are
counted.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .operators import OperatorSpec, SparseVector

__all__ = ["window_matrix", "central_window", "truncation_oracle", "OracleReport", "max_truncation"]

DEFAULT_MAX_TRUNCATION = 2000
NULL_RTOL = 1e-8
EDGE_FRACTION = 0.25


def max_truncation() -> int:
    return int(os.environ.get("CHAOSCOPE_MAX_TRUNCATION", DEFAULT_MAX_TRUNCATION))


def window_matrix(op: OperatorSpec, lo: int, hi: int) -> np.ndarray:
    """Dense matrix of ``op`` compressed to the indices lo..hi-1."""
    n = hi - lo
    m = np.zeros((n, n), dtype=complex)
    for j in range(n):
        col = op.apply(SparseVector.basis(lo + j))
        for i, z in col.items():
            if lo <= i < hi:
                m[i - lo, j] = z
    return m


def central_window(op: OperatorSpec, size: int) -> tuple[int, int, bool, bool]:
    """(lo, hi, cut_below, cut_above) of the central truncation of given size."""
    dlo, dhi = op.domain()
    if dlo is None and dhi is None:
        lo = -(size // 2)
        return lo, lo + size, True, True
    if dhi is None:
        return dlo, dlo + size, False, True
    if dlo is None:
        return dhi + 1 - size, dhi + 1, True, False
    hi = min(dhi + 1, dlo + size)
    return dlo, hi, False, hi <= dhi


def _interior_dim(basis: np.ndarray, cut_below: bool, cut_above: bool) -> int:
    if basis.shape[1] == 0:
        return 0
    n = basis.shape[0]
    margin = int(EDGE_FRACTION * n)
    lo = margin if cut_below else 0
    hi = n - margin if cut_above else n
    s = np.linalg.svd(basis[lo:hi], compute_uv=False)
    return int(np.sum(s > np.sqrt(0.5)))


@dataclass(frozen=True)
class OracleReport:
    lam: complex
    sizes: tuple[int, ...]
    smallest_singular_values: tuple[tuple[float, ...], ...]
    kernel_dims: tuple[int, ...]
    cokernel_dims: tuple[int, ...]
    stabilized: bool

    @property
    def kernel_dim(self) -> int:
        return self.kernel_dims[-1]

    @property
    def cokernel_dim(self) -> int:
        return self.cokernel_dims[-1]

    def to_dict(self) -> dict:
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "sizes": list(self.sizes),
            "smallest_singular_values": [list(s) for s in self.smallest_singular_values],
            "kernel_dims": list(self.kernel_dims),
            "cokernel_dims": list(self.cokernel_dims),
            "stabilized": self.stabilized,
        }


def truncation_oracle(op: OperatorSpec, lam: complex, sizes=(200, 400, 800), keep: int = 4) -> OracleReport:
    """Kernel and cokernel estimates of ``lam - op`` from growing truncations.

    The null threshold is ``1e-8 * norm_bound(op)`` (at least ``1e-8``).
    ``stabilized`` means the two largest sizes agree on both estimates.
    """
    sizes = tuple(int(s) for s in sizes)
    cap = max_truncation()
    if any(s > cap for s in sizes):
        raise ValueError(f"truncation size exceeds the cap {cap}")
    if list(sizes) != sorted(set(sizes)) or not sizes:
        raise ValueError("sizes must be increasing")
    lam = complex(lam)
    thresh = NULL_RTOL * max(op.norm_bound(), 1.0)
    svals, kers, cokers = [], [], []
    for size in sizes:
        lo, hi, cut_below, cut_above = central_window(op, size)
        m = lam * np.eye(hi - lo) - window_matrix(op, lo, hi)
        if not np.any(m.imag):
            m = m.real  # same singular data, cheaper factorization
        u, s, vh = np.linalg.svd(m)
        null = s < thresh
        kers.append(_interior_dim(vh.conj().T[:, null], cut_below, cut_above))
        cokers.append(_interior_dim(u[:, null], cut_below, cut_above))
        svals.append(tuple(float(x) for x in s[::-1][:keep]))
    stable = len(sizes) < 2 or (kers[-1] == kers[-2] and cokers[-1] == cokers[-2])
    return OracleReport(lam, sizes, tuple(svals), tuple(kers), tuple(cokers), stable)
