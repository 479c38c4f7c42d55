"""
Flattening of operator specs into independent atoms.

Every supported operator is, up to the finite-rank part, a direct sum of
affine images ``a*S + b`` of atoms ``S``: zero-free weighted shifts, finite
matrices and diagonals.  Zero weights are removed by cutting the shift into
a finite nilpotent chain and two (possibly reflected) one-sided shifts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import (
    BilateralShift,
    Block,
    Diagonal,
    DirectSum,
    FiniteMatrix,
    FiniteRankPerturbation,
    OperatorSpec,
    ScalarShift,
    Scale,
    SparseVector,
    SpecError,
    Term,
    UnilateralShift,
    WeightRule,
)

__all__ = ["AtomBlock", "NormalForm", "normalize", "MAX_PERTURBATION_RANK"]

MAX_PERTURBATION_RANK = 16


@dataclass(frozen=True)
class AtomBlock:
    """``a * atom + b`` placed on the global indices ``offset + step*n``."""

    offset: int
    step: int
    atom: OperatorSpec
    a: complex = 1.0
    b: complex = 0.0

    def as_spec(self) -> OperatorSpec:
        op = self.atom
        if self.a != 1:
            op = Scale(self.a, op)
        if self.b != 0:
            op = ScalarShift(self.b, op)
        return op

    @property
    def infinite(self) -> bool:
        return self.atom.domain()[1] is None


@dataclass(frozen=True)
class NormalForm:
    blocks: tuple[AtomBlock, ...]
    perturbation: tuple[Term, ...] = ()

    def as_spec(self) -> OperatorSpec:
        blocks = tuple(
            Block(b.offset, b.as_spec(), reflect=b.step < 0, stride=abs(b.step)) for b in self.blocks
        )
        op = DirectSum(blocks)
        if self.perturbation:
            op = FiniteRankPerturbation(op, self.perturbation)
        return op

    def apply(self, v: SparseVector) -> SparseVector:
        return self.as_spec().apply(v)

    @property
    def finite_dimensional(self) -> bool:
        return not any(b.infinite for b in self.blocks)


def _chain(weights: WeightRule, start: int, size: int, direction: str) -> FiniteMatrix:
    m = np.zeros((size, size), dtype=complex)
    for n in range(size):
        w = weights(start + n)
        if direction == "forward" and n + 1 < size:
            m[n + 1, n] = w
        elif direction == "backward" and n >= 1:
            m[n - 1, n] = w
    return FiniteMatrix(m)


def _split_bilateral(op: BilateralShift) -> list[AtomBlock]:
    zeros = sorted(op.weights.zero_indices())
    w = op.weights
    if not zeros:
        return [AtomBlock(0, 1, op)]
    out = []
    if op.direction == "forward":
        k1, km = zeros[0], zeros[-1]
        out.append(AtomBlock(k1, -1, UnilateralShift("backward", w.reindexed(k1, -1))))
        for a, b in zip(zeros, zeros[1:]):
            out.append(AtomBlock(a + 1, 1, _chain(w, a + 1, b - a, "forward")))
        out.append(AtomBlock(km + 1, 1, UnilateralShift("forward", w.reindexed(km + 1, 1))))
    else:
        k1, km = zeros[0], zeros[-1]
        out.append(AtomBlock(k1 - 1, -1, UnilateralShift("forward", w.reindexed(k1 - 1, -1))))
        for a, b in zip(zeros, zeros[1:]):
            out.append(AtomBlock(a, 1, _chain(w, a, b - a, "backward")))
        out.append(AtomBlock(km, 1, UnilateralShift("backward", w.reindexed(km, 1))))
    return out


def _split_unilateral(op: UnilateralShift) -> list[AtomBlock]:
    w = op.weights
    zeros = sorted(op.weights.zero_indices())
    if op.direction == "backward":
        zeros = [k for k in zeros if k >= 1]
    if not zeros:
        return [AtomBlock(0, 1, op)]
    out = []
    if op.direction == "forward":
        cuts = [-1] + zeros
        for a, b in zip(cuts, cuts[1:]):
            out.append(AtomBlock(a + 1, 1, _chain(w, a + 1, b - a, "forward")))
        km = zeros[-1]
        out.append(AtomBlock(km + 1, 1, UnilateralShift("forward", w.reindexed(km + 1, 1))))
    else:
        cuts = [0] + zeros
        for a, b in zip(cuts, cuts[1:]):
            out.append(AtomBlock(a, 1, _chain(w, a, b - a, "backward")))
        km = zeros[-1]
        out.append(AtomBlock(km, 1, UnilateralShift("backward", w.reindexed(km, 1))))
    return out


def _flatten(op: OperatorSpec) -> tuple[list[AtomBlock], list[Term]]:
    if isinstance(op, BilateralShift):
        return _split_bilateral(op), []
    if isinstance(op, UnilateralShift):
        return _split_unilateral(op), []
    if isinstance(op, (FiniteMatrix, Diagonal)):
        return [AtomBlock(0, 1, op)], []
    if isinstance(op, Scale):
        blocks, terms = _flatten(op.inner)
        blocks = [AtomBlock(b.offset, b.step, b.atom, op.c * b.a, op.c * b.b) for b in blocks]
        terms = [Term(t.u, t.v, op.c * t.c) for t in terms]
        return blocks, terms
    if isinstance(op, ScalarShift):
        blocks, terms = _flatten(op.inner)
        blocks = [AtomBlock(b.offset, b.step, b.atom, b.a, b.b + op.lam) for b in blocks]
        return blocks, terms
    if isinstance(op, DirectSum):
        blocks, terms = [], []
        for outer in op.blocks:
            inner_blocks, inner_terms = _flatten(outer.op)
            for b in inner_blocks:
                blocks.append(
                    AtomBlock(outer.to_global(b.offset), outer.step * b.step, b.atom, b.a, b.b)
                )
            for t in inner_terms:
                terms.append(Term(t.u.remap(outer.to_global), t.v.remap(outer.to_global), t.c))
        return blocks, terms
    if isinstance(op, FiniteRankPerturbation):
        blocks, terms = _flatten(op.inner)
        return blocks, terms + list(op.terms)
    raise SpecError(f"unsupported operator {type(op).__name__}")


def normalize(op: OperatorSpec) -> NormalForm:
    """Split ``op`` into zero-free atoms plus a global finite-rank part.

    Raises :class:`SpecError` when the accumulated perturbation rank exceeds
    ``MAX_PERTURBATION_RANK``.
    """
    blocks, terms = _flatten(op)
    if len(terms) > MAX_PERTURBATION_RANK:
        raise SpecError(
            f"finite-rank perturbation of rank {len(terms)} exceeds the budget {MAX_PERTURBATION_RANK}"
        )
    return NormalForm(tuple(blocks), tuple(terms))
