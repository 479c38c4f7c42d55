"""
chaoscope: spectral pictures and orbit statistics of weighted shifts.

The operators are weighted shifts, diagonals, finite matrices and their
affine combinations, direct sums and finite-rank perturbations.  From an
operator spec the package computes essential curves, Fredholm indices and
kernel dimensions per region, decides the chaos-related membership
predicates relative to the unit circle, and gathers finite-horizon orbit
statistics.
"""

from .classifier import ClassificationVerdict, classify, random_picture, relation_suite, unit_circle_relation
from .constructions import gallery, identity_perturbation, path_picture
from .normal_form import normalize
from .operators import (
    BilateralShift,
    Block,
    Const,
    Diagonal,
    DirectSum,
    FiniteMatrix,
    FiniteRankPerturbation,
    Rational,
    ScalarShift,
    Scale,
    SparseVector,
    SpecError,
    Term,
    UnilateralShift,
    WeightRule,
    Zone,
    adjoint,
    apply,
    identity,
    norm_bound,
    zero_operator,
)
from .oracle import truncation_oracle
from .orbits import dichotomy_check, li_yorke_score, orbit, pair_profile, unimodal_certify
from .serialization import parse_spec, parse_vector, to_json
from .spectral import (
    SpectralPicture,
    formal_cokernel_dim,
    formal_kernel_dim,
    spectral_picture,
    weyl_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "BilateralShift", "Block", "ClassificationVerdict", "Const", "Diagonal", "DirectSum",
    "FiniteMatrix", "FiniteRankPerturbation", "Rational", "ScalarShift", "Scale", "SparseVector",
    "SpecError", "SpectralPicture", "Term", "UnilateralShift", "WeightRule", "Zone",
    "adjoint", "apply", "classify", "dichotomy_check", "formal_cokernel_dim", "formal_kernel_dim",
    "gallery", "identity", "identity_perturbation", "li_yorke_score", "norm_bound", "normalize",
    "orbit", "pair_profile", "parse_spec", "parse_vector", "path_picture", "random_picture",
    "relation_suite", "spectral_picture", "to_json", "truncation_oracle", "unimodal_certify",
    "unit_circle_relation", "weyl_spectrum", "zero_operator",
]
