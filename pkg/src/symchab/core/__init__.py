"""Valuations, valued power series and their tropical data."""

from .series import (
    POLYNOMIAL,
    BoxDomain,
    TailCertificate,
    ValuedSeries,
    ValuedTerm,
    antiderivative,
    assemble_pure,
    is_pure_support,
)
from .tropical import (
    DomainError,
    TailError,
    TropCell,
    auxiliary_polynomial,
    gamma_w,
    trop_cells,
    trop_membership,
    truncate_pure,
    truncation_cutoffs,
    vert_domain,
    vert_domain_witnesses,
    vert_w,
)
from .valuation import INF, delta_slope, is_prime, val_p

__all__ = [
    "INF",
    "POLYNOMIAL",
    "BoxDomain",
    "DomainError",
    "TailCertificate",
    "TailError",
    "TropCell",
    "ValuedSeries",
    "ValuedTerm",
    "antiderivative",
    "assemble_pure",
    "auxiliary_polynomial",
    "delta_slope",
    "gamma_w",
    "is_prime",
    "is_pure_support",
    "trop_cells",
    "trop_membership",
    "truncate_pure",
    "truncation_cutoffs",
    "val_p",
    "vert_domain",
    "vert_domain_witnesses",
    "vert_w",
]
