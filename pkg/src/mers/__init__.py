"""Exact toolkit for marked elliptic root systems of BC_l shape whose affine
quotient is non-reduced: catalog, axiom checks, quotients, isomorphisms and an
exhaustive classification search."""

from .axioms import AxiomReport, check_axioms_symbolic, check_axioms_windowed
from .catalog import TYPES, MarkedERS, build, catalog, is_reduced, tier_numbers
from .isomorphy import IsoGroupSpec, Isomorphism, apply_iso, canonical_form, dedup, find_isomorphism
from .lattice import ResidueSet, make
from .quotient import identify_affine_type, quotient
from .search import SearchConfig, search

__version__ = "0.1.0"

__all__ = [
    "AxiomReport",
    "IsoGroupSpec",
    "Isomorphism",
    "MarkedERS",
    "ResidueSet",
    "SearchConfig",
    "TYPES",
    "apply_iso",
    "build",
    "canonical_form",
    "catalog",
    "check_axioms_symbolic",
    "check_axioms_windowed",
    "dedup",
    "find_isomorphism",
    "identify_affine_type",
    "is_reduced",
    "make",
    "quotient",
    "search",
    "tier_numbers",
]
