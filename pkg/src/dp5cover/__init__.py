"""Z_2^4-covers of the degree-5 del Pezzo surface and their canonical maps."""

from __future__ import annotations

from dp5cover.analysis import (
    check_theorem1,
    deformations,
    pencil_genus,
    quotient_factorization,
)
from dp5cover.bdfile import load_bd, load_bundled, parse_bd, parse_class_expr, serialize_bd
from dp5cover.catalog import NamedCurve, curve, default_catalog
from dp5cover.cover import BuildingData, EffectiveDivisor, invariants, verify_pardini
from dp5cover.errors import ParseError, StructuralError
from dp5cover.group import Character, GroupElement, Subgroup
from dp5cover.lattice import DivisorClass, h0
from dp5cover.search import SearchConfig, canonicalize, enumerate_building_data

__version__ = "0.1.0"

__all__ = [
    "BuildingData",
    "Character",
    "DivisorClass",
    "EffectiveDivisor",
    "GroupElement",
    "NamedCurve",
    "ParseError",
    "SearchConfig",
    "StructuralError",
    "Subgroup",
    "canonicalize",
    "check_theorem1",
    "curve",
    "default_catalog",
    "deformations",
    "enumerate_building_data",
    "h0",
    "invariants",
    "load_bd",
    "load_bundled",
    "parse_bd",
    "parse_class_expr",
    "pencil_genus",
    "quotient_factorization",
    "serialize_bd",
    "verify_pardini",
]
