"""Finite Heyting algebras through their dual posets.

Duality, superamalgamation, finite approximations of the Fraisse limit,
natural orderings and the explicit witness constructions built on them.
"""

from __future__ import annotations

from .amalgam import Amalgam, Diagram, axiom_suite, check_independence, stationarity_check, superamalgamate
from .catalog import Catalog, algebras_up_to, embeddings_between, enumerate_posets
from .envelope import atomless_split, envelope, forestify, lift_hom, r_split, regular_elements, six_atom_witness
from .errors import HeyticaError
from .heyting import B4, C3, TWO, HAlg, Hom, add_bottom, dual_poset, generated_subalgebra
from .limit import Chain, ExtensionTask, break_join_irreducible, densify, extend_partial_iso, new_chain, realize, saturate
from .orderings import NatOrder, all_natural_orders, extend_order, kpt_witness, natural_order, ordered_amalgamate
from .poset import PMorphism, Poset, canonical_form, linear_extensions, mk_poset, pmorphisms
from .report import WitnessReport
from .terms import Term, eval_term, parse_term, star_term
from .witnesses import infinite_orbit_witness, one_generated_family, roelcke_family

__version__ = "0.1.0"

__all__ = [
    "Amalgam", "B4", "C3", "Catalog", "Chain", "Diagram", "ExtensionTask", "HAlg", "HeyticaError", "Hom",
    "NatOrder", "PMorphism", "Poset", "TWO", "Term", "WitnessReport", "add_bottom", "algebras_up_to",
    "all_natural_orders", "atomless_split", "axiom_suite", "break_join_irreducible", "canonical_form",
    "check_independence", "densify", "dual_poset", "embeddings_between", "enumerate_posets", "envelope",
    "eval_term", "extend_order", "extend_partial_iso", "forestify", "generated_subalgebra",
    "infinite_orbit_witness", "kpt_witness", "lift_hom", "linear_extensions", "mk_poset", "natural_order",
    "new_chain", "one_generated_family", "ordered_amalgamate", "parse_term", "pmorphisms", "r_split",
    "realize", "regular_elements", "roelcke_family", "saturate", "six_atom_witness", "star_term",
    "stationarity_check", "superamalgamate",
]
