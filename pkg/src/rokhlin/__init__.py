"""Exact classification of Rokhlin-type properties for product-type finite-group actions on UHF algebras."""

from __future__ import annotations

__version__ = "0.1.0"

from .action import ActionSpec, LevelRep, Telescope, apply_telescope, block_character, model_action
from .classifier import Outcome, classify, greedy_telescope, near_regular_decompose, rank1_certificate
from .groups import bichar, make_abelian, make_cyclic, make_table
from .spec_io import parse_spec, report_digest, serialize_spec

__all__ = [
    "ActionSpec",
    "LevelRep",
    "Outcome",
    "Telescope",
    "apply_telescope",
    "bichar",
    "block_character",
    "classify",
    "greedy_telescope",
    "make_abelian",
    "make_cyclic",
    "make_table",
    "model_action",
    "near_regular_decompose",
    "parse_spec",
    "rank1_certificate",
    "report_digest",
    "serialize_spec",
]
