"""Text formats for semigroups, categories, scripts and diagrams."""

from app.infrastructure.formats.category_text import dump_category, parse_category
from app.infrastructure.formats.dot import eggbox_to_dot, poset_to_dot
from app.infrastructure.formats.eggbox import eggbox_layout, render_eggbox_text
from app.infrastructure.formats.script import AnalysisScript, looks_like_script, parse_script
from app.infrastructure.formats.semigroup_text import (
    dump_cayley,
    dump_generators,
    parse_cayley,
    parse_generators,
    parse_semigroup,
    semigroup_to_json,
)

__all__ = [
    "dump_category",
    "parse_category",
    "eggbox_to_dot",
    "poset_to_dot",
    "eggbox_layout",
    "render_eggbox_text",
    "AnalysisScript",
    "looks_like_script",
    "parse_script",
    "dump_cayley",
    "dump_generators",
    "parse_cayley",
    "parse_generators",
    "parse_semigroup",
    "semigroup_to_json",
]
