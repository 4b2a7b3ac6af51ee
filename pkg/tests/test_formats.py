"""Tests for the text formats, egg-box layout and DOT output."""

import json

import pytest

from app.application.services.catalog_service import CatalogService
from app.application.services.category_service import CategoryService
from app.application.services.isomorphism_service import IsomorphismService
from app.application.services.semigroup_service import SemigroupService
from app.core.exceptions import CapExceeded, IndexOutOfRange, NonAssociative, ParseError
from app.infrastructure.formats.category_text import dump_category, parse_category
from app.infrastructure.formats.dot import eggbox_to_dot, poset_to_dot
from app.infrastructure.formats.eggbox import d_class_poset, eggbox_layout, render_eggbox_text
from app.infrastructure.formats.script import CHECKS, looks_like_script, parse_script
from app.infrastructure.formats.semigroup_text import (
    dump_cayley,
    dump_generators,
    parse_cayley,
    parse_generators,
    parse_semigroup,
    semigroup_to_json,
)


class TestCayleyText:
    """Tests for Cayley table text."""

    def test_parse_with_comments(self):
        S = parse_cayley("# Z2\n2\n0 1  # identity row\n1 0\n", name="Z2")
        assert S.size == 2
        assert S.monoid_identity == 0
        assert S.name == "Z2"

    def test_missing_row(self):
        with pytest.raises(ParseError) as info:
            parse_cayley("2\n0 1\n")
        assert info.value.exit_code == 2

    def test_short_row(self):
        with pytest.raises(ParseError) as info:
            parse_cayley("2\n0 1\n1\n")
        assert info.value.line == 3

    def test_bad_size_line(self):
        with pytest.raises(ParseError) as info:
            parse_cayley("two\n0 1\n1 0\n")
        assert info.value.line == 1

    def test_entry_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            parse_cayley("2\n0 3\n1 0\n")

    def test_non_associative(self):
        with pytest.raises(NonAssociative):
            parse_cayley("2\n1 0\n0 0\n")

    def test_empty(self):
        with pytest.raises(ParseError):
            parse_cayley("# nothing\n\n")

    def test_dump_reparses(self, t2):
        text = dump_cayley(t2)
        assert text.startswith("# T2\n# labels: [1 1] [1 2] [2 1] [2 2]\n4\n")
        assert parse_cayley(text).table.tolist() == t2.table.tolist()

    def test_json(self, named):
        payload = json.loads(semigroup_to_json(named["SL2"]))
        assert payload == {"size": 2, "table": [[0, 1], [1, 1]], "labels": ["1", "0"]}


class TestGeneratorText:
    """Tests for generator lists."""

    def test_full_transformations_of_degree_two(self, t2):
        S = parse_generators("t 2: 2 1\nt 2: 1 1\n")
        assert S.size == 4
        assert IsomorphismService.are_isomorphic(S, t2)
        assert set(S.labels) == set(t2.labels)

    def test_symmetric_group(self):
        S = parse_generators("t 3: 2 1 3\nt 3: 2 3 1\n")
        assert S.size == 6
        assert SemigroupService.greens(S).num_d == 1

    def test_partial_injections(self, i2):
        S = parse_generators("p 2: 2 1\np 2: 1 -\n")
        assert S.size == i2.size
        assert "[- -]" in S.labels

    def test_undefined_point_needs_partial_kind(self):
        with pytest.raises(ParseError):
            parse_generators("t 2: 1 -\n")

    def test_partial_map_injective(self):
        with pytest.raises(ParseError):
            parse_generators("p 2: 1 1\n")

    def test_mixed_kinds(self):
        with pytest.raises(ParseError) as info:
            parse_generators("t 2: 2 1\np 2: 1 -\n")
        assert info.value.line == 2

    def test_image_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            parse_generators("t 2: 3 1\n")

    def test_closure_cap(self):
        with pytest.raises(CapExceeded):
            parse_generators("t 3: 2 1 3\nt 3: 2 3 1\n", cap=5)

    def test_format_detection(self, t2):
        assert parse_semigroup("t 2: 2 1\nt 2: 1 1\n").size == 4
        assert parse_semigroup(dump_cayley(t2)).size == 4

    def test_dump_generators(self, t3):
        S = parse_generators(dump_generators(t3))
        assert IsomorphismService.are_isomorphic(S, t3)

    def test_dump_generators_needs_map_labels(self, named):
        with pytest.raises(ParseError):
            dump_generators(named["Z2"])


class TestCategoryText:
    """Tests for category text."""

    def test_parse(self, two_object_text):
        C = parse_category(two_object_text, name="two")
        assert C.object_labels == ("A", "B")
        assert C.leq[0, 1] and not C.leq[1, 0]
        assert C.hom(1, 1).size == 2

    def test_identity_filled_in(self, two_object_text):
        C = parse_category(two_object_text)
        assert C.hom(0, 0).tolist() == [C.identity(0)]

    def test_missing_composite(self, two_object_text):
        text = two_object_text.replace("c (1,1,1)(1,0,0)=(1,0,0)\n", "")
        with pytest.raises(ParseError) as info:
            parse_category(text)
        assert "missing composite" in str(info.value)

    def test_missing_inclusion(self, two_object_text):
        with pytest.raises(ParseError):
            parse_category(two_object_text.replace("incl 0 1 (0,1,0)\n", ""))

    def test_unknown_line(self, two_object_text):
        with pytest.raises(ParseError):
            parse_category(two_object_text + "arrow 0 1\n")

    def test_hom_index_out_of_range(self, two_object_text):
        with pytest.raises(IndexOutOfRange):
            parse_category(two_object_text.replace("id 1 (1,1,0)", "id 1 (1,1,4)"))

    def test_header_required(self):
        with pytest.raises(ParseError):
            parse_category("order\n1\n")

    def test_dump_reparses(self):
        base = CatalogService.powerset_base(2)
        again = parse_category(dump_category(base))
        assert again.num_morphisms == base.num_morphisms
        assert again.object_labels == base.object_labels
        assert CategoryService.verify_normal(again).passed
        assert IsomorphismService.find_category_iso(base, again) is not None


class TestScripts:
    """Tests for analysis scripts."""

    SCRIPT = "input: catalog:T2\ndownset: 0 1\ntarget: catalog:SL2\nhom: 0->1\nhom: 1->1\ncheck: supported\n"

    def test_parse(self):
        script = parse_script(self.SCRIPT)
        assert script.input == "catalog:T2"
        assert script.downset == [0, 1]
        assert script.hom == {0: 1, 1: 1}
        assert script.checks == ["supported"]

    def test_detection(self):
        assert looks_like_script("# comment\n" + self.SCRIPT)
        assert not looks_like_script("2\n0 1\n1 0\n")

    def test_relative_paths(self):
        script = parse_script("input: t2.txt\n", base_dir="/data")
        assert script.resolve(script.input) == "/data/t2.txt"
        assert script.resolve("catalog:T2") == "catalog:T2"

    @pytest.mark.parametrize(
        "text",
        [
            "input: catalog:T2\ninput: catalog:T3\n",
            "input: catalog:T2\nhom: 0->1\n",
            "downset: 0\n",
            "input: catalog:T2\ncheck: shiny\n",
            "input: catalog:T2\ncolour: blue\n",
            "input: catalog:T2\ndownset: a b\n",
        ],
    )
    def test_rejected(self, text):
        with pytest.raises(ParseError):
            parse_script(text)

    def test_known_checks(self):
        assert CHECKS == ("supported", "self-supported", "bounded-above", "normal")


class TestEggbox:
    """Tests for egg-box layout and rendering."""

    def test_layout_of_t2(self, t2):
        grids = eggbox_layout(t2)
        assert [grid.shape for grid in grids] == [(1, 2), (1, 1)]
        constants = grids[0]
        assert all(cell.idempotent for cell in constants.cells[0])
        units = grids[1].cells[0][0]
        assert units.elements == (1, 2)
        assert units.idempotent

    def test_d_class_order(self, t2):
        P = d_class_poset(t2)
        assert P.hasse_edges() == [(0, 1)]

    def test_text(self, t2):
        text = render_eggbox_text(t2)
        assert text.startswith("T2: 4 elements, 2 D-classes\n")
        assert "*[1 1]" in text
        assert "*[1 2],[2 1]" in text

    def test_group_single_cell(self, named):
        grids = eggbox_layout(named["Z2"])
        assert len(grids) == 1
        assert grids[0].shape == (1, 1)


class TestDot:
    """Tests for DOT output."""

    def test_eggbox_clusters(self, t2):
        dot = eggbox_to_dot(t2)
        assert dot.startswith('digraph "T2" {')
        assert "subgraph cluster_0 {" in dot
        assert "subgraph cluster_1 {" in dot
        assert "d0r0 -> d1r0" in dot

    def test_record_fields_escaped(self, t2):
        sub, _ = SemigroupService.subsemigroup(t2, [0, 3])
        dot = eggbox_to_dot(SemigroupService.from_cayley_table(sub.table.tolist(), labels=["{a}", "|b|"]))
        assert "\\{a\\}" in dot
        assert "\\|b\\|" in dot

    def test_poset(self, t2):
        dot = poset_to_dot(SemigroupService.quotient_poset_R(t2), name="R")
        assert "n0 -> n1;" in dot
        assert 'n1 [label="{[1 2],[2 1]}"];' in dot
