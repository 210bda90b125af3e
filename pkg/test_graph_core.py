"""
Tests for Cn-symmetric graph validation, canonical form and orbits.
"""

import numpy as np
import pytest

from corpus import fixture_names, fixture_path, load_graph
from errors import InvalidGraphError
from formats import GraphDocument, read_document, vertex_sort_key
from graph_core import (
    SymmetricGraph,
    canonical_edge,
    edge_orbit_indices,
    edge_orbits,
    validate_symmetric_graph,
    vertex_orbits,
)
from symmetry_nac import enumerate_cn_symmetric_nac


def _doc(n, vertices, edges, omega):
    return GraphDocument(n=n, vertices=vertices, edges=edges, omega=omega)


def _kinds(issues):
    return [issue.kind for issue in issues]


@pytest.fixture
def twelve():
    return load_graph("twelve_c4")


@pytest.fixture
def c4_rotation():
    return load_graph("cycle_c4")


class TestValidation:
    """validate_symmetric_graph reports every problem at once."""

    @pytest.mark.parametrize("name", fixture_names())
    def test_shipped_fixtures_are_valid(self, name):
        """Every shipped fixture except the invalid one passes validation."""
        report = validate_symmetric_graph(read_document(fixture_path(name), GraphDocument))
        assert report.valid, report.summary()

    def test_twelve_validates_as_c4_symmetric(self, twelve):
        """The 12-vertex fixture is C4-symmetric without invariant vertices."""
        assert twelve.n == 4
        assert twelve.order == 12
        assert twelve.size == 24
        assert twelve.invariant_vertices == ()

    def test_adjacent_invariant_vertices_name_the_edge(self):
        """Two adjacent fixed vertices are reported with the edge as witness."""
        # Arrange
        doc = read_document(fixture_path("invalid_adjacent_invariants"), GraphDocument)

        # Act
        report = validate_symmetric_graph(doc)

        # Assert
        assert not report.valid
        assert report.structural_errors == []
        assert _kinds(report.violations) == ["invariant_edge"]
        assert report.violations[0].witness == {"edge": ["0", "1"]}

    def test_structural_errors_are_all_reported(self):
        """Loops, unknown endpoints, duplicates and a non-bijective omega appear together."""
        doc = _doc(
            2,
            ["1", "2", "3"],
            [["1", "2"], ["2", "2"], ["1", "9"], ["2", "1"]],
            {"1": "2", "2": "1", "3": "1"},
        )
        report = validate_symmetric_graph(doc)
        kinds = _kinds(report.structural_errors)
        assert "loop" in kinds
        assert "unknown_endpoint" in kinds
        assert "duplicate_edge" in kinds
        assert "omega_not_bijective" in kinds
        # symmetry conditions are not evaluated on a broken structure
        assert report.violations == []

    def test_missing_omega_entry(self):
        """A vertex without an image under omega is a domain error."""
        doc = _doc(2, ["1", "2", "3"], [["1", "2"]], {"1": "2", "2": "1"})
        report = validate_symmetric_graph(doc)
        assert _kinds(report.structural_errors) == ["omega_domain"]

    def test_order_below_two_rejected(self):
        """n = 1 is not a rotational symmetry."""
        doc = _doc(1, ["1", "2"], [["1", "2"]], {"1": "1", "2": "2"})
        assert "order" in _kinds(validate_symmetric_graph(doc).structural_errors)

    def test_omega_power_not_identity(self):
        """A 4-cycle omega declared with n = 2 fails omega^n = id."""
        doc = _doc(2, ["1", "2", "3", "4"], [["1", "2"], ["2", "3"], ["3", "4"], ["1", "4"]],
                   {"1": "2", "2": "3", "3": "4", "4": "1"})
        report = validate_symmetric_graph(doc)
        assert _kinds(report.violations) == ["omega_power"]

    def test_omega_order_smaller_than_n(self):
        """An involution declared with n = 4 has the wrong order."""
        doc = _doc(4, ["1", "2", "3", "4"], [["1", "2"], ["2", "3"], ["3", "4"], ["1", "4"]],
                   {"1": "3", "2": "4", "3": "1", "4": "2"})
        kinds = _kinds(validate_symmetric_graph(doc).violations)
        assert kinds[0] == "omega_order"
        # the 2-cycles are fixed by omega^2 as well
        assert kinds.count("partially_invariant") == 2

    def test_not_an_automorphism(self):
        """An edge mapped to a non-edge is reported with its image."""
        doc = _doc(2, ["1", "2", "3", "4"], [["1", "2"], ["2", "3"], ["3", "4"], ["1", "4"]],
                   {"1": "2", "2": "1", "3": "3", "4": "4"})
        report = validate_symmetric_graph(doc)
        assert "not_automorphism" in _kinds(report.violations)
        witness = next(v.witness for v in report.violations if v.kind == "not_automorphism")
        assert witness["edge"] == ["2", "3"]
        assert witness["image"] == ["1", "3"]

    def test_partially_invariant_vertex(self):
        """A vertex fixed by omega^2 but not by omega is rejected."""
        doc = _doc(
            4,
            ["1", "2", "3", "4", "5", "6"],
            [["1", "2"], ["2", "3"], ["3", "4"], ["1", "4"], ["5", "6"]],
            {"1": "2", "2": "3", "3": "4", "4": "1", "5": "6", "6": "5"},
        )
        report = validate_symmetric_graph(doc)
        assert _kinds(report.violations) == ["partially_invariant"]
        assert report.violations[0].witness == {"vertex": "5", "k": 2}

    def test_from_document_raises_with_report(self):
        """Building a graph from an invalid document carries the full report."""
        doc = read_document(fixture_path("invalid_adjacent_invariants"), GraphDocument)
        with pytest.raises(InvalidGraphError) as excinfo:
            SymmetricGraph.from_document(doc)
        assert not excinfo.value.report.valid
        assert "0 and 1" in str(excinfo.value)

    def test_validates_an_existing_graph(self, twelve):
        """A SymmetricGraph can be re-validated directly."""
        assert validate_symmetric_graph(twelve).valid


class TestVertexOrder:
    """The natural vertex order is total on arbitrary ids."""

    def test_leading_zero_ids_are_distinct(self):
        """"01" and "1" get different keys and a fixed edge orientation."""
        assert vertex_sort_key("01") != vertex_sort_key("1")
        assert vertex_sort_key("01") < vertex_sort_key("1") < vertex_sort_key("2")
        assert canonical_edge("1", "01") == canonical_edge("01", "1") == ("01", "1")

    def test_cycle_with_a_leading_zero_id(self):
        """A C4 using both "1" and "01" supports orbits and enumeration."""
        # Arrange
        g = SymmetricGraph.create(
            ["1", "01", "2", "3"],
            [["1", "01"], ["01", "2"], ["2", "3"], ["3", "1"]],
            {"1": "01", "01": "2", "2": "3", "3": "1"},
            4,
        )

        # Act
        orbits = edge_orbits(g)

        # Assert
        assert g.vertices == ("01", "1", "2", "3")
        assert ("01", "1") in g.edges
        assert orbits.sizes == (4,)
        assert enumerate_cn_symmetric_nac(g) == []

    def test_non_ascii_digit_ids(self):
        """Ids such as "²" sort as plain strings instead of raising."""
        g = SymmetricGraph.create(["²", "b"], [["²", "b"]], {"²": "b", "b": "²"}, 2)
        assert g.vertices == ("b", "²")
        assert g.edges == (("b", "²"),)


class TestSymmetricGraph:
    """Canonical form and the cyclic action."""

    def test_natural_vertex_order(self):
        """Numeric ids sort by value and edges store the smaller endpoint first."""
        g = SymmetricGraph.create(["10", "2", "1", "3"], [[10, 2], [1, 3]], {10: 1, 1: 10, 2: 3, 3: 2}, 2)
        assert g.vertices == ("1", "2", "3", "10")
        assert g.edges == (("1", "3"), ("2", "10"))

    def test_integer_ids_are_normalised(self, twelve):
        """Integer ids in JSON become strings."""
        assert all(isinstance(v, str) for v in twelve.vertices)
        assert twelve.omega["1"] == "4"
        assert twelve.edges[0] == ("1", "9")

    def test_power_of_order_n_is_identity(self, twelve):
        """omega^n is the identity and negative powers invert omega."""
        assert np.array_equal(twelve.power(4), np.arange(12))
        assert np.array_equal(twelve.power(1), twelve.omega_array)
        assert twelve.apply("1", 2) == "7"
        assert twelve.apply("1", -1) == "3"

    def test_vertex_orbits(self, twelve):
        """Three vertex orbits of size four, each led by its smallest vertex."""
        orbits = vertex_orbits(twelve)
        assert orbits.sizes == (4, 4, 4)
        assert orbits.classes[0] == ("1", "4", "7", "3")
        assert orbits.class_of("11") == ("2", "11", "8", "10")

    def test_edge_orbits(self, twelve):
        """Six edge orbits of size four partition the 24 edges."""
        orbits = edge_orbits(twelve)
        assert len(orbits.classes) == 6
        assert set(orbits.sizes) == {4}
        assert orbits.class_of(("1", "11")) == (("1", "11"), ("4", "8"), ("7", "10"), ("2", "3"))
        assert sorted(i for cls in edge_orbit_indices(twelve) for i in cls) == list(range(24))

    def test_edge_orbits_of_the_hexagon_with_triangles(self):
        """Hexagon edges and triangle edges form two orbits."""
        g = load_graph("hexagon_triangles_c6")
        assert edge_orbits(g).sizes == (6, 6)

    def test_invariant_vertices(self):
        """The star centre is the only invariant vertex."""
        star = load_graph("star_k14_c4")
        assert star.invariant_vertices == ("0",)
        assert vertex_orbits(star).classes == (("0",), ("1", "2", "3", "4"))

    def test_orbit_of_pair(self, c4_rotation):
        """Diagonals form an orbit of two, sides an orbit of four."""
        assert c4_rotation.orbit_of_pair("1", "3") == frozenset({("1", "3"), ("2", "4")})
        assert len(c4_rotation.orbit_of_pair("1", "2")) == 4

    def test_with_edges_keeps_symmetry(self, c4_rotation):
        """Adding both diagonals of C4 gives K4."""
        k4 = c4_rotation.with_edges([("1", "3"), ("2", "4")])
        assert k4.size == 6
        assert k4.is_complete()
        assert not c4_rotation.is_complete()

    def test_with_edges_rejects_a_broken_orbit(self, c4_rotation):
        """Adding half an orbit breaks the symmetry."""
        with pytest.raises(InvalidGraphError):
            c4_rotation.with_edges([("1", "3")])

    def test_adjacency_and_networkx_view(self, c4_rotation):
        """The adjacency matrix and networkx view agree with the edge list."""
        assert c4_rotation.adjacency.sum() == 8
        graph = c4_rotation.to_networkx()
        assert graph.number_of_nodes() == 4
        assert graph.number_of_edges() == 4

    def test_document_round_trip(self, twelve):
        """A graph survives conversion to its document and back."""
        assert SymmetricGraph.from_document(twelve.to_document()) == twelve
