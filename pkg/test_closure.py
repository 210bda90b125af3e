"""
Tests for the Cn-symmetric constant distance closure and the proper-flex verdict.
"""

import pytest

from closure import (
    Verdict,
    constant_distance_closure,
    extend_colouring,
    proper_flex_verdict,
    same_component_relation,
    u_pairs,
)
from corpus import fixture_names, load_colouring, load_graph
from motion import check_proper_conditions
from nac import conjugate
from symmetry_nac import enumerate_cn_symmetric_nac, is_cn_symmetric_nac

SMALL_FIXTURES = [name for name in fixture_names() if load_graph(name).size <= 12]


@pytest.fixture(scope="module")
def closures():
    return {name: (load_graph(name), constant_distance_closure(load_graph(name))) for name in fixture_names()}


class TestUPairs:
    """Pairs joined by a monochromatic path in every symmetric colouring."""

    def test_vacuous_without_symmetric_colourings(self):
        """Without symmetric colourings every non-adjacent pair qualifies."""
        g = load_graph("cycle_c6")
        pairs = u_pairs(g)
        assert len(pairs) == 15 - 6
        assert ("1", "4") in pairs

    def test_twelve_has_none(self):
        """No non-adjacent pair of the twelve-vertex graph is always joined."""
        assert u_pairs(load_graph("twelve_c4")) == frozenset()

    def test_spider_leaves_share_a_component(self):
        """The spoke ends of the C4 spider are pairwise joined."""
        pairs = u_pairs(load_graph("spider_c4"))
        assert pairs == frozenset({("1", "2"), ("1", "3"), ("1", "4"), ("2", "3"), ("2", "4"), ("3", "4")})

    def test_spoke_ends_of_the_c3_spider(self):
        """Only the three spoke ends of the C3 spider are always joined."""
        assert u_pairs(load_graph("spider_c3")) == frozenset({("1", "2"), ("1", "3"), ("2", "3")})

    def test_same_component_relation(self):
        """The relation is reflexive and follows the colouring's components."""
        g = load_graph("twelve_c4")
        relation = same_component_relation(g, load_colouring("twelve_c4", g))
        i, j, k = g.index["1"], g.index["11"], g.index["2"]
        assert relation[i, j]
        assert not relation[i, k]
        assert relation.diagonal().all()


class TestClosure:
    """The fixpoint and its trace."""

    def test_hexagon_closes_to_complete(self, closures):
        """One round turns the hexagon into K6."""
        g, result = closures["cycle_c6"]
        assert result.complete
        assert len(result.rounds) == 1
        assert len(result.rounds[0].added) == 9
        assert result.closure_graph.is_complete()

    @pytest.mark.parametrize("name", ["prism_c3", "star_k14_c4", "k3_c3", "hexagon_triangles_c6"])
    def test_complete_closures(self, closures, name):
        """These fixtures close to a complete graph."""
        assert closures[name][1].complete

    def test_twelve_closure_is_not_complete(self, closures):
        """The twelve-vertex graph is its own closure."""
        g, result = closures["twelve_c4"]
        assert not result.complete
        assert result.rounds == []
        assert result.closure_graph == g

    def test_c3_spider_gains_a_triangle(self, closures):
        """One orbit of three edges is added and the closure stops there."""
        # Arrange
        g, result = closures["spider_c3"]

        # Assert
        assert len(result.rounds) == 1
        assert result.rounds[0].added == (("1", "2"), ("1", "3"), ("2", "3"))
        assert [len(orbit) for orbit in result.rounds[0].orbits] == [3]
        assert result.degenerate_pairs == ()
        assert not result.complete
        assert result.closure_graph.size == g.size + 3

    def test_degenerate_pair_of_invariant_vertices(self, closures):
        """Two invariant vertices are recorded, never joined."""
        # Arrange
        g, result = closures["double_cone_c4"]

        # Assert
        assert result.degenerate_pairs == (("0", "5"),)
        assert ("0", "5") not in result.closure_graph.edges
        assert not result.complete
        assert len(result.rounds) == 1
        assert result.rounds[0].added == (("1", "2"), ("1", "3"), ("1", "4"), ("2", "3"), ("2", "4"), ("3", "4"))

    def test_orbits_are_added_wholesale(self, closures):
        """The C4 spider gains a four-orbit and a two-orbit together."""
        _, result = closures["spider_c4"]
        assert [len(orbit) for orbit in result.rounds[0].orbits] == [4, 2]
        assert result.rounds[0].orbits[1] == (("1", "3"), ("2", "4"))

    @pytest.mark.parametrize("name", fixture_names())
    def test_monotone_and_bounded(self, closures, name):
        """Every round adds new edges and the round count is bounded."""
        g, result = closures[name]
        assert set(g.edges) <= set(result.closure_graph.edges)
        assert len(result.rounds) <= g.order ** 2
        edges = set(g.edges)
        for round_ in result.rounds:
            added = set(round_.added)
            assert added
            assert not added & edges
            edges |= added
        assert edges == set(result.closure_graph.edges)

    @pytest.mark.parametrize("name", fixture_names())
    def test_additions_are_omega_closed(self, closures, name):
        """Added edges come in whole omega-orbits."""
        g, result = closures[name]
        for round_ in result.rounds:
            added = set(round_.added)
            for u, v in added:
                assert g.orbit_of_pair(u, v) <= added

    @pytest.mark.parametrize("name", fixture_names())
    def test_idempotent(self, closures, name):
        """Closing the closure again adds nothing."""
        _, result = closures[name]
        again = constant_distance_closure(result.closure_graph)
        assert again.rounds == []
        assert again.closure_graph.edges == result.closure_graph.edges
        assert set(u_pairs(result.closure_graph)) <= set(result.degenerate_pairs)

    def test_report_document(self, closures):
        """The report document carries rounds, degenerate pairs and the verdict."""
        _, result = closures["double_cone_c4"]
        doc = result.to_document(Verdict.NO_PROPER_PLACEMENT)
        assert doc.complete is False
        assert doc.degenerate_pairs == [["0", "5"]]
        assert doc.rounds[0].added[0] == ["1", "2"]
        assert doc.verdict == "NO_PROPER_PLACEMENT"


class TestColouringPersistence:
    """Symmetric colourings extend across one closure round."""

    @pytest.mark.parametrize("name", SMALL_FIXTURES)
    def test_extension_is_symmetric_nac(self, closures, name):
        """Every symmetric colouring extends to a symmetric colouring of the next round."""
        g, result = closures[name]
        if not result.rounds:
            pytest.skip("closure adds nothing")
        g1 = g.with_edges(result.rounds[0].added)
        for c in enumerate_cn_symmetric_nac(g):
            extended = extend_colouring(g, g1, c)
            assert set(c.red) <= set(extended.red)
            assert set(c.blue) <= set(extended.blue)
            assert is_cn_symmetric_nac(g1, extended).ok, (name, c.red)

    @pytest.mark.parametrize("name", ["spider_c3", "spider_c4"])
    def test_spiders_contribute_both_colourings(self, closures, name):
        """Both spiders gain edges and carry a colouring and its conjugate."""
        g, result = closures[name]
        assert result.rounds
        assert len(enumerate_cn_symmetric_nac(g)) == 2

    def test_spider_extension_colours_the_clique_red(self):
        """With red spokes the added clique is red."""
        g = load_graph("spider_c4")
        c = load_colouring("spider_c4", g)
        g1 = g.with_edges(constant_distance_closure(g).rounds[0].added)
        extended = extend_colouring(g, g1, c)
        assert ("1", "3") in extended.red
        assert extended.blue == c.blue

    def test_conjugate_extension_colours_the_triangle_blue(self):
        """With blue spokes the added triangle joins the blue component."""
        # Arrange
        g = load_graph("spider_c3")
        added = constant_distance_closure(g).rounds[0].added
        g1 = g.with_edges(added)
        red_spokes = next(c for c in enumerate_cn_symmetric_nac(g) if ("0", "1") in c.red)

        # Act
        extended = extend_colouring(g, g1, conjugate(red_spokes))

        # Assert
        assert set(added) <= set(extended.blue)
        assert set(extended.red) == {("1", "4"), ("2", "5"), ("3", "6")}
        assert is_cn_symmetric_nac(g1, extended).ok


class TestVerdict:
    """proper_flex_verdict certificates."""

    def test_hexagon_has_no_proper_placement(self):
        """A complete closure rules out proper placements."""
        verdict = proper_flex_verdict(load_graph("cycle_c6"))
        assert verdict.verdict is Verdict.NO_PROPER_PLACEMENT
        assert verdict.reason == "the constant distance closure is complete"

    def test_degenerate_pair_gives_no_proper_placement(self):
        """Invariant vertices forced together rule out proper placements."""
        verdict = proper_flex_verdict(load_graph("double_cone_c4"))
        assert verdict.verdict is Verdict.NO_PROPER_PLACEMENT
        assert "invariant vertices 0 and 5" in verdict.reason

    @pytest.mark.parametrize("name", ["twelve_c4", "cycle_c4_c2", "cycle_c6_c3", "spider_c4"])
    def test_proper_placement_exists(self, name):
        """A colouring meeting the proper conditions certifies a proper flex."""
        g = load_graph(name)
        verdict = proper_flex_verdict(g)
        assert verdict.verdict is Verdict.PROPER_PLACEMENT_EXISTS
        assert verdict.colouring is not None
        assert not verdict.on_closure
        assert check_proper_conditions(g, verdict.colouring).ok

    def test_verdict_is_deterministic(self):
        """Two runs pick the same certificate."""
        g = load_graph("twelve_c4")
        first = proper_flex_verdict(g)
        second = proper_flex_verdict(g)
        assert first.verdict == second.verdict
        assert first.colouring == second.colouring
