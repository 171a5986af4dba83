"""Tests unitaires pour FiniteGraph et son format texte."""

import pytest

from src.graph_limits.errors import (
    ConfigError,
    DegreeBoundError,
    GraphFormatError,
    UnknownVertexError,
)
from src.graph_limits.graph import FiniteGraph


class TestFiniteGraphBasics:
    """Tests de construction et de consultation"""

    def test_path_structure(self, p3):
        """Vérifie sommets, arêtes et degrés de P3."""
        assert p3.nodes == [0, 1, 2]
        assert p3.edges == [(0, 1), (1, 2)]
        assert p3.degree(1) == 2
        assert p3.max_degree() == 2
        assert p3.neighbors(1) == [0, 2]

    def test_loop_rejected(self):
        """Vérifie qu'une boucle est refusée."""
        with pytest.raises(GraphFormatError, match="Boucle"):
            FiniteGraph([(1, 1)])

    def test_degree_bound_enforced(self):
        """Vérifie que Δ est imposé à la construction."""
        with pytest.raises(DegreeBoundError):
            FiniteGraph.star(3, delta=2)

    def test_unbounded_graph(self):
        """Vérifie que delta=None désactive la borne."""
        star = FiniteGraph.star(12, delta=None)
        assert star.max_degree() == 12

    def test_invalid_delta(self):
        """Vérifie qu'une borne nulle est refusée."""
        with pytest.raises(ConfigError):
            FiniteGraph([(0, 1)], delta=0)

    def test_unknown_vertex(self, p3):
        """Vérifie l'erreur sur un sommet absent."""
        with pytest.raises(UnknownVertexError, match="Sommet inconnu"):
            p3.neighbors(7)

    def test_distances_with_cutoff(self):
        """Vérifie les distances tronquées."""
        path = FiniteGraph.path(6)
        assert path.distances_from(0, cutoff=2) == {0: 0, 1: 1, 2: 2}

    def test_components(self):
        """Vérifie les composantes d'une union disjointe."""
        g = FiniteGraph.disjoint_union(
            FiniteGraph.path(2), FiniteGraph.cycle(3)
        )
        assert g.vertex_count == 5
        assert g.components() == [{0, 1}, {2, 3, 4}]
        assert not g.is_connected()

    def test_cycle_needs_three_vertices(self):
        """Vérifie qu'un cycle à deux sommets est refusé."""
        with pytest.raises(GraphFormatError):
            FiniteGraph.cycle(2)

    def test_complete_graph(self):
        """Vérifie le nombre d'arêtes de K4."""
        assert FiniteGraph.complete(4).edge_count == 6

    def test_equality_ignores_edge_order(self):
        """Vérifie l'égalité structurelle."""
        assert FiniteGraph([(2, 1), (0, 1)]) == FiniteGraph([(0, 1), (1, 2)])


class TestFiniteGraphText:
    """Tests du format liste d'arêtes"""

    def test_from_text_with_comments_and_nodes(self):
        """Vérifie commentaires, sommets isolés et arêtes."""
        g = FiniteGraph.from_text("# exemple\n0 1  # arête\nnode 5\n\n1 2\n")
        assert g.nodes == [0, 1, 2, 5]
        assert g.edges == [(0, 1), (1, 2)]

    def test_to_text_round_trip(self):
        """Vérifie qu'un graphe relu est identique."""
        g = FiniteGraph([(0, 3), (3, 4)], nodes=[9])
        assert FiniteGraph.from_text(g.to_text()) == g

    @pytest.mark.parametrize(
        "text", ["0\n", "0 1 2\n", "a b\n", "-1 2\n", "node\n"]
    )
    def test_malformed_lines(self, text):
        """Vérifie que les lignes invalides sont rejetées."""
        with pytest.raises(GraphFormatError, match="Ligne 1"):
            FiniteGraph.from_text(text)

    def test_duplicate_edge(self):
        """Vérifie qu'une arête répétée est rejetée."""
        with pytest.raises(GraphFormatError, match="dupliquée"):
            FiniteGraph.from_text("0 1\n1 0\n")

    def test_degree_checked_on_load(self):
        """Vérifie la borne Δ à la lecture."""
        with pytest.raises(DegreeBoundError):
            FiniteGraph.from_text("0 1\n0 2\n0 3\n", delta=2)

    def test_file_round_trip(self, tmp_path, p3):
        """Vérifie la sauvegarde puis le chargement."""
        path = tmp_path / "g.txt"
        assert p3.save_to_file(str(path))
        assert FiniteGraph.load_from_file(str(path)) == p3

    def test_load_missing_file(self, tmp_path):
        """Vérifie l'erreur de lecture d'un fichier absent."""
        with pytest.raises(OSError, match="Erreur de lecture du fichier"):
            FiniteGraph.load_from_file(str(tmp_path / "absent.txt"))
