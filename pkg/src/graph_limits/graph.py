"""Graphes finis de degré borné et format texte des listes d'arêtes."""

import logging
from typing import Dict, Hashable, Iterable, List, Optional, Set, Tuple

import networkx as nx

from .config import DEFAULT_DELTA
from .errors import (
    ConfigError,
    DegreeBoundError,
    GraphFormatError,
    UnknownVertexError,
)

Vertex = Hashable
Edge = Tuple[Vertex, Vertex]

logger = logging.getLogger(__name__)


class FiniteGraph:
    """Graphe fini simple et non orienté dont les degrés sont bornés par Δ.

    Le stockage est un ``networkx.Graph`` ; l'objet n'est plus modifié
    après construction. ``delta=None`` désactive la borne (utilisé pour
    les représentants décodés, déjà validés à l'encodage).
    """

    def __init__(
        self,
        edges: Iterable[Edge] = (),
        nodes: Iterable[Vertex] = (),
        delta: Optional[int] = DEFAULT_DELTA,
    ):
        if delta is not None and delta < 1:
            raise ConfigError("La borne de degré doit être un entier >= 1")
        graph = nx.Graph()
        graph.add_nodes_from(nodes)
        for u, v in edges:
            if u == v:
                raise GraphFormatError(f"Boucle interdite sur le sommet {u}")
            graph.add_edge(u, v)
        self.delta = delta
        self._graph = graph
        if delta is not None and self.max_degree() > delta:
            raise DegreeBoundError(
                f"Degré maximal {self.max_degree()} "
                f"supérieur à Δ = {delta}"
            )

    @property
    def nodes(self) -> List[Vertex]:
        """Sommets triés"""
        return sorted(self._graph.nodes)

    @property
    def edges(self) -> List[Edge]:
        """Arêtes triées, chaque paire dans l'ordre croissant"""
        return sorted(tuple(sorted(edge)) for edge in self._graph.edges)

    @property
    def vertex_count(self) -> int:
        return self._graph.number_of_nodes()

    @property
    def edge_count(self) -> int:
        return self._graph.number_of_edges()

    def has_vertex(self, v: Vertex) -> bool:
        return v in self._graph

    def require_vertex(self, v: Vertex) -> None:
        """Lève une erreur si le sommet n'existe pas"""
        if v not in self._graph:
            raise UnknownVertexError(f"Sommet inconnu: {v}")

    def neighbors(self, v: Vertex) -> List[Vertex]:
        self.require_vertex(v)
        return sorted(self._graph.neighbors(v))

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return bool(self._graph.has_edge(u, v))

    def degree(self, v: Vertex) -> int:
        self.require_vertex(v)
        return int(self._graph.degree(v))

    def max_degree(self) -> int:
        return max((d for _, d in self._graph.degree), default=0)

    def distances_from(
        self, v: Vertex, cutoff: Optional[int] = None
    ) -> Dict[Vertex, int]:
        """Distances de graphe depuis ``v`` (parcours en largeur)"""
        self.require_vertex(v)
        return dict(
            nx.single_source_shortest_path_length(self._graph, v, cutoff)
        )

    def component_of(self, v: Vertex) -> Set[Vertex]:
        self.require_vertex(v)
        return set(nx.node_connected_component(self._graph, v))

    def components(self) -> List[Set[Vertex]]:
        """Composantes connexes, triées par plus petit sommet"""
        return sorted(
            (set(c) for c in nx.connected_components(self._graph)),
            key=min,
        )

    def is_connected(self) -> bool:
        return self.vertex_count > 0 and nx.is_connected(self._graph)

    def induced_subgraph(self, vertices: Iterable[Vertex]) -> "FiniteGraph":
        sub = self._graph.subgraph(vertices)
        return FiniteGraph(sub.edges, sub.nodes, delta=self.delta)

    def relabel(self, mapping: Dict[Vertex, Vertex]) -> "FiniteGraph":
        """Renomme les sommets selon ``mapping`` (bijection)"""
        return FiniteGraph(
            ((mapping[u], mapping[v]) for u, v in self._graph.edges),
            (mapping[v] for v in self._graph.nodes),
            delta=self.delta,
        )

    def as_networkx(self) -> nx.Graph:
        """Vue en lecture seule du graphe networkx sous-jacent"""
        return self._graph.copy(as_view=True)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGraph):
            return NotImplemented
        return (
            set(self._graph.nodes) == set(other._graph.nodes)
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((frozenset(self._graph.nodes), tuple(self.edges)))

    def __repr__(self) -> str:
        return (
            f"FiniteGraph(vertex_count={self.vertex_count}, "
            f"edge_count={self.edge_count}, delta={self.delta})"
        )

    # Familles usuelles

    @classmethod
    def path(
        cls, n: int, delta: Optional[int] = DEFAULT_DELTA
    ) -> "FiniteGraph":
        """Chemin P_n à n sommets 0..n-1"""
        if n < 1:
            raise GraphFormatError("Un chemin a au moins un sommet")
        return cls(((i, i + 1) for i in range(n - 1)), range(n), delta)

    @classmethod
    def cycle(
        cls, n: int, delta: Optional[int] = DEFAULT_DELTA
    ) -> "FiniteGraph":
        """Cycle C_n à n >= 3 sommets"""
        if n < 3:
            raise GraphFormatError("Un cycle a au moins trois sommets")
        return cls(((i, (i + 1) % n) for i in range(n)), range(n), delta)

    @classmethod
    def star(
        cls, leaves: int, delta: Optional[int] = DEFAULT_DELTA
    ) -> "FiniteGraph":
        """Étoile K_{1,leaves} de centre 0"""
        return cls(((0, i) for i in range(1, leaves + 1)), [0], delta)

    @classmethod
    def complete(
        cls, n: int, delta: Optional[int] = DEFAULT_DELTA
    ) -> "FiniteGraph":
        """Graphe complet K_n"""
        return cls(
            ((i, j) for i in range(n) for j in range(i + 1, n)),
            range(n),
            delta,
        )

    @classmethod
    def disjoint_union(cls, *graphs: "FiniteGraph") -> "FiniteGraph":
        """Union disjointe, sommets renumérotés consécutivement"""
        edges: List[Edge] = []
        nodes: List[int] = []
        offset = 0
        deltas = [g.delta for g in graphs]
        for g in graphs:
            index = {v: offset + i for i, v in enumerate(g.nodes)}
            nodes.extend(index.values())
            edges.extend((index[u], index[v]) for u, v in g.edges)
            offset += g.vertex_count
        delta = None if None in deltas else max(deltas, default=DEFAULT_DELTA)
        return cls(edges, nodes, delta)

    # Format texte

    def to_text(self) -> str:
        """Sérialise au format liste d'arêtes (sommets entiers)"""
        lines = []
        touched = {v for edge in self._graph.edges for v in edge}
        for v in self.nodes:
            if v not in touched:
                lines.append(f"node {v}")
        lines.extend(f"{u} {v}" for u, v in self.edges)
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(
        cls, text: str, delta: Optional[int] = DEFAULT_DELTA
    ) -> "FiniteGraph":
        """Lit une liste d'arêtes ``u v``, ``node v`` et commentaires ``#``"""
        nodes: List[int] = []
        edges: List[Edge] = []
        seen: Set[Tuple[int, int]] = set()
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "node" and len(parts) == 2:
                    nodes.append(_parse_vertex(parts[1]))
                    continue
                if len(parts) != 2:
                    raise ValueError(line)
                u, v = _parse_vertex(parts[0]), _parse_vertex(parts[1])
            except ValueError as e:
                raise GraphFormatError(
                    f"Ligne {number} invalide: {raw!r}"
                ) from e
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"Ligne {number}: arête dupliquée")
            seen.add(key)
            edges.append((u, v))
        return cls(edges, nodes, delta)

    @classmethod
    def load_from_file(
        cls, filename: str, delta: Optional[int] = DEFAULT_DELTA
    ) -> "FiniteGraph":
        """Charge un graphe depuis un fichier texte UTF-8"""
        try:
            with open(filename, "r", encoding="utf-8") as f:
                text = f.read()
        except (IOError, OSError) as e:
            raise OSError(f"Erreur de lecture du fichier: {e}") from e
        graph = cls.from_text(text, delta)
        logger.debug("Graphe chargé depuis %s: %r", filename, graph)
        return graph

    def save_to_file(self, filename: str) -> bool:
        """Écrit le graphe au format liste d'arêtes"""
        try:
            with open(filename, "w", encoding="utf-8") as f:
                f.write(self.to_text())
            return True
        except (IOError, OSError) as e:
            raise OSError(f"Erreur lors de la sauvegarde: {e}")


def _parse_vertex(token: str) -> int:
    value = int(token)
    if value < 0:
        raise ValueError(token)
    return value
