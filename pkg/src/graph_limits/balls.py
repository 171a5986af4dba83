"""Boules enracinées et bi-enracinées extraites d'un graphe fini."""

from enum import Enum
from typing import Tuple

from .errors import BallError
from .graph import FiniteGraph, Vertex


class BallKind(Enum):
    # Les valeurs sont écrites telles quelles dans l'en-tête des codes
    ROOTED = 0
    BIROOTED = 1


class RootedBall:
    """Graphe connexe enraciné dont tous les sommets sont à distance
    au plus ``radius`` de la racine"""

    kind = BallKind.ROOTED

    def __init__(self, graph: FiniteGraph, root: Vertex, radius: int):
        if radius < 0:
            raise BallError("Le rayon doit être positif ou nul")
        if not graph.has_vertex(root):
            raise BallError(f"La racine {root} n'est pas dans le graphe")
        _check_within_radius(graph, root, radius)
        self.graph = graph
        self.root = root
        self.radius = radius

    @property
    def roots(self) -> Tuple[Vertex, ...]:
        return (self.root,)

    def __repr__(self) -> str:
        return (
            f"RootedBall(root={self.root!r}, radius={self.radius}, "
            f"vertices={self.graph.vertex_count})"
        )


class BirootedBall:
    """Boule de rayon ``radius`` autour de ``root1`` avec une seconde
    racine ``root2`` adjacente à la première"""

    kind = BallKind.BIROOTED

    def __init__(
        self,
        graph: FiniteGraph,
        root1: Vertex,
        root2: Vertex,
        radius: int,
    ):
        if radius < 1:
            raise BallError(
                "Une boule bi-enracinée a un rayon d'au moins 1"
            )
        for root in (root1, root2):
            if not graph.has_vertex(root):
                raise BallError(f"La racine {root} n'est pas dans le graphe")
        if not graph.has_edge(root1, root2):
            raise BallError(
                f"Les racines {root1} et {root2} ne sont pas adjacentes"
            )
        _check_within_radius(graph, root1, radius)
        self.graph = graph
        self.root1 = root1
        self.root2 = root2
        self.radius = radius

    @property
    def roots(self) -> Tuple[Vertex, ...]:
        return (self.root1, self.root2)

    def __repr__(self) -> str:
        return (
            f"BirootedBall(roots=({self.root1!r}, {self.root2!r}), "
            f"radius={self.radius}, vertices={self.graph.vertex_count})"
        )


def _check_within_radius(
    graph: FiniteGraph, root: Vertex, radius: int
) -> None:
    distances = graph.distances_from(root, cutoff=radius)
    if len(distances) != graph.vertex_count:
        raise BallError(
            f"Des sommets sont à distance > {radius} de la racine "
            "ou hors de sa composante"
        )


def extract_ball(g: FiniteGraph, o: Vertex, r: int) -> RootedBall:
    """Sous-graphe induit par les sommets à distance <= r de ``o``"""
    if r < 0:
        raise BallError("Le rayon doit être positif ou nul")
    distances = g.distances_from(o, cutoff=r)
    return RootedBall(g.induced_subgraph(distances), o, r)


def extract_birooted_ball(
    g: FiniteGraph, o1: Vertex, o2: Vertex, r: int
) -> BirootedBall:
    """Boule de rayon r autour de ``o1``, racines ordonnées (o1, o2)"""
    g.require_vertex(o1)
    g.require_vertex(o2)
    if not g.has_edge(o1, o2):
        raise BallError(f"Les racines {o1} et {o2} ne sont pas adjacentes")
    if r < 1:
        raise BallError(
            "Le rayon minimal d'une boule bi-enracinée est 1 "
            "(la seconde racine doit y appartenir)"
        )
    distances = g.distances_from(o1, cutoff=r)
    return BirootedBall(g.induced_subgraph(distances), o1, o2, r)


def component_ball(g: FiniteGraph, o: Vertex) -> RootedBall:
    """Composante de ``o`` enracinée en ``o``, au rayon stabilisé.

    Le rayon vaut le nombre de sommets de la composante : aucun sommet
    n'est alors au bord de la boule.
    """
    component = g.component_of(o)
    return RootedBall(g.induced_subgraph(component), o, len(component))


def component_birooted_ball(
    g: FiniteGraph, o1: Vertex, o2: Vertex
) -> BirootedBall:
    """Composante de ``o1`` bi-enracinée en (o1, o2), rayon stabilisé"""
    component = g.component_of(o1)
    return BirootedBall(
        g.induced_subgraph(component), o1, o2, len(component)
    )
