"""Ultramétrique ρ sur les graphes enracinés, troncature et retournement
des codes."""

from fractions import Fraction
from typing import Dict, Tuple

from .balls import (
    BallKind,
    RootedBall,
    extract_ball,
    extract_birooted_ball,
)
from .codes import Code, canonical_code, decode, swapped_code
from .errors import BallError
from .graph import FiniteGraph, Vertex

RootedGraph = Tuple[FiniteGraph, Vertex]


def _ball_code(
    g: FiniteGraph, o: Vertex, distances: Dict[Vertex, int], s: int
) -> Code:
    members = [v for v, d in distances.items() if d <= s]
    return canonical_code(RootedBall(g.induced_subgraph(members), o, s))


def ultrametric_distance(a: RootedGraph, b: RootedGraph) -> Fraction:
    """Distance 2^-r où r est le plus grand rayon de boules isomorphes.

    La recherche s'arrête au rayon B = plus grande des deux composantes :
    au-delà, chaque boule est sa composante entière, et l'égalité des
    codes à ce rayon vaut isomorphisme des composantes enracinées.
    """
    (g, o), (h, p) = a, b
    distances_g = g.distances_from(o)
    distances_h = h.distances_from(p)
    bound = max(len(distances_g), len(distances_h))
    for s in range(1, bound + 1):
        size_g = sum(1 for d in distances_g.values() if d <= s)
        size_h = sum(1 for d in distances_h.values() if d <= s)
        if size_g != size_h or _ball_code(
            g, o, distances_g, s
        ) != _ball_code(h, p, distances_h, s):
            return Fraction(1, 2 ** (s - 1))
    return Fraction(0)


def truncate_code(c: Code, s: int) -> Code:
    """Restreint une boule codée au rayon ``s``.

    Un rayon supérieur à celui du code n'est accepté que pour une
    composante entière (code stabilisé).
    """
    if s > c.radius and not c.is_stabilized:
        raise BallError(
            f"Rayon {s} non atteignable depuis un code de rayon {c.radius}"
        )
    ball = decode(c)
    if c.kind is BallKind.ROOTED:
        return canonical_code(extract_ball(ball.graph, ball.roots[0], s))
    root1, root2 = ball.roots
    return canonical_code(extract_birooted_ball(ball.graph, root1, root2, s))


def swap_roots(c: Code) -> Code:
    """Échange les deux racines d'une composante bi-enracinée entière"""
    if c.kind is not BallKind.BIROOTED:
        raise BallError("Seul un code bi-enraciné a deux racines")
    if not c.is_stabilized:
        raise BallError(
            "L'échange sans perte de rayon exige une composante entière ; "
            "utiliser flip_birooted pour une boule de rayon fini"
        )
    return swapped_code(c)


def flip_birooted(c: Code) -> Code:
    """Retourne [B(o1, r), o1, o2] en [B(o2, r-1), o2, o1].

    La boule de rayon r-1 autour de o2 est contenue dans celle de rayon
    r autour de o1 : le résultat ne dépend que de la classe du code.

    Raises:
        BallError: Si le code n'est pas bi-enraciné ou si r < 2
    """
    if c.kind is not BallKind.BIROOTED:
        raise BallError("Le retournement s'applique aux codes bi-enracinés")
    if c.radius < 2:
        raise BallError(
            "Retournement impossible au rayon 1 : le rayon 0 ne contient "
            "pas la seconde racine"
        )
    ball = decode(c)
    root1, root2 = ball.roots
    return canonical_code(
        extract_birooted_ball(ball.graph, root2, root1, c.radius - 1)
    )
