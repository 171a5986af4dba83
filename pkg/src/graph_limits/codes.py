"""Codes canoniques des classes d'isomorphisme de boules.

Un code est la sérialisation minimale de la matrice d'adjacence parmi
les feuilles d'une recherche par individualisation et raffinement. Ces
ordres placent la ou les racines en tête et respectent les couches du
parcours en largeur, mais n'en forment qu'une partie : le raffinement
(couleurs de Weisfeiler-Leman) écarte ceux que la structure distingue
déjà. Cette partie ne dépend que de la classe d'isomorphisme, si bien que
deux boules ont le même code exactement quand elles sont isomorphes. Les
automorphismes découverts élaguent les branches équivalentes.

Disposition des octets (version 1) :

    version:u8  kind:u8  radius:u16  n:u16  triangle inférieur

Le triangle inférieur est lu ligne par ligne (ligne i : adjacence du
i-ème sommet avec les sommets 0..i-1), bits de poids fort en premier,
complété par des zéros.
"""

import logging
import struct
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from .balls import BallKind, BirootedBall, RootedBall
from .errors import BallError, DegreeBoundError, MalformedCodeError
from .graph import FiniteGraph, Vertex

CODE_VERSION = 1
HEADER = struct.Struct(">BBHH")
MAX_FIELD = 0xFFFF

Ball = Union[RootedBall, BirootedBall]
Cells = List[List[int]]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Code:
    """Code canonique ; l'ordre est l'ordre lexicographique des octets"""

    data: bytes

    def _header(self) -> Tuple[int, int, int, int]:
        if len(self.data) < HEADER.size:
            raise MalformedCodeError("Code tronqué: en-tête incomplet")
        return HEADER.unpack_from(self.data)  # type: ignore[return-value]

    @property
    def kind(self) -> BallKind:
        value = self._header()[1]
        try:
            return BallKind(value)
        except ValueError as e:
            raise MalformedCodeError("Type de boule inconnu") from e

    @property
    def radius(self) -> int:
        return self._header()[2]

    @property
    def vertex_count(self) -> int:
        return self._header()[3]

    @property
    def is_stabilized(self) -> bool:
        """Vrai si la boule est une composante entière (aucun bord)"""
        return self.radius >= self.vertex_count

    @property
    def is_component(self) -> bool:
        """Vrai pour la forme normale d'une composante : rayon égal au
        nombre de sommets, de sorte qu'une classe n'a qu'un seul code"""
        return self.radius == self.vertex_count

    def hex(self) -> str:
        return self.data.hex()

    @classmethod
    def from_hex(cls, text: str) -> "Code":
        try:
            return cls(bytes.fromhex(text))
        except ValueError as e:
            raise MalformedCodeError(
                f"Code hexadécimal invalide: {text}"
            ) from e

    @classmethod
    def parse(cls, text: str) -> "Code":
        """Lit un code hexadécimal et vérifie son en-tête"""
        code = cls.from_hex(text)
        code.kind
        return code

    def __str__(self) -> str:
        return self.hex()


def canonical_code(b: Ball, delta: Optional[int] = None) -> Code:
    """Code canonique d'une boule enracinée ou bi-enracinée.

    Args:
        b: La boule à encoder
        delta: Borne de degré à vérifier (par défaut celle du graphe)

    Returns:
        Code: Identique pour deux boules isomorphes, distinct sinon

    Raises:
        DegreeBoundError: Si un degré dépasse la borne
    """
    graph = b.graph
    bound = graph.delta if delta is None else delta
    if bound is not None and graph.max_degree() > bound:
        raise DegreeBoundError(
            f"Degré maximal {graph.max_degree()} supérieur à Δ = {bound}"
        )
    index, edges = _indexed_edges(graph)
    roots = tuple(index[r] for r in b.roots)
    return code_from_adjacency(b.kind, b.radius, len(index), roots, edges)


def component_codes(component: FiniteGraph) -> Dict[Vertex, Code]:
    """Codes [C, v] d'une composante connexe enracinée en chacun de ses
    sommets.

    Une recherche sans racine fournit des automorphismes de C ; un seul
    code est calculé par orbite qu'ils engendrent. Des générateurs
    incomplets ne coûtent que des recherches enracinées en plus, le
    résultat ne change pas.

    Raises:
        BallError: Si le graphe n'est pas connexe
    """
    index, edges = _indexed_edges(component)
    n = len(index)
    search = _CanonicalSearch(_adjacency(n, edges), ())
    search.run()
    parent = list(range(n))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for image in search.automorphisms:
        for v in range(n):
            a, b = find(v), find(image[v])
            if a != b:
                parent[max(a, b)] = min(a, b)
    by_orbit: Dict[int, Code] = {}
    codes: Dict[Vertex, Code] = {}
    for v, i in index.items():
        orbit = find(i)
        if orbit not in by_orbit:
            by_orbit[orbit] = code_from_adjacency(
                BallKind.ROOTED, n, n, (i,), edges
            )
        codes[v] = by_orbit[orbit]
    logger.debug(
        "Composante de %d sommets: %d orbites", n, len(by_orbit)
    )
    return codes


def neighbor_codes(c: Code) -> List[Code]:
    """Codes [C, o, x] pour chaque voisin x de la racine d'une composante
    enracinée, dans l'ordre canonique des voisins"""
    if c.kind is not BallKind.ROOTED or not c.is_stabilized:
        raise BallError("Une composante enracinée entière est requise")
    ball = decode(c)
    n = ball.graph.vertex_count
    edges = tuple(ball.graph.edges)
    return [
        code_from_adjacency(BallKind.BIROOTED, c.radius, n, (0, x), edges)
        for x in sorted(ball.graph.neighbors(0))
    ]


def swapped_code(c: Code) -> Code:
    """Code d'une composante bi-enracinée entière, racines échangées"""
    ball = decode(c)
    edges = tuple(ball.graph.edges)
    return code_from_adjacency(
        BallKind.BIROOTED, c.radius, c.vertex_count, (1, 0), edges
    )


def _indexed_edges(
    graph: FiniteGraph,
) -> Tuple[Dict[Vertex, int], Tuple[Tuple[int, int], ...]]:
    index = {v: i for i, v in enumerate(graph.nodes)}
    edges = tuple(
        sorted(_ordered_pair(index[u], index[v]) for u, v in graph.edges)
    )
    return index, edges


def _ordered_pair(i: int, j: int) -> Tuple[int, int]:
    return (i, j) if i < j else (j, i)


def _adjacency(n: int, edges: Sequence[Tuple[int, int]]) -> List[Set[int]]:
    adjacency: List[Set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    return adjacency


@lru_cache(maxsize=1 << 16)
def code_from_adjacency(
    kind: BallKind,
    radius: int,
    n: int,
    roots: Tuple[int, ...],
    edges: Tuple[Tuple[int, int], ...],
) -> Code:
    """Code canonique d'une boule donnée par sommets 0..n-1 et arêtes.

    Les appels répétés sur la même structure indexée sont mis en cache ;
    l'exploration des graphings produit des indices de découverte stables
    et en profite largement.
    """
    if radius > MAX_FIELD or n > MAX_FIELD:
        raise BallError("Boule trop grande pour l'en-tête du code")
    adjacency = _adjacency(n, edges)
    order = _CanonicalSearch(adjacency, roots).run()
    return Code(_serialize(kind, radius, order, adjacency))


def _serialize(
    kind: BallKind,
    radius: int,
    order: Sequence[int],
    adjacency: List[Set[int]],
) -> bytes:
    n = len(order)
    value, nbits = _triangle_bits(order, adjacency)
    nbytes = (nbits + 7) // 8
    body = (value << (nbytes * 8 - nbits)).to_bytes(nbytes, "big")
    return HEADER.pack(CODE_VERSION, kind.value, radius, n) + body


def _triangle_bits(
    order: Sequence[int], adjacency: List[Set[int]]
) -> Tuple[int, int]:
    value = 0
    nbits = 0
    for i in range(1, len(order)):
        row = adjacency[order[i]]
        for j in range(i):
            value = (value << 1) | (order[j] in row)
            nbits += 1
    return value, nbits


def _bfs_layers(adjacency: List[Set[int]], source: int) -> Dict[int, int]:
    distances = {source: 0}
    frontier = [source]
    while frontier:
        following = []
        for u in frontier:
            for v in adjacency[u]:
                if v not in distances:
                    distances[v] = distances[u] + 1
                    following.append(v)
        frontier = following
    return distances


def _refine(cells: Cells, adjacency: List[Set[int]]) -> Cells:
    """Raffinement équitable ; l'ordre des cellules ne dépend que des
    couleurs, jamais des étiquettes des sommets"""
    while True:
        cell_of = {v: i for i, cell in enumerate(cells) for v in cell}
        refined: Cells = []
        for cell in cells:
            if len(cell) == 1:
                refined.append(cell)
                continue
            groups: Dict[Tuple[int, ...], List[int]] = {}
            for v in cell:
                signature = tuple(sorted(cell_of[u] for u in adjacency[v]))
                groups.setdefault(signature, []).append(v)
            refined.extend(groups[key] for key in sorted(groups))
        if len(refined) == len(cells):
            return refined
        cells = refined


class _CanonicalSearch:
    """Individualisation-raffinement avec élagage par automorphismes"""

    def __init__(self, adjacency: List[Set[int]], roots: Tuple[int, ...]):
        self.adjacency = adjacency
        self.roots = roots
        self.best_bits: Optional[int] = None
        self.best_order: List[int] = []
        self.first_bits: Optional[int] = None
        self.first_order: List[int] = []
        # Automorphismes trouvés, chacun comme liste image[v]
        self.automorphisms: List[List[int]] = []
        self.leaves = 0

    def run(self) -> List[int]:
        n = len(self.adjacency)
        if self.roots:
            cells = self._rooted_cells()
        else:
            # Sans racine : seule la structure sépare les sommets
            cells = [list(range(n))]
        self._search(cells, ())
        logger.debug(
            "Recherche canonique: %d sommets, %d feuilles, %d automorphismes",
            n,
            self.leaves,
            len(self.automorphisms),
        )
        return self.best_order

    def _rooted_cells(self) -> Cells:
        n = len(self.adjacency)
        distances = _bfs_layers(self.adjacency, self.roots[0])
        if len(distances) != n:
            raise BallError("La boule n'est pas connexe")
        rank = {root: i for i, root in enumerate(self.roots)}
        colors: Dict[Tuple[int, int], List[int]] = {}
        for v in range(n):
            key = (distances[v], rank.get(v, len(self.roots)))
            colors.setdefault(key, []).append(v)
        return [colors[key] for key in sorted(colors)]

    def _search(self, cells: Cells, fixed: Tuple[int, ...]) -> None:
        cells = _refine(cells, self.adjacency)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            self._leaf([cell[0] for cell in cells])
            return
        cell = sorted(cells[target])
        explored: List[int] = []
        for v in cell:
            if explored and self._same_orbit(v, explored, fixed):
                continue
            rest = [w for w in cell if w != v]
            branch = cells[:target] + [[v], rest] + cells[target + 1 :]
            self._search(branch, fixed + (v,))
            explored.append(v)

    def _leaf(self, order: List[int]) -> None:
        self.leaves += 1
        bits, _ = _triangle_bits(order, self.adjacency)
        if self.first_bits is None:
            self.first_bits, self.first_order = bits, order
        elif bits == self.first_bits:
            self._record(self.first_order, order)
        if self.best_bits is None or bits < self.best_bits:
            self.best_bits, self.best_order = bits, order
        elif bits == self.best_bits and self.best_order != self.first_order:
            self._record(self.best_order, order)

    def _record(self, source: List[int], target: List[int]) -> None:
        image = [0] * len(source)
        for u, v in zip(source, target):
            image[u] = v
        if any(image[v] != v for v in range(len(image))):
            self.automorphisms.append(image)

    def _same_orbit(
        self, v: int, explored: List[int], fixed: Tuple[int, ...]
    ) -> bool:
        generators = [
            g for g in self.automorphisms if all(g[u] == u for u in fixed)
        ]
        if not generators:
            return False
        orbit = {v}
        frontier = [v]
        while frontier:
            u = frontier.pop()
            for g in generators:
                w = g[u]
                if w not in orbit:
                    orbit.add(w)
                    frontier.append(w)
        return any(u in orbit for u in explored)


def decode(c: Code, delta: Optional[int] = None) -> Ball:
    """Représentant canonique (sommets 0..n-1, racines en tête) d'un code.

    Raises:
        MalformedCodeError: Octets tronqués, en-tête invalide, boule
            invalide ou sérialisation non canonique
    """
    return _decode_cached(c.data, delta)


@lru_cache(maxsize=1 << 14)
def _decode_cached(data: bytes, delta: Optional[int]) -> Ball:
    if len(data) < HEADER.size:
        raise MalformedCodeError("Code tronqué: en-tête incomplet")
    version, kind_value, radius, n = HEADER.unpack_from(data)
    if version != CODE_VERSION:
        raise MalformedCodeError(f"Version de code inconnue: {version}")
    try:
        kind = BallKind(kind_value)
    except ValueError as e:
        raise MalformedCodeError("Type de boule inconnu") from e
    if n < 1 or (kind is BallKind.BIROOTED and n < 2):
        raise MalformedCodeError("Nombre de sommets insuffisant")
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 7) // 8
    if len(data) != HEADER.size + nbytes:
        raise MalformedCodeError(
            f"Longueur {len(data)} incohérente avec {n} sommets"
        )
    padding = nbytes * 8 - nbits
    value = int.from_bytes(data[HEADER.size :], "big")
    if value & ((1 << padding) - 1):
        raise MalformedCodeError("Bits de remplissage non nuls")
    value >>= padding
    edges = []
    position = nbits
    for i in range(1, n):
        for j in range(i):
            position -= 1
            if (value >> position) & 1:
                edges.append((j, i))
    graph = FiniteGraph(edges, range(n), delta=delta)
    try:
        ball: Ball
        if kind is BallKind.ROOTED:
            ball = RootedBall(graph, 0, radius)
        else:
            ball = BirootedBall(graph, 0, 1, radius)
    except BallError as e:
        raise MalformedCodeError(f"Boule invalide: {e}") from e
    if canonical_code(ball).data != data:
        raise MalformedCodeError("Sérialisation non canonique")
    return ball
