"""Graphings mesurables sur le cercle unité rationnel.

Un graphing est donné par k involutions qui préservent la mesure
uniforme sur [0, 1) : des réflexions x ↦ (c - x) mod 1 et des échanges
d'intervalles par translation. Les points sont des fractions exactes, ce
qui rend l'égalité des sommets de la feuille décidable.
"""

import logging
from abc import ABC, abstractmethod
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import (
    Callable,
    Dict,
    Hashable,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
    TypeVar,
)

from .balls import BallKind, RootedBall
from .codes import Code, code_from_adjacency
from .config import DEFAULT_DELTA
from .errors import (
    BallError,
    BudgetExceededError,
    GraphFormatError,
    GraphingError,
)
from .graph import FiniteGraph, Vertex
from .measures import format_fraction, parse_fraction

Point = Fraction
SwapPair = Tuple[Fraction, Fraction, Fraction]
P = TypeVar("P", bound=Hashable)

logger = logging.getLogger(__name__)


def as_point(value: object) -> Point:
    """Convertit en point du cercle ; exige 0 <= x < 1"""
    try:
        point = Fraction(value)  # type: ignore[arg-type]
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise GraphingError(f"Point invalide: {value!r}") from e
    if not 0 <= point < 1:
        raise GraphingError(f"Le point {point} n'est pas dans [0, 1)")
    return point


class Involution(ABC):
    """Bijection mesurable de [0, 1) égale à son inverse"""

    @abstractmethod
    def apply(self, x: Point) -> Point:
        """Image exacte de x"""

    @abstractmethod
    def problems(self) -> List[str]:
        """Violations structurelles, liste vide si l'involution est valide"""

    @abstractmethod
    def to_lines(self) -> List[str]:
        """Lignes du format texte des graphings"""

    @abstractmethod
    def denominators(self) -> List[int]:
        """Dénominateurs des constantes qui définissent l'involution"""

    @abstractmethod
    def scaled(self, denominator: int) -> Callable[[int], int]:
        """Action sur les numérateurs u des points u / denominator ;
        ``denominator`` doit être un multiple de ``denominators()``"""

    def sample_checkpoints(self) -> List[Point]:
        return [Fraction(0), Fraction(1, 2)]


class Reflection(Involution):
    """x ↦ (c - x) mod 1, toujours une involution"""

    def __init__(self, constant: object):
        self.constant = Fraction(constant) % 1  # type: ignore[arg-type]

    def apply(self, x: Point) -> Point:
        return (self.constant - x) % 1

    def problems(self) -> List[str]:
        return []

    def to_lines(self) -> List[str]:
        return [f"involution reflect {format_fraction(self.constant)}"]

    def denominators(self) -> List[int]:
        return [self.constant.denominator]

    def scaled(self, denominator: int) -> Callable[[int], int]:
        factor = denominator // self.constant.denominator
        c = self.constant.numerator * factor
        return lambda u: (c - u) % denominator

    def sample_checkpoints(self) -> List[Point]:
        c = self.constant
        return [Fraction(0), c / 2, (c + 1) / 2, Fraction(1, 3)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Reflection):
            return NotImplemented
        return self.constant == other.constant

    def __hash__(self) -> int:
        return hash(("reflect", self.constant))

    def __repr__(self) -> str:
        return f"Reflection({self.constant})"


class IntervalSwap(Involution):
    """Échange [a, a+len) ↔ [b, b+len) par translation pour chaque
    triplet ; identité ailleurs"""

    def __init__(self, pairs: Sequence[Tuple[object, object, object]] = ()):
        self.pairs: Tuple[SwapPair, ...] = tuple(
            (Fraction(a), Fraction(b), Fraction(length))  # type: ignore
            for a, b, length in pairs
        )
        segments = []
        for a, b, length in self.pairs:
            segments.append((a, a + length, b - a))
            segments.append((b, b + length, a - b))
        segments.sort()
        self._segments: List[SwapPair] = segments
        self._starts: List[Fraction] = [s[0] for s in segments]

    def apply(self, x: Point) -> Point:
        k = bisect_right(self._starts, x) - 1
        if k >= 0:
            start, end, shift = self._segments[k]
            if x < end:
                return x + shift
        return x

    def problems(self) -> List[str]:
        found = []
        for a, b, length in self.pairs:
            if length <= 0:
                found.append(f"longueur non positive: {length}")
            elif min(a, b) < 0 or max(a, b) + length > 1:
                found.append(
                    f"intervalle hors de [0, 1): {a} ↔ {b} "
                    f"(longueur {length})"
                )
        for previous, current in zip(self._segments, self._segments[1:]):
            if current[0] < previous[1]:
                found.append(
                    f"chevauchement: [{previous[0]}, {previous[1]}) et "
                    f"[{current[0]}, {current[1]})"
                )
        return found

    def to_lines(self) -> List[str]:
        lines = ["involution swap"]
        lines.extend(
            f"  pair {format_fraction(a)} {format_fraction(b)} "
            f"{format_fraction(length)}"
            for a, b, length in self.pairs
        )
        return lines

    def denominators(self) -> List[int]:
        return [value.denominator for pair in self.pairs for value in pair]

    def scaled(self, denominator: int) -> Callable[[int], int]:
        segments = [
            tuple(int(value * denominator) for value in segment)
            for segment in self._segments
        ]
        starts = [segment[0] for segment in segments]

        def apply(u: int) -> int:
            k = bisect_right(starts, u) - 1
            if k >= 0:
                start, end, shift = segments[k]
                if u < end:
                    return u + shift
            return u

        return apply

    def sample_checkpoints(self) -> List[Point]:
        points = [Fraction(0), Fraction(1, 2)]
        for start, end, _ in self._segments:
            if 0 <= start < 1:
                points.append(start)
            points.append((start + end) / 2)
        return points

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalSwap):
            return NotImplemented
        return self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash(("swap", self.pairs))

    def __repr__(self) -> str:
        return f"IntervalSwap(pairs={len(self.pairs)})"


@dataclass(frozen=True)
class GraphingSpec:
    """Graphing (X, i_1, ..., i_k, uniforme).

    ``degree_bound`` remplace Δ pour les graphings dérivés d'un graphe
    fini dont la coloration gloutonne dépasse Δ couleurs. Une borne lue
    dans un fichier (``bound_declared``) ne peut que restreindre Δ.
    """

    involutions: Tuple[Involution, ...]
    label: str = ""
    degree_bound: Optional[int] = None
    bound_declared: bool = field(default=False, compare=False)

    @property
    def k(self) -> int:
        return len(self.involutions)

    def bound(self, delta: int = DEFAULT_DELTA) -> int:
        return self.degree_bound if self.degree_bound is not None else delta

    def to_text(self) -> str:
        lines = []
        if self.label:
            lines.append(f"label {self.label}")
        if self.degree_bound is not None:
            lines.append(f"degree_bound {self.degree_bound}")
        for involution in self.involutions:
            lines.extend(involution.to_lines())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GraphingSpec":
        """Lit le format ``involution reflect p/q`` / ``involution swap``
        suivi de lignes indentées ``pair a b len``"""
        label = ""
        degree_bound: Optional[int] = None
        involutions: List[Involution] = []
        pairs: Optional[List[Tuple[object, object, object]]] = None

        def close_swap() -> None:
            nonlocal pairs
            if pairs is not None:
                involutions.append(IntervalSwap(pairs))
                pairs = None

        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            parts = line.split()
            indented = line[0].isspace()
            if indented:
                if pairs is None or parts[0] != "pair" or len(parts) != 4:
                    raise GraphFormatError(f"Ligne {number} invalide")
                pairs.append(tuple(parse_fraction(t) for t in parts[1:]))
                continue
            close_swap()
            if parts[0] == "label":
                label = line.split(None, 1)[1] if len(parts) > 1 else ""
            elif parts[0] == "degree_bound" and len(parts) == 2:
                try:
                    degree_bound = int(parts[1])
                except ValueError as e:
                    raise GraphFormatError(
                        f"Ligne {number}: borne invalide"
                    ) from e
            elif parts[:2] == ["involution", "reflect"] and len(parts) == 3:
                involutions.append(Reflection(parse_fraction(parts[2])))
            elif parts == ["involution", "swap"]:
                pairs = []
            else:
                raise GraphFormatError(f"Ligne {number} invalide: {raw!r}")
        close_swap()
        return cls(
            tuple(involutions),
            label,
            degree_bound,
            bound_declared=degree_bound is not None,
        )

    def save_to_file(self, filename: str) -> bool:
        try:
            with open(filename, "w", encoding="utf-8") as f:
                f.write(self.to_text())
            return True
        except (IOError, OSError) as e:
            raise OSError(f"Erreur lors de la sauvegarde: {e}")

    @classmethod
    def load_from_file(cls, filename: str) -> "GraphingSpec":
        try:
            with open(filename, "r", encoding="utf-8") as f:
                text = f.read()
        except (IOError, OSError) as e:
            raise OSError(f"Erreur de lecture du fichier: {e}") from e
        return cls.from_text(text)


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    reason: Optional[str] = None

    def to_lines(self) -> List[str]:
        lines = [f"verdict {'pass' if self.passed else 'fail'}"]
        if self.reason is not None:
            lines.append(f"reason {self.reason}")
        return lines


def validate_graphing(
    s: GraphingSpec, delta: int = DEFAULT_DELTA
) -> ValidationReport:
    """Rapporte la première violation trouvée.

    La préservation de la mesure découle de la forme des involutions et
    n'est pas vérifiée à l'exécution.
    """
    if s.k < 1:
        return ValidationReport(False, "aucune involution")
    if s.bound_declared and s.bound(delta) > delta:
        return ValidationReport(
            False,
            f"borne déclarée {s.degree_bound} supérieure à Δ = {delta}",
        )
    if s.k > s.bound(delta):
        return ValidationReport(
            False,
            f"borne de degré: {s.k} involutions pour Δ = {s.bound(delta)}",
        )
    for j, involution in enumerate(s.involutions):
        problems = involution.problems()
        if problems:
            return ValidationReport(False, f"involution {j}: {problems[0]}")
        for x in involution.sample_checkpoints():
            y = involution.apply(x)
            if not 0 <= y < 1 or involution.apply(y) != x:
                return ValidationReport(
                    False, f"involution {j}: pas involutive en {x}"
                )
    return ValidationReport(True)


def apply_involution(i: Involution, x: Point) -> Point:
    return i.apply(as_point(x))


def vertex_budget(k: int, r: int) -> int:
    """1 + k + k^2 + ... + k^r"""
    return sum(k**i for i in range(r + 1))


def _explore(
    maps: Sequence[Callable[[P], P]],
    x: P,
    r: int,
    max_vertices: Optional[int] = None,
) -> Tuple[List[P], Tuple[Tuple[int, int], ...]]:
    """Parcours en largeur de la feuille de x jusqu'à la distance r.

    Les sommets sont indexés par ordre de découverte, racine en 0. Les
    arêtes entre sommets à distance r sont conservées (boule induite).
    """
    if r < 0:
        raise BallError("Le rayon doit être positif ou nul")
    if max_vertices is None:
        budget = vertex_budget(len(maps), r)
    else:
        budget = max_vertices
    points = [x]
    index: Dict[P, int] = {x: 0}
    edges: Set[Tuple[int, int]] = set()
    frontier = [0]
    for level in range(r + 1):
        following = []
        for i in frontier:
            p = points[i]
            for apply in maps:
                y = apply(p)
                if y == p:
                    continue
                j = index.get(y)
                if j is None:
                    if level == r:
                        continue
                    j = len(points)
                    if j >= budget:
                        raise BudgetExceededError(
                            f"Plus de {budget} sommets autour de {x}"
                        )
                    points.append(y)
                    index[y] = j
                    following.append(j)
                edges.add((i, j) if i < j else (j, i))
        frontier = following
    return points, tuple(sorted(edges))


def _leaf_code(maps: Sequence[Callable[[P], P]], x: P, r: int) -> Code:
    points, edges = _explore(maps, x, r)
    return code_from_adjacency(BallKind.ROOTED, r, len(points), (0,), edges)


def _leaf_neighbors(maps: Sequence[Callable[[P], P]], x: P) -> List[P]:
    return sorted({y for y in (apply(x) for apply in maps) if y != x})


def _leaf_birooted_code(
    maps: Sequence[Callable[[P], P]], x: P, y: P, r: int
) -> Code:
    if r < 1:
        raise BallError("Une boule bi-enracinée a un rayon d'au moins 1")
    points, edges = _explore(maps, x, r)
    try:
        j = points.index(y, 1)
    except ValueError as e:
        raise BallError(f"{y} n'est pas voisin de {x}") from e
    if (0, j) not in edges:
        raise BallError(f"{y} n'est pas voisin de {x}")
    return code_from_adjacency(
        BallKind.BIROOTED, r, len(points), (0, j), edges
    )


def _exact_maps(s: GraphingSpec) -> List[Callable[[Point], Point]]:
    return [involution.apply for involution in s.involutions]


def leaf_ball(
    s: GraphingSpec, x: Point, r: int, max_vertices: Optional[int] = None
) -> RootedBall:
    """Boule de rayon r de la feuille, sommets = points exacts.

    Raises:
        BudgetExceededError: Si la boule dépasse ``max_vertices`` sommets
            (par défaut 1 + k + ... + k^r)
    """
    points, edges = _explore(_exact_maps(s), as_point(x), r, max_vertices)
    graph = FiniteGraph(
        [(points[i], points[j]) for i, j in edges], points, delta=None
    )
    return RootedBall(graph, points[0], r)


def leaf_code(s: GraphingSpec, x: Point, r: int) -> Code:
    """Code canonique de ``leaf_ball(s, x, r)`` sans passer par un graphe"""
    return _leaf_code(_exact_maps(s), x, r)


def leaf_neighbors(s: GraphingSpec, x: Point) -> List[Point]:
    """Voisins distincts de x dans la feuille, triés"""
    return _leaf_neighbors(_exact_maps(s), x)


def leaf_birooted_code(s: GraphingSpec, x: Point, y: Point, r: int) -> Code:
    """Code de [B(x, r), x, y] pour un voisin y de x"""
    return _leaf_birooted_code(_exact_maps(s), x, y, r)


class ScaledLeaves:
    """Feuilles d'un graphing sur les numérateurs entiers u / D.

    D est un multiple commun des dénominateurs des involutions et de
    ``denominator`` ; l'arithmétique entière remplace celle des fractions
    dans les boucles d'échantillonnage. Les boules obtenues sont celles
    des points exacts u / D.
    """

    def __init__(self, s: GraphingSpec, denominator: int = 1):
        common = denominator
        for involution in s.involutions:
            for d in involution.denominators():
                common = lcm(common, d)
        self.denominator = common
        self.maps = [i.scaled(common) for i in s.involutions]

    def numerator(self, x: Point) -> int:
        """Numérateur de x sur le dénominateur commun"""
        point = as_point(x)
        if self.denominator % point.denominator:
            raise GraphingError(
                f"Le point {point} n'a pas un dénominateur divisant "
                f"{self.denominator}"
            )
        return point.numerator * (self.denominator // point.denominator)

    def leaf_code(self, u: int, r: int) -> Code:
        return _leaf_code(self.maps, u, r)

    def neighbors(self, u: int) -> List[int]:
        return _leaf_neighbors(self.maps, u)

    def birooted_code(self, u: int, v: int, r: int) -> Code:
        return _leaf_birooted_code(self.maps, u, v, r)


def leaf_orbit_size(s: GraphingSpec, x: Point, cap: int) -> Optional[int]:
    """Taille de la classe de x dans la feuille si elle est au plus
    ``cap``, sinon None"""
    seen = {as_point(x)}
    frontier = [as_point(x)]
    while frontier:
        following = []
        for p in frontier:
            for y in leaf_neighbors(s, p):
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        return None
                    following.append(y)
        frontier = following
    return len(seen)


def vertex_point(g: FiniteGraph, v: Vertex) -> Point:
    """Milieu de l'intervalle attribué au sommet v"""
    g.require_vertex(v)
    n = g.vertex_count
    return Fraction(2 * g.nodes.index(v) + 1, 2 * n)


def graph_as_graphing(
    g: FiniteGraph, delta: int = DEFAULT_DELTA
) -> GraphingSpec:
    """Graphing de la mesure uniforme sur V(G).

    Le sommet d'indice i occupe [i/n, (i+1)/n). Les arêtes sont réparties
    en classes par coloration gloutonne ; chaque classe devient un
    échange d'intervalles.
    """
    n = g.vertex_count
    if n == 0:
        raise GraphingError("Un graphe vide n'a pas de graphing")
    index = {v: i for i, v in enumerate(g.nodes)}
    used: Dict[int, Set[int]] = {i: set() for i in range(n)}
    classes: List[List[Tuple[int, int]]] = []
    for u, v in g.edges:
        i, j = index[u], index[v]
        color = 0
        while color in used[i] or color in used[j]:
            color += 1
        if color == len(classes):
            classes.append([])
        classes[color].append((i, j))
        used[i].add(color)
        used[j].add(color)
    width = Fraction(1, n)
    involutions: Tuple[Involution, ...] = tuple(
        IntervalSwap([(i * width, j * width, width) for i, j in edges])
        for edges in classes
    ) or (IntervalSwap(),)
    degree_bound = None
    if len(involutions) > delta:
        logger.warning(
            "Coloration gloutonne à %d couleurs : borne Δ relevée de %d ; "
            "relire le fichier avec --delta %d",
            len(involutions),
            delta,
            len(involutions),
        )
        degree_bound = len(involutions)
    return GraphingSpec(involutions, f"graphe {n} sommets", degree_bound)
