"""Lois des graphes finis, profils de voisinage et mesures atomiques."""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import (
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Tuple,
)

from .balls import BallKind, RootedBall, component_ball
from .codes import Code, canonical_code, component_codes
from .errors import (
    GraphFormatError,
    MalformedCodeError,
    MeasureError,
    RadiusMismatchError,
)
from .graph import FiniteGraph, Vertex
from .metric import truncate_code

BRUTEFORCE_LIMIT = 8

logger = logging.getLogger(__name__)


def format_fraction(value: Fraction) -> str:
    """Écrit une fraction exacte sous la forme ``n/d``"""
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(token: str) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as e:
        raise GraphFormatError(f"Nombre rationnel invalide: {token}") from e


def _as_weight(value: object) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise TypeError("Les poids doivent être des entiers ou des fractions")
    return Fraction(value)


def _read_text(filename: str) -> str:
    try:
        with open(filename, "r", encoding="utf-8") as f:
            return f.read()
    except (IOError, OSError) as e:
        raise OSError(f"Erreur de lecture du fichier: {e}") from e


def _write_text(filename: str, text: str) -> bool:
    try:
        with open(filename, "w", encoding="utf-8") as f:
            f.write(text)
        return True
    except (IOError, OSError) as e:
        raise OSError(f"Erreur lors de la sauvegarde: {e}")


def _content_lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def atom_code(g: FiniteGraph, o: Vertex) -> Code:
    """Code de la composante de ``o`` enracinée en ``o`` (atome de loi)"""
    return canonical_code(component_ball(g, o))


class AtomicMeasure:
    """Mesure de probabilité à support fini sur les graphes enracinés.

    Les atomes sont des codes stabilisés (composantes entières) et les
    poids des fractions strictement positives de somme exactement 1.
    """

    def __init__(self, atoms: Mapping[Code, object]):
        weights: Dict[Code, Fraction] = {}
        for code, value in atoms.items():
            weight = _as_weight(value)
            if weight <= 0:
                raise MeasureError(
                    "Les poids doivent être strictement positifs"
                )
            if code.kind is not BallKind.ROOTED or not code.is_stabilized:
                raise MeasureError(
                    f"L'atome {code.hex()} n'est pas une composante enracinée"
                )
            if not code.is_component:
                raise MeasureError(
                    f"L'atome {code.hex()} a un rayon {code.radius} "
                    f"différent de la taille {code.vertex_count} de sa "
                    "composante"
                )
            weights[code] = weight
        if sum(weights.values(), Fraction(0)) != 1:
            raise MeasureError("Les poids doivent sommer à 1")
        self.atoms: Dict[Code, Fraction] = dict(sorted(weights.items()))

    @classmethod
    def dirac(cls, code: Code) -> "AtomicMeasure":
        return cls({code: Fraction(1)})

    @classmethod
    def mixture(
        cls, weighted: Iterable[Tuple[object, "AtomicMeasure"]]
    ) -> "AtomicMeasure":
        """Combinaison convexe de mesures atomiques"""
        total: Counter = Counter()
        for coefficient, measure in weighted:
            c = _as_weight(coefficient)
            if c < 0:
                raise MeasureError("Coefficient de mélange négatif")
            for code, weight in measure:
                total[code] += c * weight
        return cls({code: w for code, w in total.items() if w > 0})

    def weight(self, code: Code) -> Fraction:
        return self.atoms.get(code, Fraction(0))

    def __iter__(self) -> Iterator[Tuple[Code, Fraction]]:
        return iter(self.atoms.items())

    def __len__(self) -> int:
        return len(self.atoms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AtomicMeasure):
            return NotImplemented
        return self.atoms == other.atoms

    def __repr__(self) -> str:
        return f"AtomicMeasure(atoms={len(self.atoms)})"

    def to_text(self) -> str:
        return "".join(
            f"atom {code.hex()} {format_fraction(weight)}\n"
            for code, weight in self
        )

    @classmethod
    def from_text(cls, text: str) -> "AtomicMeasure":
        """Lit des lignes ``atom <hex> <n>/<d>``"""
        atoms: Dict[Code, Fraction] = {}
        for number, parts in _content_lines(text):
            if len(parts) != 3 or parts[0] != "atom":
                raise GraphFormatError(f"Ligne {number} invalide")
            try:
                code = Code.parse(parts[1])
            except MalformedCodeError as e:
                raise GraphFormatError(f"Ligne {number}: {e}") from e
            if code in atoms:
                raise GraphFormatError(f"Ligne {number}: atome dupliqué")
            atoms[code] = parse_fraction(parts[2])
        return cls(atoms)

    def save_to_file(self, filename: str) -> bool:
        return _write_text(filename, self.to_text())

    @classmethod
    def load_from_file(cls, filename: str) -> "AtomicMeasure":
        return cls.from_text(_read_text(filename))


class CodeDistribution:
    """Masses indexées par des codes d'un même rayon et d'un même type.

    Les masses estimées par échantillonnage restent des fractions
    ``compte/n`` ; ``stderr`` porte alors l'erreur type de chaque code.
    """

    kind = BallKind.ROOTED

    def __init__(
        self,
        radius: int,
        masses: Mapping[Code, object],
        stderr: Optional[Mapping[Code, float]] = None,
    ):
        if radius < 0:
            raise MeasureError("Le rayon doit être positif ou nul")
        cleaned: Dict[Code, Fraction] = {}
        for code, value in masses.items():
            mass = _as_weight(value)
            if mass < 0:
                raise MeasureError("Masse négative")
            if code.kind is not self.kind or code.radius != radius:
                raise MeasureError(
                    f"Le code {code.hex()} n'est pas du rayon {radius}"
                )
            if mass > 0:
                cleaned[code] = mass
        self.radius = radius
        self.masses: Dict[Code, Fraction] = dict(sorted(cleaned.items()))
        self.stderr: Optional[Dict[Code, float]] = (
            None if stderr is None else dict(sorted(stderr.items()))
        )

    @property
    def is_estimate(self) -> bool:
        return self.stderr is not None

    @property
    def total_mass(self) -> Fraction:
        return sum(self.masses.values(), Fraction(0))

    def mass(self, code: Code) -> Fraction:
        return self.masses.get(code, Fraction(0))

    def error(self, code: Code) -> float:
        if self.stderr is None:
            return 0.0
        return self.stderr.get(code, 0.0)

    def __iter__(self) -> Iterator[Tuple[Code, Fraction]]:
        return iter(self.masses.items())

    def __len__(self) -> int:
        return len(self.masses)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CodeDistribution):
            return NotImplemented
        return (
            self.kind is other.kind
            and self.radius == other.radius
            and self.masses == other.masses
        )

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(radius={self.radius}, "
            f"codes={len(self.masses)})"
        )

    def to_text(self) -> str:
        """Lignes ``r <r> <hex> <n>/<d>`` triées par code"""
        return "".join(
            f"r {self.radius} {code.hex()} {format_fraction(mass)}\n"
            for code, mass in self
        )

    def to_estimate_text(self) -> str:
        """Lignes décimales à 6 chiffres significatifs avec erreur type"""
        return "".join(
            f"r {self.radius} {code.hex()} {float(mass):.6g} "
            f"stderr {self.error(code):.6g}\n"
            for code, mass in self
        )


class RadiusProfile(CodeDistribution):
    """Loi des boules de rayon r vue depuis une racine aléatoire"""

    def __init__(
        self,
        radius: int,
        masses: Mapping[Code, object],
        stderr: Optional[Mapping[Code, float]] = None,
    ):
        super().__init__(radius, masses, stderr)
        if self.total_mass != 1:
            raise MeasureError("Les masses d'un profil doivent sommer à 1")

    @classmethod
    def from_text(cls, text: str) -> "RadiusProfile":
        """Lit un profil au format ``r <r> <hex> <n>/<d>``"""
        radius: Optional[int] = None
        masses: Dict[Code, Fraction] = {}
        for number, parts in _content_lines(text):
            if len(parts) != 4 or parts[0] != "r":
                raise GraphFormatError(f"Ligne {number} invalide")
            try:
                line_radius = int(parts[1])
                code = Code.parse(parts[2])
            except (ValueError, MalformedCodeError) as e:
                raise GraphFormatError(f"Ligne {number}: {e}") from e
            if radius is not None and line_radius != radius:
                raise GraphFormatError(f"Ligne {number}: rayon incohérent")
            radius = line_radius
            masses[code] = parse_fraction(parts[3])
        if radius is None:
            raise GraphFormatError("Profil vide")
        return cls(radius, masses)

    @classmethod
    def load_from_file(cls, filename: str) -> "RadiusProfile":
        return cls.from_text(_read_text(filename))


class ProfileFamily:
    """Profils pour les rayons 0..R"""

    def __init__(self, profiles: Iterable[RadiusProfile]):
        self.profiles: List[RadiusProfile] = list(profiles)
        for r, profile in enumerate(self.profiles):
            if profile.radius != r:
                raise RadiusMismatchError(
                    f"Profil de rayon {profile.radius} en position {r}"
                )

    @property
    def max_radius(self) -> Optional[int]:
        return len(self.profiles) - 1 if self.profiles else None

    def __getitem__(self, r: int) -> RadiusProfile:
        return self.profiles[r]

    def __len__(self) -> int:
        return len(self.profiles)

    def __iter__(self) -> Iterator[RadiusProfile]:
        return iter(self.profiles)

    @classmethod
    def of_graph(cls, g: FiniteGraph, max_radius: int) -> "ProfileFamily":
        return cls(profile_of_graph(g, r) for r in range(max_radius + 1))

    @classmethod
    def of_measure(
        cls, m: AtomicMeasure, max_radius: int
    ) -> "ProfileFamily":
        return cls(truncate_measure(m, r) for r in range(max_radius + 1))

    def to_text(self) -> str:
        return "".join(profile.to_text() for profile in self.profiles)


@dataclass(frozen=True)
class RefinementReport:
    passed: bool
    violation: Optional[Tuple[int, int, Code]] = None


def law_of_graph(g: FiniteGraph) -> AtomicMeasure:
    """Loi Ψ(G) : enracinement en un sommet uniforme.

    Chaque classe [G_x, x] reçoit la proportion des sommets qui la
    réalisent ; deux sommets donnent la même classe exactement quand ils
    sont dans la même orbite de Aut(G), si bien qu'une seule recherche
    enracinée est faite par orbite repérée.
    """
    if g.vertex_count == 0:
        raise MeasureError("La loi d'un graphe vide n'est pas définie")
    counts: Counter = Counter()
    for component in g.components():
        sub = g.induced_subgraph(component)
        counts.update(component_codes(sub).values())
    n = g.vertex_count
    logger.debug("Loi calculée: %d sommets, %d atomes", n, len(counts))
    return AtomicMeasure({c: Fraction(k, n) for c, k in counts.items()})


def orbit_masses_bruteforce(g: FiniteGraph) -> AtomicMeasure:
    """Oracle : orbites de Aut(G) par énumération des permutations"""
    n = g.vertex_count
    if n == 0:
        raise MeasureError("La loi d'un graphe vide n'est pas définie")
    if n > BRUTEFORCE_LIMIT:
        raise MeasureError(
            f"Trop de sommets pour l'oracle ({n} > {BRUTEFORCE_LIMIT})"
        )
    nodes = g.nodes
    edges = {frozenset(edge) for edge in g.edges}
    automorphisms = []
    for image in permutations(nodes):
        mapping = dict(zip(nodes, image))
        if all(frozenset((mapping[u], mapping[v])) in edges for u, v in edges):
            automorphisms.append(mapping)
    masses: Counter = Counter()
    seen = set()
    for v in nodes:
        orbit = frozenset(a[v] for a in automorphisms)
        if orbit in seen:
            continue
        seen.add(orbit)
        masses[atom_code(g, min(orbit))] += Fraction(len(orbit), n)
    return AtomicMeasure(dict(masses))


def profile_of_graph(g: FiniteGraph, r: int) -> RadiusProfile:
    """p_G(α, r) : proportion des sommets dont la r-boule est α"""
    if g.vertex_count == 0:
        raise MeasureError("Le profil d'un graphe vide n'est pas défini")
    if r < 0:
        raise MeasureError("Le rayon doit être positif ou nul")
    counts: Counter = Counter()
    for v in g.nodes:
        distances = g.distances_from(v, cutoff=r)
        ball = RootedBall(g.induced_subgraph(distances), v, r)
        counts[canonical_code(ball)] += 1
    n = g.vertex_count
    return RadiusProfile(r, {c: Fraction(k, n) for c, k in counts.items()})


def truncate_measure(m: AtomicMeasure, r: int) -> RadiusProfile:
    """Évalue la mesure sur les ensembles T_r"""
    masses: Counter = Counter()
    for code, weight in m:
        masses[truncate_code(code, r)] += weight
    return RadiusProfile(r, dict(masses))


def tv_distance(p: CodeDistribution, q: CodeDistribution) -> Fraction:
    """Distance en variation totale : demi-somme des écarts de masse"""
    if p.radius != q.radius or p.kind is not q.kind:
        raise RadiusMismatchError(
            f"Profils de rayons différents: {p.radius} et {q.radius}"
        )
    codes = set(p.masses) | set(q.masses)
    return sum(
        (abs(p.mass(c) - q.mass(c)) for c in codes), Fraction(0)
    ) / 2


def check_refinement(f: ProfileFamily) -> RefinementReport:
    """Vérifie que tronquer le profil de rayon r au rayon s < r redonne
    exactement le profil de rayon s"""
    for r in range(1, len(f)):
        for s in range(r - 1, -1, -1):
            aggregated: Counter = Counter()
            for code, mass in f[r]:
                aggregated[truncate_code(code, s)] += mass
            for code in sorted(set(aggregated) | set(f[s].masses)):
                if aggregated[code] != f[s].mass(code):
                    return RefinementReport(False, (r, s, code))
    return RefinementReport(True)
