"""Mesure des arêtes, involution ι et certificats d'unimodularité.

Une mesure sur les graphes enracinés est unimodulaire si et seulement si
sa mesure des arêtes μ⃗ est invariante par l'échange des deux racines.
Pour une mesure atomique, les indicatrices des classes bi-enracinées
suffisent : la vérification est exacte.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Tuple

from .balls import BallKind, extract_birooted_ball
from .codes import Code, canonical_code, decode, neighbor_codes
from .config import DEFAULT_DELTA
from .errors import (
    BallError,
    MalformedCodeError,
    MeasureError,
    RadiusMismatchError,
)
from .measures import (
    AtomicMeasure,
    CodeDistribution,
    RadiusProfile,
    format_fraction,
)
from .metric import swap_roots

logger = logging.getLogger(__name__)


class BirootedAtomicMeasure:
    """Mesure finie sur les composantes bi-enracinées.

    Sa masse totale est le degré moyen de la racine, pas 1.
    """

    def __init__(
        self, atoms: Mapping[Code, Fraction], delta: int = DEFAULT_DELTA
    ):
        cleaned: Dict[Code, Fraction] = {}
        for code, weight in atoms.items():
            if weight <= 0:
                raise MeasureError(
                    "Les poids doivent être strictement positifs"
                )
            if code.kind is not BallKind.BIROOTED or not code.is_stabilized:
                raise MeasureError(
                    f"L'atome {code.hex()} n'est pas une composante "
                    "bi-enracinée"
                )
            if not code.is_component:
                raise MeasureError(
                    f"L'atome {code.hex()} a un rayon {code.radius} "
                    f"différent de la taille {code.vertex_count} de sa "
                    "composante"
                )
            cleaned[code] = Fraction(weight)
        self.atoms: Dict[Code, Fraction] = dict(sorted(cleaned.items()))
        if self.total_mass > delta:
            raise MeasureError(
                f"Masse totale {self.total_mass} supérieure à Δ = {delta}"
            )

    @property
    def total_mass(self) -> Fraction:
        return sum(self.atoms.values(), Fraction(0))

    def weight(self, code: Code) -> Fraction:
        return self.atoms.get(code, Fraction(0))

    def __iter__(self) -> Iterator[Tuple[Code, Fraction]]:
        return iter(self.atoms.items())

    def __len__(self) -> int:
        return len(self.atoms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BirootedAtomicMeasure):
            return NotImplemented
        return self.atoms == other.atoms

    def __repr__(self) -> str:
        return f"BirootedAtomicMeasure(atoms={len(self.atoms)})"


class BirootedProfile(CodeDistribution):
    """Statistiques des classes bi-enracinées de rayon fixé"""

    kind = BallKind.BIROOTED

    def __init__(
        self,
        radius: int,
        masses: Mapping[Code, object],
        stderr: Optional[Mapping[Code, float]] = None,
        delta: int = DEFAULT_DELTA,
    ):
        if radius < 1:
            raise BallError("Un profil bi-enraciné a un rayon d'au moins 1")
        super().__init__(radius, masses, stderr)
        if self.total_mass > delta:
            raise MeasureError(
                f"Masse totale {self.total_mass} supérieure à Δ = {delta}"
            )


@dataclass(frozen=True)
class DiscrepancyReport:
    """Résultat d'une vérification d'invariance par ι.

    ``exact`` distingue le certificat sur mesure atomique (tolérance
    nulle) de la vérification sur profils, seulement nécessaire.
    """

    passed: bool
    discrepancy: Fraction
    witness: Optional[Code] = None
    tolerance: Fraction = Fraction(0)
    exact: bool = True
    radius: Optional[int] = None

    def to_lines(self) -> List[str]:
        lines = [f"verdict {'pass' if self.passed else 'fail'}"]
        if self.exact:
            lines.append(f"discrepancy {format_fraction(self.discrepancy)}")
        else:
            lines.append(f"discrepancy {float(self.discrepancy):.6g}")
        if self.witness is not None:
            lines.append(f"witness {self.witness.hex()}")
        if not self.exact:
            lines.append(f"radius {self.radius}")
            lines.append(f"tolerance {float(self.tolerance):.6g}")
            lines.append("scope necessary-not-sufficient")
        return lines


@dataclass(frozen=True)
class TransportReport:
    """Bilan du transport de masse pour une fonction de transport f"""

    passed: bool
    outgoing: Fraction
    incoming: Fraction
    witness: Optional[Code] = None

    @property
    def discrepancy(self) -> Fraction:
        return abs(self.outgoing - self.incoming)


def _sup_discrepancy(
    forward: Mapping[Code, Fraction], backward: Mapping[Code, Fraction]
) -> Tuple[Fraction, Optional[Code]]:
    # Égalités départagées par la masse avant, puis par l'ordre des codes
    worst = Fraction(0)
    worst_forward = Fraction(-1)
    witness: Optional[Code] = None
    zero = Fraction(0)
    for code in sorted(set(forward) | set(backward)):
        f = forward.get(code, zero)
        gap = abs(f - backward.get(code, zero))
        if gap > worst or (gap == worst and gap > 0 and f > worst_forward):
            worst, worst_forward, witness = gap, f, code
    return worst, witness


def edge_measure(
    m: AtomicMeasure, delta: int = DEFAULT_DELTA
) -> BirootedAtomicMeasure:
    """μ⃗ : la masse de chaque atome [G, o] est recopiée sur chaque
    classe [G, o, x] pour x voisin de o"""
    masses: Counter = Counter()
    for code, weight in m:
        for birooted in neighbor_codes(code):
            masses[birooted] += weight
    return BirootedAtomicMeasure(dict(masses), delta)


def transport_count(rooted: Code, birooted_class: Code) -> int:
    """f_A[G, o] : nombre de voisins x de la racine avec [G, o, x] dans A.

    Raises:
        MalformedCodeError: Si les types de codes sont inversés
        BallError: Si la classe a un rayon que la boule ne détermine pas
    """
    if rooted.kind is not BallKind.ROOTED:
        raise MalformedCodeError("Le premier code doit être enraciné")
    if birooted_class.kind is not BallKind.BIROOTED:
        raise MalformedCodeError("La classe doit être bi-enracinée")
    s = birooted_class.radius
    if s > rooted.radius and not rooted.is_stabilized:
        raise BallError(
            f"Classe de rayon {s} non déterminée par une boule de rayon "
            f"{rooted.radius}"
        )
    ball = decode(rooted)
    root = ball.roots[0]
    return sum(
        1
        for x in ball.graph.neighbors(root)
        if canonical_code(extract_birooted_ball(ball.graph, root, x, s))
        == birooted_class
    )


def iota_pushforward(
    v: BirootedAtomicMeasure, delta: int = DEFAULT_DELTA
) -> BirootedAtomicMeasure:
    """ι_* : chaque atome [G, x, y] devient [G, y, x], masse conservée"""
    masses: Counter = Counter()
    for code, weight in v:
        masses[swap_roots(code)] += weight
    return BirootedAtomicMeasure(dict(masses), delta)


def check_unimodular_exact(
    m: AtomicMeasure, delta: int = DEFAULT_DELTA
) -> DiscrepancyReport:
    """Certificat exact : μ⃗ et ι_*μ⃗ coïncident-elles ?"""
    forward = edge_measure(m, delta)
    backward = iota_pushforward(forward, delta)
    discrepancy, witness = _sup_discrepancy(forward.atoms, backward.atoms)
    logger.debug(
        "Vérification exacte: %d atomes, écart %s", len(m), discrepancy
    )
    return DiscrepancyReport(
        passed=discrepancy == 0,
        discrepancy=discrepancy,
        witness=witness,
    )


def check_unimodular_profile(
    forward: BirootedProfile,
    backward: BirootedProfile,
    tolerance: Fraction = Fraction(0),
) -> DiscrepancyReport:
    """Vérification au rayon fini : nécessaire, pas suffisante.

    Raises:
        RadiusMismatchError: Si les deux profils n'ont pas le même rayon
    """
    if forward.radius != backward.radius:
        raise RadiusMismatchError(
            f"Profils de rayons différents: {forward.radius} et "
            f"{backward.radius}"
        )
    discrepancy, witness = _sup_discrepancy(forward.masses, backward.masses)
    return DiscrepancyReport(
        passed=discrepancy <= tolerance,
        discrepancy=discrepancy,
        witness=witness,
        tolerance=Fraction(tolerance),
        exact=not (forward.is_estimate or backward.is_estimate),
        radius=forward.radius,
    )


def edge_profiles_of_profile(
    p: RadiusProfile, delta: int = DEFAULT_DELTA
) -> Tuple[BirootedProfile, BirootedProfile]:
    """Profils avant et arrière au rayon r-1 déduits d'un profil de rayon r.

    Avant : [B(o, r-1), o, x] ; arrière : [B(x, r-1), x, o], pour chaque
    voisin x de la racine. Les deux boules sont contenues dans B(o, r).
    """
    r = p.radius
    if r < 2:
        raise BallError("Il faut un profil de rayon >= 2")
    forward: Counter = Counter()
    backward: Counter = Counter()
    for code, mass in p:
        ball = decode(code)
        root = ball.roots[0]
        for x in ball.graph.neighbors(root):
            out = extract_birooted_ball(ball.graph, root, x, r - 1)
            back = extract_birooted_ball(ball.graph, x, root, r - 1)
            forward[canonical_code(out)] += mass
            backward[canonical_code(back)] += mass
    return (
        BirootedProfile(r - 1, dict(forward), delta=delta),
        BirootedProfile(r - 1, dict(backward), delta=delta),
    )


def check_mass_transport(
    m: AtomicMeasure,
    f: Callable[[Code], Fraction],
    delta: int = DEFAULT_DELTA,
) -> TransportReport:
    """Principe de transport de masse pour une fonction f ≥ 0.

    Compare ∫ Σ_x f[G, o, x] dμ (masse envoyée) et ∫ Σ_x f[G, x, o] dμ
    (masse reçue), f étant évaluée sur les composantes bi-enracinées.
    """
    forward = edge_measure(m, delta)
    backward = iota_pushforward(forward, delta)
    sent: Dict[Code, Fraction] = {}
    received: Dict[Code, Fraction] = {}
    for code in sorted(set(forward.atoms) | set(backward.atoms)):
        value = Fraction(f(code))
        if value < 0:
            raise MeasureError("La fonction de transport doit être positive")
        sent[code] = value * forward.weight(code)
        received[code] = value * backward.weight(code)
    outgoing = sum(sent.values(), Fraction(0))
    incoming = sum(received.values(), Fraction(0))
    _, witness = _sup_discrepancy(sent, received)
    return TransportReport(outgoing == incoming, outgoing, incoming, witness)
