"""Diagnostics de convergence faible, rayon par rayon.

Une suite de lois converge si ses profils convergent à chaque rayon. Un
calcul fini ne voit qu'un nombre fini de rayons : les rapports indiquent
toujours le rayon examiné.
"""

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import MeasureError, RadiusMismatchError
from .graph import FiniteGraph
from .measures import (
    RadiusProfile,
    format_fraction,
    profile_of_graph,
    tv_distance,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SequenceReport:
    """Distances entre profils successifs d'une suite, au rayon ``radius``.

    ``consecutive_tv[i - 1]`` est TV(p_{i-1}, p_i). ``cauchy_from`` est le
    plus petit indice à partir duquel tous les profils restants sont
    égaux, ou None si la suite n'est pas constante à partir d'un rang
    antérieur au dernier terme.
    """

    radius: int
    consecutive_tv: Tuple[Fraction, ...]
    cauchy_from: Optional[int]
    limit_tv: Optional[Tuple[Fraction, ...]] = None

    def to_lines(self) -> List[str]:
        r = self.radius
        lines = [
            f"r {r} n {i} tv {format_fraction(tv)}"
            for i, tv in enumerate(self.consecutive_tv, start=1)
        ]
        if self.limit_tv is not None:
            lines.extend(
                f"r {r} n {i} limit_tv {format_fraction(tv)}"
                for i, tv in enumerate(self.limit_tv)
            )
        cauchy = "none" if self.cauchy_from is None else self.cauchy_from
        lines.append(f"r {r} cauchy_from {cauchy}")
        return lines


def profile_sequence(
    graphs: Sequence[FiniteGraph], r: int
) -> List[RadiusProfile]:
    if not graphs:
        raise MeasureError("Suite de graphes vide")
    return [profile_of_graph(g, r) for g in graphs]


def _common_radius(profiles: Sequence[RadiusProfile]) -> int:
    if not profiles:
        raise MeasureError("Suite de profils vide")
    radius = profiles[0].radius
    for p in profiles[1:]:
        if p.radius != radius:
            raise RadiusMismatchError(
                f"Profils de rayons différents: {radius} et {p.radius}"
            )
    return radius


def cauchy_report(profiles: Sequence[RadiusProfile]) -> SequenceReport:
    radius = _common_radius(profiles)
    distances = tuple(
        tv_distance(p, q) for p, q in zip(profiles, profiles[1:])
    )
    cauchy_from: Optional[int] = None
    for c in range(len(distances) - 1, -1, -1):
        if distances[c] != 0:
            break
        cauchy_from = c
    logger.debug(
        "Rayon %d: %d profils, stationnaire depuis %s",
        radius,
        len(profiles),
        cauchy_from,
    )
    return SequenceReport(radius, distances, cauchy_from)


def compare_to_limit(
    profiles: Sequence[RadiusProfile], limit: RadiusProfile
) -> SequenceReport:
    """Ajoute au rapport de Cauchy la distance de chaque terme à la
    limite candidate"""
    report = cauchy_report(profiles)
    if limit.radius != report.radius:
        raise RadiusMismatchError(
            f"Limite de rayon {limit.radius}, suite de rayon {report.radius}"
        )
    return replace(
        report, limit_tv=tuple(tv_distance(p, limit) for p in profiles)
    )


def radius_reports(
    graphs: Sequence[FiniteGraph], max_radius: int
) -> List[SequenceReport]:
    """Rapports de Cauchy pour chaque rayon 0..max_radius"""
    if max_radius < 0:
        raise MeasureError("Le rayon doit être positif ou nul")
    return [
        cauchy_report(profile_sequence(graphs, r))
        for r in range(max_radius + 1)
    ]
