"""Configuration d'exécution et journalisation."""

import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from .errors import ConfigError

DEFAULT_DELTA = 8
DEFAULT_RADIUS = 2
DEFAULT_SAMPLES = 100_000
DEFAULT_SEED = 0
DEFAULT_TOLERANCE = Fraction(1, 100)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Config:
    """Paramètres globaux d'une exécution.

    ``delta`` est la borne Δ sur les degrés ; les autres champs pilotent
    l'échantillonnage des graphings et les vérifications statistiques.
    """

    delta: int = DEFAULT_DELTA
    radius: int = DEFAULT_RADIUS
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    jobs: int = 1
    tolerance: Fraction = DEFAULT_TOLERANCE
    log_level: str = "WARNING"

    def __post_init__(self) -> None:
        if not isinstance(self.delta, int) or self.delta < 1:
            raise ConfigError("La borne de degré doit être un entier >= 1")
        if self.radius < 0:
            raise ConfigError("Le rayon doit être positif ou nul")
        if self.samples < 1:
            raise ConfigError("Le nombre d'échantillons doit être >= 1")
        if self.jobs < 1:
            raise ConfigError("Le nombre de processus doit être >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("La graine doit tenir sur 64 bits")
        if not 0 <= self.tolerance <= 1:
            raise ConfigError("La tolérance doit être dans [0, 1]")
        level = logging.getLevelName(self.log_level.upper())
        if not isinstance(level, int):
            raise ConfigError(f"Niveau de log inconnu: {self.log_level}")

    @classmethod
    def from_namespace(cls, namespace: Any) -> "Config":
        """Construit une configuration depuis des arguments argparse"""
        values = {}
        for name in (
            "delta",
            "radius",
            "samples",
            "seed",
            "jobs",
            "log_level",
        ):
            value = getattr(namespace, name, None)
            if value is not None:
                values[name] = value
        tolerance = getattr(namespace, "tolerance", None)
        if tolerance is not None:
            values["tolerance"] = parse_tolerance(tolerance)
        return cls(**values)


def parse_tolerance(text: str) -> Fraction:
    """Convertit une tolérance décimale ou rationnelle en fraction exacte"""
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"Tolérance invalide: {text}") from e


def configure_logging(level: Optional[str] = "WARNING") -> None:
    """Installe un gestionnaire de logs sur la sortie d'erreur"""
    root = logging.getLogger("src.graph_limits")
    root.setLevel((level or "WARNING").upper())
    for handler in list(root.handlers):
        if getattr(handler, "_graph_limits", False):
            root.removeHandler(handler)
    # Rattaché à la sortie d'erreur courante à chaque appel
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._graph_limits = True  # type: ignore[attr-defined]
    root.addHandler(handler)
    logger.debug("Journalisation configurée au niveau %s", level)
