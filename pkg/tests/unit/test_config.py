"""Tests unitaires pour la configuration et la journalisation."""

import argparse
import logging
from fractions import Fraction

import pytest

from src.graph_limits.config import (
    DEFAULT_DELTA,
    Config,
    configure_logging,
    parse_tolerance,
)
from src.graph_limits.errors import ConfigError


class TestConfig:
    """Tests de la dataclass Config"""

    def test_defaults(self):
        """Vérifie les valeurs par défaut."""
        config = Config()
        assert config.delta == DEFAULT_DELTA == 8
        assert config.radius == 2
        assert config.samples == 100_000
        assert config.seed == 0
        assert config.jobs == 1
        assert config.tolerance == Fraction(1, 100)

    @pytest.mark.parametrize(
        "field,value",
        [
            ("delta", 0),
            ("radius", -1),
            ("samples", 0),
            ("jobs", 0),
            ("seed", -1),
            ("seed", 2**64),
            ("tolerance", Fraction(3, 2)),
            ("log_level", "BAVARD"),
        ],
    )
    def test_invalid_values_raise(self, field, value):
        """Vérifie que chaque paramètre invalide est rejeté."""
        with pytest.raises(ConfigError):
            Config(**{field: value})

    def test_config_errors_are_value_errors(self):
        """Vérifie que ConfigError hérite de ValueError."""
        with pytest.raises(ValueError):
            Config(delta=-3)

    def test_from_namespace(self):
        """Vérifie la construction depuis des arguments argparse."""
        namespace = argparse.Namespace(
            delta=4, radius=3, tolerance="0.05", log_level="debug"
        )
        config = Config.from_namespace(namespace)
        assert config.delta == 4
        assert config.radius == 3
        assert config.tolerance == Fraction(1, 20)
        assert config.samples == 100_000

    def test_from_namespace_ignores_missing(self):
        """Vérifie que les champs absents gardent leur défaut."""
        config = Config.from_namespace(argparse.Namespace(command="law"))
        assert config == Config()


class TestParseTolerance:
    """Tests de la lecture des tolérances"""

    @pytest.mark.parametrize(
        "text,expected",
        [("0.01", Fraction(1, 100)), ("1/8", Fraction(1, 8)), ("0", 0)],
    )
    def test_valid(self, text, expected):
        """Vérifie les formes décimale et rationnelle."""
        assert parse_tolerance(text) == expected

    def test_invalid(self):
        """Vérifie qu'un texte non numérique est rejeté."""
        with pytest.raises(ConfigError, match="Tolérance invalide"):
            parse_tolerance("beaucoup")


class TestConfigureLogging:
    """Tests de l'installation du gestionnaire de logs"""

    def test_handler_installed_once(self):
        """Vérifie que deux appels n'installent qu'un gestionnaire."""
        configure_logging("INFO")
        configure_logging("DEBUG")
        logger = logging.getLogger("src.graph_limits")
        marked = [
            h for h in logger.handlers if getattr(h, "_graph_limits", False)
        ]
        assert len(marked) == 1
        assert logger.level == logging.DEBUG
        configure_logging("WARNING")
