"""Limites locales de graphes : lois, unimodularité et graphings."""
