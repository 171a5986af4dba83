"""Exceptions du laboratoire de limites de graphes.

Toutes les erreurs héritent de ``ValueError`` : les appelants qui
attrapaient déjà ``ValueError`` continuent de fonctionner.
"""


class GraphLimitError(ValueError):
    """Erreur de base du projet"""


class ConfigError(GraphLimitError):
    """Paramètre de configuration invalide"""


class GraphFormatError(GraphLimitError):
    """Fichier (graphe, mesure, profil, graphing) mal formé"""


class UnknownVertexError(GraphLimitError):
    """Sommet absent du graphe"""


class DegreeBoundError(GraphLimitError):
    """Le degré maximal dépasse la borne Δ"""


class BallError(GraphLimitError):
    """Boule enracinée ou bi-enracinée invalide"""


class MalformedCodeError(GraphLimitError):
    """Suite d'octets qui n'est pas un code canonique valide"""


class RadiusMismatchError(GraphLimitError):
    """Deux profils comparés n'ont pas le même rayon"""


class MeasureError(GraphLimitError):
    """Mesure atomique ou profil incohérent"""


class GraphingError(GraphLimitError):
    """Involution ou graphing invalide"""


class BudgetExceededError(GraphLimitError):
    """Exploration d'une boule au-delà du nombre de sommets autorisé"""
