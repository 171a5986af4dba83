#!/usr/bin/env python3
"""
Démonstration du module graph_limits
"""
from fractions import Fraction

from src.graph_limits.graph import FiniteGraph
from src.graph_limits.graphing import (
    GraphingSpec,
    Reflection,
    leaf_orbit_size,
)
from src.graph_limits.measures import (
    AtomicMeasure,
    law_of_graph,
    profile_of_graph,
    tv_distance,
)
from src.graph_limits.sampling import estimate_edge_profiles, estimate_profile
from src.graph_limits.unimodularity import (
    check_unimodular_exact,
    check_unimodular_profile,
)


def main():
    print("=== Démonstration graph_limits ===\n")

    # Loi d'un chemin à trois sommets
    p3 = FiniteGraph.path(3)
    law = law_of_graph(p3)
    print("Loi de P3 :")
    for code, weight in law:
        print(f"- {code.hex()} : {weight}")
    print()

    # Certificat exact
    report = check_unimodular_exact(law)
    print(f"Loi de P3 unimodulaire : {report.passed}")
    end = next(iter(law.atoms))
    dirac = AtomicMeasure.dirac(end)
    report = check_unimodular_exact(dirac)
    print(
        f"Dirac en l'extrémité : {report.passed} "
        f"(écart {report.discrepancy}, témoin {report.witness})\n"
    )

    # Les cycles convergent vers la droite bi-infinie
    limit = profile_of_graph(FiniteGraph.cycle(40), 3)
    print("Distance des cycles au profil limite (rayon 3) :")
    for n in range(5, 10):
        tv = tv_distance(profile_of_graph(FiniteGraph.cycle(n), 3), limit)
        print(f"  C{n} : {tv}")
    print()

    # Graphing à deux réflexions
    spec = GraphingSpec(
        (Reflection(0), Reflection(Fraction(2, 5))), label="beta 1/5"
    )
    x = Fraction(1, 7)
    print(f"Taille de l'orbite de {x} : {leaf_orbit_size(spec, x, 100)}")
    estimate = estimate_profile(spec, 2, 20_000, seed=0)
    print("Profil estimé au rayon 2 :")
    for code, mass in estimate.profile:
        error = estimate.stderr[code]
        print(f"  {code.hex()} : {float(mass):.4f} ± {error:.4f}")
    forward, backward = estimate_edge_profiles(spec, 2, 20_000, seed=0)
    report = check_unimodular_profile(forward, backward, Fraction(1, 100))
    print("Vérification au rayon 1 :")
    for line in report.to_lines():
        print(f"  {line}")

    print("\nDémo terminée avec succès !")


if __name__ == "__main__":
    main()
