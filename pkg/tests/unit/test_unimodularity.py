"""Tests unitaires pour la mesure des arêtes et l'unimodularité."""

from fractions import Fraction

import pytest

from src.graph_limits.balls import (
    component_birooted_ball,
    extract_ball,
    extract_birooted_ball,
)
from src.graph_limits.codes import canonical_code
from src.graph_limits.errors import (
    BallError,
    MalformedCodeError,
    MeasureError,
    RadiusMismatchError,
)
from src.graph_limits.graph import FiniteGraph
from src.graph_limits.measures import (
    AtomicMeasure,
    law_of_graph,
    profile_of_graph,
    truncate_measure,
)
from src.graph_limits.unimodularity import (
    BirootedAtomicMeasure,
    BirootedProfile,
    DiscrepancyReport,
    check_mass_transport,
    check_unimodular_exact,
    check_unimodular_profile,
    edge_measure,
    edge_profiles_of_profile,
    iota_pushforward,
    transport_count,
)


class TestEdgeMeasure:
    """Tests de μ⃗ et de ι_*"""

    def test_edge_measure_of_path(
        self, law_p3, p3_end_mid_code, p3_mid_end_code
    ):
        """Vérifie μ⃗ pour la loi de P3 (masse totale 4/3)."""
        arrow = edge_measure(law_p3)
        assert arrow.weight(p3_end_mid_code) == Fraction(2, 3)
        assert arrow.weight(p3_mid_end_code) == Fraction(2, 3)
        assert arrow.total_mass == Fraction(4, 3)

    def test_edge_measure_of_edge(self, dirac_k2):
        """Vérifie μ⃗ pour δ_[K2, v]."""
        k2 = FiniteGraph.path(2)
        code = canonical_code(component_birooted_ball(k2, 0, 1))
        assert edge_measure(dirac_k2).atoms == {code: Fraction(1)}

    def test_edge_measure_of_dirac_end(self, dirac_p3_end, p3_end_mid_code):
        """Vérifie μ⃗ pour δ_[P3, extrémité]."""
        assert edge_measure(dirac_p3_end).atoms == {
            p3_end_mid_code: Fraction(1)
        }

    def test_isolated_vertex_has_no_edge_mass(self):
        """Vérifie qu'un sommet isolé ne contribue pas."""
        law = law_of_graph(FiniteGraph(nodes=[0]))
        assert len(edge_measure(law)) == 0

    def test_iota_swaps_roots(
        self, dirac_p3_end, p3_end_mid_code, p3_mid_end_code
    ):
        """Vérifie ι_*{[P3, e, m]: 1} = {[P3, m, e]: 1}."""
        pushed = iota_pushforward(edge_measure(dirac_p3_end))
        assert pushed.atoms == {p3_mid_end_code: Fraction(1)}

    def test_mass_conservation(self, medium_corpus):
        """Vérifie masse de μ⃗ = Σ w·deg(racine), conservée par ι_*."""
        for g in medium_corpus:
            law = law_of_graph(g)
            arrow = edge_measure(law)
            degrees = sum(g.degree(v) for v in g.nodes)
            expected = Fraction(degrees, len(g.nodes))
            assert arrow.total_mass == expected
            assert iota_pushforward(arrow).total_mass == expected

    def test_birooted_measure_validation(self, p3_end_code, p3_end_mid_code):
        """Vérifie les contraintes d'une mesure bi-enracinée."""
        with pytest.raises(MeasureError, match="bi-enracinée"):
            BirootedAtomicMeasure({p3_end_code: Fraction(1)})
        with pytest.raises(MeasureError, match="strictement positifs"):
            BirootedAtomicMeasure({p3_end_mid_code: Fraction(0)})
        with pytest.raises(MeasureError, match="Δ"):
            BirootedAtomicMeasure({p3_end_mid_code: Fraction(3)}, delta=2)

    def test_oversized_birooted_atom_rejected(self, p3_end_mid_code):
        """Vérifie qu'un atome bi-enraciné a le rayon de sa composante."""
        code = canonical_code(
            extract_birooted_ball(FiniteGraph.path(3), 1, 0, 6)
        )
        assert code.is_stabilized and not code.is_component
        with pytest.raises(MeasureError, match="différent de la taille"):
            BirootedAtomicMeasure({p3_end_mid_code: 1, code: 2})

    def test_edge_measure_pairs_under_iota(self, medium_corpus):
        """Vérifie que ι envoie le support de μ⃗ dans lui-même."""
        for g in medium_corpus:
            arrow = edge_measure(law_of_graph(g))
            assert set(iota_pushforward(arrow).atoms) == set(arrow.atoms)


class TestTransportCount:
    """Tests de f_A[G, o]"""

    def test_both_neighbors_in_class(self, p3_mid_code, p3_mid_end_code):
        """Vérifie f_[P3, m, e][P3, m] = 2."""
        assert transport_count(p3_mid_code, p3_mid_end_code) == 2

    def test_class_not_seen(self, p3_end_code, p3_mid_end_code):
        """Vérifie qu'une classe absente donne 0."""
        assert transport_count(p3_end_code, p3_mid_end_code) == 0

    def test_sum_over_classes_is_degree(self, medium_corpus):
        """Vérifie que les classes partitionnent les voisins."""
        for g in medium_corpus:
            for v in g.nodes:
                rooted = canonical_code(extract_ball(g, v, 3))
                classes = {
                    canonical_code(extract_birooted_ball(g, v, x, 2))
                    for x in g.neighbors(v)
                }
                total = sum(transport_count(rooted, c) for c in classes)
                assert total == g.degree(v)

    def test_edge_measure_is_integral_of_counts(self, medium_corpus):
        """Vérifie μ⃗(A) = Σ w · f_A(atome)."""
        for g in medium_corpus:
            law = law_of_graph(g)
            arrow = edge_measure(law)
            for cls, mass in arrow:
                integral = sum(
                    (w * transport_count(code, cls) for code, w in law),
                    Fraction(0),
                )
                assert integral == mass

    def test_wrong_kinds(self, p3_end_code, p3_end_mid_code):
        """Vérifie que des codes inversés sont refusés."""
        with pytest.raises(MalformedCodeError):
            transport_count(p3_end_mid_code, p3_end_code)
        with pytest.raises(MalformedCodeError):
            transport_count(p3_end_code, p3_end_code)

    def test_unreachable_radius(self, p3_mid_end_code):
        """Vérifie qu'une boule tronquée ne détermine pas un plus grand
        rayon."""
        rooted = canonical_code(extract_ball(FiniteGraph.path(9), 4, 1))
        with pytest.raises(BallError):
            transport_count(rooted, p3_mid_end_code)


class TestExactCheck:
    """Tests du certificat exact"""

    def test_law_of_path_passes(self, law_p3):
        """Vérifie que la loi de P3 est unimodulaire."""
        report = check_unimodular_exact(law_p3)
        assert report.passed
        assert report.discrepancy == 0
        assert report.witness is None

    def test_dirac_end_fails(self, dirac_p3_end, p3_end_mid_code):
        """Vérifie l'échec de δ_[P3, extrémité], écart 1."""
        report = check_unimodular_exact(dirac_p3_end)
        assert not report.passed
        assert report.discrepancy == 1
        assert report.witness == p3_end_mid_code

    def test_report_lines(self, dirac_p3_end, hand_codes):
        """Vérifie la sérialisation du rapport."""
        report = check_unimodular_exact(dirac_p3_end)
        assert report.to_lines() == [
            "verdict fail",
            "discrepancy 1/1",
            f"witness {hand_codes['p3_end_mid'].hex()}",
        ]

    def test_laws_of_finite_graphs_pass(self, medium_corpus):
        """Vérifie que toute loi de graphe fini est unimodulaire."""
        for g in medium_corpus:
            report = check_unimodular_exact(law_of_graph(g))
            assert report.passed and report.discrepancy == 0

    def test_mixture_of_laws_passes(self, law_p3, c5):
        """Vérifie la convexité de l'ensemble unimodulaire."""
        mixed = AtomicMeasure.mixture(
            [(Fraction(1, 4), law_p3), (Fraction(3, 4), law_of_graph(c5))]
        )
        assert check_unimodular_exact(mixed).passed

    def test_mixture_with_dirac_fails(self, law_p3, dirac_p3_end):
        """Vérifie qu'un mélange avec un Dirac non unimodulaire échoue."""
        mixed = AtomicMeasure.mixture(
            [(Fraction(1, 2), law_p3), (Fraction(1, 2), dirac_p3_end)]
        )
        report = check_unimodular_exact(mixed)
        assert not report.passed
        assert report.discrepancy == Fraction(1, 2)


class TestProfileCheck:
    """Tests de la vérification au rayon fini"""

    def test_equal_profiles_pass(self, c5):
        """Vérifie qu'avant = arrière donne 0."""
        forward, backward = edge_profiles_of_profile(profile_of_graph(c5, 2))
        report = check_unimodular_profile(forward, backward)
        assert report.passed
        assert report.discrepancy == 0
        assert report.exact

    def test_dirac_end_profiles_fail(self, dirac_p3_end):
        """Vérifie l'écart 1 pour δ_[P3, extrémité] au rayon 2."""
        profile = truncate_measure(dirac_p3_end, 2)
        forward, backward = edge_profiles_of_profile(profile)
        report = check_unimodular_profile(forward, backward)
        assert not report.passed
        assert report.discrepancy == 1

    def test_tolerance(self, dirac_p3_end):
        """Vérifie que la tolérance est respectée."""
        forward, backward = edge_profiles_of_profile(
            truncate_measure(dirac_p3_end, 2)
        )
        assert check_unimodular_profile(forward, backward, Fraction(1)).passed

    def test_radius_mismatch(self, c5):
        """Vérifie le refus de rayons différents."""
        forward, _ = edge_profiles_of_profile(profile_of_graph(c5, 2))
        _, backward = edge_profiles_of_profile(profile_of_graph(c5, 3))
        with pytest.raises(RadiusMismatchError):
            check_unimodular_profile(forward, backward)

    def test_profile_radius_too_small(self, c5):
        """Vérifie qu'il faut un profil de rayon >= 2."""
        with pytest.raises(BallError):
            edge_profiles_of_profile(profile_of_graph(c5, 1))

    @pytest.mark.parametrize("r", [2, 3, 4])
    def test_cycle_limit_is_unimodular(self, r):
        """Vérifie le profil limite des cycles (Dirac en P_{2r+1})."""
        limit = profile_of_graph(FiniteGraph.cycle(4 * r + 4), r)
        assert len(limit) == 1
        report = check_unimodular_profile(*edge_profiles_of_profile(limit))
        assert report.passed and report.discrepancy == 0

    def test_profile_radius_bound(self):
        """Vérifie qu'un profil bi-enraciné a un rayon >= 1."""
        with pytest.raises(BallError):
            BirootedProfile(0, {})

    def test_estimate_report_lines(self, c5):
        """Vérifie le format décimal des rapports estimés."""
        forward, backward = edge_profiles_of_profile(profile_of_graph(c5, 2))
        estimated = BirootedProfile(
            forward.radius,
            forward.masses,
            {code: 0.0 for code in forward.masses},
        )
        report = check_unimodular_profile(
            estimated, backward, Fraction(1, 100)
        )
        assert report.to_lines() == [
            "verdict pass",
            "discrepancy 0",
            "radius 1",
            "tolerance 0.01",
            "scope necessary-not-sufficient",
        ]


class TestMassTransport:
    """Tests du principe de transport de masse"""

    def test_law_satisfies_transport(self, law_p3, p3_end_mid_code):
        """Vérifie l'égalité envoyé = reçu pour une indicatrice."""

        def indicator(code):
            return Fraction(1) if code == p3_end_mid_code else Fraction(0)

        report = check_mass_transport(law_p3, indicator)
        assert report.passed
        assert report.outgoing == report.incoming == Fraction(2, 3)

    def test_constant_function_counts_degree(self, law_p3):
        """Vérifie que f = 1 transporte le degré moyen."""
        report = check_mass_transport(law_p3, lambda code: Fraction(1))
        assert report.outgoing == Fraction(4, 3)

    def test_dirac_end_violates_transport(self, dirac_p3_end, p3_end_mid_code):
        """Vérifie la violation pour δ_[P3, extrémité]."""

        def indicator(code):
            return Fraction(1) if code == p3_end_mid_code else Fraction(0)

        report = check_mass_transport(dirac_p3_end, indicator)
        assert not report.passed
        assert report.discrepancy == 1
        assert report.witness == p3_end_mid_code

    def test_negative_function_rejected(self, law_p3):
        """Vérifie que f doit être positive."""
        with pytest.raises(MeasureError):
            check_mass_transport(law_p3, lambda code: Fraction(-1))


class TestDiscrepancyReport:
    """Tests de la dataclass DiscrepancyReport"""

    def test_pass_lines_have_no_witness(self):
        """Vérifie un rapport de succès exact."""
        report = DiscrepancyReport(True, Fraction(0))
        assert report.to_lines() == ["verdict pass", "discrepancy 0/1"]
