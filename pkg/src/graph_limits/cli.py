"""Interface en ligne de commande ``graph-limits``.

Codes de sortie : 0 succès, 1 échec d'une vérification, 2 entrée ou
option invalide. Les résultats vont sur la sortie standard, les erreurs
et les logs sur la sortie d'erreur.
"""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence

from .config import (
    DEFAULT_DELTA,
    DEFAULT_RADIUS,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    Config,
    configure_logging,
)
from .convergence import compare_to_limit, profile_sequence, radius_reports
from .errors import GraphLimitError
from .graph import FiniteGraph
from .graphing import GraphingSpec, validate_graphing
from .measures import (
    AtomicMeasure,
    ProfileFamily,
    RadiusProfile,
    format_fraction,
    law_of_graph,
    profile_of_graph,
    truncate_measure,
    tv_distance,
)
from .metric import ultrametric_distance
from .sampling import estimate_edge_profiles, estimate_profile
from .unimodularity import check_unimodular_exact, check_unimodular_profile

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

logger = logging.getLogger(__name__)


def _emit(lines: Sequence[str]) -> None:
    for line in lines:
        print(line)


def _emit_text(text: str) -> None:
    print(text, end="")


def _load_graph(filename: str, config: Config) -> FiniteGraph:
    return FiniteGraph.load_from_file(filename, delta=config.delta)


def cmd_law(args: argparse.Namespace, config: Config) -> int:
    graph = _load_graph(args.graph, config)
    _emit_text(law_of_graph(graph).to_text())
    return EXIT_OK


def cmd_profile(args: argparse.Namespace, config: Config) -> int:
    if args.measure:
        measure = AtomicMeasure.load_from_file(args.input)
        if args.family:
            family = ProfileFamily.of_measure(measure, config.radius)
            _emit_text(family.to_text())
        else:
            _emit_text(truncate_measure(measure, config.radius).to_text())
        return EXIT_OK
    graph = _load_graph(args.input, config)
    if args.family:
        _emit_text(ProfileFamily.of_graph(graph, config.radius).to_text())
    else:
        _emit_text(profile_of_graph(graph, config.radius).to_text())
    return EXIT_OK


def cmd_dist(args: argparse.Namespace, config: Config) -> int:
    graph_a = _load_graph(args.graph_a, config)
    graph_b = _load_graph(args.graph_b, config)
    root_a, root_b = args.root_a, args.root_b
    graph_a.require_vertex(root_a)
    graph_b.require_vertex(root_b)
    rho = ultrametric_distance((graph_a, root_a), (graph_b, root_b))
    lines = [f"rho {format_fraction(rho)}"]
    if args.radius is not None:
        tv = tv_distance(
            profile_of_graph(graph_a, config.radius),
            profile_of_graph(graph_b, config.radius),
        )
        lines.append(f"r {config.radius} tv {format_fraction(tv)}")
    _emit(lines)
    return EXIT_OK


def cmd_check(args: argparse.Namespace, config: Config) -> int:
    measure = AtomicMeasure.load_from_file(args.measure)
    report = check_unimodular_exact(measure, delta=config.delta)
    _emit(report.to_lines())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_graphing_validate(args: argparse.Namespace, config: Config) -> int:
    spec = GraphingSpec.load_from_file(args.graphing)
    report = validate_graphing(spec, delta=config.delta)
    _emit(report.to_lines())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_graphing_estimate(args: argparse.Namespace, config: Config) -> int:
    spec = GraphingSpec.load_from_file(args.graphing)
    estimate = estimate_profile(
        spec,
        config.radius,
        config.samples,
        config.seed,
        jobs=config.jobs,
        delta=config.delta,
    )
    _emit_text(estimate.to_text())
    return EXIT_OK


def cmd_graphing_check(args: argparse.Namespace, config: Config) -> int:
    spec = GraphingSpec.load_from_file(args.graphing)
    forward, backward = estimate_edge_profiles(
        spec,
        config.radius,
        config.samples,
        config.seed,
        jobs=config.jobs,
        delta=config.delta,
    )
    report = check_unimodular_profile(forward, backward, config.tolerance)
    _emit([f"samples {config.samples}", f"seed {config.seed}"])
    _emit(report.to_lines())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_converge(args: argparse.Namespace, config: Config) -> int:
    graphs = [_load_graph(name, config) for name in args.graphs]
    reports = radius_reports(graphs, config.radius)
    if args.limit_file:
        limit = RadiusProfile.load_from_file(args.limit_file)
        profiles = profile_sequence(graphs, limit.radius)
        reports = [r for r in reports if r.radius != limit.radius]
        reports.append(compare_to_limit(profiles, limit))
        reports.sort(key=lambda report: report.radius)
    for report in reports:
        _emit(report.to_lines())
    _emit([f"max_radius {max(report.radius for report in reports)}"])
    return EXIT_OK


Command = Callable[[argparse.Namespace, Config], int]

COMMANDS: Dict[str, Command] = {
    "law": cmd_law,
    "profile": cmd_profile,
    "dist": cmd_dist,
    "check": cmd_check,
    "graphing-validate": cmd_graphing_validate,
    "graphing-estimate": cmd_graphing_estimate,
    "graphing-check": cmd_graphing_check,
    "converge": cmd_converge,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--delta",
        type=int,
        default=DEFAULT_DELTA,
        help=f"borne sur les degrés (défaut {DEFAULT_DELTA})",
    )
    common.add_argument(
        "--log-level",
        default="WARNING",
        help="niveau de journalisation (DEBUG, INFO, WARNING...)",
    )

    radius = argparse.ArgumentParser(add_help=False)
    radius.add_argument(
        "--radius", type=int, default=DEFAULT_RADIUS, help="rayon r"
    )

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    sampling.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sampling.add_argument(
        "--jobs", type=int, default=1, help="processus d'échantillonnage"
    )

    parser = argparse.ArgumentParser(
        prog="graph-limits",
        description="Lois de graphes enracinés, unimodularité et graphings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    law = sub.add_parser(
        "law", parents=[common], help="loi d'un graphe fini"
    )
    law.add_argument("graph")

    profile = sub.add_parser(
        "profile",
        parents=[common, radius],
        help="profil de voisinage au rayon r",
    )
    profile.add_argument("input", help="graphe, ou mesure avec --measure")
    profile.add_argument(
        "--measure",
        action="store_true",
        help="lire une mesure atomique au lieu d'un graphe",
    )
    profile.add_argument(
        "--family", action="store_true", help="tous les rayons 0..r"
    )

    dist = sub.add_parser(
        "dist", parents=[common], help="distance ρ entre graphes enracinés"
    )
    dist.add_argument("graph_a")
    dist.add_argument("root_a", type=int)
    dist.add_argument("graph_b")
    dist.add_argument("root_b", type=int)
    dist.add_argument(
        "--radius", type=int, default=None, help="ajoute la TV des profils"
    )

    check = sub.add_parser(
        "check", parents=[common], help="certificat exact d'unimodularité"
    )
    check.add_argument("measure")

    validate = sub.add_parser(
        "graphing-validate", parents=[common], help="valide un graphing"
    )
    validate.add_argument("graphing")

    estimate = sub.add_parser(
        "graphing-estimate",
        parents=[common, radius, sampling],
        help="estime la loi d'un graphing",
    )
    estimate.add_argument("graphing")

    graphing_check = sub.add_parser(
        "graphing-check",
        parents=[common, radius, sampling],
        help="vérifie l'invariance par ι d'un graphing",
    )
    graphing_check.add_argument("graphing")
    graphing_check.add_argument("--tolerance", default="0.01")

    converge = sub.add_parser(
        "converge",
        parents=[common, radius],
        help="convergence d'une suite de graphes",
    )
    converge.add_argument("graphs", nargs="+")
    converge.add_argument("--limit-file", default=None)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    try:
        config = Config.from_namespace(args)
        configure_logging(config.log_level)
        logger.debug("Commande %s", args.command)
        return COMMANDS[args.command](args, config)
    except (GraphLimitError, OSError) as e:
        print(f"erreur: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
