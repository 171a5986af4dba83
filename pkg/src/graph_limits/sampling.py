"""Estimation Monte-Carlo de la loi d'un graphing.

Les points sont tirés par blocs de taille fixe ; le bloc b utilise son
propre flux ``SeedSequence(seed, spawn_key=(b,))``. Le découpage ne
dépend que de n, si bien que le résultat est identique quel que soit le
nombre de processus.
"""

import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Sequence, Tuple, TypeVar

import numpy as np

from .codes import Code
from .config import DEFAULT_DELTA
from .errors import BallError, ConfigError, GraphingError
from .graphing import (
    GraphingSpec,
    Point,
    ScaledLeaves,
    validate_graphing,
)
from .measures import RadiusProfile
from .unimodularity import BirootedProfile

BLOCK_SIZE = 4096
DENOMINATOR = 2**64

T = TypeVar("T")
Task = Tuple[GraphingSpec, int, int, int, int]
Sums = Tuple[Counter, Counter]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Estimate:
    """Profil estimé, reproductible à partir de (spec, r, n, graine)"""

    profile: RadiusProfile
    sample_count: int
    seed: int

    @property
    def stderr(self) -> Dict[Code, float]:
        return dict(self.profile.stderr or {})

    def to_text(self) -> str:
        return (
            f"samples {self.sample_count}\n"
            f"seed {self.seed}\n" + self.profile.to_estimate_text()
        )


def _sample_numerators(seed: int, block: int, count: int) -> List[int]:
    sequence = np.random.SeedSequence(seed, spawn_key=(block,))
    rng = np.random.default_rng(sequence)
    numerators = rng.integers(
        0, DENOMINATOR - 1, size=count, endpoint=True, dtype=np.uint64
    )
    return [int(u) for u in numerators]


def sample_points(seed: int, block: int, count: int) -> List[Point]:
    """Points uniformes k/2^64 du bloc ``block``"""
    return [
        Fraction(u, DENOMINATOR)
        for u in _sample_numerators(seed, block, count)
    ]


def _scaled_block(task: Task) -> Tuple[ScaledLeaves, List[int]]:
    s, _, seed, block, count = task
    leaves = ScaledLeaves(s, DENOMINATOR)
    factor = leaves.denominator // DENOMINATOR
    numerators = _sample_numerators(seed, block, count)
    return leaves, [u * factor for u in numerators]


def _tasks(s: GraphingSpec, r: int, n: int, seed: int) -> List[Task]:
    return [
        (s, r, seed, block, min(BLOCK_SIZE, n - start))
        for block, start in enumerate(range(0, n, BLOCK_SIZE))
    ]


def _profile_block(task: Task) -> Counter:
    _, r, _, block, count = task
    logger.debug("Bloc %d: %d points", block, count)
    leaves, points = _scaled_block(task)
    return Counter(leaves.leaf_code(u, r) for u in points)


def _edge_block(task: Task) -> Tuple[Sums, Sums]:
    _, r, _, block, count = task
    logger.debug("Bloc %d: %d points (arêtes)", block, count)
    forward: Sums = (Counter(), Counter())
    backward: Sums = (Counter(), Counter())
    leaves, points = _scaled_block(task)
    for u in points:
        out: Counter = Counter()
        back: Counter = Counter()
        for v in leaves.neighbors(u):
            out[leaves.birooted_code(u, v, r - 1)] += 1
            back[leaves.birooted_code(v, u, r - 1)] += 1
        for local, (sums, squares) in ((out, forward), (back, backward)):
            for code, c in local.items():
                sums[code] += c
                squares[code] += c * c
    return forward, backward


def _run_blocks(
    worker: Callable[[Task], T], tasks: Sequence[Task], jobs: int
) -> List[T]:
    if jobs < 1:
        raise ConfigError("Le nombre de processus doit être >= 1")
    if jobs == 1 or len(tasks) == 1:
        return [worker(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(worker, tasks))


def _merge(counters: Iterable[Counter]) -> Counter:
    total: Counter = Counter()
    for counter in counters:
        for code in sorted(counter):
            total[code] += counter[code]
    return total


def _check_inputs(
    s: GraphingSpec, r: int, n: int, seed: int, delta: int
) -> None:
    report = validate_graphing(s, delta)
    if not report.passed:
        raise GraphingError(f"Graphing invalide: {report.reason}")
    if r < 0:
        raise BallError("Le rayon doit être positif ou nul")
    if n < 1:
        raise ConfigError("Le nombre d'échantillons doit être >= 1")
    if not 0 <= seed < 2**64:
        raise ConfigError("La graine doit tenir sur 64 bits")


def estimate_profile(
    s: GraphingSpec,
    r: int,
    n: int,
    seed: int,
    jobs: int = 1,
    delta: int = DEFAULT_DELTA,
) -> Estimate:
    """Estime Ψ(𝒢) sur les ensembles T_r avec erreurs types binomiales"""
    _check_inputs(s, r, n, seed, delta)
    counts = _merge(_run_blocks(_profile_block, _tasks(s, r, n, seed), jobs))
    masses = {code: Fraction(c, n) for code, c in counts.items()}
    stderr = {
        code: math.sqrt(float(p) * (1 - float(p)) / n)
        for code, p in masses.items()
    }
    logger.info(
        "Profil estimé: rayon %d, %d échantillons, %d codes",
        r,
        n,
        len(masses),
    )
    return Estimate(RadiusProfile(r, masses, stderr), n, seed)


def _edge_profile(
    sums: Counter, squares: Counter, r: int, n: int, bound: int
) -> BirootedProfile:
    masses = {code: Fraction(c, n) for code, c in sums.items()}
    stderr = {}
    for code, mass in masses.items():
        variance = squares[code] / n - float(mass) ** 2
        stderr[code] = math.sqrt(max(variance, 0.0) / n)
    return BirootedProfile(r, masses, stderr, delta=bound)


def estimate_edge_profiles(
    s: GraphingSpec,
    r: int,
    n: int,
    seed: int,
    jobs: int = 1,
    delta: int = DEFAULT_DELTA,
) -> Tuple[BirootedProfile, BirootedProfile]:
    """Profils avant [B(x, r-1), x, y] et arrière [B(y, r-1), y, x].

    La boule arrière est réexplorée depuis y, elle n'est pas déduite de
    la boule avant.
    """
    if r < 2:
        raise BallError(
            "Le retournement exige un rayon >= 2 (rayon comparé r-1 >= 1)"
        )
    _check_inputs(s, r, n, seed, delta)
    results = _run_blocks(_edge_block, _tasks(s, r, n, seed), jobs)
    bound = s.bound(delta)
    forward = _edge_profile(
        _merge(f[0] for f, _ in results),
        _merge(f[1] for f, _ in results),
        r - 1,
        n,
        bound,
    )
    backward = _edge_profile(
        _merge(b[0] for _, b in results),
        _merge(b[1] for _, b in results),
        r - 1,
        n,
        bound,
    )
    logger.info(
        "Profils d'arêtes estimés: rayon %d, %d échantillons", r - 1, n
    )
    return forward, backward
