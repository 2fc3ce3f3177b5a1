"""
Entropie-Maße: quantenlogische Entropie und Divergenz, klassische logische
Entropie von Partitionen und Verteilungen, Tsallis- und von-Neumann-Entropie.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Tuple, Union
import logging

import numpy as np
import numpy.typing as npt

from app.config import settings
from app.services.errors import DistributionError, ParameterError, PositivityError
from app.services.linalg import frobenius_distance_sq, hermitian_eigen, trace_of_square
from app.services.qstate import DensityMatrix, MixtureEnsemble

logger = logging.getLogger(__name__)

# Rundungsrauschen in (-NOISE_FLOOR, 0) wird stillschweigend auf 0 gesetzt
NOISE_FLOOR = 1e-12


@dataclass(frozen=True)
class ClassicalPartition:
    universe_size: int
    blocks: Tuple[frozenset, ...]

    def block_probabilities(self) -> list:
        return [Fraction(len(block), self.universe_size) for block in self.blocks]


@dataclass(frozen=True)
class ProbabilityVector:
    entries: npt.NDArray[np.float64]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class DivergenceTerms:
    """Dreiterm-Form tr ρ(1-σ) - ½ tr ρ(1-ρ) - ½ tr σ(1-σ)"""
    cross: float
    half_entropy_rho: float
    half_entropy_sigma: float

    @property
    def value(self) -> float:
        return self.cross - self.half_entropy_rho - self.half_entropy_sigma


@dataclass(frozen=True)
class ConcavityBounds:
    """Σ p_i L(ρ_i), L(Σ p_i ρ_i) und L(p) eines Gemischs"""
    average: float
    mixture: float
    weights_entropy: float

    @property
    def lower(self) -> float:
        return self.average - self.weights_entropy

    @property
    def upper(self) -> float:
        return self.average + self.weights_entropy

    @property
    def lower_slack(self) -> float:
        return self.mixture - self.lower

    @property
    def upper_slack(self) -> float:
        return self.upper - self.mixture


# ===========================================================================
# KLASSISCH
# ===========================================================================

def make_partition(universe_size: int, blocks: Sequence[Sequence[int]]) -> ClassicalPartition:
    """Blöcke müssen nicht leer, paarweise disjunkt und überdeckend sein"""
    if universe_size < 1:
        raise DistributionError(f"universe size must be positive, got {universe_size}")
    frozen = tuple(frozenset(block) for block in blocks)
    if any(not block for block in frozen):
        raise DistributionError("partition contains an empty block")
    covered = sum(len(block) for block in frozen)
    union = frozenset().union(*frozen)
    if covered != len(union):
        raise DistributionError("partition blocks are not pairwise disjoint")
    if union != frozenset(range(universe_size)):
        raise DistributionError(f"partition blocks do not cover {{0..{universe_size - 1}}}")
    return ClassicalPartition(universe_size=universe_size, blocks=frozen)


def make_probability_vector(entries: Sequence[float]) -> ProbabilityVector:
    p = np.asarray(entries, dtype=np.float64).reshape(-1)
    if p.size < 1 or not np.all(np.isfinite(p)):
        raise DistributionError("probability vector is empty or not finite")
    if np.any(p < 0.0) or np.any(p > 1.0 + NOISE_FLOOR):
        raise DistributionError(f"entries must lie in [0, 1], got {p.tolist()}")
    if abs(float(p.sum()) - 1.0) > settings.trace_tol:
        raise DistributionError(f"entries sum to {float(p.sum()):.17g}, expected 1")
    p.setflags(write=False)
    return ProbabilityVector(entries=p)


def dit_count(pi: ClassicalPartition) -> int:
    """|dit(π)| = |U|² - Σ_B |B|²"""
    return pi.universe_size ** 2 - sum(len(block) ** 2 for block in pi.blocks)


def distinctions(pi: ClassicalPartition) -> Iterator[Tuple[int, int]]:
    """Alle geordneten Paare (u, u') aus verschiedenen Blöcken"""
    block_of = {}
    for index, block in enumerate(pi.blocks):
        for element in block:
            block_of[element] = index
    for u in range(pi.universe_size):
        for v in range(pi.universe_size):
            if block_of[u] != block_of[v]:
                yield u, v


def classical_logical_entropy_exact(pi: ClassicalPartition) -> Fraction:
    """Zählpfad: |dit(π)| / |U×U|"""
    return Fraction(dit_count(pi), pi.universe_size ** 2)


def partition_entropy_from_blocks(pi: ClassicalPartition) -> Fraction:
    """Summenpfad: 1 - Σ_B p_B²"""
    return 1 - sum(p * p for p in pi.block_probabilities())


def classical_logical_entropy(pi: ClassicalPartition) -> float:
    return float(classical_logical_entropy_exact(pi))


def distribution_logical_entropy(p: Union[ProbabilityVector, Sequence[float]]) -> float:
    """1 - Σ p_i² = Σ p_i (1 - p_i)"""
    if not isinstance(p, ProbabilityVector):
        p = make_probability_vector(p)
    return _clamp_unit(1.0 - float(np.dot(p.entries, p.entries)), "distribution logical entropy")


# ===========================================================================
# QUANTENLOGISCH
# ===========================================================================

def _clamp_unit(value: float, label: str) -> float:
    if value < -settings.positivity_tol:
        raise PositivityError(f"{label} is negative ({value:.3g})", -value)
    if value < -NOISE_FLOOR:
        logger.warning(f"{label}: Rundungsfehler {value:.3g} auf 0 gesetzt")
        return 0.0
    return min(max(value, 0.0), 1.0)


def purity(rho: DensityMatrix) -> float:
    """tr ρ²"""
    return trace_of_square(rho.matrix)


def logical_entropy(rho: DensityMatrix) -> float:
    """L(ρ) = tr ρ(1-ρ) = 1 - tr ρ², ohne Eigenzerlegung"""
    return _clamp_unit(1.0 - trace_of_square(rho.matrix), "logical entropy")


def logical_entropy_spectral(rho: DensityMatrix) -> float:
    """L(ρ) = 1 - Σ λ_i² über die Eigenwerte"""
    eigenvalues = hermitian_eigen(rho.matrix).eigenvalues
    return _clamp_unit(1.0 - float(np.dot(eigenvalues, eigenvalues)), "logical entropy")


def logical_divergence(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """d(ρ‖σ) = ½ tr(ρ-σ)²"""
    return 0.5 * frobenius_distance_sq(rho.matrix, sigma.matrix)


def divergence_terms(rho: DensityMatrix, sigma: DensityMatrix) -> DivergenceTerms:
    """Die drei Terme der Definition; value stimmt mit logical_divergence überein"""
    # Größenprüfung über frobenius_distance_sq
    logical_divergence(rho, sigma)
    overlap = float(np.vdot(sigma.matrix, rho.matrix).real)
    return DivergenceTerms(
        cross=1.0 - overlap,
        half_entropy_rho=0.5 * (1.0 - trace_of_square(rho.matrix)),
        half_entropy_sigma=0.5 * (1.0 - trace_of_square(sigma.matrix)),
    )


def tsallis_entropy(rho: DensityMatrix, q: float) -> float:
    """T_q(ρ) = (1 - Σ λ_i^q) / (q - 1) für q > 0, q ≠ 1, über λ > rank_cutoff"""
    if q <= 0 or q == 1:
        raise ParameterError(f"Tsallis index must satisfy q > 0 and q != 1, got {q}")
    eigenvalues = hermitian_eigen(rho.matrix).eigenvalues
    # Rundungsreste wären für q < 1 nicht vernachlässigbar
    positive = eigenvalues[eigenvalues > settings.rank_cutoff]
    return float((1.0 - np.sum(positive ** q)) / (q - 1.0)) + 0.0


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-Σ λ ln λ (natürlicher Logarithmus) über λ > rank_cutoff"""
    eigenvalues = hermitian_eigen(rho.matrix).eigenvalues
    positive = eigenvalues[eigenvalues > settings.rank_cutoff]
    return max(-float(np.sum(positive * np.log(positive))), 0.0) + 0.0


def mixture_entropy_bounds(ensemble: MixtureEnsemble) -> ConcavityBounds:
    average = float(sum(p * logical_entropy(rho) for p, rho in zip(ensemble.weights, ensemble.components)))
    return ConcavityBounds(
        average=average,
        mixture=logical_entropy(ensemble.mixture()),
        weights_entropy=distribution_logical_entropy(ensemble.weights),
    )
