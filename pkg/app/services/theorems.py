"""
Randomisierte Verifikation der Aussagen über logische Entropie und Divergenz.

Jede TheoremId hat genau einen Checker. Ein Checker bekommt einen eigenen
Generator (abgeleitet aus Seed, Theorem und Trial-Index), eine Dimension und
die Toleranz und liefert ein TrialOutcome mit einer Slack pro geprüfter Seite.
Slack ≥ -tolerance heißt bestanden.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple, Union
import logging
import math

import numpy as np
from pydantic import BaseModel, Field, computed_field, field_validator

from app.config import settings
from app.services.channels import (
    computational_basis_measurement,
    measure,
    measurement_trace_identity,
    mix_with_flags,
    random_projective_measurement,
    twirl_subsystem_B,
)
from app.services.entropy import (
    divergence_terms,
    logical_divergence,
    logical_entropy,
    mixture_entropy_bounds,
    purity,
)
from app.services.errors import CheckConfigError
from app.services.linalg import (
    BipartiteSplit,
    Subsystem,
    frobenius_distance_sq,
    hermitian_eigen,
    identity,
    partial_trace,
    tensor_product,
)
from app.services.qstate import (
    SEED_LIMIT,
    DensityMatrix,
    ensemble_purification,
    ginibre_density,
    make_density,
    make_ensemble,
    maximally_mixed,
    random_probability_vector,
    random_pure_state,
    random_rank,
    random_unitary,
)

logger = logging.getLogger(__name__)

Dims = Union[Tuple[int, int], int]


class TheoremId(str, Enum):
    KLEIN = "klein"
    PURE_ZERO = "pure_zero"
    MAX_MIXED = "max_mixed"
    PURE_MARGINALS = "pure_marginals"
    PRODUCT_FORMULA = "product_formula"
    DIAG_SUBADDITIVITY = "diag_subadditivity"
    MEASUREMENT_MONOTONE = "measurement_monotone"
    CONCAVITY_ORTHOGONAL = "concavity_orthogonal"
    CONCAVITY_BOUNDS = "concavity_bounds"
    JOINT_CONVEXITY = "joint_convexity"
    DIVERGENCE_MONOTONE = "divergence_monotone"


STATEMENTS: Dict[TheoremId, str] = {
    TheoremId.KLEIN: "d(ρ‖σ) ≥ 0, with equality if and only if ρ = σ",
    TheoremId.PURE_ZERO: "logical entropy is non-negative and L(ρ) = 0 for a pure state",
    TheoremId.MAX_MIXED: "the maximal value of the logical entropy is 1 - 1/d, attained at I/d",
    TheoremId.PURE_MARGINALS: "a composite pure state ρ^{A,B} has L(ρ^A) = L(ρ^B)",
    TheoremId.PRODUCT_FORMULA: "if ρ^{A,B} = ρ^A ⊗ ρ^B then L(A,B) = L(A) + L(B) - L(A)·L(B)",
    TheoremId.DIAG_SUBADDITIVITY: "a state diagonal in a tensor product of bases is logical subadditive",
    TheoremId.MEASUREMENT_MONOTONE: "the density matrix following a projective measurement has L(ρ') ≥ L(ρ)",
    TheoremId.CONCAVITY_ORTHOGONAL: "mixing states that have orthogonal support strictly raises the average entropy",
    TheoremId.CONCAVITY_BOUNDS: "L(Σp_i ρ_i) lies in the L(p_i) neighborhood of Σ p_i L(ρ_i)",
    TheoremId.JOINT_CONVEXITY: "d(ρ‖σ) is jointly convex",
    TheoremId.DIVERGENCE_MONOTONE: "tracing out a subspace only reduces the logical divergence",
}

BIPARTITE = frozenset({
    TheoremId.PURE_MARGINALS,
    TheoremId.PRODUCT_FORMULA,
    TheoremId.DIAG_SUBADDITIVITY,
    TheoremId.DIVERGENCE_MONOTONE,
})

DEFAULT_DIMS: Dict[TheoremId, List[Dims]] = {
    TheoremId.KLEIN: [2, 3, 4, 8],
    TheoremId.PURE_ZERO: [2, 4, 8],
    TheoremId.MAX_MIXED: [2, 3, 4, 8, 16],
    TheoremId.PURE_MARGINALS: [(2, 2), (2, 3), (3, 4)],
    TheoremId.PRODUCT_FORMULA: [(2, 2), (2, 3), (3, 3)],
    TheoremId.DIAG_SUBADDITIVITY: [(2, 2), (2, 3), (3, 3)],
    TheoremId.MEASUREMENT_MONOTONE: [2, 4, 8],
    TheoremId.CONCAVITY_ORTHOGONAL: [2, 3, 4],
    TheoremId.CONCAVITY_BOUNDS: [2, 3, 4],
    TheoremId.JOINT_CONVEXITY: [2, 4],
    TheoremId.DIVERGENCE_MONOTONE: [(2, 2), (2, 3), (3, 2)],
}

# Eigener Zufallsstrom für die explorative Suche, getrennt von allen Checkern
_SEARCH_STREAM = len(TheoremId)

SEARCH_DIMS: List[Tuple[int, int]] = [(2, 2), (2, 3), (3, 3)]


class SampleFamily(str, Enum):
    """Zustandsfamilien der explorativen Subadditivitätssuche"""
    CORRELATED = "correlated"
    PRODUCT = "product"
    DIAGONAL = "diagonal"


# ===========================================================================
# MODELLE
# ===========================================================================

class CheckConfig(BaseModel):
    """Leere dims = Standard-Dimensionen des jeweiligen Theorems"""
    dims: List[Dims] = Field(default_factory=list)
    trials: int = Field(default_factory=lambda: settings.check_trials, ge=1)
    seed: int = Field(default_factory=lambda: settings.check_seed, ge=0, lt=SEED_LIMIT)
    tolerance: float = Field(default_factory=lambda: settings.check_tolerance, gt=0)
    workers: int = Field(default_factory=lambda: settings.check_workers, ge=1)

    @field_validator("dims")
    @classmethod
    def _positive_dims(cls, dims: List[Dims]) -> List[Dims]:
        for d in dims:
            parts = d if isinstance(d, tuple) else (d,)
            if any(part < 1 for part in parts):
                raise ValueError(f"dimensions must be positive, got {d}")
        return dims


class FailureRecord(BaseModel):
    trial: int
    seed: int
    dims: Dims
    side: str
    slack: float


class CheckReport(BaseModel):
    theorem: TheoremId
    statement: str
    tolerance: float
    trials_run: int
    failures: int
    worst_margin: float
    side_margins: Dict[str, float] = Field(default_factory=dict)
    observations: Dict[str, float] = Field(default_factory=dict)
    failing_seeds: List[FailureRecord] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class TrialOutcome:
    sides: Dict[str, float]
    observations: Dict[str, float] = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return min(self.sides.values())

    @property
    def worst_side(self) -> str:
        return min(self.sides, key=self.sides.get)


class SubadditivityInstance(BaseModel):
    trial: int
    seed: int
    dims: Tuple[int, int]
    family: SampleFamily = SampleFamily.CORRELATED
    l_joint: float
    l_a: float
    l_b: float
    excess: float


Checker = Callable[[np.random.Generator, Dims, float], TrialOutcome]


# ===========================================================================
# HILFSFUNKTIONEN
# ===========================================================================

def _random_state(dim: int, rng: np.random.Generator) -> DensityMatrix:
    return ginibre_density(dim, random_rank(dim, rng), rng)


def _marginals(joint: DensityMatrix, split: BipartiteSplit) -> Tuple[DensityMatrix, DensityMatrix]:
    """(ρ^A, ρ^B)"""
    return (
        make_density(partial_trace(joint.matrix, split, Subsystem.B)),
        make_density(partial_trace(joint.matrix, split, Subsystem.A)),
    )


def _embed(columns: np.ndarray, state: DensityMatrix) -> np.ndarray:
    return columns @ state.matrix @ columns.conj().T


# ===========================================================================
# CHECKER
# ===========================================================================

def _check_klein(rng: np.random.Generator, d: int, tol: float) -> TrialOutcome:
    rho = _random_state(d, rng)
    sigma = _random_state(d, rng)
    value = logical_divergence(rho, sigma)
    return TrialOutcome(sides={
        "nonnegative": value,
        "identity": -logical_divergence(rho, rho),
        "two_path": -abs(value - divergence_terms(rho, sigma).value),
    })


def _check_pure_zero(rng: np.random.Generator, d: int, tol: float) -> TrialOutcome:
    pure = ginibre_density(d, 1, rng)
    mixed = _random_state(d, rng)
    return TrialOutcome(sides={
        "pure_zero": -logical_entropy(pure),
        "nonnegative": 1.0 - purity(mixed),
    })


def _check_max_mixed(rng: np.random.Generator, d: int, tol: float) -> TrialOutcome:
    rho = _random_state(d, rng)
    uniform = maximally_mixed(d)
    ceiling = 1.0 - 1.0 / d
    value = logical_entropy(rho)
    top = logical_entropy(uniform)
    return TrialOutcome(sides={
        "bound": ceiling - value,
        "attained": -abs(top - ceiling),
        # L(I/d) - L(ρ) = 2 d(ρ‖I/d)
        "klein_identity": -abs((top - value) - 2.0 * logical_divergence(rho, uniform)),
    })


def _check_pure_marginals(rng: np.random.Generator, dims: Tuple[int, int], tol: float) -> TrialOutcome:
    split = BipartiteSplit(dim_a=dims[0], dim_b=dims[1])
    psi = random_pure_state(split.dim, rng, split=split)
    rho_a, rho_b = _marginals(psi.density(), split)
    return TrialOutcome(sides={
        "marginal_equality": -abs(logical_entropy(rho_a) - logical_entropy(rho_b)),
    })


def _check_product_formula(rng: np.random.Generator, dims: Tuple[int, int], tol: float) -> TrialOutcome:
    rho = _random_state(dims[0], rng)
    sigma = _random_state(dims[1], rng)
    joint = make_density(tensor_product(rho.matrix, sigma.matrix))
    la, lb = logical_entropy(rho), logical_entropy(sigma)
    return TrialOutcome(sides={
        "product_formula": -abs(logical_entropy(joint) - (la + lb - la * lb)),
    })


def _diagonal_state(rng: np.random.Generator, split: BipartiteSplit) -> Tuple[DensityMatrix, np.ndarray]:
    """Diagonal in einer zufälligen Produktbasis U_A ⊗ U_B; liefert auch die Diagonale p"""
    n = split.dim
    support = rng.choice(n, size=random_rank(n, rng), replace=False)
    p = np.zeros(n)
    p[support] = random_probability_vector(len(support), rng)
    local = tensor_product(random_unitary(split.dim_a, rng), random_unitary(split.dim_b, rng))
    return make_density(local @ np.diag(p) @ local.conj().T, split=split), p


def _check_diag_subadditivity(rng: np.random.Generator, dims: Tuple[int, int], tol: float) -> TrialOutcome:
    split = BipartiteSplit(dim_a=dims[0], dim_b=dims[1])
    joint, p = _diagonal_state(rng, split)
    rho_a, rho_b = _marginals(joint, split)
    l_joint = logical_entropy(joint)
    return TrialOutcome(sides={
        "subadditive": logical_entropy(rho_a) + logical_entropy(rho_b) - l_joint,
        "diagonal_form": -abs(l_joint - (1.0 - float(np.dot(p, p)))),
    })


def _check_measurement_monotone(rng: np.random.Generator, d: int, tol: float) -> TrialOutcome:
    rho = _random_state(d, rng)
    m = random_projective_measurement(d, rng)
    post = measure(rho, m)
    cross, own = measurement_trace_identity(rho, m)
    return TrialOutcome(sides={
        "monotone": logical_entropy(post) - logical_entropy(rho),
        "trace_identity": -abs(cross - own),
        "fixed_point": -math.sqrt(frobenius_distance_sq(measure(post, m).matrix, post.matrix)),
    })


def _check_concavity_orthogonal(rng: np.random.Generator, d: int, tol: float) -> TrialOutcome:
    u = random_unitary(d, rng)
    cut = int(rng.integers(1, d))
    first = _random_state(cut, rng)
    second = _random_state(d - cut, rng)
    rho_1 = make_density(_embed(u[:, :cut], first))
    rho_2 = make_density(_embed(u[:, cut:], second))
    lam = float(rng.uniform(0.1, 0.9))
    bounds = mixture_entropy_bounds(make_ensemble([lam, 1.0 - lam], [rho_1, rho_2]))
    gap = bounds.mixture - bounds.average
    closed_form = lam * (1.0 - lam) * (purity(rho_1) + purity(rho_2))
    return TrialOutcome(
        sides={
            "concave": gap,
            # schlägt fehl, sofern die Lücke die Toleranz nicht übersteigt
            "strict": gap - 2.0 * tol,
            "closed_form": -abs(gap - closed_form),
        },
        observations={"min_gap": gap},
    )


def _check_concavity_bounds(rng: np.random.Generator, d: int, tol: float) -> TrialOutcome:
    k = int(rng.integers(1, 5))
    components = [_random_state(d, rng) for _ in range(k)]
    p = random_probability_vector(k, rng)
    ensemble = make_ensemble(p, components)
    bounds = mixture_entropy_bounds(ensemble)

    # Flag-Zustand Σ p_i ρ_i ⊗ |i⟩⟨i|
    flagged = mix_with_flags(ensemble)
    flag_a, flag_b = _marginals(flagged, flagged.split)
    l_flagged = logical_entropy(flagged)

    # Spektral verfeinerte Schranke L(ρ) ≤ L({p_i p_i^j})
    refined = np.concatenate([
        weight * np.clip(hermitian_eigen(rho.matrix).eigenvalues, 0.0, None)
        for weight, rho in zip(p, components)
    ])
    refined_entropy = 1.0 - float(np.dot(refined, refined))

    # Gemisch reiner Zustände über den Hilfszustand Σ √p_i |ψ_i⟩ ⊗ |i⟩
    states = [random_pure_state(d, rng) for _ in range(k)]
    eta = ensemble_purification(p, states)
    eta_a, eta_b = _marginals(eta.density(), eta.split)
    measured = measure(eta_b, computational_basis_measurement(k))
    weights_entropy = bounds.weights_entropy

    return TrialOutcome(sides={
        "lower": bounds.lower_slack,
        "upper": bounds.upper_slack,
        "flagged_lower": l_flagged - bounds.average,
        "flagged_upper": logical_entropy(flag_a) + logical_entropy(flag_b) - l_flagged,
        "refined_upper": refined_entropy - bounds.mixture,
        "pure_ensemble": weights_entropy - logical_entropy(eta_a),
        "purification_marginals": -abs(logical_entropy(eta_a) - logical_entropy(eta_b)),
        "measured_weights": -abs(logical_entropy(measured) - weights_entropy),
    })


def _check_joint_convexity(rng: np.random.Generator, d: int, tol: float) -> TrialOutcome:
    rho_1, rho_2, sigma_1, sigma_2 = (_random_state(d, rng) for _ in range(4))
    lam = float(rng.uniform(0.0, 1.0))
    rho = make_density(lam * rho_1.matrix + (1.0 - lam) * rho_2.matrix)
    sigma = make_density(lam * sigma_1.matrix + (1.0 - lam) * sigma_2.matrix)
    combined = lam * logical_divergence(rho_1, sigma_1) + (1.0 - lam) * logical_divergence(rho_2, sigma_2)
    return TrialOutcome(sides={"jointly_convex": combined - logical_divergence(rho, sigma)})


def _check_divergence_monotone(rng: np.random.Generator, dims: Tuple[int, int], tol: float) -> TrialOutcome:
    split = BipartiteSplit(dim_a=dims[0], dim_b=dims[1])
    b = split.dim_b
    rho = _random_state(split.dim, rng)
    sigma = _random_state(split.dim, rng)

    def direct(state: DensityMatrix) -> Tuple[DensityMatrix, DensityMatrix]:
        reduced = make_density(partial_trace(state.matrix, split, Subsystem.B))
        return reduced, make_density(tensor_product(reduced.matrix, identity(b) / b))

    rho_reduced, rho_direct = direct(rho)
    sigma_reduced, sigma_direct = direct(sigma)
    rho_twirl = twirl_subsystem_B(rho, split)
    sigma_twirl = twirl_subsystem_B(sigma, split)

    full = logical_divergence(rho, sigma)
    twirled = logical_divergence(rho_twirl, sigma_twirl)
    identity_error = max(
        math.sqrt(frobenius_distance_sq(rho_twirl.matrix, rho_direct.matrix)),
        math.sqrt(frobenius_distance_sq(sigma_twirl.matrix, sigma_direct.matrix)),
    )
    return TrialOutcome(sides={
        "monotone": full - twirled,
        "two_path": -abs(twirled - logical_divergence(rho_direct, sigma_direct)),
        "twirl_identity": -identity_error,
        "reduced": b * full - logical_divergence(rho_reduced, sigma_reduced),
    })


_CHECKERS: Dict[TheoremId, Checker] = {
    TheoremId.KLEIN: _check_klein,
    TheoremId.PURE_ZERO: _check_pure_zero,
    TheoremId.MAX_MIXED: _check_max_mixed,
    TheoremId.PURE_MARGINALS: _check_pure_marginals,
    TheoremId.PRODUCT_FORMULA: _check_product_formula,
    TheoremId.DIAG_SUBADDITIVITY: _check_diag_subadditivity,
    TheoremId.MEASUREMENT_MONOTONE: _check_measurement_monotone,
    TheoremId.CONCAVITY_ORTHOGONAL: _check_concavity_orthogonal,
    TheoremId.CONCAVITY_BOUNDS: _check_concavity_bounds,
    TheoremId.JOINT_CONVEXITY: _check_joint_convexity,
    TheoremId.DIVERGENCE_MONOTONE: _check_divergence_monotone,
}

if set(TheoremId) != set(_CHECKERS) or set(TheoremId) != set(STATEMENTS):
    raise RuntimeError("every TheoremId needs exactly one checker and one statement")

_ORDINAL = {theorem: index for index, theorem in enumerate(TheoremId)}


# ===========================================================================
# AUSFÜHRUNG
# ===========================================================================

def trial_seed(seed: int, stream: int, trial: int) -> int:
    """Unabhängiger 64-bit Seed pro (Seed, Theorem, Trial)"""
    sequence = np.random.SeedSequence([int(seed), int(stream), int(trial)])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def _resolve_dims(theorem: TheoremId, config: CheckConfig) -> List[Dims]:
    dims = list(config.dims) or list(DEFAULT_DIMS[theorem])
    bipartite = theorem in BIPARTITE
    wrong = [d for d in dims if isinstance(d, tuple) != bipartite]
    if wrong:
        expected = "(dimA, dimB) pairs" if bipartite else "scalar dimensions"
        raise CheckConfigError(f"{theorem.value} needs {expected}, got {wrong}")
    if theorem is TheoremId.CONCAVITY_ORTHOGONAL and any(d < 2 for d in dims):
        raise CheckConfigError("concavity_orthogonal needs dimensions >= 2")
    return dims


def derive_config(theorem: TheoremId, config: CheckConfig) -> CheckConfig:
    """Konfiguration mit den zum Theorem passenden Dimensionen aus config.dims"""
    bipartite = theorem in BIPARTITE
    matching = [d for d in config.dims if isinstance(d, tuple) == bipartite]
    if theorem is TheoremId.CONCAVITY_ORTHOGONAL:
        matching = [d for d in matching if d >= 2]
    return config.model_copy(update={"dims": matching})


def replay_trial(theorem: Union[TheoremId, str], seed: int, dims: Dims,
                 tolerance: Optional[float] = None) -> TrialOutcome:
    """Führt einen aufgezeichneten Trial isoliert erneut aus"""
    theorem = TheoremId(theorem)
    tol = settings.check_tolerance if tolerance is None else tolerance
    if isinstance(dims, list):
        dims = tuple(dims)
    return _CHECKERS[theorem](np.random.default_rng(seed), dims, tol)


def _map_trials(task: Callable[[int], tuple], count: int, workers: int) -> list:
    """Ergebnisse in Trial-Reihenfolge, unabhängig von der Ausführung"""
    if workers <= 1:
        return [task(index) for index in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, range(count)))


def run_check(theorem: Union[TheoremId, str], config: CheckConfig) -> CheckReport:
    """
    Führt config.trials unabhängige Instanzen eines Checkers aus.

    Args:
        theorem: TheoremId oder deren Name
        config: Dimensionen, Trials, Seed, Toleranz, Worker

    Returns:
        CheckReport mit Fehlern, schlechtester Slack, Slack pro Seite

    Raises:
        CheckConfigError: Dimensionen passen nicht zum Theorem
    """
    theorem = TheoremId(theorem)
    dims = _resolve_dims(theorem, config)
    checker = _CHECKERS[theorem]
    tol = config.tolerance
    stream = _ORDINAL[theorem]

    def task(index: int) -> tuple:
        seed = trial_seed(config.seed, stream, index)
        trial_dims = dims[index % len(dims)]
        return index, seed, trial_dims, checker(np.random.default_rng(seed), trial_dims, tol)

    logger.info(f"Check {theorem.value}: {config.trials} Trials, dims={dims}, seed={config.seed}")
    results = _map_trials(task, config.trials, config.workers)

    side_margins: Dict[str, float] = {}
    observations: Dict[str, float] = {}
    failing: List[FailureRecord] = []
    for index, seed, trial_dims, outcome in results:
        for side, slack in outcome.sides.items():
            side_margins[side] = min(slack, side_margins.get(side, math.inf))
        for name, value in outcome.observations.items():
            observations[name] = min(value, observations.get(name, math.inf))
        logger.debug(f"{theorem.value} trial {index}: slack={outcome.slack:.3g}")
        if outcome.slack < -tol:
            failing.append(FailureRecord(
                trial=index, seed=seed, dims=trial_dims,
                side=outcome.worst_side, slack=outcome.slack,
            ))

    report = CheckReport(
        theorem=theorem,
        statement=STATEMENTS[theorem],
        tolerance=tol,
        trials_run=len(results),
        failures=len(failing),
        worst_margin=min(outcome.slack for *_, outcome in results),
        side_margins=side_margins,
        observations=observations,
        failing_seeds=failing,
    )
    if report.failures:
        logger.error(f"✗ {theorem.value}: {report.failures}/{report.trials_run} Trials verletzt "
                     f"(worst margin {report.worst_margin:.3g})")
    else:
        logger.info(f"✓ {theorem.value}: {report.trials_run} Trials ok (worst margin {report.worst_margin:.3g})")
    return report


def run_all(config: CheckConfig) -> List[CheckReport]:
    """Alle Theoreme in Aufzählungsreihenfolge, jeweils mit abgeleiteter Konfiguration"""
    return [run_check(theorem, derive_config(theorem, config)) for theorem in TheoremId]


# ===========================================================================
# EXPLORATIVE SUCHE
# ===========================================================================

def _sample_joint(rng: np.random.Generator, split: BipartiteSplit, family: SampleFamily) -> DensityMatrix:
    if family is SampleFamily.PRODUCT:
        rho_a = _random_state(split.dim_a, rng)
        rho_b = _random_state(split.dim_b, rng)
        return make_density(tensor_product(rho_a.matrix, rho_b.matrix), split=split)
    if family is SampleFamily.DIAGONAL:
        return _diagonal_state(rng, split)[0]
    return _random_state(split.dim, rng)


def _subadditivity_terms(rng: np.random.Generator, dims: Tuple[int, int],
                         family: SampleFamily) -> Tuple[float, float, float]:
    split = BipartiteSplit(dim_a=dims[0], dim_b=dims[1])
    joint = _sample_joint(rng, split, family)
    rho_a, rho_b = _marginals(joint, split)
    return logical_entropy(joint), logical_entropy(rho_a), logical_entropy(rho_b)


def search_subadditivity_violation(config: CheckConfig,
                                   family: SampleFamily = SampleFamily.CORRELATED) -> Optional[SubadditivityInstance]:
    """
    Sucht unter zufälligen Zuständen einen mit L(A,B) > L(A)+L(B)+tol.

    Die Familien PRODUCT und DIAGONAL erfüllen die Subadditivität beweisbar
    und liefern daher nie eine Instanz.

    Returns:
        erste gefundene Instanz oder None nach config.trials Versuchen
    """
    dims = list(config.dims) or list(SEARCH_DIMS)
    if any(not isinstance(d, tuple) for d in dims):
        raise CheckConfigError(f"subadditivity search needs (dimA, dimB) pairs, got {dims}")
    for index in range(config.trials):
        seed = trial_seed(config.seed, _SEARCH_STREAM, index)
        trial_dims = dims[index % len(dims)]
        l_joint, l_a, l_b = _subadditivity_terms(np.random.default_rng(seed), trial_dims, family)
        excess = l_joint - (l_a + l_b)
        if excess > config.tolerance:
            logger.warning(f"Subadditivität verletzt ({family.value}): trial {index}, "
                           f"dims {trial_dims}, excess {excess:.3g}")
            return SubadditivityInstance(
                trial=index, seed=seed, dims=trial_dims, family=family,
                l_joint=l_joint, l_a=l_a, l_b=l_b, excess=excess,
            )
    logger.info(f"Keine Verletzung der Subadditivität in {config.trials} Stichproben ({family.value})")
    return None


def replay_subadditivity_instance(instance: SubadditivityInstance) -> float:
    """Berechnet den Überschuss L(A,B) - L(A) - L(B) aus Seed, Dimension und Familie neu"""
    l_joint, l_a, l_b = _subadditivity_terms(
        np.random.default_rng(instance.seed), tuple(instance.dims), instance.family,
    )
    return l_joint - (l_a + l_b)
