"""
Zustandstransformationen: projektive (Lüders-)Messung, Flag-Register-Gemisch
und der Weyl-Twirl, der die partielle Spur als unitäres Gemisch realisiert.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple
import logging

import numpy as np
import numpy.typing as npt

from app.config import settings
from app.services.errors import (
    DensityValidationError,
    DimensionError,
    MeasurementError,
    ParameterError,
    SplitError,
)
from app.services.linalg import (
    BipartiteSplit,
    ComplexMatrix,
    as_complex_matrix,
    dagger,
    hermiticity_deviation,
    identity,
    is_unitary,
    symmetrize,
    tensor_product,
    trace_of_square,
)
from app.services.qstate import DensityMatrix, MixtureEnsemble, make_density, random_unitary

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProjectiveMeasurement:
    projectors: Tuple[ComplexMatrix, ...]

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]


@dataclass(frozen=True)
class UnitaryMixture:
    weights: npt.NDArray[np.float64]
    unitaries: Tuple[ComplexMatrix, ...]

    @property
    def dim(self) -> int:
        return self.unitaries[0].shape[0]


# ===========================================================================
# MESSUNG
# ===========================================================================

def make_measurement(projectors: Sequence) -> ProjectiveMeasurement:
    """
    Prüft Vollständigkeit Σ P_i = I und P_i P_j = δ_ij P_j (Toleranz 1e-10).

    Raises:
        MeasurementError: mit der größten Abweichung
    """
    if not projectors:
        raise MeasurementError("a projective measurement needs at least one projector")
    tol = settings.hermiticity_tol
    mats = [as_complex_matrix(p) for p in projectors]
    dim = mats[0].shape[0]
    if any(p.shape[0] != dim for p in mats):
        raise MeasurementError("projectors have different dimensions")
    for index, p in enumerate(mats):
        deviation = hermiticity_deviation(p)
        if deviation > tol:
            raise MeasurementError(f"projector {index} is not Hermitian (deviation {deviation:.3g})")
    mats = [symmetrize(p) for p in mats]

    completeness = float(np.max(np.abs(sum(mats) - identity(dim))))
    if completeness > tol:
        raise MeasurementError(f"projectors do not sum to the identity (deviation {completeness:.3g})")
    for i, p in enumerate(mats):
        for j, r in enumerate(mats):
            expected = r if i == j else np.zeros_like(r)
            deviation = float(np.max(np.abs(p @ r - expected)))
            if deviation > tol:
                raise MeasurementError(
                    f"projectors {i} and {j} violate P_i P_j = δ_ij P_j (deviation {deviation:.3g})"
                )
    for p in mats:
        p.setflags(write=False)
    return ProjectiveMeasurement(projectors=tuple(mats))


def basis_measurement(unitary: ComplexMatrix, group_sizes: Sequence[int]) -> ProjectiveMeasurement:
    """Projektoren auf aufeinanderfolgende Spaltengruppen einer Unitären"""
    dim = unitary.shape[0]
    if sum(group_sizes) != dim or any(size < 1 for size in group_sizes):
        raise MeasurementError(f"group sizes {list(group_sizes)} are not a composition of {dim}")
    projectors = []
    start = 0
    for size in group_sizes:
        columns = unitary[:, start:start + size]
        projectors.append(columns @ dagger(columns))
        start += size
    return make_measurement(projectors)


def computational_basis_measurement(dim: int) -> ProjectiveMeasurement:
    return basis_measurement(identity(dim), [1] * dim)


def random_projective_measurement(dim: int, rng: np.random.Generator) -> ProjectiveMeasurement:
    """Zufällige Basis, Spalten in eine zufällige Komposition von dim gruppiert"""
    unitary = random_unitary(dim, rng)
    groups = int(rng.integers(1, dim + 1))
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, dim), size=groups - 1, replace=False)) if groups > 1 else []
    bounds = [0] + cuts + [dim]
    sizes = [bounds[i + 1] - bounds[i] for i in range(len(bounds) - 1)]
    return basis_measurement(unitary, sizes)


def measure(rho: DensityMatrix, m: ProjectiveMeasurement) -> DensityMatrix:
    """ρ' = Σ_i P_i ρ P_i; das Ergebnis wird erneut validiert"""
    if rho.dim != m.dim:
        raise DimensionError(f"state dimension {rho.dim} does not match measurement dimension {m.dim}")
    post = sum(p @ rho.matrix @ p for p in m.projectors)
    try:
        return make_density(post, split=rho.split)
    except DensityValidationError as e:
        logger.error(f"✗ Messergebnis ist keine gültige Dichtematrix (Bug): {e}")
        raise


def measurement_trace_identity(rho: DensityMatrix, m: ProjectiveMeasurement) -> Tuple[float, float]:
    """(tr ρ(1-ρ'), tr ρ'(1-ρ')); beide Werte sind für Lüders-Messungen gleich"""
    post = measure(rho, m)
    cross = 1.0 - float(np.vdot(post.matrix, rho.matrix).real)
    return cross, 1.0 - trace_of_square(post.matrix)


# ===========================================================================
# FLAG-REGISTER
# ===========================================================================

def mix_with_flags(ensemble: MixtureEnsemble) -> DensityMatrix:
    """ρ^{AB} = Σ p_i ρ_i ⊗ |i⟩⟨i|, Split (d, k)"""
    k = len(ensemble.components)
    total = np.zeros((ensemble.dim * k, ensemble.dim * k), dtype=np.complex128)
    for index, (p, rho) in enumerate(zip(ensemble.weights, ensemble.components)):
        flag = np.zeros((k, k), dtype=np.complex128)
        flag[index, index] = 1.0
        total += p * tensor_product(rho.matrix, flag)
    return make_density(total, split=BipartiteSplit(dim_a=ensemble.dim, dim_b=k))


# ===========================================================================
# WEYL-TWIRL
# ===========================================================================

@lru_cache(maxsize=32)
def weyl_mixture(b: int) -> UnitaryMixture:
    """
    Die b² diskreten Weyl-Operatoren W_{a,c} = X^a Z^c mit Gewicht 1/b².

    X ist der zyklische Shift |k⟩ → |k+1⟩, Z = diag(exp(2πi k/b)).
    Reihenfolge: a außen, c innen.
    """
    if b < 2:
        raise ParameterError(f"Weyl mixture needs b >= 2, got {b}")
    shift = np.roll(identity(b), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(b) / b))
    unitaries = []
    for a in range(b):
        for c in range(b):
            w = np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, c)
            w.setflags(write=False)
            unitaries.append(w)
    weights = np.full(b * b, 1.0 / (b * b))
    weights.setflags(write=False)
    return UnitaryMixture(weights=weights, unitaries=tuple(unitaries))


def make_unitary_mixture(weights: Sequence[float], unitaries: Sequence[ComplexMatrix]) -> UnitaryMixture:
    p = np.asarray(weights, dtype=np.float64)
    if len(p) != len(unitaries) or len(p) < 1:
        raise ParameterError("weights and unitaries must have the same non-zero length")
    if np.any(p < 0.0) or abs(float(p.sum()) - 1.0) > settings.trace_tol:
        raise ParameterError("weights must form a probability vector")
    mats = tuple(as_complex_matrix(u) for u in unitaries)
    for index, u in enumerate(mats):
        if not is_unitary(u):
            raise ParameterError(f"operator {index} is not unitary")
    return UnitaryMixture(weights=p, unitaries=mats)


def apply_unitary_mixture(m: ComplexMatrix, mixture: UnitaryMixture) -> ComplexMatrix:
    """Σ_j p_j U_j M U_j†, aufsummiert in fester Indexreihenfolge"""
    total = np.zeros_like(m, dtype=np.complex128)
    for p, u in zip(mixture.weights, mixture.unitaries):
        total += p * (u @ m @ dagger(u))
    return total


def twirl_subsystem_B(rho_ab: DensityMatrix, split: Optional[BipartiteSplit] = None) -> DensityMatrix:
    """
    Wendet {1/b², I_A ⊗ W_j} an; Ergebnis ist tr_B(ρ) ⊗ I/b.
    Für b = 1 ist tr_B(ρ) ⊗ I/1 = ρ; der Zustand wird unverändert zurückgegeben.

    Raises:
        SplitError: kein Split oder Split passt nicht
    """
    split = split or rho_ab.split
    if split is None:
        raise SplitError("twirl needs a bipartite split")
    split.require(rho_ab.dim)
    if split.dim_b == 1:
        return make_density(rho_ab.matrix, split=split)
    local = weyl_mixture(split.dim_b)
    lifted = UnitaryMixture(
        weights=local.weights,
        unitaries=tuple(tensor_product(identity(split.dim_a), u) for u in local.unitaries),
    )
    return make_density(apply_unitary_mixture(rho_ab.matrix, lifted), split=split)
