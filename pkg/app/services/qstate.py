"""
Validierte Quantenzustände: Dichtematrizen, reine Zustände, Gemische,
Zufallszustände, Purifikation und Schmidt-Zerlegung.
"""
from dataclasses import dataclass
from typing import Optional, Sequence
import logging
import math

import numpy as np
import numpy.typing as npt

from app.config import settings
from app.services.errors import (
    EnsembleError,
    HermiticityError,
    NormError,
    ParameterError,
    PositivityError,
    SplitError,
    TraceError,
)
from app.services.linalg import (
    BipartiteSplit,
    ComplexMatrix,
    as_complex_matrix,
    dagger,
    hermitian_eigen,
    hermiticity_deviation,
    identity,
    symmetrize,
)

logger = logging.getLogger(__name__)

SEED_LIMIT = 2 ** 64


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitesch, Spur 1, positiv semidefinit. Nur über make_density erzeugen."""
    matrix: ComplexMatrix
    split: Optional[BipartiteSplit] = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class PureState:
    amplitudes: npt.NDArray[np.complex128]
    split: Optional[BipartiteSplit] = None

    @property
    def dim(self) -> int:
        return len(self.amplitudes)

    def projector(self) -> ComplexMatrix:
        return np.outer(self.amplitudes, np.conj(self.amplitudes))

    def density(self) -> DensityMatrix:
        return make_density(self.projector(), split=self.split)


@dataclass(frozen=True)
class MixtureEnsemble:
    weights: npt.NDArray[np.float64]
    components: tuple

    @property
    def dim(self) -> int:
        return self.components[0].dim

    def mixture(self) -> DensityMatrix:
        total = sum(p * rho.matrix for p, rho in zip(self.weights, self.components))
        return make_density(total)


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: npt.NDArray[np.float64]
    left_vectors: ComplexMatrix    # dim_a × r, Spalten
    right_vectors: ComplexMatrix   # dim_b × r, Spalten

    def reconstruct(self) -> npt.NDArray[np.complex128]:
        coefficient_matrix = (self.left_vectors * self.coefficients) @ self.right_vectors.T
        return coefficient_matrix.reshape(-1)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _min_eigenvalue_violation(matrix: ComplexMatrix) -> Optional[float]:
    """
    None wenn min Eigenwert ≥ -positivity_tol, sonst der min Eigenwert.

    Schneller Pfad: Cholesky von matrix + tol·I; nur bei Fehlschlag wird
    der Jacobi-Löser für die genaue Abweichung bemüht.
    """
    tol = settings.positivity_tol
    try:
        np.linalg.cholesky(matrix + tol * identity(matrix.shape[0]))
        return None
    except np.linalg.LinAlgError:
        smallest = float(hermitian_eigen(matrix).eigenvalues[-1])
        return smallest if smallest < -tol else None


def make_density(m, split: Optional[BipartiteSplit] = None, max_dim: Optional[int] = None) -> DensityMatrix:
    """
    Validierungstor für Dichtematrizen.

    Reihenfolge der Prüfungen: Hermitizität, Spur, Positivität. Hermitesche
    Eingaben innerhalb der Toleranz werden als (m + m†)/2 übernommen.

    Raises:
        HermiticityError / TraceError / PositivityError mit Abweichung
        SplitError: split passt nicht zur Dimension
    """
    arr = as_complex_matrix(m, max_dim=max_dim)
    deviation = hermiticity_deviation(arr)
    if deviation > settings.hermiticity_tol:
        raise HermiticityError("matrix is not Hermitian", deviation)
    arr = symmetrize(arr)

    trace = float(np.trace(arr).real)
    if abs(trace - 1.0) > settings.trace_tol:
        raise TraceError(f"trace is {trace:.17g}, expected 1", abs(trace - 1.0))

    smallest = _min_eigenvalue_violation(arr)
    if smallest is not None:
        raise PositivityError(f"minimum eigenvalue is {smallest:.6g}", -smallest)

    if split is not None:
        split.require(arr.shape[0])
    return DensityMatrix(matrix=_readonly(arr), split=split)


def make_pure_state(amplitudes, split: Optional[BipartiteSplit] = None) -> PureState:
    vec = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if vec.size < 1 or not np.all(np.isfinite(vec)):
        raise NormError("amplitude vector is empty or not finite", float("inf"))
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > settings.norm_tol:
        raise NormError(f"norm is {norm:.17g}, expected 1", abs(norm - 1.0))
    if split is not None:
        split.require(vec.size)
    return PureState(amplitudes=_readonly(vec.copy()), split=split)


def make_ensemble(weights: Sequence[float], components: Sequence[DensityMatrix]) -> MixtureEnsemble:
    """Gemisch Σ p_i ρ_i mit Wahrscheinlichkeitsvektor p und gleich großen Komponenten"""
    p = _validate_weights(weights)
    if len(p) != len(components):
        raise EnsembleError(f"{len(p)} weights for {len(components)} components")
    dims = {rho.dim for rho in components}
    if len(dims) != 1:
        raise EnsembleError(f"components have different dimensions: {sorted(dims)}")
    return MixtureEnsemble(weights=_readonly(p), components=tuple(components))


def _validate_weights(weights: Sequence[float]) -> npt.NDArray[np.float64]:
    p = np.asarray(weights, dtype=np.float64).reshape(-1)
    if p.size < 1:
        raise EnsembleError("at least one weight is required")
    if np.any(p < 0.0) or not np.all(np.isfinite(p)):
        raise EnsembleError(f"weights must be finite and non-negative, got {p.tolist()}")
    if abs(float(p.sum()) - 1.0) > settings.trace_tol:
        raise EnsembleError(f"weights sum to {float(p.sum()):.17g}, expected 1")
    return p


# ===========================================================================
# ZUFALLSZUSTÄNDE
# ===========================================================================

def generator_from_seed(seed: int) -> np.random.Generator:
    if not 0 <= int(seed) < SEED_LIMIT:
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.default_rng(int(seed))


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def ginibre_density(dim: int, rank: int, rng: np.random.Generator) -> DensityMatrix:
    """ρ = GG†/tr(GG†) mit G (dim × rank) i.i.d. komplex normalverteilt"""
    if dim < 1 or not 1 <= rank <= dim:
        raise ParameterError(f"rank must satisfy 1 <= rank <= dim, got rank={rank}, dim={dim}")
    g = _complex_normal(rng, (dim, rank))
    gram = g @ dagger(g)
    return make_density(gram / np.trace(gram).real)


def random_density(dim: int, rank: int, seed: int) -> DensityMatrix:
    """Deterministisch für festes (dim, rank, seed)"""
    return ginibre_density(dim, rank, generator_from_seed(seed))


def random_rank(dim: int, rng: np.random.Generator) -> int:
    return int(rng.integers(1, dim + 1))


def random_pure_state(dim: int, rng: np.random.Generator,
                      split: Optional[BipartiteSplit] = None) -> PureState:
    vec = _complex_normal(rng, dim)
    return make_pure_state(vec / np.linalg.norm(vec), split=split)


def random_unitary(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    """Haar-verteilte Unitäre über QR einer Ginibre-Matrix mit Phasenkorrektur"""
    q, r = np.linalg.qr(_complex_normal(rng, (dim, dim)))
    diagonal = np.diag(r)
    return q * (diagonal / np.abs(diagonal))


def random_probability_vector(k: int, rng: np.random.Generator) -> npt.NDArray[np.float64]:
    """Dirichlet(1, ..., 1)"""
    return rng.dirichlet(np.ones(k))


def maximally_mixed(dim: int) -> DensityMatrix:
    return make_density(identity(dim) / dim)


# ===========================================================================
# PURIFIKATION + SCHMIDT
# ===========================================================================

def purify(rho: DensityMatrix) -> PureState:
    """
    |η⟩ = Σ_i √λ_i |e_i⟩ ⊗ |i⟩ über die Eigenwerte > rank_cutoff.

    Die Ancilla hat die Dimension des numerischen Rangs r; Split (d, r).
    """
    eigen = hermitian_eigen(rho.matrix)
    keep = eigen.eigenvalues > settings.rank_cutoff
    weights = np.sqrt(eigen.eigenvalues[keep])
    coefficient_matrix = eigen.eigenvectors[:, keep] * weights
    amplitudes = coefficient_matrix.reshape(-1)
    amplitudes = amplitudes / np.linalg.norm(amplitudes)
    return make_pure_state(amplitudes, split=BipartiteSplit(dim_a=rho.dim, dim_b=int(keep.sum())))


def ensemble_purification(weights: Sequence[float], states: Sequence[PureState]) -> PureState:
    """
    Hilfszustand |η⟩ = Σ_i √p_i |ψ_i⟩ ⊗ |i⟩ für ein Gemisch reiner Zustände.

    Die |ψ_i⟩ müssen nicht orthogonal sein; tr_B ergibt Σ p_i |ψ_i⟩⟨ψ_i|.
    """
    p = _validate_weights(weights)
    if len(p) != len(states):
        raise EnsembleError(f"{len(p)} weights for {len(states)} states")
    dims = {psi.dim for psi in states}
    if len(dims) != 1:
        raise EnsembleError(f"states have different dimensions: {sorted(dims)}")
    columns = np.stack([psi.amplitudes for psi in states], axis=1) * np.sqrt(p)
    amplitudes = columns.reshape(-1)
    amplitudes = amplitudes / np.linalg.norm(amplitudes)
    return make_pure_state(amplitudes, split=BipartiteSplit(dim_a=dims.pop(), dim_b=len(p)))


def schmidt(psi: PureState) -> SchmidtDecomposition:
    """
    Schmidt-Zerlegung über die Eigenzerlegung der Gram-Matrix C C†.

    Die Koeffizienten sind c_k = ‖u_k† C‖, nicht √λ_k: so bleiben auch
    Koeffizienten unter 1e-6 genau. Verworfen wird c_k ≤ rank_cutoff; der
    Rekonstruktionsfehler ist damit höchstens √dim_a · rank_cutoff.
    Rechte Vektoren entstehen als (u_k† C)ᵀ / c_k.
    """
    if psi.split is None:
        raise SplitError("pure state carries no bipartite split")
    psi.split.require(psi.dim)
    coefficient_matrix = psi.amplitudes.reshape(psi.split.dim_a, psi.split.dim_b)
    eigen = hermitian_eigen(coefficient_matrix @ dagger(coefficient_matrix))
    projected = dagger(eigen.eigenvectors) @ coefficient_matrix
    norms = np.linalg.norm(projected, axis=1)
    order = np.argsort(-norms, kind="stable")
    keep = order[norms[order] > settings.rank_cutoff]
    coefficients = norms[keep]
    left = eigen.eigenvectors[:, keep]
    right = projected[keep].T / coefficients
    return SchmidtDecomposition(coefficients=coefficients, left_vectors=left, right_vectors=right)
