"""
Dense complex matrix kernel.

Alle Funktionen arbeiten auf numpy-Arrays (complex128) und geben neue Arrays
zurück; Eingaben werden nie verändert. Index-Konvention überall: Subsystem A
ist der langsame (linke) Tensorindex, d.h. Eintrag (i, k) eines A⊗B-Raums
liegt bei Zeile i * dim_b + k.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union
import logging
import math

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field

from app.config import settings
from app.services.errors import (
    ConvergenceError,
    DimensionError,
    HermiticityError,
    SizeError,
    SplitError,
)

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]


class Subsystem(str, Enum):
    """Welches Subsystem bei partial_trace ausgespurt wird"""
    A = "A"
    B = "B"


class BipartiteSplit(BaseModel):
    """Aufteilung eines Raums der Dimension dim_a * dim_b in A ⊗ B"""
    model_config = ConfigDict(frozen=True)

    dim_a: int = Field(ge=1)
    dim_b: int = Field(ge=1)

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def require(self, dim: int) -> None:
        """SplitError wenn der Split nicht zur Dimension passt"""
        if self.dim != dim:
            raise SplitError(
                f"split {self.dim_a}x{self.dim_b} does not match dimension {dim}"
            )


@dataclass(frozen=True)
class Eigendecomposition:
    """Eigenwerte absteigend sortiert, Eigenvektoren als Spalten"""
    eigenvalues: npt.NDArray[np.float64]
    eigenvectors: ComplexMatrix
    sweeps: int = 0

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_complex_matrix(m, max_dim: Optional[int] = None) -> ComplexMatrix:
    """
    Validiert und konvertiert eine Eingabe zu einer quadratischen complex128-Matrix.

    Args:
        m: beliebige array-artige Eingabe
        max_dim: Obergrenze (Default settings.max_dim)

    Returns:
        complex128-Array der Form (dim, dim)
    """
    limit = settings.max_dim if max_dim is None else max_dim
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {arr.shape}")
    if arr.shape[0] > limit:
        raise SizeError(f"dimension {arr.shape[0]} exceeds the configured maximum {limit}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError("matrix contains NaN or Inf entries")
    return arr


def dagger(m: ComplexMatrix) -> ComplexMatrix:
    return np.conj(np.transpose(m))


def identity(dim: int) -> ComplexMatrix:
    return np.eye(dim, dtype=np.complex128)


def hermiticity_deviation(m: ComplexMatrix) -> float:
    """max |m - m†| entrywise"""
    return float(np.max(np.abs(m - dagger(m))))


def require_hermitian(m: ComplexMatrix) -> ComplexMatrix:
    """Prüft Hermitizität innerhalb der Toleranz und symmetrisiert"""
    arr = as_complex_matrix(m)
    deviation = hermiticity_deviation(arr)
    if deviation > settings.hermiticity_tol:
        raise HermiticityError("matrix is not Hermitian", deviation)
    return symmetrize(arr)


def symmetrize(m: ComplexMatrix) -> ComplexMatrix:
    return (m + dagger(m)) / 2


def is_unitary(u: ComplexMatrix, tol: Optional[float] = None) -> bool:
    tol = settings.hermiticity_tol if tol is None else tol
    dim = u.shape[0]
    return bool(np.max(np.abs(u @ dagger(u) - identity(dim))) <= tol)


def tensor_product(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """
    Kronecker-Produkt a ⊗ b mit A als langsamen Index.

    Raises:
        SizeError: wenn a.dim * b.dim die konfigurierte Obergrenze überschreitet
    """
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    dim = a.shape[0] * b.shape[0]
    if dim > settings.max_dim:
        raise SizeError(
            f"tensor product dimension {dim} exceeds the configured maximum {settings.max_dim}"
        )
    return np.kron(a, b)


def partial_trace(
    m: ComplexMatrix,
    split: BipartiteSplit,
    subsystem: Union[Subsystem, str] = Subsystem.B,
) -> ComplexMatrix:
    """
    Spurt das angegebene Subsystem aus.

    Args:
        m: Matrix auf A ⊗ B
        split: Dimensionen (dim_a, dim_b)
        subsystem: das Subsystem, das entfernt wird (B → Ergebnis auf A)

    Returns:
        dim_a × dim_a Matrix (subsystem=B) bzw. dim_b × dim_b (subsystem=A)
    """
    m = as_complex_matrix(m)
    split.require(m.shape[0])
    traced = Subsystem(subsystem)
    blocks = m.reshape(split.dim_a, split.dim_b, split.dim_a, split.dim_b)
    if traced is Subsystem.B:
        return np.einsum("ikjk->ij", blocks)
    return np.einsum("kikj->ij", blocks)


def _off_diagonal_norm(a: ComplexMatrix) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _rotate(a: ComplexMatrix, v: ComplexMatrix, p: int, q: int, skip_below: float) -> None:
    """Eine komplexe Jacobi-Rotation, die a[p, q] annulliert (in place)"""
    apq = a[p, q]
    magnitude = abs(apq)
    if magnitude <= skip_below:
        return
    phase = apq / magnitude
    theta = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    # Phasenausgleich diag(1, conj(phase)) gefolgt von der reellen Rotation
    g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=np.complex128)
    cols = [p, q]
    a[:, cols] = a[:, cols] @ g
    a[cols, :] = dagger(g) @ a[cols, :]
    v[:, cols] = v[:, cols] @ g
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real


def hermitian_eigen(m: ComplexMatrix) -> Eigendecomposition:
    """
    Eigenzerlegung einer hermiteschen Matrix per zyklischen Jacobi-Sweeps.

    Konvergenz, wenn die Frobenius-Norm des Nebendiagonalteils unter
    settings.jacobi_threshold (skaliert mit max(1, ||m||_F)) fällt.

    Raises:
        HermiticityError: Eingabe nicht hermitesch (mit maximaler Abweichung)
        ConvergenceError: nach settings.jacobi_max_sweeps Sweeps nicht konvergiert
    """
    a = require_hermitian(m).copy()
    dim = a.shape[0]
    v = identity(dim)
    threshold = settings.jacobi_threshold * max(1.0, float(np.linalg.norm(a)))
    skip_below = threshold / dim

    sweeps = 0
    while _off_diagonal_norm(a) >= threshold:
        if sweeps >= settings.jacobi_max_sweeps:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge after {sweeps} sweeps "
                f"(off-diagonal norm {_off_diagonal_norm(a):.3g})"
            )
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                _rotate(a, v, p, q, skip_below)
        sweeps += 1

    eigenvalues = np.real(np.diag(a))
    order = np.argsort(-eigenvalues, kind="stable")
    logger.debug(f"Jacobi: dim={dim}, sweeps={sweeps}")
    return Eigendecomposition(
        eigenvalues=eigenvalues[order],
        eigenvectors=v[:, order],
        sweeps=sweeps,
    )


def trace_of_square(m: ComplexMatrix) -> float:
    """Σ |m_ij|², gleich tr(m²) für hermitesches m (ohne m² zu bilden)"""
    arr = require_hermitian(m)
    return float(np.vdot(arr, arr).real)


def frobenius_distance_sq(a: ComplexMatrix, b: ComplexMatrix) -> float:
    """Σ |a_ij - b_ij|², gleich tr(a-b)² für hermitesche Eingaben"""
    a = require_hermitian(a)
    b = require_hermitian(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    diff = a - b
    return float(np.vdot(diff, diff).real)
