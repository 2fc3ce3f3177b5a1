"""
Dateiformate der CLI: MatrixFile, ProjectorFile und ReportDocument.

Matrizen werden als JSON geschrieben, komplexe Einträge als [re, im] mit 17
signifikanten Stellen, damit write → parse → write byte-identisch bleibt.
"""
from typing import Any, Dict, List, Optional, Sequence, Tuple
import hashlib
import json
import logging

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from app.config import settings
from app.services.channels import ProjectiveMeasurement, make_measurement
from app.services.errors import MatrixFileError, MatrixIOError, SizeError
from app.services.linalg import BipartiteSplit, ComplexMatrix
from app.services.qstate import DensityMatrix, make_density

logger = logging.getLogger(__name__)

Entry = Tuple[float, float]


def _check_square(entries: List[List[Entry]], dim: int, what: str) -> None:
    if len(entries) != dim or any(len(row) != dim for row in entries):
        raise ValueError(f"{what} must be a {dim}x{dim} array of [re, im] pairs")


def _to_array(entries: List[List[Entry]]) -> ComplexMatrix:
    pairs = np.asarray(entries, dtype=np.float64)
    return pairs[..., 0] + 1j * pairs[..., 1]


class MatrixFile(BaseModel):
    dim: int = Field(ge=1)
    entries: List[List[Entry]]
    split: Optional[Tuple[int, int]] = None
    label: Optional[str] = None

    @model_validator(mode="after")
    def _shape(self) -> "MatrixFile":
        _check_square(self.entries, self.dim, "entries")
        if self.split is not None and self.split[0] * self.split[1] != self.dim:
            raise ValueError(f"split {self.split[0]}x{self.split[1]} does not match dim {self.dim}")
        return self

    def bipartite_split(self) -> Optional[BipartiteSplit]:
        if self.split is None:
            return None
        return BipartiteSplit(dim_a=self.split[0], dim_b=self.split[1])

    def to_array(self) -> ComplexMatrix:
        return _to_array(self.entries)

    def to_density(self, max_dim: Optional[int] = None) -> DensityMatrix:
        limit = settings.cli_max_dim if max_dim is None else max_dim
        if self.dim > limit:
            raise SizeError(f"dimension {self.dim} exceeds the input limit {limit} (use --max-dim)")
        return make_density(self.to_array(), split=self.bipartite_split(), max_dim=limit)

    @classmethod
    def from_matrix(cls, matrix: ComplexMatrix, split: Optional[BipartiteSplit] = None,
                    label: Optional[str] = None) -> "MatrixFile":
        m = np.asarray(matrix, dtype=np.complex128)
        return cls(
            dim=m.shape[0],
            entries=[[(float(z.real), float(z.imag)) for z in row] for row in m],
            split=(split.dim_a, split.dim_b) if split is not None else None,
            label=label,
        )


class ProjectorFile(BaseModel):
    dim: int = Field(ge=1)
    projectors: List[List[List[Entry]]] = Field(min_length=1)
    label: Optional[str] = None

    @model_validator(mode="after")
    def _shape(self) -> "ProjectorFile":
        for index, entries in enumerate(self.projectors):
            _check_square(entries, self.dim, f"projector {index}")
        return self

    def to_measurement(self) -> ProjectiveMeasurement:
        return make_measurement([_to_array(entries) for entries in self.projectors])


class ReportDocument(BaseModel):
    """Ergebnisdokument eines CLI-Kommandos; timing liegt außerhalb des deterministischen Teils"""
    command: List[str]
    inputs: Dict[str, str] = Field(default_factory=dict)
    results: Dict[str, Any] = Field(default_factory=dict)
    versions: Dict[str, str] = Field(default_factory=dict)
    seed: Optional[int] = None
    timing: Dict[str, float] = Field(default_factory=dict)

    def deterministic_json(self) -> str:
        payload = self.model_dump(mode="json", exclude={"timing"})
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)

    def to_json(self) -> str:
        payload = self.model_dump(mode="json")
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


# ===========================================================================
# LESEN
# ===========================================================================

def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except (OSError, UnicodeDecodeError) as e:
        raise MatrixIOError(f"cannot read {path}: {e}") from e


def _load_json(text: str, path: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MatrixFileError(f"{path}: {e.msg}", line=e.lineno, column=e.colno) from e


def _validate(model: type, document: Any, path: str):
    try:
        return model.model_validate(document)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or None
        raise MatrixFileError(f"{path}: {first['msg']}", field=location) from e


def load_matrix_file(path: str) -> MatrixFile:
    return _validate(MatrixFile, _load_json(_read_text(path), path), path)


def parse_matrix_file(path: str, max_dim: Optional[int] = None) -> DensityMatrix:
    """
    Liest eine MatrixFile und validiert sie als Dichtematrix.

    Raises:
        MatrixIOError: Datei nicht lesbar (Exit 3)
        MatrixFileError: Syntax- oder Formfehler mit Zeile/Spalte oder Feld (Exit 4)
        DensityValidationError / SizeError: Zustand ungültig (Exit 5)
    """
    rho = load_matrix_file(path).to_density(max_dim=max_dim)
    logger.debug(f"{path}: dim={rho.dim}, split={rho.split}")
    return rho


def parse_projector_file(path: str) -> ProjectiveMeasurement:
    return _validate(ProjectorFile, _load_json(_read_text(path), path), path).to_measurement()


def file_digest(path: str) -> str:
    """sha256 der Datei als Hex-String"""
    try:
        with open(path, "rb") as handle:
            return hashlib.sha256(handle.read()).hexdigest()
    except OSError as e:
        raise MatrixIOError(f"cannot read {path}: {e}") from e


# ===========================================================================
# SCHREIBEN
# ===========================================================================

def format_number(x: float) -> str:
    """17 signifikante Stellen, -0.0 wird 0"""
    if x == 0.0:
        return "0"
    return format(float(x), ".17g")


def _format_row(row: Sequence[complex]) -> str:
    return "[" + ", ".join(f"[{format_number(z.real)}, {format_number(z.imag)}]" for z in row) + "]"


def dumps_matrix_file(matrix: ComplexMatrix, split: Optional[BipartiteSplit] = None,
                      label: Optional[str] = None) -> str:
    m = np.asarray(matrix, dtype=np.complex128)
    lines = ["{", f'  "dim": {m.shape[0]},']
    if label is not None:
        lines.append(f'  "label": {json.dumps(label, ensure_ascii=False)},')
    if split is not None:
        lines.append(f'  "split": [{split.dim_a}, {split.dim_b}],')
    rows = [f"    {_format_row(row)}" for row in m]
    lines.append('  "entries": [')
    lines.append(",\n".join(rows))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_matrix_file(path: str, matrix: ComplexMatrix, split: Optional[BipartiteSplit] = None,
                      label: Optional[str] = None) -> None:
    text = dumps_matrix_file(matrix, split=split, label=label)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as e:
        raise MatrixIOError(f"cannot write {path}: {e}") from e
    logger.info(f"✓ Matrix geschrieben: {path}")
