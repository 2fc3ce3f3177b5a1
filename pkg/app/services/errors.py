"""
Fehlerklassen der Toolkit-Services.

Jede Klasse trägt einen stabilen Exit-Code, den die CLI unverändert an den
Prozess weitergibt:

    0 Erfolg, 1 interner Fehler, 2 Usage, 3 I/O, 4 Parse, 5 Validierung,
    6 fehlgeschlagener Theorem-Check
"""
from typing import Optional


class LogicalEntropyError(Exception):
    """Basisklasse aller Toolkit-Fehler"""
    exit_code = 1


# ── Usage ────────────────────────────────────────────────────────────────
class UsageError(LogicalEntropyError):
    exit_code = 2


class ParameterError(UsageError):
    """Ungültiger Parameter (Rang, q, Seed, b < 2 ...)"""


class CheckConfigError(UsageError):
    """Check-Konfiguration passt nicht zum Theorem"""


# ── I/O + Parsing ────────────────────────────────────────────────────────
class MatrixIOError(LogicalEntropyError):
    exit_code = 3


class MatrixFileError(LogicalEntropyError):
    """Syntax- oder Formfehler in einer Matrix-/Projektor-Datei"""
    exit_code = 4

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None,
                 field: Optional[str] = None):
        context = []
        if line is not None:
            context.append(f"line {line}")
        if column is not None:
            context.append(f"column {column}")
        if field:
            context.append(f"field '{field}'")
        suffix = f" ({', '.join(context)})" if context else ""
        super().__init__(f"{message}{suffix}")
        self.line = line
        self.column = column
        self.field = field


# ── Validierung ──────────────────────────────────────────────────────────
class ValidationFailure(LogicalEntropyError):
    exit_code = 5


class DimensionError(ValidationFailure):
    pass


class SizeError(DimensionError):
    """Dimension über der konfigurierten Obergrenze"""


class SplitError(DimensionError):
    """BipartiteSplit passt nicht zur Matrixdimension"""


class DensityValidationError(ValidationFailure):
    """Eine Invariante eines Zustands ist verletzt; deviation = Abweichung"""
    invariant = "density"

    def __init__(self, message: str, deviation: float):
        super().__init__(f"{self.invariant} invariant violated: {message} (deviation {deviation:.3g})")
        self.deviation = deviation


class HermiticityError(DensityValidationError):
    invariant = "hermiticity"


class TraceError(DensityValidationError):
    invariant = "trace"


class PositivityError(DensityValidationError):
    invariant = "positivity"


class NormError(DensityValidationError):
    invariant = "norm"


class MeasurementError(ValidationFailure):
    """Projektor-Menge ist nicht vollständig oder nicht orthogonal"""


class EnsembleError(ValidationFailure):
    """Gewichte oder Komponenten eines Gemischs ungültig"""


class DistributionError(ValidationFailure):
    """Ungültige Partition oder ungültiger Wahrscheinlichkeitsvektor"""


# ── Numerik ──────────────────────────────────────────────────────────────
class ConvergenceError(LogicalEntropyError):
    exit_code = 1


# ── Checks ───────────────────────────────────────────────────────────────
class CheckFailure(LogicalEntropyError):
    exit_code = 6
