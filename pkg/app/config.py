"""
Configuration management for the logical entropy toolkit
"""
from pydantic_settings import BaseSettings
import os


class Settings(BaseSettings):
    """Application settings loaded from environment variables (Prefix QLE_)"""

    # Matrix-Kernel
    max_dim: int = 4096          # Obergrenze für tensor_product
    cli_max_dim: int = 256       # Obergrenze für Eingabedateien (CLI/Service), --max-dim überschreibt

    # Toleranzen für Zustandsvalidierung
    hermiticity_tol: float = 1e-10
    trace_tol: float = 1e-10
    positivity_tol: float = 1e-10
    norm_tol: float = 1e-10
    rank_cutoff: float = 1e-12   # Eigenwerte darunter zählen nicht zum numerischen Rang

    # Jacobi-Eigenlöser
    jacobi_threshold: float = 1e-12
    jacobi_max_sweeps: int = 100

    # Theorem-Checks
    check_tolerance: float = 1e-9
    check_trials: int = 200
    check_seed: int = 42
    check_workers: int = 1

    # Service Configuration
    service_port: int = 5000
    debug: bool = False

    # Logging
    log_level: str = "INFO"
    log_file: str = ""

    class Config:
        # Absoluter Pfad damit uvicorn und die CLI die .env auch finden
        env_file = os.path.join(os.path.dirname(os.path.dirname(__file__)), ".env")
        env_prefix = "QLE_"
        case_sensitive = False
        extra = "ignore"


# Global settings instance
settings = Settings()
