"""
FastAPI Main Application: Logical Entropy Service
"""
from fastapi import FastAPI, HTTPException, BackgroundTasks
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field
from typing import List, Optional
import logging
import uuid

from app import __version__
from app.config import settings
from app.check_tracker import check_tracker
from app.services.entropy import (
    divergence_terms,
    logical_divergence,
    logical_entropy,
    purity,
    tsallis_entropy,
    von_neumann_entropy,
)
from app.services.errors import LogicalEntropyError
from app.services.linalg import Subsystem, hermitian_eigen, partial_trace
from app.services.matrix_io import MatrixFile
from app.services.qstate import make_density, random_density
from app.services.theorems import CheckConfig, TheoremId, derive_config, run_check

# Configure logging
logging.basicConfig(
    level=settings.log_level,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

if settings.log_file:
    logging.getLogger().addHandler(logging.FileHandler(settings.log_file, encoding="utf-8"))

# Initialize FastAPI app
app = FastAPI(
    title="Logical Entropy Service",
    description="Quantenlogische Entropie, logische Divergenz und randomisierte Theorem-Checks",
    version=__version__,
    debug=settings.debug
)

# CORS Configuration
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# ===========================================================================
# REQUEST/RESPONSE MODELLE
# ===========================================================================

class EntropyRequest(BaseModel):
    matrix: MatrixFile
    tsallis_q: List[float] = []
    marginals: bool = False


class EntropyResponse(BaseModel):
    dim: int
    logical_entropy: float
    purity: float
    von_neumann: float
    spectrum: List[float]
    tsallis: dict = {}
    marginals: Optional[dict] = None


class DivergenceRequest(BaseModel):
    rho: MatrixFile
    sigma: MatrixFile


class DivergenceResponse(BaseModel):
    divergence: float
    cross: float
    half_entropy_rho: float
    half_entropy_sigma: float


class RandomRequest(BaseModel):
    dim: int = Field(ge=1)
    rank: Optional[int] = None
    seed: int = Field(default_factory=lambda: settings.check_seed)


class CheckRequest(BaseModel):
    theorem: str = "all"                      # TheoremId-Name oder "all"
    config: CheckConfig = Field(default_factory=CheckConfig)


# ===========================================================================
# HELPER
# ===========================================================================

def _http_error(e: LogicalEntropyError, endpoint: str) -> HTTPException:
    """Usage/Parse/Validierung → 422, alles andere → 500"""
    if e.exit_code == 1:
        logger.error(f"Fehler in {endpoint}: {e}", exc_info=True)
        return HTTPException(status_code=500, detail=str(e))
    logger.warning(f"{endpoint}: ungültige Eingabe: {e}")
    return HTTPException(status_code=422, detail=str(e))


def _selected_theorems(selector: str) -> List[TheoremId]:
    if selector.lower() == "all":
        return list(TheoremId)
    try:
        return [TheoremId(selector.lower())]
    except ValueError:
        names = ", ".join(t.value for t in TheoremId)
        raise HTTPException(status_code=422, detail=f"unknown theorem '{selector}'; valid names: all, {names}")


# ===========================================================================
# ENDPUNKTE
# ===========================================================================

@app.get("/")
async def root():
    """Root endpoint"""
    return {
        "service": "Logical Entropy Service",
        "version": __version__,
        "status": "running",
    }


@app.get("/health")
async def health_check():
    return {
        "status": "healthy",
        "tolerances": {
            "hermiticity": settings.hermiticity_tol,
            "trace": settings.trace_tol,
            "positivity": settings.positivity_tol,
            "check": settings.check_tolerance,
        },
    }


@app.post("/api/entropy", response_model=EntropyResponse)
async def entropy(request: EntropyRequest):
    try:
        rho = request.matrix.to_density()
        marginals = None
        if request.marginals:
            split = request.matrix.bipartite_split()
            if split is None:
                raise HTTPException(status_code=422, detail="marginals need a matrix with a split")
            marginals = {
                "A": logical_entropy(make_density(partial_trace(rho.matrix, split, Subsystem.B))),
                "B": logical_entropy(make_density(partial_trace(rho.matrix, split, Subsystem.A))),
            }
        return EntropyResponse(
            dim=rho.dim,
            logical_entropy=logical_entropy(rho),
            purity=purity(rho),
            von_neumann=von_neumann_entropy(rho),
            spectrum=[float(x) for x in hermitian_eigen(rho.matrix).eigenvalues],
            tsallis={format(q, "g"): tsallis_entropy(rho, q) for q in request.tsallis_q},
            marginals=marginals,
        )
    except LogicalEntropyError as e:
        raise _http_error(e, "/api/entropy")


@app.post("/api/divergence", response_model=DivergenceResponse)
async def divergence(request: DivergenceRequest):
    try:
        rho = request.rho.to_density()
        sigma = request.sigma.to_density()
        terms = divergence_terms(rho, sigma)
        return DivergenceResponse(
            divergence=logical_divergence(rho, sigma),
            cross=terms.cross,
            half_entropy_rho=terms.half_entropy_rho,
            half_entropy_sigma=terms.half_entropy_sigma,
        )
    except LogicalEntropyError as e:
        raise _http_error(e, "/api/divergence")


@app.post("/api/random", response_model=MatrixFile)
async def random_state(request: RandomRequest):
    rank = request.dim if request.rank is None else request.rank
    try:
        rho = random_density(request.dim, rank, request.seed)
    except LogicalEntropyError as e:
        raise _http_error(e, "/api/random")
    return MatrixFile.from_matrix(rho.matrix, label=f"random dim={request.dim} rank={rank} seed={request.seed}")


def run_check_job(job_id: str, theorems: List[TheoremId], config: CheckConfig):
    """Background Task: Checks nacheinander ausführen und im Tracker protokollieren"""
    logger.info(f"Job {job_id}: Starte {len(theorems)} Check(s)")
    try:
        passed = True
        for theorem in theorems:
            check_tracker.update_step(job_id, theorem.value, 'processing')
            job_config = derive_config(theorem, config) if len(theorems) > 1 else config
            report = run_check(theorem, job_config)
            passed = passed and report.passed
            check_tracker.add_report(job_id, report.model_dump(mode="json"))
            check_tracker.update_step(job_id, theorem.value, 'completed' if report.passed else 'failed')
        check_tracker.complete_job(job_id, passed)
        logger.info(f"Job {job_id}: abgeschlossen (passed={passed})")
    except Exception as e:
        logger.error(f"Job {job_id} fehlgeschlagen: {e}", exc_info=True)
        check_tracker.fail_job(job_id, str(e))


@app.post("/api/check")
async def start_check(request: CheckRequest, background_tasks: BackgroundTasks):
    """Startet Theorem-Checks als Background Task; Status über /api/check/status/{job_id}"""
    theorems = _selected_theorems(request.theorem)
    job_id = str(uuid.uuid4())
    check_tracker.create_job(job_id, [t.value for t in theorems])
    background_tasks.add_task(run_check_job, job_id, theorems, request.config)
    return {
        "status": "accepted",
        "job_id": job_id,
        "theorems": [t.value for t in theorems],
    }


@app.get("/api/check/status/{job_id}")
async def get_check_status(job_id: str):
    """
    Status eines Check-Jobs.
    Felder: status (processing|completed|failed), current_step, steps, reports, passed, error
    """
    job = check_tracker.get_job(job_id)
    if not job:
        raise HTTPException(status_code=404, detail="Job not found")
    return job


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=settings.service_port)
