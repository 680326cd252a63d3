import logging
from typing import Literal, Optional

from fastapi import FastAPI, HTTPException, Query, status
from pydantic import BaseModel, Field

from src.coset_search import verify_search_output
from src.distance import DistanceReport, pa_hd
from src.errors import ClaimFailed, PermArrayError
from src.gv import GVResult, gv_bound
from src.pa_format import parse_pa
from src.settings import configure_logging, get_settings

configure_logging()
logger = logging.getLogger(__name__)

app = FastAPI(
    title="PermArray Verification Gateway",
    version="1.0.0",
    description="Certifies permutation arrays given in PA v1 text."
)

# --- Schema Definitions ---

class PASubmission(BaseModel):
    text: str = Field(..., min_length=1)
    one_indexed: bool = False
    mode: Literal["coset-shortcut", "exact-pairwise"] = "coset-shortcut"


class VerifySubmission(PASubmission):
    claimed_d: Optional[int] = Field(None, ge=1)


class VerifyResponse(BaseModel):
    verified: bool
    n: int
    size: int
    claimed_d: Optional[int]
    report: DistanceReport


def _parse_or_422(submission: PASubmission):
    try:
        return parse_pa(submission.text, one_indexed=submission.one_indexed)
    except PermArrayError as e:
        logger.warning(f"rejected PA submission: {e}")
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))

# --- API Implementation ---

@app.post("/v1/hd", response_model=DistanceReport)
def compute_hd(submission: PASubmission):
    pa = _parse_or_422(submission)
    try:
        return pa_hd(pa, submission.mode)
    except PermArrayError as e:
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))


@app.post("/v1/verify", response_model=VerifyResponse)
def verify_claim(submission: VerifySubmission):
    """
    Re-verifies the file's claimed d (or the override). A failed claim is a
    normal answer with verified=false and the witness pair in the report.
    """
    pa = _parse_or_422(submission)
    claimed = submission.claimed_d if submission.claimed_d is not None else pa.d
    try:
        report = verify_search_output(pa, claimed=claimed)
        verified = True
    except ClaimFailed as e:
        report, verified = e.report, False
    except PermArrayError as e:
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
    logger.info(f"verify n={pa.n} size={pa.size} claimed={claimed}: {report.render()} verified={verified}")
    return VerifyResponse(verified=verified, n=pa.n, size=pa.size, claimed_d=claimed, report=report)


@app.get("/v1/gv", response_model=GVResult)
def gilbert_varshamov(n: int = Query(..., ge=2), d: int = Query(..., ge=2)):
    try:
        return gv_bound(n, d)
    except PermArrayError as e:
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))


@app.get("/health")
def liveness_check():
    settings = get_settings()
    return {"status": "ready", "workers": settings.workers, "verify_cap": settings.verify_cap}


def serve(host: str = "0.0.0.0", port: int = 8000) -> None:
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level=get_settings().log_level.lower())
