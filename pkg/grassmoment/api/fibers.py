"""
Fiber certificate and bundle API endpoints
"""
from typing import Optional

import numpy as np
from fastapi import APIRouter, HTTPException, Query

from grassmoment.core.cache import cached
from grassmoment.core.config import settings
from grassmoment.core.exceptions import DomainError, GrassmomentError
from grassmoment.models.geometry import TorusElement
from grassmoment.services.fibers4.bundle import TRANSITION_01, TRANSITION_10, cocycle_residual
from grassmoment.services.verification import FIBER_KINDS, certify_fiber

router = APIRouter(prefix="/fibers", tags=["fibers"])
bundle_router = APIRouter(prefix="/transition", tags=["bundle"])


@router.get("/{kind}")
@cached(ttl=settings.api_cache_ttl, key_prefix="fibers")
async def get_fiber_certificates(
    kind: str,
    samples: int = Query(20, ge=0),
    seed: Optional[int] = Query(None, ge=0, lt=2**64),
    orbit: str = Query("first", pattern=r"^(first|second|C[-+][123])$"),
):
    """对纤维采样并返回证书汇总"""
    if kind not in FIBER_KINDS:
        raise HTTPException(status_code=404, detail=f"Unknown fiber kind: {kind}")
    if samples > settings.api_max_samples:
        raise HTTPException(
            status_code=400,
            detail=f"samples is capped at {settings.api_max_samples} over HTTP",
        )
    try:
        summary = certify_fiber(kind, samples, seed, orbit)
        return summary.model_dump(mode="json")
    except DomainError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except GrassmomentError as e:
        raise HTTPException(status_code=500, detail=f"Certification failed: {str(e)}")


@bundle_router.get("")
async def get_transition(seed: Optional[int] = Query(None, ge=0, lt=2**64)):
    """转移矩阵及其余循环检查"""
    rng = np.random.default_rng(settings.seed if seed is None else seed)
    residual = max(cocycle_residual(TorusElement.random(3, rng)) for _ in range(32))
    return {
        "matrix": [list(r) for r in TRANSITION_01.rows],
        "inverse": [list(r) for r in TRANSITION_10.rows],
        "determinant": TRANSITION_01.determinant(),
        "cocycle_residual": residual,
        "cocycle_ok": residual <= settings.tol_identity,
    }
