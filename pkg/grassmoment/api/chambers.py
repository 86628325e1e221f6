"""
Chamber and regularity API endpoints
"""
from fastapi import APIRouter, HTTPException, Query

from grassmoment.core.cache import cached
from grassmoment.core.config import settings
from grassmoment.core.exceptions import DomainError, UnsupportedError
from grassmoment.services.exactgeom import parse_rational_vector
from grassmoment.services.regularity import (
    chamber_of_point,
    describe_arrangement,
    enumerate_chambers,
    s4_chamber_orbits,
)

router = APIRouter(prefix="/chambers", tags=["chambers"])


@router.get("")
@cached(ttl=settings.api_cache_ttl, key_prefix="chambers")
async def get_chambers(n: int = Query(4, ge=4, le=10)):
    """获取胞腔列表与 S4 轨道"""
    try:
        chambers = enumerate_chambers(n)
        return {
            "n": n,
            "arrangement": describe_arrangement(n),
            "chambers": [c.to_json() for c in chambers],
            "orbits": [o.to_json() for o in s4_chamber_orbits()],
        }
    except UnsupportedError as e:
        raise HTTPException(status_code=422, detail=str(e))


@router.get("/classify")
async def classify_point(
    x: str = Query(..., description="逗号分隔的有理数坐标，如 1/3,5/9,5/9,5/9"),
    n: int = Query(4, ge=4, le=10),
):
    """对单点分类：符号向量与两种正则性"""
    try:
        point = parse_rational_vector(x)
        return chamber_of_point(point, n).to_json()
    except DomainError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except UnsupportedError as e:
        raise HTTPException(status_code=422, detail=str(e))
