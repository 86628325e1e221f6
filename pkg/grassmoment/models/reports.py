"""
Report and certificate models serialized to JSON by the CLI and the API
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class Residuals(BaseModel):
    model_config = ConfigDict(frozen=True)

    moment: float
    plucker: Optional[float] = None
    surface: Optional[float] = None
    round_trip: Optional[float] = None


class ChartCoverageReport(BaseModel):
    """坐标卡覆盖检查结果"""

    model_config = ConfigDict(frozen=True)

    p23: float
    p24: float
    p34: float
    vanishing: List[str] = Field(default_factory=list)
    in_M0: bool
    in_M1: bool
    special_fiber: Optional[str] = None


class FiberCertificate(BaseModel):
    """单个样本点的证书"""

    model_config = ConfigDict(frozen=True)

    index: int
    kind: str
    orbit: str = "first"
    point: List[List[float]]
    residuals: Residuals
    jacobian_rank: Optional[int] = None
    f_values: Optional[List[float]] = None
    chart: Optional[ChartCoverageReport] = None
    passed: bool
    failure: Optional[str] = None


class FiberSummary(BaseModel):
    kind: str
    orbit: str
    seed: int
    samples: int
    max_residuals: Dict[str, float] = Field(default_factory=dict)
    rank_histogram: Dict[str, int] = Field(default_factory=dict)
    passed: bool
    failures: List[int] = Field(default_factory=list)
    certificates: List[FiberCertificate] = Field(default_factory=list)


class CriterionResult(BaseModel):
    name: str
    passed: bool
    detail: Dict[str, Any] = Field(default_factory=dict)
    elapsed_seconds: float = 0.0


class AcceptanceReport(BaseModel):
    """验收报告"""

    version: str
    seed: int
    samples: int
    passed: bool
    criteria: List[CriterionResult] = Field(default_factory=list)
    elapsed_seconds: float = 0.0


class InjectivityReport(BaseModel):
    """单射性检查：只比较原像不同的样本对"""

    model_config = ConfigDict(frozen=True)

    samples: int
    distinct_pairs: int
    min_distance: Optional[float] = None
    tolerance: float
    collisions: int
    passed: bool
