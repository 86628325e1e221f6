"""
Configuration settings
"""
from typing import Dict

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """应用配置"""

    model_config = SettingsConfigDict(
        env_prefix="GRASSMOMENT_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # 应用基本信息
    app_name: str = "grassmoment"
    app_version: str = "0.3.0"
    debug: bool = False

    # API配置
    api_prefix: str = "/api/v1"
    api_max_samples: int = 200
    api_cache_ttl: int = 600

    # 采样配置
    seed: int = 0xC0FFEE
    samples: int = 1000
    witness_trials: int = 20000
    sampler_max_rejections: int = 10000

    # 容差
    tol_identity: float = 1e-12
    tol_constructive: float = 1e-10
    tol_pipeline: float = 1e-9
    tol_rank: float = 1e-6
    tol_rank_certify: float = 1e-12
    tol_zero: float = 1e-10
    fd_step: float = 1e-6

    # 网格
    chamber_grid_denominator: int = 9
    regularity_grid_denominator_n4: int = 18
    regularity_grid_denominator_n5: int = 15
    oracle_points: int = 200
    tangent_points: int = 100
    injectivity_tol: float = 1e-9

    # 日志配置
    log_file: str = ""
    log_level: str = "INFO"

    @field_validator("seed")
    @classmethod
    def _seed_is_u64(cls, value: int) -> int:
        if not 0 <= value < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        return value

    @field_validator("samples", "witness_trials", "sampler_max_rejections")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value <= 0:
            raise ValueError("must be positive")
        return value

    def tolerances(self) -> Dict[str, float]:
        """当前容差表"""
        return {
            "identity": self.tol_identity,
            "constructive": self.tol_constructive,
            "pipeline": self.tol_pipeline,
            "rank": self.tol_rank,
            "rank_certify": self.tol_rank_certify,
            "zero": self.tol_zero,
            "fd_step": self.fd_step,
        }


# 全局配置实例
settings = Settings()
