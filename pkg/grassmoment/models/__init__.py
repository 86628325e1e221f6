"""
Value types and report models
"""
from .geometry import (
    GrassmannPoint,
    M2Point,
    M3Point,
    MQ5Point,
    MQ7Point,
    ProjectivePoint,
    RationalVector,
    TorusElement,
)
from .reports import AcceptanceReport, FiberCertificate, FiberSummary

__all__ = [
    "AcceptanceReport",
    "FiberCertificate",
    "FiberSummary",
    "GrassmannPoint",
    "M2Point",
    "M3Point",
    "MQ5Point",
    "MQ7Point",
    "ProjectivePoint",
    "RationalVector",
    "TorusElement",
]
