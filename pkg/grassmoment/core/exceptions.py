"""
Error hierarchy shared by services, CLI and API
"""


class GrassmomentError(Exception):
    """基础异常"""


class DomainError(GrassmomentError, ValueError):
    """输入不满足前置条件"""


class DimensionMismatchError(DomainError):
    """向量长度不一致"""


class DegenerateInputError(DomainError):
    """退化输入（秩不足、零向量）"""


class OutsideChartError(DomainError):
    """点不在坐标卡内"""


class NoSolutionError(DomainError):
    """给定模长无法闭合相位"""


class UnsupportedError(GrassmomentError):
    """不支持的参数组合"""


class UnsupportedScaleError(UnsupportedError):
    """规模超出可计算范围"""


class WitnessNotFoundError(GrassmomentError):
    """有限次随机搜索未找到见证点"""


class SamplingError(GrassmomentError):
    """拒绝采样耗尽"""


class CertificateError(GrassmomentError):
    """证书校验失败"""

    def __init__(self, message: str, index: int = -1):
        super().__init__(message)
        self.index = index
