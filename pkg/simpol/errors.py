"""
统一异常定义
所有模块抛出的业务异常都继承自 SimpolError，CLI 在顶层统一捕获
"""


class SimpolError(Exception):
    """simpol 异常基类"""


class InvalidArgumentError(SimpolError, ValueError):
    """参数不合法（越界的结果、未知的边、非法的长度等）"""


class ShapeError(SimpolError, ValueError):
    """结构错误：矩阵形状与结果数不符，或分布缺少某条边"""


class PreconditionError(SimpolError):
    """调用前置条件不满足，例如 extract 要求 q ⪯ p"""


class NotCollapsibleError(SimpolError):
    """无法收缩：被收缩的边上的矩阵不是对角矩阵，或收缩会把存活的边变成自环"""


class ResourceLimitError(SimpolError):
    """超过配置的资源上限（截面数量、oracle 单元格数量）"""

    def __init__(self, message: str, limit: int, observed: int):
        super().__init__(f"{message} (limit={limit}, observed={observed})")
        self.limit = limit
        self.observed = observed
