"""
simpol - 一维测量场景上的单纯分布工具包
构造、分类并验证循环场景及其粘合场景上的极值（顶点）分布
"""

__version__ = "0.1.0"
