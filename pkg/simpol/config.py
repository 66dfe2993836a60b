"""
运行配置
从环境变量（以及项目根目录下的 .env 文件）读取，调用时读取以便测试中覆盖
"""
import os

from dotenv import load_dotenv

# 加载环境变量
load_dotenv()

DEFAULT_SECTION_CAP = 1_000_000
DEFAULT_ORACLE_CELL_CAP = 24


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} 必须是整数，当前值: {raw!r}")
    if value <= 0:
        raise ValueError(f"{name} 必须为正整数，当前值: {value}")
    return value


def section_cap() -> int:
    """find_sections 在上下文性判定中允许枚举的截面数量上限"""
    return _int_env("SIMPOL_SECTION_CAP", DEFAULT_SECTION_CAP)


def oracle_cell_cap() -> int:
    """oracle 顶点枚举允许的支撑单元格数量上限"""
    return _int_env("SIMPOL_ORACLE_CELL_CAP", DEFAULT_ORACLE_CELL_CAP)


def log_level() -> str:
    return os.getenv("SIMPOL_LOG_LEVEL", "INFO")


def log_to_file() -> bool:
    return os.getenv("SIMPOL_LOG_TO_FILE", "false").strip().lower() in ("1", "true", "yes", "on")


def default_seed() -> int:
    return _int_env("SIMPOL_SEED", 20240501)
