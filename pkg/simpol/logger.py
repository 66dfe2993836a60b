#!/usr/bin/env python3
"""
Unified logging configuration for simpol
Provides centralized logging management across all modules
"""
import logging
import sys
from datetime import datetime
from pathlib import Path

from . import config


# Global logger instance
_logger_instance = None


def get_logger(name: str = None, log_level: str = None) -> logging.Logger:
    """
    Get unified logger instance for all modules

    Args:
        name: Module name (kept for call-site readability, all modules share one logger)
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL), defaults to SIMPOL_LOG_LEVEL

    Returns:
        logging.Logger: Unified logger instance
    """
    global _logger_instance

    if _logger_instance is None:
        _logger_instance = _setup_unified_logger(log_level or config.log_level())

    return _logger_instance


def set_level(log_level: str):
    """调整日志级别（CLI 的 --verbose / --quiet 使用）"""
    logger = get_logger()
    level = getattr(logging, log_level.upper(), logging.INFO)
    logger.setLevel(level)
    for handler in logger.handlers:
        if isinstance(handler, logging.StreamHandler) and not isinstance(handler, logging.FileHandler):
            handler.setLevel(level)


def _setup_unified_logger(log_level: str) -> logging.Logger:
    """Setup unified logger configuration"""
    logger = logging.getLogger('simpol')
    logger.setLevel(getattr(logging, log_level.upper(), logging.INFO))
    logger.propagate = False

    # Avoid duplicate handlers
    if logger.handlers:
        return logger

    # Create formatter with file location info for debugging
    formatter = logging.Formatter(
        fmt='%(asctime)s [%(levelname)s] %(filename)s:%(lineno)d - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # Console handler，stdout 只留给数据输出
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(getattr(logging, log_level.upper(), logging.INFO))
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if config.log_to_file():
        project_root = Path(__file__).resolve().parent.parent
        log_dir = project_root / "logs"
        log_dir.mkdir(exist_ok=True)

        today_str = datetime.now().strftime('%Y-%m-%d')
        log_file = log_dir / f"simpol_{today_str}.log"

        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger
