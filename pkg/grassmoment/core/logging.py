"""
Logging configuration
"""
import logging
import sys
from pathlib import Path
from typing import Optional

from grassmoment.core.config import settings

_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """Setup application logging"""
    level = level or settings.log_level
    log_file = settings.log_file if log_file is None else log_file

    formatter = logging.Formatter(_FORMAT)

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, level.upper()))

    # stdout 只输出 JSON
    if not any(getattr(h, "_grassmoment", False) for h in root_logger.handlers):
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        console_handler._grassmoment = True  # type: ignore[attr-defined]
        root_logger.addHandler(console_handler)

        if log_file:
            log_dir = Path("logs")
            log_dir.mkdir(exist_ok=True)
            file_handler = logging.FileHandler(log_dir / log_file, encoding="utf-8")
            file_handler.setFormatter(formatter)
            file_handler._grassmoment = True  # type: ignore[attr-defined]
            root_logger.addHandler(file_handler)

    logging.getLogger("uvicorn").setLevel(logging.INFO)
    logging.getLogger("httpx").setLevel(logging.WARNING)
