import logging
import os
import sys
from datetime import datetime


def setup_logging(level: str | None = None, log_dir: str | None = None):
    level = level or os.getenv("ZPF_LOG_LEVEL", "INFO")
    log_dir = log_dir or "logs"
    os.makedirs(log_dir, exist_ok=True)

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            # File handler
            logging.FileHandler(
                os.path.join(log_dir, f"zpf_{datetime.now().strftime('%Y%m%d')}.log")
            ),
            # Console handler
            logging.StreamHandler(sys.stdout),
        ],
        force=True,
    )
