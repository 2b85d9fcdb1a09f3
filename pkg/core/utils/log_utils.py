import sys
from typing import Optional

from loguru import logger

from settings_config import settings

LOG_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan> - {message}"


def configure_logging(level: Optional[str] = None) -> None:
    """Replace loguru's default sink with a single stderr sink at the given level"""
    logger.remove()
    logger.add(sys.stderr, level=(level or settings.log_level).upper(), format=LOG_FORMAT)
