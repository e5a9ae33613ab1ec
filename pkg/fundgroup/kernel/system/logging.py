import logging
import sys

ROOT_LOGGER = "fundgroup"
LOG_FORMAT = "[%(asctime)s] %(levelname)-8s %(name)s: %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def setup_logging(level: int = logging.WARNING) -> logging.Logger:
    """
    Installs one stderr handler on the package logger. Reports own stdout, so
    diagnostics never interleave with them. Calling again only adjusts the level.
    """
    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(level)
    logger.propagate = False

    if logger.handlers:
        for handler in logger.handlers:
            handler.setLevel(level)
        return logger

    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
    logger.addHandler(handler)
    return logger


def get_logger(area: str | None = None) -> logging.Logger:
    """
    `fundgroup.<area>` child logger, or the package logger itself.
    """
    return logging.getLogger(f"{ROOT_LOGGER}.{area}" if area else ROOT_LOGGER)
