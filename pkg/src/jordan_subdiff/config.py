"""Configuration settings for jordan-subdiff."""

import logging
import os

from dotenv import load_dotenv

load_dotenv()


class BaseConfig:
    """Numerical defaults and logging switches shared by the library and the CLI."""

    # Tolerances
    DEFAULT_TOL: float = 1e-6
    FRAME_TOL: float = 1e-8
    TAU_GROUP_REL: float = 1e-8
    ZERO_COUNT_REL_TOL: float = 1e-10

    # Eigensolver
    JACOBI_REL_TOL: float = 1e-12
    JACOBI_MAX_SWEEPS: int = 100
    SPIN_AXIS_EPS: float = 1e-14

    # Catalog and oracle sizes
    L1_GENERATOR_MAX_ZEROS: int = 20
    HULL_POINT_CAP: int = 10_000
    PROBE_N_DIRS: int = 512

    # KL analysis
    KL_MIN_GAP: float = 1e-8
    KL_MIN_FIT_SAMPLES: int = 8
    KL_TOL: float = 1e-9

    # Logging Configuration (environment only affects what is logged)
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "WARNING").upper()
    DEBUG_MODE: bool = os.getenv("DEBUG_MODE", "false").lower() == "true"
    VERBOSE_LOGGING: bool = os.getenv("VERBOSE_LOGGING", "false").lower() == "true"

    @classmethod
    def validate(cls) -> None:
        """Validate configuration settings."""
        for name in ("DEFAULT_TOL", "FRAME_TOL", "TAU_GROUP_REL",
                     "ZERO_COUNT_REL_TOL", "JACOBI_REL_TOL", "SPIN_AXIS_EPS",
                     "KL_MIN_GAP", "KL_TOL"):
            if not getattr(cls, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(cls, name)}")
        if cls.JACOBI_MAX_SWEEPS < 1:
            raise ValueError(f"JACOBI_MAX_SWEEPS must be at least 1, got {cls.JACOBI_MAX_SWEEPS}")
        if cls.LOG_LEVEL not in logging.getLevelNamesMapping():
            raise ValueError(f"Unknown LOG_LEVEL '{cls.LOG_LEVEL}'")

    @classmethod
    def log_level(cls) -> int:
        """Return the effective logging level."""
        if cls.DEBUG_MODE:
            return logging.DEBUG
        if cls.VERBOSE_LOGGING:
            return min(logging.INFO, logging.getLevelNamesMapping()[cls.LOG_LEVEL])
        return logging.getLevelNamesMapping()[cls.LOG_LEVEL]

    @classmethod
    def log_config(cls, logger: logging.Logger) -> None:
        """Log the current configuration."""
        logger.info("jordan-subdiff configuration:")
        logger.info("  Default tol: %g", cls.DEFAULT_TOL)
        logger.info("  Frame tol: %g", cls.FRAME_TOL)
        logger.info("  Grouping tol (relative): %g", cls.TAU_GROUP_REL)
        logger.info("  Jacobi: rel tol %g, max sweeps %d", cls.JACOBI_REL_TOL, cls.JACOBI_MAX_SWEEPS)
        logger.info("  Probe directions: %d", cls.PROBE_N_DIRS)
        logger.info("  Log level: %s (debug mode: %s)", cls.LOG_LEVEL, cls.DEBUG_MODE)


def get_config() -> BaseConfig:
    """Get the validated configuration."""
    cfg = BaseConfig()
    cfg.validate()
    return cfg


def default_tau_group(scale: float) -> float:
    """Grouping tolerance for eigenvalue ties of an element of norm ``scale``."""
    return BaseConfig.TAU_GROUP_REL * (1.0 + scale)


config = BaseConfig
