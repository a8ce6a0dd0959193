"""Configuration settings for the entropy toolkit.

This module contains all configuration settings and environment variables
used throughout the application. It validates numeric settings and falls back
to safe defaults with a logged warning when a value is malformed.

Environment Variables:
    DR_ENTROPY_THREADS: Maximum number of worker threads for pipeline cells
    DR_ENTROPY_N_MAX: Default horizon for entropy pipelines
    DR_ENTROPY_TOLERANCE: Default tolerance for the spectral pipeline
    DR_ENTROPY_ENUM_BUDGET: Number of enumerated ultrapaths scanned by d_X
    DR_ENTROPY_ATOM_BUDGET: Maximum atom count for exact set cover
    DR_ENTROPY_FOLD_WINDOW: Emitter edges scanned when folding an emitter tail
    DR_ENTROPY_DIVERGENCE: Increment threshold for the diverging flag
    DR_ENTROPY_MAX_ITER: Iteration cap for power iteration
    DR_ENTROPY_LOG_LEVEL: Logging level for the command-line entry point
    DR_ENTROPY_SEED: Default seed for sampled verification suites
    DR_ENTROPY_SERVICE_N_MAX: Largest horizon the report service accepts
"""

import os
import logging
from dataclasses import dataclass, field
from typing import Tuple
from dotenv import load_dotenv

# Set up logging
logger = logging.getLogger(__name__)

# Load environment variables from .env file if it exists
load_dotenv()


def validate_positive(name: str, raw: str, default: str, kind=int):
    """Parse a positive numeric setting.

    Args:
        name: Environment variable name, used in the warning
        raw: The raw string value
        default: Fallback used when the value is malformed or not positive
        kind: Numeric type to convert to (int or float)

    Returns:
        The parsed positive value
    """
    try:
        value = kind(raw)
        if value > 0:
            return value
    except (TypeError, ValueError):
        pass
    logger.warning(f"{name}={raw!r} is not a positive {kind.__name__}, using {default}")
    return kind(default)


def validate_seed(raw: str) -> int:
    """Parse the default seed; any nonnegative integer is accepted."""
    try:
        value = int(raw)
        if value >= 0:
            return value
    except (TypeError, ValueError):
        pass
    logger.warning(f"DR_ENTROPY_SEED={raw!r} is not a nonnegative int, using 0")
    return 0


def validate_thread_count(raw: str) -> int:
    """Validate the thread cap.

    Args:
        raw: The raw DR_ENTROPY_THREADS value

    Returns:
        int: A thread count between 1 and the number of CPUs
    """
    threads = validate_positive("DR_ENTROPY_THREADS", raw, "1")
    return min(threads, os.cpu_count() or 1)


# Parallelism
DR_ENTROPY_THREADS = validate_thread_count(os.getenv("DR_ENTROPY_THREADS", "1"))

# Pipeline defaults
DEFAULT_N_MAX = validate_positive("DR_ENTROPY_N_MAX", os.getenv("DR_ENTROPY_N_MAX", "12"), "12")
DEFAULT_TOLERANCE = validate_positive("DR_ENTROPY_TOLERANCE", os.getenv("DR_ENTROPY_TOLERANCE", "1e-9"), "1e-9", float)
DIVERGENCE_THRESHOLD = validate_positive("DR_ENTROPY_DIVERGENCE", os.getenv("DR_ENTROPY_DIVERGENCE", "0.05"), "0.05", float)
SPECTRAL_MAX_ITERATIONS = validate_positive("DR_ENTROPY_MAX_ITER", os.getenv("DR_ENTROPY_MAX_ITER", "100000"), "100000")

# Budgets
ENUMERATION_BUDGET = validate_positive("DR_ENTROPY_ENUM_BUDGET", os.getenv("DR_ENTROPY_ENUM_BUDGET", "4096"), "4096")
ATOM_BUDGET = validate_positive("DR_ENTROPY_ATOM_BUDGET", os.getenv("DR_ENTROPY_ATOM_BUDGET", "20000"), "20000")
FOLD_WINDOW = validate_positive("DR_ENTROPY_FOLD_WINDOW", os.getenv("DR_ENTROPY_FOLD_WINDOW", "32"), "32")
SERVICE_N_MAX = validate_positive("DR_ENTROPY_SERVICE_N_MAX", os.getenv("DR_ENTROPY_SERVICE_N_MAX", "16"), "16")

# Exact solver limits (number of points)
EXACT_CLIQUE_LIMIT = 64
EXACT_SPANNING_LIMIT = 20
EXACT_SSPAN_LIMIT = 10

# Logging and sampling
LOG_LEVEL = os.getenv("DR_ENTROPY_LOG_LEVEL", "WARNING").upper()
DEFAULT_SEED = validate_seed(os.getenv("DR_ENTROPY_SEED", "0"))

OUTPUT_FORMATS = ("table", "csv", "json")


@dataclass(frozen=True)
class RunConfig:
    """Per-run settings assembled from command-line flags and the defaults above."""

    n_max: int = DEFAULT_N_MAX
    eps_exponents: Tuple[int, ...] = (1, 2, 3)
    depth: int = 2
    budgets: Tuple[int, ...] = field(default_factory=lambda: tuple(range(2, 21, 2)))
    tolerance: float = DEFAULT_TOLERANCE
    output_format: str = "table"
    seed: int = DEFAULT_SEED
    threads: int = DR_ENTROPY_THREADS

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError(f"n_max must be positive, got {self.n_max}")
        if not self.eps_exponents or min(self.eps_exponents) < 0:
            raise ValueError("eps schedule must be a nonempty list of nonnegative exponents")
        if self.depth < 0:
            raise ValueError(f"depth must be nonnegative, got {self.depth}")
        if not self.budgets or min(self.budgets) < 1:
            raise ValueError("budgets must be a nonempty list of positive integers")
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"unknown output format {self.output_format}")
        if self.threads < 1:
            raise ValueError(f"threads must be positive, got {self.threads}")
