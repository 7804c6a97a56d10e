# Application Configuration
"""
Configuration module for lfun.
Defines default pipeline exponents, precision modes, Fourier truncation
accuracy and the constants of the T1 scan and the derivative-bound sampler.
"""

import os
from typing import Dict, Optional
from dataclasses import dataclass

from lfun.errors import ParameterError


@dataclass(frozen=True)
class PrecisionPolicy:
    """Arithmetic policy for exponentially large or small factors."""
    name: str
    digits: int  # Significant decimal digits carried for prefactors
    max_logmag: float  # Largest |log magnitude| that may be exponentiated


def _optional_int(name: str) -> Optional[int]:
    value = os.getenv(name, "").strip()
    return int(value) if value else None


class Config:
    """Library configuration with environment variable support."""

    # Pipeline exponents
    DEFAULT_GAMMA: float = float(os.getenv("LFUN_GAMMA", "4"))
    DEFAULT_EPSILON: float = float(os.getenv("LFUN_EPSILON", str(1 / 16)))
    DEFAULT_ETA: float = float(os.getenv("LFUN_ETA", str(1 / 8)))

    # Arithmetic mode: "double" or "extended"
    PRECISION: str = os.getenv("LFUN_PRECISION", "double")

    # Worker threads (None means machine parallelism)
    THREADS: Optional[int] = _optional_int("LFUN_THREADS")

    LOG_LEVEL: str = os.getenv("LFUN_LOG_LEVEL", "WARNING")

    # Fourier series truncation
    # Relative accuracy targeted by N_terms(y, acc)
    TARGET_ACCURACY: float = float(os.getenv("LFUN_TARGET_ACCURACY", "1e-16"))
    # Lowest imaginary part of a reduced point
    MIN_HEIGHT: float = 3 ** 0.5 / 2
    # Jets along a curve are trusted up to this fraction of the base height
    JET_HEIGHT_FRACTION: float = 0.5

    # Expansion orders
    MAX_EXPANSION_ORDER: int = 32
    MAX_GROUP_ORDER: int = int(os.getenv("LFUN_MAX_GROUP_ORDER", "8"))
    # Taylor order cap of the grid integrator
    MAX_QUADRATURE_ORDER: int = 48

    # T1 selection for Maass contours
    T1_SCAN_POINTS: int = 64
    T1_SCAN_SPAN: float = 20.0
    T1_THRESHOLD: float = 0.05

    # Derivative-bound sampling
    R_SAMPLE_POINTS: int = 100
    R_SAMPLE_DEGREE: int = 4

    # Precision modes
    DOUBLE_POLICY = PrecisionPolicy(name="double", digits=16, max_logmag=700.0)
    EXTENDED_POLICY = PrecisionPolicy(name="extended", digits=32, max_logmag=float("inf"))

    PRECISION_POLICIES: Dict[str, PrecisionPolicy] = {
        "double": DOUBLE_POLICY,
        "extended": EXTENDED_POLICY,
    }

    @classmethod
    def get_precision_policy(cls, name: Optional[str] = None) -> PrecisionPolicy:
        """
        Get the precision policy for a mode name.

        Args:
            name: "double" or "extended"; the configured default when None

        Returns:
            PrecisionPolicy for the mode

        Raises:
            ParameterError: If the mode is unknown
        """
        key = name or cls.PRECISION
        try:
            return cls.PRECISION_POLICIES[key]
        except KeyError:
            raise ParameterError(
                f"unknown precision mode {key!r}; expected one of "
                f"{sorted(cls.PRECISION_POLICIES)}"
            ) from None


config = Config()
