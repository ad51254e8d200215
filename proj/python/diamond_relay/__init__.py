"""Diamond relay network toolkit (C++ core)."""

from ._core import (
    DIVERGENCE_SLOPE,
    ChannelPartition,
    afp_capacity,
    analyze,
    build_partition,
    hybrid_rate,
    marshall_wait,
    plan,
    simulate,
    srp_capacity,
)

__version__ = "0.1.0"

__all__ = [
    "DIVERGENCE_SLOPE",
    "ChannelPartition",
    "afp_capacity",
    "analyze",
    "build_partition",
    "hybrid_rate",
    "marshall_wait",
    "plan",
    "simulate",
    "srp_capacity",
]
