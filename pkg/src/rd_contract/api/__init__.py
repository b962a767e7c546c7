"""Public API for rd_contract library usage"""

from .internal.sweep_runner import SweepRunner
from .rd_contract import RDContract

__all__ = [
    "RDContract",
    "SweepRunner",
]
