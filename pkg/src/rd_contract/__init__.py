"""rd-contract - reaction-diffusion simulation and contraction certificates"""

from rd_contract.api.rd_contract import RDContract
from rd_contract.core.utils import logger

__all__ = ["RDContract", "logger"]
