from .csv_output import emit_plot_data, read_plot_data
from .logging import logger, logging_helper, setup_rd_contract_logging
from .serialization import serialize_to_json

__all__ = [
    "emit_plot_data",
    "logger",
    "logging_helper",
    "read_plot_data",
    "serialize_to_json",
    "setup_rd_contract_logging",
]
