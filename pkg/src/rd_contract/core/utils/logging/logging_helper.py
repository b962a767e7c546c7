"""Console display helpers for run summaries and sweep tables."""

import logging
from collections.abc import Generator, Sequence
from contextlib import contextmanager
from pathlib import Path
from typing import Any


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


class LoggingHelper:
    """Reusable display primitives for CLI output."""

    def print_panel(self, title: str, info: dict[str, Any] | None = None) -> None:
        """
        Print a panel with title and optional key-value information.

        Args:
            title: Panel title
            info: Optional dictionary of key-value pairs to display
        """
        print(f"\n{'=' * 60}")
        print(title)
        print("=" * 60)
        if info:
            width = max(len(key) for key in info)
            for key, value in info.items():
                print(f"{key.ljust(width)} : {_cell(value)}")
            print("=" * 60)

    def print_table(self, rows: Sequence[dict[str, Any]]) -> None:
        """
        Print a table from rows sharing the same keys.

        Args:
            rows: Dictionaries with the same keys, one per table row
        """
        if not rows:
            print("No data to display")
            return

        columns = list(rows[0].keys())
        widths = {col: len(col) for col in columns}
        for row in rows:
            for col in columns:
                widths[col] = max(widths[col], len(_cell(row.get(col, ""))))

        header = " | ".join(col.ljust(widths[col]) for col in columns)
        print(f"\n{header}")
        print("-" * len(header))
        for row in rows:
            print(" | ".join(_cell(row.get(col, "")).ljust(widths[col]) for col in columns))
        print()


@contextmanager
def file_logging_context(logger_name: str, log_file_path: Path) -> Generator[logging.FileHandler, None, None]:
    """
    Mirror a logger into a file for the duration of the context.

    Args:
        logger_name: Name of the logger to add file handler to
        log_file_path: Path to write logs to

    Yields:
        The file handler instance
    """
    target = logging.getLogger(logger_name)
    log_file_path.parent.mkdir(parents=True, exist_ok=True)
    file_handler = logging.FileHandler(log_file_path, mode="w")
    file_handler.setFormatter(logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s"))
    target.addHandler(file_handler)

    try:
        yield file_handler
    finally:
        target.removeHandler(file_handler)
        file_handler.close()
