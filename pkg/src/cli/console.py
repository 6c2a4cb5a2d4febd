"""Colored status output for CLI commands.

Everything here writes to stderr; stdout carries command output only.
"""

import sys
from typing import Optional


class Colors:
    """ANSI color codes for terminal output."""
    RESET = '\033[0m'
    BOLD = '\033[1m'
    RED = '\033[91m'
    GREEN = '\033[92m'
    YELLOW = '\033[93m'
    BLUE = '\033[94m'
    CYAN = '\033[96m'


def _paint(text: str, *codes: str) -> str:
    if not sys.stderr.isatty():
        return text
    return "".join(codes) + text + Colors.RESET


def _emit(text: str = "") -> None:
    print(text, file=sys.stderr)


def print_header(text: str):
    rule = "=" * 72
    _emit()
    _emit(_paint(rule, Colors.BOLD, Colors.CYAN))
    _emit(_paint(text.center(72), Colors.BOLD, Colors.CYAN))
    _emit(_paint(rule, Colors.BOLD, Colors.CYAN))


def print_success(text: str):
    _emit(_paint(f"✓ {text}", Colors.GREEN))


def print_error(text: str):
    _emit(_paint(f"✗ {text}", Colors.RED))


def print_warning(text: str):
    _emit(_paint(f"⚠ {text}", Colors.YELLOW))


def print_info(text: str):
    _emit(_paint(f"ℹ {text}", Colors.BLUE))


def print_table(headers: list[str], rows: list[list], column_widths: Optional[list[int]] = None):
    """Print a left-aligned table; widths default to the widest cell + 2."""
    if not rows:
        _emit("(No data)")
        return

    if column_widths is None:
        column_widths = [
            max([len(h)] + [len(str(row[i])) for row in rows if i < len(row)]) + 2
            for i, h in enumerate(headers)
        ]

    _emit(_paint("".join(h.ljust(w) for h, w in zip(headers, column_widths)), Colors.BOLD))
    _emit("-" * sum(column_widths))
    for row in rows:
        _emit("".join(str(cell).ljust(w) for cell, w in zip(row, column_widths)))


def print_summary_box(title: str, items: dict[str, str]):
    """Key-value pairs inside a box."""
    width = 60
    label_len = max(len(label) for label in items)
    _emit()
    _emit(_paint(title, Colors.BOLD))
    _emit("┌" + "─" * width + "┐")
    for label, value in items.items():
        text = f" {label.ljust(label_len)}: {value}"
        _emit("│" + text.ljust(width) + "│")
    _emit("└" + "─" * width + "┘")
