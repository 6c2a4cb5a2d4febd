"""Command-line interface."""

from src.cli.ras_cli import build_parser, main

__all__ = ["build_parser", "main"]
