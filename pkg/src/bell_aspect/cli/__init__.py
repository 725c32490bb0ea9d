"""Provide the ``bell`` command-line interface."""

from .configurations import Configurations
from .main import cli_main, main

__all__ = ["Configurations", "cli_main", "main"]
