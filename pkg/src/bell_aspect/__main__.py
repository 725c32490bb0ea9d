"""Run the command-line interface with ``python -m bell_aspect``."""

from .cli import cli_main

cli_main()
