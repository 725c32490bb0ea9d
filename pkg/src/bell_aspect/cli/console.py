"""Provide console helpers that keep results on standard output and messages on standard error."""

import pathlib

import rich
import rich.console
import rich.markup

CONSOLE = rich.get_console()
ERROR_CONSOLE = rich.console.Console(stderr=True)


def emit_result(text: str, output: str | None = None) -> None:
    """Write a serialized result to standard output or to a file.

    Parameters
    ----------
    text : str
        serialized result, ending with a newline
    output : str | None, optional
        file to write instead of standard output, by default None
    """
    if output is not None:
        pathlib.Path(output).write_text(text, encoding="utf-8")

        return

    CONSOLE.out(text, end="", highlight=False)


def report_error(message: str, usage: str | None = None) -> None:
    """Print an error message, optionally followed by usage text, on standard error.

    Parameters
    ----------
    message : str
        error description
    usage : str | None, optional
        usage text, by default None
    """
    ERROR_CONSOLE.print(
        f"[bold red]error:[/bold red] {rich.markup.escape(message)}", markup=True, highlight=False
    )

    if usage is not None:
        ERROR_CONSOLE.out(usage, highlight=False)


__all__ = ["CONSOLE", "ERROR_CONSOLE", "emit_result", "report_error"]
