#!/usr/bin/env python3
"""
Console Output
==============

Tagged progress lines in the "[TAG] message" style, written to stderr so that
stdout only carries what a command was asked to print.
"""

import sys
from typing import Optional, TextIO

from colorama import Fore, Style, init as colorama_init

_TAG_COLOURS = {
    "ERROR": Fore.RED,
    "FAIL": Fore.RED,
    "WARNING": Fore.YELLOW,
    "PASS": Fore.GREEN,
}

_quiet = False
_use_colour = False
_colorama_ready = False


def configure(quiet: bool = False, stream: Optional[TextIO] = None):
    """Set verbosity; colour is used only when the stream is a terminal."""
    global _quiet, _use_colour, _colorama_ready
    _quiet = quiet
    stream = stream or sys.stderr
    _use_colour = bool(getattr(stream, "isatty", lambda: False)())
    if _use_colour and not _colorama_ready:
        colorama_init()
        _colorama_ready = True


def colour(tag: str, text: Optional[str] = None) -> str:
    """Wrap text (default: the tag itself) in the colour assigned to a tag."""
    text = tag if text is None else text
    code = _TAG_COLOURS.get(tag)
    return f"{code}{text}{Style.RESET_ALL}" if code and _use_colour else text


def log(tag: str, message: str):
    """Print a tagged line. Errors are printed even in quiet mode."""
    if _quiet and tag not in ("ERROR", "FAIL"):
        return
    print(f"[{colour(tag)}] {message}", file=sys.stderr)
