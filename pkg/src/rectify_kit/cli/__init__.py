"""Command line front end: manifest loading, task execution, reports."""

from .main import main

__all__ = ["main"]
