"""Command-line front end."""
from .documents import DocumentError, SpaceDocument, TaskDocument, load_space, load_task, parse_space, parse_task
from .main import main, run

__all__ = ["DocumentError", "SpaceDocument", "TaskDocument", "load_space", "load_task", "main", "parse_space", "parse_task", "run"]
