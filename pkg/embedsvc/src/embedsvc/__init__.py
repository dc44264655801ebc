"""Reference embedding service for the sentence/token wire protocol."""

from .app import create_app
from .config import ServiceConfig

__all__ = ["ServiceConfig", "create_app"]
