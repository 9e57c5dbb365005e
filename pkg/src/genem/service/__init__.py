"""HTTP service exposing sessions, generation, feedback, playback, and skills."""

from .app import build_gateway, create_app, main
from .config import ServiceConfig
from .store import SessionStore

__all__ = ["ServiceConfig", "SessionStore", "build_gateway", "create_app", "main"]
