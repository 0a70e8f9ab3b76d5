"""HTTP service exposing the estimation experiments."""

from .app import app

__all__ = ["app"]
