"""
API package for route handlers.
"""
from .routes import router

__all__ = ["router"]
