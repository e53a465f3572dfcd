"""
Services package for the analyses shared by the API and the command line.
"""
from .transition_service import TransitionAnalysisService

__all__ = ["TransitionAnalysisService"]
