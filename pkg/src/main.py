"""
HTTP entry point: ``uvicorn src.main:app``.
"""
from fastapi import FastAPI

from src.api.exception_handlers import register_exception_handlers
from src.api.routes import router
from src.config import config

API_TITLE = "Thermal Coherence Bounds API"
API_VERSION = "0.1.0"


def create_app() -> FastAPI:
    """Application with the analysis routes and error handlers."""
    application = FastAPI(
        title=API_TITLE,
        description="Feasibility of state transitions under thermal operations, with coherence",
        version=API_VERSION,
    )
    register_exception_handlers(application)
    application.include_router(router)

    @application.get("/", tags=["Root"])
    def root():
        """API information and the active numerical settings."""
        return {
            "message": API_TITLE,
            "version": API_VERSION,
            "docs": "/docs",
            "tolerances": config.tolerances.model_dump(),
            "bath": config.bath.model_dump(),
        }

    return application


app = create_app()
