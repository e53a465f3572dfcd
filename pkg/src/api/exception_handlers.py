"""
JSON error responses for the analysis errors.

Every ThermoAnalysisError carries its own status code; whatever context it
holds (offending field, violated invariant, witness vector, admissible range)
is echoed next to ``detail``.
"""
from typing import Any, Dict

import numpy as np
from fastapi import FastAPI, Request, status
from fastapi.responses import JSONResponse
from pydantic import ValidationError as PydanticValidationError

from src.exceptions import ThermoAnalysisError
from src.utils.logger import logger

CONTEXT_ATTRIBUTES = (
    "field", "invariant", "magnitude", "residual", "eigenvalue", "expected", "got",
    "energies", "dimension", "cap", "deviation", "quantity", "epsilon", "eps_max",
    "gibbs_diagonal",
)


def error_context(exc: ThermoAnalysisError) -> Dict[str, Any]:
    """JSON-ready attributes of an analysis error."""
    context = {}
    for name in CONTEXT_ATTRIBUTES:
        value = getattr(exc, name, None)
        if value is None:
            continue
        context[name] = value.item() if isinstance(value, np.generic) else value
    witness = getattr(exc, "eigenvector", None)
    if witness is not None:
        vector = np.asarray(witness, dtype=complex)
        context["witness"] = {"re": vector.real.tolist(), "im": vector.imag.tolist()}
    return context


async def thermo_analysis_error_handler(
    request: Request,  # noqa: ARG001 pylint: disable=unused-argument
    exc: ThermoAnalysisError
):
    """Rejected inputs and failed decisions, with their context."""
    log = logger.error if exc.status_code >= 500 else logger.warning
    log("%s: %s (status: %d)", type(exc).__name__, exc.message, exc.status_code)
    return JSONResponse(
        status_code=exc.status_code,
        content={"detail": exc.message, **error_context(exc)}
    )


async def pydantic_validation_error_handler(
    request: Request,  # noqa: ARG001 pylint: disable=unused-argument
    exc: PydanticValidationError
):
    """Schema errors raised while building models inside a route."""
    logger.warning("Pydantic validation error: %s", exc)
    return JSONResponse(
        status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
        content={"detail": exc.errors(include_url=False, include_context=False)}
    )


async def general_exception_handler(
    request: Request,  # noqa: ARG001 pylint: disable=unused-argument
    exc: Exception
):
    """Catch-all handler for unexpected errors."""
    logger.error("Unhandled exception: %s", str(exc), exc_info=True)
    return JSONResponse(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        content={"detail": "Internal server error"}
    )


def register_exception_handlers(app: FastAPI) -> None:
    """Installs the handlers; subclasses of ThermoAnalysisError share one."""
    app.add_exception_handler(ThermoAnalysisError, thermo_analysis_error_handler)
    app.add_exception_handler(PydanticValidationError, pydantic_validation_error_handler)
    app.add_exception_handler(Exception, general_exception_handler)
