"""API routes for the thermal coherence analyses."""
from fastapi import APIRouter, Depends, HTTPException

from src.api.dependencies import get_metrics_exporter, get_transition_service
from src.exceptions import ThermoAnalysisError
from src.models.schemas import (
    ChannelApplyRequest, ChannelApplyResponse, CurveRequest, CurveResponse, FeasibilityReport,
    HealthCheckResponse, KappaReport, KappaRequest, QuasicycleReport, QuasicycleRequest,
    TransitionRequest
)
from src.services.transition_service import TransitionAnalysisService
from src.utils.base_metrics import BaseMetricsExporter
from src.utils.logger import logger

router = APIRouter()


@router.post("/transitions/check", response_model=FeasibilityReport, tags=["Transitions"])
def check_transition(
    request: TransitionRequest,
    service: TransitionAnalysisService = Depends(get_transition_service)
) -> FeasibilityReport:
    """
    Decide whether rho -> sigma is reachable.

    Qubits get an exact verdict. For d > 2 the verdict is exact under
    enhanced thermal operations and "undecided" under thermal operations
    when every necessary condition holds.
    """
    try:
        logger.info("Transition check: d=%d, mode=%s", len(request.energies), request.mode)
        report = service.check_transition(request)
        logger.info("Transition verdict: %s", report.verdict)
        return report

    except ThermoAnalysisError:
        raise
    except Exception as e:
        logger.error("Unexpected error checking transition: %s", str(e), exc_info=True)
        raise HTTPException(
            status_code=500, detail="Internal server error during transition check"
        ) from e


@router.post("/kappa", response_model=KappaReport, tags=["Transitions"])
def qubit_kappa(
    request: KappaRequest,
    service: TransitionAnalysisService = Depends(get_transition_service)
) -> KappaReport:
    """Optimal damping factor of a qubit population transition."""
    try:
        return service.kappa(request)

    except ThermoAnalysisError:
        raise
    except Exception as e:
        logger.error("Unexpected error computing kappa: %s", str(e), exc_info=True)
        raise HTTPException(
            status_code=500, detail="Internal server error during kappa computation"
        ) from e


@router.post("/curve", response_model=CurveResponse, tags=["Transitions"])
def thermo_curve(
    request: CurveRequest,
    service: TransitionAnalysisService = Depends(get_transition_service)
) -> CurveResponse:
    """Thermo-majorization curve breakpoints."""
    try:
        return service.curve(request)

    except ThermoAnalysisError:
        raise
    except Exception as e:
        logger.error("Unexpected error building curve: %s", str(e), exc_info=True)
        raise HTTPException(
            status_code=500, detail="Internal server error during curve construction"
        ) from e


@router.post("/channels/apply", response_model=ChannelApplyResponse, tags=["Channels"])
def apply_channel(
    request: ChannelApplyRequest,
    service: TransitionAnalysisService = Depends(get_transition_service)
) -> ChannelApplyResponse:
    """Apply a covariant channel to a state."""
    try:
        return service.apply_channel(request)

    except ThermoAnalysisError:
        raise
    except Exception as e:
        logger.error("Unexpected error applying channel: %s", str(e), exc_info=True)
        raise HTTPException(
            status_code=500, detail="Internal server error while applying channel"
        ) from e


@router.post("/quasicycle", response_model=QuasicycleReport, tags=["Quasi-cycle"])
def quasicycle(
    request: QuasicycleRequest,
    service: TransitionAnalysisService = Depends(get_transition_service)
) -> QuasicycleReport:
    """Qutrit quasi-cycle probabilities with the optional no-go check and search."""
    try:
        logger.info("Quasi-cycle request: eps=%g, nogo=%s, search=%s",
                    request.epsilon, request.nogo, request.search)
        return service.quasicycle(request)

    except ThermoAnalysisError:
        raise
    except Exception as e:
        logger.error("Unexpected error in quasi-cycle analysis: %s", str(e), exc_info=True)
        raise HTTPException(
            status_code=500, detail="Internal server error during quasi-cycle analysis"
        ) from e


@router.get("/healthcheck", response_model=HealthCheckResponse, tags=["Health Check"])
async def healthcheck(
    metrics_exporter: BaseMetricsExporter = Depends(get_metrics_exporter)
) -> HealthCheckResponse:
    """Get system health and per-analysis latency metrics."""
    try:
        latency = metrics_exporter.get_all_metrics()
        logger.debug("Health check: %d analysis kinds recorded", len(latency))
        return HealthCheckResponse(status="ok", latency_ms=latency)
    except Exception as e:
        logger.error("Error in healthcheck: %s", str(e), exc_info=True)
        raise HTTPException(
            status_code=500, detail="Internal server error during health check"
        ) from e
