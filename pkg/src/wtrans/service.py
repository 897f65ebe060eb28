"""HTTP facade over the library.

Every operation is a stateless POST taking and returning the JSON wire
forms of the core types.  Responses use a uniform envelope::

    {"status": "ok", "payload": ..., "diagnostics": [warnings...]}
    {"status": "error", "code": "...", "message": "..."}

Domain rejections (not of the family, unreachable target, infeasible
request) map to 409, malformed-but-well-typed input to 400, schema
violations to 422, and numeric failures to 500.  The CLI is a thin client
of this app; it mounts it in process by default.
"""

from __future__ import annotations

import warnings

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .errors import (
    DimensionMismatchError,
    DomainError,
    InfeasibleError,
    InvalidEnsembleError,
    InvalidParamVectorError,
    InvalidStateError,
    MalformedProtocolError,
    NotWTypeError,
    NumericError,
    UnreachableTargetError,
    UsageError,
)
from .localops import OutcomeEnsemble, synthesize_kraus, validate_ensemble
from .params import ParamVector, canonical, classify, equivalent, x0
from .protocols import (
    Protocol,
    can_convert,
    compile_deterministic_protocol,
    compile_distillation_protocol,
    distill_bound,
)
from .selftest import run_selftest
from .statevec import PureState, extract_params, run_protocol
from .tolerances import EQUIV_TOL, FIDELITY_TOL, VALIDATION_TOL

_ERROR_CODES = [
    (NotWTypeError, "not_w_type"),
    (UnreachableTargetError, "unreachable_target"),
    (InfeasibleError, "infeasible"),
    (MalformedProtocolError, "malformed_protocol"),
    (DimensionMismatchError, "dimension_mismatch"),
    (InvalidParamVectorError, "invalid_param_vector"),
    (InvalidStateError, "invalid_state"),
    (InvalidEnsembleError, "invalid_ensemble"),
    (NumericError, "numeric"),
    (UsageError, "usage"),
    (DomainError, "domain"),
]


def _error_code(exc: Exception) -> str:
    for cls, code in _ERROR_CODES:
        if isinstance(exc, cls):
            return code
    return "internal"


# --- wire schemas ----------------------------------------------------------

class ParamVectorModel(BaseModel):
    p: int
    x: list[float]

    def to_core(self) -> ParamVector:
        return ParamVector.from_dict(self.model_dump())


class KrausOpModel(BaseModel):
    re: list[list[float]]
    im: list[list[float]]


class OutcomeSpecModel(BaseModel):
    probability: float
    target: ParamVectorModel
    witness_scale: float | None = None
    witness_target: ParamVectorModel | None = None


class EnsembleModel(BaseModel):
    acting_party: int
    outcomes: list[OutcomeSpecModel]

    def to_core(self) -> OutcomeEnsemble:
        return OutcomeEnsemble.from_dict(self.model_dump())


class StepModel(BaseModel):
    party: int
    ops: list[KrausOpModel]
    disp: list[str]


class ProtocolModel(BaseModel):
    steps: list[StepModel]
    p_success: float

    def to_core(self) -> Protocol:
        return Protocol.from_dict(self.model_dump())


class PureStateModel(BaseModel):
    p: int
    amps: list[list[float]]

    def to_core(self) -> PureState:
        return PureState.from_dict(self.model_dump())


class ParamRequest(BaseModel):
    state: PureStateModel
    tol: float | None = Field(default=None, description="fidelity tolerance")


class EquivRequest(BaseModel):
    x: ParamVectorModel
    y: ParamVectorModel
    tol: float | None = None


class ConvertRequest(BaseModel):
    x: ParamVectorModel
    y: ParamVectorModel
    emit_protocol: bool = False


class SynthRequest(BaseModel):
    x: ParamVectorModel
    ensemble: EnsembleModel
    tol: float | None = None


class DistillRequest(BaseModel):
    x: ParamVectorModel
    y: ParamVectorModel
    # None: emit the protocol exactly when the source is on the face;
    # True: require it (infeasible off-face); False: bound only
    emit_protocol: bool | None = None


class SimulateRequest(BaseModel):
    state: PureStateModel
    protocol: ProtocolModel
    mode: str = "exhaustive"
    trials: int = 10000
    seed: int = 0


class SelftestRequest(BaseModel):
    seed: int = 0


# --- app -------------------------------------------------------------------

def _ok(payload, diagnostics) -> dict:
    return {"status": "ok", "payload": payload, "diagnostics": diagnostics}


def create_app() -> FastAPI:
    app = FastAPI(title="wtrans", version=__version__)

    @app.exception_handler(UsageError)
    async def _usage(_req: Request, exc: UsageError):
        return JSONResponse(status_code=400, content={
            "status": "error", "code": _error_code(exc), "message": str(exc)})

    @app.exception_handler(DomainError)
    async def _domain(_req: Request, exc: DomainError):
        return JSONResponse(status_code=409, content={
            "status": "error", "code": _error_code(exc), "message": str(exc)})

    @app.exception_handler(NumericError)
    async def _numeric(_req: Request, exc: NumericError):
        return JSONResponse(status_code=500, content={
            "status": "error", "code": "numeric", "message": str(exc)})

    @app.get("/health")
    def health():
        return _ok({"version": __version__}, [])

    @app.post("/param")
    def param(req: ParamRequest):
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            state = req.state.to_core()
            tol = req.tol if req.tol is not None else FIDELITY_TOL
            xvec, basis = extract_params(state, fidelity_tol=tol)
            payload = {
                "x": xvec.to_dict(),
                "x0": x0(xvec),
                "class": classify(xvec).to_dict(),
                "canonical": canonical(xvec).to_dict(),
                "basis": basis.to_dict(),
            }
        return _ok(payload, [str(w.message) for w in rec])

    @app.post("/equiv")
    def equiv(req: EquivRequest):
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            xv = req.x.to_core()
            yv = req.y.to_core()
            tol = req.tol if req.tol is not None else EQUIV_TOL
            payload = {
                "equivalent": equivalent(xv, yv, tol=tol),
                "class_x": classify(xv).to_dict(),
                "class_y": classify(yv).to_dict(),
                "canonical_x": canonical(xv).to_dict(),
                "canonical_y": canonical(yv).to_dict(),
            }
        return _ok(payload, [str(w.message) for w in rec])

    @app.post("/convert")
    def convert(req: ConvertRequest):
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            xv = req.x.to_core()
            yv = req.y.to_core()
            witness = can_convert(xv, yv)
            payload = {
                "convertible": witness is not None,
                "witness": witness.to_dict() if witness is not None else None,
                "protocol": None,
            }
            if req.emit_protocol:
                proto = compile_deterministic_protocol(xv, yv)
                payload["protocol"] = proto.to_dict()
        return _ok(payload, [str(w.message) for w in rec])

    @app.post("/synth")
    def synth(req: SynthRequest):
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            xv = req.x.to_core()
            ens = req.ensemble.to_core()
            tol = req.tol if req.tol is not None else VALIDATION_TOL
            report = validate_ensemble(xv, ens, tol=tol)
            payload = {"report": report.to_dict(), "ops": None}
            if report.ok:
                ops = synthesize_kraus(xv, ens, tol=tol)
                payload["ops"] = [
                    {"outcome": idx, "op": op.to_dict()} for idx, op in ops]
        return _ok(payload, [str(w.message) for w in rec])

    @app.post("/distill")
    def distill(req: DistillRequest):
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            xv = req.x.to_core()
            yv = req.y.to_core()
            bound = distill_bound(xv, yv)
            payload = {"bound": bound, "protocol": None, "achieved": None}
            on_face = x0(xv) <= 1e-10
            if req.emit_protocol is True or (req.emit_protocol is None and on_face):
                proto, achieved = compile_distillation_protocol(xv, yv)
                payload["protocol"] = proto.to_dict()
                payload["achieved"] = achieved
        return _ok(payload, [str(w.message) for w in rec])

    @app.post("/simulate")
    def simulate(req: SimulateRequest):
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            state = req.state.to_core()
            proto = req.protocol.to_core()
            report = run_protocol(state, proto, mode=req.mode,
                                  trials=req.trials, seed=req.seed)
        return _ok(report.to_dict(), [str(w.message) for w in rec])

    @app.post("/selftest")
    def selftest(req: SelftestRequest):
        return _ok(run_selftest(seed=req.seed), [])

    return app


app = create_app()
