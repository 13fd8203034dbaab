"""FastAPI application wrapping the core package.

Every endpoint is a stateless request/response computation. Core-level
validation failures surface as HTTP 400; width caps and term budgets that
reflect a *computed* outcome (pipeline budget overruns) are reported in
the response body so clients can distinguish "invalid request" from
"verification-style failure".
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..circuits import (
    Circuit,
    Gate,
    circuit_from_json,
    comb_from_json,
    gate_from_json,
)
from ..cutting import cut_comb, decomposition_to_json, gate_cut
from ..errors import TermBudgetExceeded, ToolkitError
from ..gadget import gadget_to_json, gadgetize, gadgetize_v2
from ..linalg import matrix_from_json, matrix_to_json
from ..simulate import dense_expectation, pipeline_simulate, STATEVECTOR_CAP
from ..states import parse_observable, parse_state
from ..suites import SUITE_NAMES, run_suite
from .models import (
    CutRequest,
    CutResponse,
    CutTermModel,
    DecomposeRequest,
    DecomposeResponse,
    GadgetizeRequest,
    GadgetizeResponse,
    HealthResponse,
    PipelineRequest,
    PipelineResponse,
    SimulateRequest,
    SimulateResponse,
    VerifyRequest,
    VerifyResponse,
)

import time


def _circuit_from_model(model) -> Circuit:
    return circuit_from_json(model.model_dump(exclude_none=True))


def create_app() -> FastAPI:
    app = FastAPI(
        title="combcut",
        version=__version__,
        description="circuit-cutting toolkit service",
    )

    @app.exception_handler(ToolkitError)
    async def _toolkit_error(request, exc: ToolkitError):
        from fastapi.responses import JSONResponse

        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/decompose", response_model=DecomposeResponse)
    def decompose(req: DecomposeRequest) -> DecomposeResponse:
        if (req.gate is None) == (req.matrix is None):
            raise HTTPException(400, "give exactly one of 'gate' or 'matrix'")
        if req.gate is not None:
            gate = Gate.named(req.gate, 0, 1)
        else:
            gate = Gate.custom(matrix_from_json(req.matrix), (0, 1))
        terms = gate_cut(gate, req.mode)
        return DecomposeResponse(
            mode="pauli" if req.mode.lower().startswith("pauli") else req.mode.lower(),
            term_count=len(terms),
            terms=[
                CutTermModel(
                    coef=[t.coef.real, t.coef.imag],
                    factor_a=matrix_to_json(t.factor_a),
                    factor_b=matrix_to_json(t.factor_b),
                    label=t.label,
                )
                for t in terms
            ],
        )

    @app.post("/gadgetize", response_model=GadgetizeResponse)
    def do_gadgetize(req: GadgetizeRequest) -> GadgetizeResponse:
        if req.variant not in ("v1", "v2"):
            raise HTTPException(400, f"variant must be 'v1' or 'v2', got {req.variant}")
        circuit = _circuit_from_model(req.circuit)
        rewritten = gadgetize(circuit) if req.variant == "v1" else gadgetize_v2(circuit)
        return GadgetizeResponse(
            circuit=gadget_to_json(rewritten),
            gate_count=len(rewritten.circuit.gates),
            swap_count=sum(
                1 for o in rewritten.origin if o.kind == "inserted-swap"
            ),
            relocated_count=sum(
                1 for o in rewritten.origin if o.kind == "relocated"
            ),
        )

    @app.post("/cut", response_model=CutResponse)
    def do_cut(req: CutRequest) -> CutResponse:
        comb = comb_from_json(req.comb.model_dump(exclude_none=True))
        gap_gates = [gate_from_json(g.model_dump(exclude_none=True)) for g in req.gap_gates]
        dec = cut_comb(comb, gap_gates, req.mode, budget=req.budget)
        return CutResponse(
            mode=dec.mode,
            term_count=dec.term_count,
            decomposition=decomposition_to_json(dec),
        )

    @app.post("/simulate", response_model=SimulateResponse)
    def do_simulate(req: SimulateRequest) -> SimulateResponse:
        circuit = _circuit_from_model(req.circuit)
        state_in = parse_state(req.input, circuit.n)
        obs = parse_observable(req.observable, circuit.n)
        t0 = time.perf_counter()
        value = dense_expectation(circuit, state_in, obs)
        return SimulateResponse(
            expectation=value,
            wall_ms=(time.perf_counter() - t0) * 1000.0,
            backend="dense",
        )

    @app.post("/pipeline", response_model=PipelineResponse)
    def do_pipeline(req: PipelineRequest) -> PipelineResponse:
        circuit = _circuit_from_model(req.circuit)
        state_in = parse_state(req.input, circuit.n)
        obs = parse_observable(req.observable, circuit.n)
        try:
            result = pipeline_simulate(
                circuit, state_in, obs, req.mode, budget=req.budget,
                variant=req.variant,
            )
        except TermBudgetExceeded as exc:
            return PipelineResponse(
                expectation=None,
                term_count=exc.term_count,
                mode=req.mode,
                wall_ms=0.0,
                budget_exceeded=True,
            )
        dense = None
        agrees = None
        if circuit.n <= STATEVECTOR_CAP:
            dense = dense_expectation(circuit, state_in, obs)
            agrees = abs(result.expectation - dense) <= req.tolerance
        return PipelineResponse(
            expectation=result.expectation,
            term_count=result.term_count,
            mode=result.mode,
            wall_ms=result.wall_ms,
            dense_expectation=dense,
            agrees=agrees,
        )

    @app.post("/verify", response_model=VerifyResponse)
    def do_verify(req: VerifyRequest) -> VerifyResponse:
        if req.suite not in SUITE_NAMES:
            raise HTTPException(
                400, f"unknown suite {req.suite!r}; choose from {list(SUITE_NAMES)}"
            )
        result = run_suite(req.suite, seed=req.seed, params=req.params)
        payload = result.to_json(include_timings=req.include_timings)
        return VerifyResponse(**payload)

    return app


app = create_app()
