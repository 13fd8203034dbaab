"""Pydantic request/response models for the HTTP surface.

The models validate shape only; semantic validation (unitarity, wire
ranges, parse rules) happens in the core package and surfaces as
HTTP 400.
"""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class GateModel(BaseModel):
    name: Optional[str] = None
    matrix: Optional[list] = None
    wires: list[int]
    non_unitary: bool = False


class GapModel(BaseModel):
    position: int
    wires: list[int]


class CircuitModel(BaseModel):
    n: int
    gates: list[GateModel]
    gaps: Optional[list[GapModel]] = None
    partition: Optional[list[int]] = None
    ancillas: Optional[list[int]] = None


class DecomposeRequest(BaseModel):
    gate: Optional[str] = None
    matrix: Optional[list] = None
    mode: str = "schmidt"


class CutTermModel(BaseModel):
    coef: list[float]
    factor_a: Optional[list] = None
    factor_b: Optional[list] = None
    label: Optional[str] = None


class DecomposeResponse(BaseModel):
    mode: str
    term_count: int
    terms: list[CutTermModel]


class GadgetizeRequest(BaseModel):
    circuit: CircuitModel
    variant: str = "v1"


class GadgetizeResponse(BaseModel):
    circuit: dict
    gate_count: int
    swap_count: int
    relocated_count: int


class CutRequest(BaseModel):
    comb: CircuitModel
    gap_gates: list[GateModel]
    mode: str = "schmidt"
    budget: Optional[int] = None


class CutResponse(BaseModel):
    mode: str
    term_count: int
    decomposition: dict


class SimulateRequest(BaseModel):
    circuit: CircuitModel
    input: str
    observable: str


class SimulateResponse(BaseModel):
    expectation: float
    wall_ms: float
    backend: str


class PipelineRequest(BaseModel):
    circuit: CircuitModel
    input: str
    observable: str
    mode: str = "schmidt"
    budget: Optional[int] = None
    variant: str = "v1"
    tolerance: float = 1e-8


class PipelineResponse(BaseModel):
    expectation: Optional[float] = None
    term_count: int
    mode: str
    wall_ms: float
    dense_expectation: Optional[float] = None
    agrees: Optional[bool] = None
    budget_exceeded: bool = False


class VerifyRequest(BaseModel):
    suite: str
    seed: Optional[int] = None
    params: dict[str, Any] = Field(default_factory=dict)
    include_timings: bool = False


class CheckModel(BaseModel):
    name: str
    passed: bool
    measured: Any
    expected: Any
    tolerance: Any


class VerifyResponse(BaseModel):
    suite: str
    version: str
    seed: Optional[int] = None
    overall: bool
    checks: list[CheckModel]
    rows: list[dict]
    wall_ms: float


class HealthResponse(BaseModel):
    status: str
    version: str
