"""Pydantic request/response models for the HTTP service.

States and basis vectors travel as flat lists of floats interleaving
real and imaginary parts (the same convention as ray-file components).
Values mirror the text report: "1", "0", "gap", or a decimal degree.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field


class AtomValue(BaseModel):
    label: str
    value: str


class RuleCheckModel(BaseModel):
    rule: Literal["product", "sum"]
    status: Literal["ok", "fail", "gap-fail"]
    lhs: str
    rhs: str


class SemanticsReport(BaseModel):
    semantics: str
    atoms: list[AtomValue]
    rules: list[RuleCheckModel] = Field(default_factory=list)


class DemoQubitRequest(BaseModel):
    state: Optional[list[float]] = None
    tolerance: Optional[float] = None


class DemoQubitResponse(BaseModel):
    state: list[float]
    definitions: list[str]
    bivalent: SemanticsReport
    supervaluational: SemanticsReport
    warnings: list[str] = Field(default_factory=list)


class EvalRequest(BaseModel):
    space: str
    formula: str
    state: list[float]
    semantics: Literal["bivalent", "super", "lukasiewicz"] = "bivalent"
    tolerance: Optional[float] = None


class EvalResponse(BaseModel):
    semantics: str
    formula: str
    atoms: list[AtomValue]
    value: str
    notes: list[str] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)


#: inline vector (re/im pairs) or the id of a ray from the space file
Operand = list[Union[str, list[float]]]


class LatticeOpRequest(BaseModel):
    a: Operand
    b: Optional[Operand] = None
    space: Optional[str] = None
    tolerance: Optional[float] = None


class SubspaceModel(BaseModel):
    dim: int
    ambient_dim: int
    basis: list[list[float]]


class LatticeOpResponse(BaseModel):
    op: Literal["meet", "join", "complement"]
    result: SubspaceModel
    blocks: Optional[list[str]] = None
    warnings: list[str] = Field(default_factory=list)


class BlocksRequest(BaseModel):
    space: str
    tolerance: Optional[float] = None


class BlockSummary(BaseModel):
    id: str
    elements: int


class ElementModel(BaseModel):
    dim: int
    basis: list[list[float]]
    blocks: list[str]


class BlocksResponse(BaseModel):
    blocks: list[BlockSummary]
    elements: list[ElementModel]
    interlinked: bool
    warnings: list[str] = Field(default_factory=list)


class KSCheckRequest(BaseModel):
    rayfile: str
    enumerate_contexts: bool = False
    count_colorings: bool = False
    tolerance: Optional[float] = None


class KSCheckResponse(BaseModel):
    dim: int
    rays: int
    contexts: int
    status: Literal["colorable", "noncolorable"]
    assignment: Optional[dict[str, int]] = None
    nodes_explored: int
    colorings: Optional[int] = None
    context_list: Optional[list[list[str]]] = None
    warnings: list[str] = Field(default_factory=list)


class HealthResponse(BaseModel):
    status: Literal["ok"]
