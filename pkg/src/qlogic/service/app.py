"""FastAPI service wrapping the core package.

Every endpoint is a stateless wrapper over a handler function that takes
and returns pydantic models; the CLI calls the same handlers in-process.
Caller mistakes surface as InputError and map to HTTP 400.
"""

from __future__ import annotations

import warnings
from typing import Optional

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..contexts import BlockStructure, invariant_lattice, paste, validate_context
from ..demo import run_demo_qubit
from ..errors import InputError
from ..hilbert import (
    DEFAULT_EPS,
    StateVector,
    Subspace,
    Tolerance,
    complement,
    join,
    meet,
    orthonormalize,
    projector_of,
)
from ..ks import (
    KSInstance,
    NormalizationWarning,
    count_colorings,
    enumerate_contexts,
    ks_colorable,
    parse_rayfile,
)
from ..semantics import (
    DEGREE_MODEL,
    atom_labels,
    bivalent_value,
    eval_bivalent,
    eval_lukasiewicz,
    eval_super,
    lukasiewicz_degree,
    parse_formula,
    render,
    super_value,
    value_token,
)
from .schemas import (
    AtomValue,
    BlockSummary,
    BlocksRequest,
    BlocksResponse,
    DemoQubitRequest,
    DemoQubitResponse,
    ElementModel,
    EvalRequest,
    EvalResponse,
    HealthResponse,
    KSCheckRequest,
    KSCheckResponse,
    LatticeOpRequest,
    LatticeOpResponse,
    Operand,
    RuleCheckModel,
    SemanticsReport,
    SubspaceModel,
)


def _eps(tolerance: Optional[float]) -> float:
    if tolerance is None:
        return DEFAULT_EPS
    return Tolerance(tolerance).eps


def _pairs_to_complex(values: list[float]) -> np.ndarray:
    if len(values) % 2 != 0:
        raise InputError("component list must interleave real and imaginary parts")
    arr = np.asarray(values, dtype=float)
    return arr[0::2] + 1j * arr[1::2]


def _state_from_pairs(values: list[float], tol: float) -> StateVector:
    comps = _pairs_to_complex(values)
    norm = float(np.linalg.norm(comps))
    if norm > tol and abs(norm - 1.0) > 1e-6:
        warnings.warn(f"state has norm {norm:.6g} and was normalized",
                      NormalizationWarning, stacklevel=2)
    return StateVector(comps, tol=tol)


def _complex_to_pairs(vec: np.ndarray) -> list[float]:
    out: list[float] = []
    for z in vec:
        out.extend((float(z.real), float(z.imag)))
    return out


def _subspace_model(s: Subspace) -> SubspaceModel:
    return SubspaceModel(
        dim=s.dim,
        ambient_dim=s.ambient_dim,
        basis=[_complex_to_pairs(col) for col in s.basis.T],
    )


def _collect_warnings(record: list[warnings.WarningMessage]) -> list[str]:
    return [str(w.message) for w in record]


class _Space:
    """Rays, atoms, and (lazily) the pasted block structure of a ray file."""

    def __init__(self, text: str, tol: float):
        self.tol = tol
        self.instance = parse_rayfile(text, tol=tol)
        self.atoms: dict[str, Subspace] = {
            ray.id: Subspace(ray.vector.components.reshape(-1, 1),
                             self.instance.dim, tol=tol)
            for ray in self.instance.rays
        }
        self._structure: Optional[BlockStructure] = None

    @property
    def structure(self) -> BlockStructure:
        if self._structure is None:
            blocks = []
            for ctx in self.instance.contexts:
                projectors = [projector_of(self.atoms[rid]) for rid in ctx]
                context = validate_context(projectors, "+".join(ctx), tol=self.tol)
                blocks.append(invariant_lattice(context, tol=self.tol))
            self._structure = paste(blocks, tol=self.tol)
        return self._structure


def demo_qubit_handler(req: DemoQubitRequest) -> DemoQubitResponse:
    tol = _eps(req.tolerance)
    with warnings.catch_warnings(record=True) as record:
        warnings.simplefilter("always")
        state = None if req.state is None else _state_from_pairs(req.state, tol)
        result = run_demo_qubit(None if state is None else state.components, tol=tol)
    sections = []
    for section in (result.bivalent, result.supervaluational):
        sections.append(SemanticsReport(
            semantics=section.name,
            atoms=[AtomValue(label=label, value=v.token) for label, v in section.atoms],
            rules=[RuleCheckModel(rule=rc.rule, status=rc.status, lhs=rc.lhs, rhs=rc.rhs)
                   for rc in section.rules],
        ))
    return DemoQubitResponse(
        state=_complex_to_pairs(result.state.components),
        definitions=list(result.definitions),
        bivalent=sections[0],
        supervaluational=sections[1],
        warnings=_collect_warnings(record),
    )


def eval_handler(req: EvalRequest) -> EvalResponse:
    tol = _eps(req.tolerance)
    with warnings.catch_warnings(record=True) as record:
        warnings.simplefilter("always")
        space = _Space(req.space, tol)
        state = _state_from_pairs(req.state, tol)
    if state.ambient_dim != space.instance.dim:
        raise InputError(
            f"state has dimension {state.ambient_dim}, space has {space.instance.dim}")
    formula = parse_formula(req.formula, space.atoms)
    labels = atom_labels(formula)
    notes: list[str] = []

    if req.semantics == "bivalent":
        atom_values = [(lbl, bivalent_value(state, space.atoms[lbl], tol=tol))
                       for lbl in labels]
        value = value_token(eval_bivalent(state, formula, tol=tol))
    elif req.semantics == "super":
        structure = space.structure
        atom_values = [(lbl, super_value(state, space.atoms[lbl], tol=tol))
                       for lbl in labels]
        value = value_token(eval_super(structure, state, formula, tol=tol))
    else:
        notes.append(f"degree-model = {DEGREE_MODEL}")
        atom_values = [(lbl, lukasiewicz_degree(state, space.atoms[lbl], tol=tol))
                       for lbl in labels]
        value = value_token(eval_lukasiewicz(state, formula, tol=tol))

    return EvalResponse(
        semantics=req.semantics,
        formula=render(formula),
        atoms=[AtomValue(label=lbl, value=value_token(v)) for lbl, v in atom_values],
        value=value,
        notes=notes,
        warnings=_collect_warnings(record),
    )


def _operand_subspace(operand: Operand, space: Optional[_Space], tol: float) -> Subspace:
    vectors = []
    for item in operand:
        if isinstance(item, str):
            if space is None:
                raise InputError(f"operand names ray {item!r} but no space file was given")
            if item not in space.atoms:
                raise InputError(f"unknown ray id {item!r}")
            vectors.append(space.atoms[item].basis[:, 0])
        else:
            vectors.append(_pairs_to_complex(item))
    if not vectors:
        raise InputError("an operand needs at least one vector or ray id")
    return orthonormalize(vectors, tol=tol)


def lattice_handler(op: str, req: LatticeOpRequest) -> LatticeOpResponse:
    tol = _eps(req.tolerance)
    with warnings.catch_warnings(record=True) as record:
        warnings.simplefilter("always")
        space = _Space(req.space, tol) if req.space is not None else None
        a = _operand_subspace(req.a, space, tol)
        if op == "complement":
            if req.b is not None:
                raise InputError("complement takes a single operand")
            result = complement(a, tol=tol)
        else:
            if req.b is None:
                raise InputError(f"{op} needs two operands")
            b = _operand_subspace(req.b, space, tol)
            result = meet(a, b, tol=tol) if op == "meet" else join(a, b, tol=tol)
        blocks = None
        if space is not None:
            blocks = sorted(space.structure.blocks_containing(result))
    return LatticeOpResponse(
        op=op,  # type: ignore[arg-type]
        result=_subspace_model(result),
        blocks=blocks,
        warnings=_collect_warnings(record),
    )


def blocks_handler(req: BlocksRequest) -> BlocksResponse:
    tol = _eps(req.tolerance)
    with warnings.catch_warnings(record=True) as record:
        warnings.simplefilter("always")
        space = _Space(req.space, tol)
        structure = space.structure
    elements = [
        ElementModel(dim=sub.dim,
                     basis=[_complex_to_pairs(col) for col in sub.basis.T],
                     blocks=sorted(ids))
        for sub, ids in structure.elements()
    ]
    elements.sort(key=lambda e: (e.dim, e.blocks, e.basis))
    return BlocksResponse(
        blocks=[BlockSummary(id=b.context_id, elements=len(b.elements))
                for b in structure.blocks],
        elements=elements,
        interlinked=structure.is_interlinked,
        warnings=_collect_warnings(record),
    )


def ks_check_handler(req: KSCheckRequest) -> KSCheckResponse:
    tol = _eps(req.tolerance)
    with warnings.catch_warnings(record=True) as record:
        warnings.simplefilter("always")
        instance = parse_rayfile(req.rayfile, tol=tol)
        if req.enumerate_contexts:
            contexts = enumerate_contexts(list(instance.rays), instance.dim, tol=tol)
            instance = KSInstance(instance.dim, instance.rays, contexts, tol=tol)
    result = ks_colorable(instance, tol=tol)
    colorings = None
    if req.count_colorings:
        colorings, _ = count_colorings(instance)
    return KSCheckResponse(
        dim=instance.dim,
        rays=len(instance.rays),
        contexts=len(instance.contexts),
        status=result.status,  # type: ignore[arg-type]
        assignment=result.assignment,
        nodes_explored=result.nodes_explored,
        colorings=colorings,
        context_list=[list(c) for c in instance.contexts] if req.enumerate_contexts else None,
        warnings=_collect_warnings(record),
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="qlogic",
        description="Subspace algebra, Boolean blocks, gappy and many-valued "
                    "valuations, and Kochen-Specker colorability.",
        version="0.1.0",
    )

    @app.exception_handler(InputError)
    async def input_error_handler(request: Request, exc: InputError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok")

    @app.post("/demo-qubit", response_model=DemoQubitResponse)
    def demo_qubit(req: DemoQubitRequest) -> DemoQubitResponse:
        return demo_qubit_handler(req)

    @app.post("/eval", response_model=EvalResponse)
    def eval_formula(req: EvalRequest) -> EvalResponse:
        return eval_handler(req)

    @app.post("/lattice/meet", response_model=LatticeOpResponse)
    def lattice_meet(req: LatticeOpRequest) -> LatticeOpResponse:
        return lattice_handler("meet", req)

    @app.post("/lattice/join", response_model=LatticeOpResponse)
    def lattice_join(req: LatticeOpRequest) -> LatticeOpResponse:
        return lattice_handler("join", req)

    @app.post("/lattice/complement", response_model=LatticeOpResponse)
    def lattice_complement(req: LatticeOpRequest) -> LatticeOpResponse:
        return lattice_handler("complement", req)

    @app.post("/blocks", response_model=BlocksResponse)
    def blocks(req: BlocksRequest) -> BlocksResponse:
        return blocks_handler(req)

    @app.post("/ks-check", response_model=KSCheckResponse)
    def ks_check(req: KSCheckRequest) -> KSCheckResponse:
        return ks_check_handler(req)

    return app


app = create_app()
