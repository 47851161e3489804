"""The two-context qubit walkthrough: spin-x and spin-z blocks pasted
together, the two cross-block conjunctions P1 and P2, and the product /
sum rule checks under the bivalent and supervaluational engines."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .contexts import BlockStructure, Context, invariant_lattice, paste, validate_context
from .errors import InputError
from .hilbert import DEFAULT_EPS, StateVector, Subspace, projector_of
from .semantics import (
    Atom,
    Conj,
    Disj,
    Formula,
    RuleCheck,
    TruthValue,
    check_product_rule,
    check_sum_rule,
    eval_bivalent,
    eval_super,
    render,
)

SQ2 = 1.0 / np.sqrt(2.0)


def qubit_atoms() -> dict[str, Subspace]:
    """The four spin rays: Xp, Xm, Zp, Zm."""
    return {
        "Zp": Subspace(np.array([[1.0], [0.0]]), 2),
        "Zm": Subspace(np.array([[0.0], [1.0]]), 2),
        "Xp": Subspace(np.array([[SQ2], [SQ2]]), 2),
        "Xm": Subspace(np.array([[SQ2], [-SQ2]]), 2),
    }


def qubit_contexts(tol: float = DEFAULT_EPS) -> tuple[Context, Context]:
    atoms = qubit_atoms()
    cx = validate_context([projector_of(atoms["Xp"]), projector_of(atoms["Xm"])], "X", tol=tol)
    cz = validate_context([projector_of(atoms["Zp"]), projector_of(atoms["Zm"])], "Z", tol=tol)
    return cx, cz


def qubit_structure(tol: float = DEFAULT_EPS) -> BlockStructure:
    cx, cz = qubit_contexts(tol=tol)
    return paste([invariant_lattice(cx, tol=tol), invariant_lattice(cz, tol=tol)], tol=tol)


@dataclass(frozen=True)
class SemanticsSection:
    """Values and rule checks for one semantics."""

    name: str
    atoms: tuple[tuple[str, TruthValue], ...]
    rules: tuple[RuleCheck, ...]


@dataclass(frozen=True)
class DemoResult:
    state: StateVector
    definitions: tuple[str, ...]
    bivalent: SemanticsSection
    supervaluational: SemanticsSection


def run_demo_qubit(state: Optional[Sequence[complex]] = None,
                   tol: float = DEFAULT_EPS) -> DemoResult:
    """Evaluate P1, P2, their conjunction and disjunction in both semantics.

    P1 conjoins the spin-x-up and spin-z-up rays, P2 the spin-x-up and
    spin-z-down rays. Bivalently all four formulas denote the zero
    subspace and both rules hold; supervaluationally P1, P2 and the
    disjunction have no value while the conjunction is decidably false,
    so both rules fail with a gap marker.
    """
    psi = StateVector([1.0, 0.0], tol=tol) if state is None else StateVector(state, tol=tol)
    if psi.ambient_dim != 2:
        raise InputError(f"the qubit demo needs a 2-dimensional state, got {psi.ambient_dim}")

    atoms = qubit_atoms()
    structure = qubit_structure(tol=tol)
    p1: Formula = Conj(Atom("Xp", atoms["Xp"]), Atom("Zp", atoms["Zp"]))
    p2: Formula = Conj(Atom("Xp", atoms["Xp"]), Atom("Zm", atoms["Zm"]))
    both = Conj(p1, p2)
    either = Disj(p1, p2)
    labeled: tuple[tuple[str, Formula], ...] = (
        ("P1", p1), ("P2", p2), ("P1 ⊓ P2", both), ("P1 ⊔ P2", either))

    sections = []
    for name, evaluate in (("bivalent", lambda f: eval_bivalent(psi, f, tol=tol)),
                           ("super", lambda f: eval_super(structure, psi, f, tol=tol))):
        values = {label: evaluate(f) for label, f in labeled}
        product = check_product_rule(values["P1"], values["P2"], values["P1 ⊓ P2"])
        total = check_sum_rule(values["P1"], values["P2"], values["P1 ⊓ P2"],
                               values["P1 ⊔ P2"])
        sections.append(SemanticsSection(
            name=name,
            atoms=tuple((label, values[label]) for label, _ in labeled),
            rules=(product, total),
        ))

    return DemoResult(
        state=psi,
        definitions=(f"P1 = {render(p1)}", f"P2 = {render(p2)}"),
        bivalent=sections[0],
        supervaluational=sections[1],
    )
