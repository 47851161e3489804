"""Valuation engines for experimental propositions.

Three semantics share one formula tree:

* bivalent  - a formula denotes a subspace (meet/join/complement over its
  atoms) and is true exactly when the state lies in that subspace;
* supervaluational - atoms are true/false/gap by membership in the
  subspace or its complement, and composite formulas are first reduced
  structurally inside Boolean blocks; a connective left joining two
  nontrivial, nonidentical subspaces from different blocks has no value;
* Lukasiewicz - atoms carry degrees in [0, 1] (the Born weight
  <psi|P|psi> of the state on the atom's projector, recorded as an
  explicit modeling assumption) combined with the bounded-sum
  connectives.

Rule checks compare valuations against the product and sum constraints
for compatible propositions; comparisons that involve a gap are reported
as failed with a distinguished gap marker instead of raising.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .contexts import BlockStructure
from .errors import (
    DimensionMismatchError,
    FormulaParseError,
    UnresolvableAtomError,
)
from .hilbert import (
    DEFAULT_EPS,
    Projector,
    StateVector,
    Subspace,
    complement,
    contains,
    join,
    meet,
    projector_of,
    subspace_equal,
)

#: output flag naming how atomic degrees arise from states
DEGREE_MODEL = "born-weight"


class TruthValue(enum.Enum):
    TRUE = "1"
    FALSE = "0"
    GAP = "gap"

    @property
    def token(self) -> str:
        """Report token: 1, 0, or gap."""
        return self.value

    @classmethod
    def of(cls, flag: bool) -> "TruthValue":
        return cls.TRUE if flag else cls.FALSE


Degree = float


# -- formulas ----------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    label: str
    subspace: Subspace
    block_id: Optional[str] = None


@dataclass(frozen=True)
class Conj:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Disj:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Neg:
    operand: "Formula"


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


Formula = Union[Atom, Conj, Disj, Neg, Top, Bottom]

_PRECEDENCE = {Disj: 1, Conj: 2, Neg: 3}


def render(f: Formula) -> str:
    """Render with the lattice connectives (meet, join, orthocomplement)."""

    def go(g: Formula, parent: int) -> str:
        if isinstance(g, Atom):
            return g.label
        if isinstance(g, Top):
            return "T"
        if isinstance(g, Bottom):
            return "F"
        if isinstance(g, Neg):
            return "!" + go(g.operand, _PRECEDENCE[Neg])
        prec = _PRECEDENCE[type(g)]
        op = " ⊓ " if isinstance(g, Conj) else " ⊔ "
        body = go(g.left, prec) + op + go(g.right, prec)
        return "(" + body + ")" if prec < parent else body

    return go(f, 0)


_TOKEN = re.compile(r"\s*(?:(?P<op>[&|!()])|(?P<ident>[A-Za-z_][A-Za-z0-9_+\-.]*))")


def parse_formula(text: str, atoms: Mapping[str, Subspace]) -> Formula:
    """Parse ``&``, ``|``, ``!``, parentheses, ``T``/``F`` and atom ids.

    ``|`` binds loosest, then ``&``, then ``!``. Atom ids resolve against
    the supplied mapping; ``T`` and ``F`` are reserved constants.
    """
    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            leftover = text[pos:].strip()
            if not leftover:
                break
            raise FormulaParseError(f"unexpected character {leftover[0]!r} in formula")
        tokens.append(m.group("op") or m.group("ident"))
        pos = m.end()
    if not tokens:
        raise FormulaParseError("empty formula")

    index = 0

    def peek() -> Optional[str]:
        return tokens[index] if index < len(tokens) else None

    def advance() -> str:
        nonlocal index
        tok = tokens[index]
        index += 1
        return tok

    def parse_disj() -> Formula:
        node = parse_conj()
        while peek() == "|":
            advance()
            node = Disj(node, parse_conj())
        return node

    def parse_conj() -> Formula:
        node = parse_unary()
        while peek() == "&":
            advance()
            node = Conj(node, parse_unary())
        return node

    def parse_unary() -> Formula:
        tok = peek()
        if tok == "!":
            advance()
            return Neg(parse_unary())
        return parse_primary()

    def parse_primary() -> Formula:
        tok = peek()
        if tok is None:
            raise FormulaParseError("formula ends unexpectedly")
        if tok == "(":
            advance()
            node = parse_disj()
            if peek() != ")":
                raise FormulaParseError("missing closing parenthesis")
            advance()
            return node
        if tok in {"&", "|", ")"}:
            raise FormulaParseError(f"unexpected {tok!r} in formula")
        advance()
        if tok == "T":
            return Top()
        if tok == "F":
            return Bottom()
        if tok not in atoms:
            raise FormulaParseError(f"unknown atom {tok!r}")
        return Atom(tok, atoms[tok])

    node = parse_disj()
    if index != len(tokens):
        raise FormulaParseError(f"trailing input starting at {tokens[index]!r}")
    return node


def atom_labels(f: Formula) -> list[str]:
    """Distinct atom labels in first-appearance order."""
    out: list[str] = []

    def walk(g: Formula) -> None:
        if isinstance(g, Atom):
            if g.label not in out:
                out.append(g.label)
        elif isinstance(g, Neg):
            walk(g.operand)
        elif isinstance(g, (Conj, Disj)):
            walk(g.left)
            walk(g.right)

    walk(f)
    return out


# -- atomic valuations -------------------------------------------------------

def bivalent_value(state: StateVector, s: Subspace, tol: float = DEFAULT_EPS) -> TruthValue:
    """True exactly when the state lies in s; never a gap."""
    return TruthValue.of(contains(s, state, tol=tol))


def super_value(state: StateVector, s: Subspace, tol: float = DEFAULT_EPS) -> TruthValue:
    """True in s, false in the orthocomplement, otherwise a gap."""
    if contains(s, state, tol=tol):
        return TruthValue.TRUE
    if contains(complement(s, tol=tol), state, tol=tol):
        return TruthValue.FALSE
    return TruthValue.GAP


def lukasiewicz_degree(state: StateVector, p: Union[Projector, Subspace],
                       tol: float = DEFAULT_EPS) -> Degree:
    """Degree of membership: the quadratic form <psi|P|psi>, clamped to [0,1]."""
    if isinstance(p, Subspace):
        p = projector_of(p)
    if state.ambient_dim != p.ambient_dim:
        raise DimensionMismatchError("state and projector of different ambient dimensions")
    v = state.components
    value = float((v.conj() @ (p.matrix @ v)).real)
    return min(1.0, max(0.0, value))


def lukasiewicz_conj(a: Degree, b: Degree) -> Degree:
    return max(a + b - 1.0, 0.0)


def lukasiewicz_disj(a: Degree, b: Degree) -> Degree:
    return min(a + b, 1.0)


# -- formula evaluation ------------------------------------------------------

def formula_subspace(f: Formula, ambient_dim: int, tol: float = DEFAULT_EPS) -> Subspace:
    """The subspace a formula denotes under the lattice reading."""
    if isinstance(f, Atom):
        return f.subspace
    if isinstance(f, Top):
        return Subspace.full(ambient_dim)
    if isinstance(f, Bottom):
        return Subspace.zero(ambient_dim)
    if isinstance(f, Neg):
        return complement(formula_subspace(f.operand, ambient_dim, tol), tol=tol)
    left = formula_subspace(f.left, ambient_dim, tol)
    right = formula_subspace(f.right, ambient_dim, tol)
    if isinstance(f, Conj):
        return meet(left, right, tol=tol)
    return join(left, right, tol=tol)


def eval_bivalent(state: StateVector, f: Formula, tol: float = DEFAULT_EPS) -> TruthValue:
    """Membership of the state in the formula's subspace."""
    return bivalent_value(state, formula_subspace(f, state.ambient_dim, tol), tol=tol)


def eval_lukasiewicz(state: StateVector, f: Formula, tol: float = DEFAULT_EPS) -> Degree:
    """Degrees on atoms, bounded-sum connectives above them."""
    if isinstance(f, Atom):
        return lukasiewicz_degree(state, f.subspace, tol=tol)
    if isinstance(f, Top):
        return 1.0
    if isinstance(f, Bottom):
        return 0.0
    if isinstance(f, Neg):
        return 1.0 - eval_lukasiewicz(state, f.operand, tol)
    left = eval_lukasiewicz(state, f.left, tol)
    right = eval_lukasiewicz(state, f.right, tol)
    if isinstance(f, Conj):
        return lukasiewicz_conj(left, right)
    return lukasiewicz_disj(left, right)


def _flatten(f: Formula, kind: type) -> list[Formula]:
    """Operands of a maximal run of one associative connective."""
    if isinstance(f, kind):
        return _flatten(f.left, kind) + _flatten(f.right, kind)
    return [f]


def _reduce_super(structure: BlockStructure, f: Formula, tol: float) -> Optional[Subspace]:
    """Structural reduction; None marks an undecidable (gap) residue.

    Runs of the same connective are flattened and reduced within shared
    blocks to completion ({0} and the whole space count as members of
    every block, and identical subspaces always combine). Whatever still
    joins two nontrivial, nonidentical, cross-block subspaces after that
    has no value.
    """
    if isinstance(f, Atom):
        if not f.subspace.is_trivial and not structure.blocks_containing(f.subspace):
            raise UnresolvableAtomError(
                f"atom {f.label!r} denotes a subspace outside every block")
        return f.subspace
    if isinstance(f, Top):
        return Subspace.full(structure.ambient_dim)
    if isinstance(f, Bottom):
        return Subspace.zero(structure.ambient_dim)
    if isinstance(f, Neg):
        inner = _reduce_super(structure, f.operand, tol)
        return None if inner is None else complement(inner, tol=tol)

    kind = type(f)
    operands = [_reduce_super(structure, g, tol) for g in _flatten(f, kind)]
    if any(op is None for op in operands):
        return None  # a gap operand absorbs the whole connective
    subs = [op for op in operands if op is not None]
    combine = meet if kind is Conj else join

    reduced = True
    while reduced and len(subs) > 1:
        reduced = False
        for i in range(len(subs)):
            for j in range(i + 1, len(subs)):
                a, b = subs[i], subs[j]
                same = subspace_equal(a, b, tol=tol)
                shared = structure.blocks_containing(a) & structure.blocks_containing(b)
                if same or shared:
                    merged = a if same else combine(a, b, tol=tol)
                    subs[i:i + 1] = [merged]
                    del subs[j]
                    reduced = True
                    break
            if reduced:
                break
    if len(subs) == 1:
        return subs[0]
    return None


def eval_super(structure: BlockStructure, state: StateVector, f: Formula,
               tol: float = DEFAULT_EPS) -> TruthValue:
    """Supervaluational value of a formula over a pasted block structure."""
    residue = _reduce_super(structure, f, tol)
    if residue is None:
        return TruthValue.GAP
    return super_value(state, residue, tol=tol)


# -- product and sum rules ---------------------------------------------------

Value = Union[TruthValue, float, int]


def _as_number(v: Value) -> Optional[float]:
    if isinstance(v, TruthValue):
        if v is TruthValue.GAP:
            return None
        return 1.0 if v is TruthValue.TRUE else 0.0
    return float(v)


def format_value(v: Optional[float]) -> str:
    """0/0 for a gap, otherwise a trimmed decimal."""
    if v is None:
        return "0/0"
    return format(v, ".12g")


@dataclass(frozen=True)
class RuleCheck:
    """Outcome of a product- or sum-rule comparison.

    ``gap_mismatch`` marks a failure caused by an indeterminate operand
    ("no number") as opposed to a wrong number; ``lhs``/``rhs`` carry the
    rendered sides of the violated equation.
    """

    rule: str
    ok: bool
    gap_mismatch: bool
    lhs: str
    rhs: str

    @property
    def status(self) -> str:
        if self.ok:
            return "ok"
        return "gap-fail" if self.gap_mismatch else "fail"

    def line(self) -> str:
        if self.ok:
            return f"rule {self.rule} = ok"
        return f"rule {self.rule} = {self.status} ({self.lhs} ≠ {self.rhs})"

    def __bool__(self) -> bool:
        return self.ok


def _compare(rule: str, lhs: Optional[float], rhs: Optional[float],
             tol: float = DEFAULT_EPS) -> RuleCheck:
    gap = lhs is None or rhs is None
    ok = not gap and abs(lhs - rhs) <= tol
    return RuleCheck(rule=rule, ok=ok, gap_mismatch=gap,
                     lhs=format_value(lhs), rhs=format_value(rhs))


def check_product_rule(v_a: Value, v_b: Value, v_ab: Value,
                       tol: float = DEFAULT_EPS) -> RuleCheck:
    """[[A and B]] = [[A]] * [[B]]; a gap on either side can never satisfy it."""
    a, b, ab = _as_number(v_a), _as_number(v_b), _as_number(v_ab)
    product = None if a is None or b is None else a * b
    return _compare("product", ab, product, tol)


def check_sum_rule(v_a: Value, v_b: Value, v_ab: Value, v_aorb: Value,
                   tol: float = DEFAULT_EPS) -> RuleCheck:
    """[[A]] + [[B]] - [[A or B]] = [[A and B]], gaps reported as gap-fail."""
    a, b = _as_number(v_a), _as_number(v_b)
    ab, aorb = _as_number(v_ab), _as_number(v_aorb)
    lhs = None if a is None or b is None or aorb is None else a + b - aorb
    return _compare("sum", lhs, ab, tol)


def distributivity_counterexample(a: Subspace, b: Subspace, c: Subspace,
                                  tol: float = DEFAULT_EPS) -> bool:
    """True when c meet (a join b) differs from (c meet a) join (c meet b)."""
    lhs = meet(c, join(a, b, tol=tol), tol=tol)
    rhs = join(meet(c, a, tol=tol), meet(c, b, tol=tol), tol=tol)
    return not subspace_equal(lhs, rhs, tol=tol)


# -- report serialization ----------------------------------------------------

def value_token(v: Union[TruthValue, Degree]) -> str:
    if isinstance(v, TruthValue):
        return v.token
    return format(float(v), ".12g")


@dataclass(frozen=True)
class Valuation:
    """Named atomic values for one state under one semantics."""

    semantics: str
    atoms: tuple[tuple[str, Union[TruthValue, Degree]], ...]

    def lines(self) -> list[str]:
        return [f"atom {label} = {value_token(v)}" for label, v in self.atoms]
