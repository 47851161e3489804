"""Contexts, their invariant-subspace lattices (Boolean blocks), and the
pasting of blocks into a single structure with a sharing table.

A context is a resolution of the identity by mutually orthogonal
nontrivial projectors. Its block is generated constructively from
subset-sums of the context projectors, which gives exactly 2^n elements
closed under meet, join, and complement. Pasting deduplicates elements
across blocks (equality re-verified by mutual containment) and records,
for every distinct subspace, the set of blocks it belongs to; the zero
subspace and the whole space are members of every block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    IncompleteResolutionError,
    InputError,
    NonOrthogonalError,
    TrivialMemberError,
)
from .hilbert import (
    DEFAULT_EPS,
    Projector,
    Subspace,
    contains,
    projector_equal,
    range_of,
    subspace_equal,
)


@dataclass(frozen=True, eq=False)
class Context:
    """Mutually orthogonal nontrivial projectors summing to the identity."""

    id: str
    projectors: tuple[Projector, ...]

    def __init__(self, id: str, projectors: Sequence[Projector], tol: float = DEFAULT_EPS):
        projs = tuple(projectors)
        if not projs:
            raise InputError("a context needs at least one projector")
        d = projs[0].ambient_dim
        if any(p.ambient_dim != d for p in projs):
            raise DimensionMismatchError("context projectors of mixed ambient dimensions")
        for i, p in enumerate(projs):
            trace = float(p.matrix.trace().real)
            if trace <= tol:
                raise TrivialMemberError(f"projector {i} of context {id!r} is the zero operator")
            if trace >= d - tol:
                raise TrivialMemberError(f"projector {i} of context {id!r} is the identity")
        for i in range(len(projs)):
            for j in range(i + 1, len(projs)):
                if float(np.linalg.norm(projs[i].matrix @ projs[j].matrix)) > tol:
                    raise NonOrthogonalError(
                        f"projectors {i} and {j} of context {id!r} are not orthogonal")
        total = sum(p.matrix for p in projs)
        if float(np.linalg.norm(total - np.eye(d))) > tol:
            raise IncompleteResolutionError(
                f"projectors of context {id!r} do not resolve the identity")
        object.__setattr__(self, "id", id)
        object.__setattr__(self, "projectors", projs)

    @property
    def ambient_dim(self) -> int:
        return self.projectors[0].ambient_dim

    @property
    def size(self) -> int:
        return len(self.projectors)

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"Context({self.id!r}, {self.size} projectors, dim={self.ambient_dim})"


def validate_context(projectors: Sequence[Projector], context_id: str = "ctx",
                     tol: float = DEFAULT_EPS) -> Context:
    """Build a Context, raising the specific violation when invalid."""
    return Context(context_id, projectors, tol=tol)


def is_invariant(s: Subspace, p: Projector, tol: float = DEFAULT_EPS) -> bool:
    """Whether p maps s into itself: every basis image stays in s or vanishes."""
    if s.ambient_dim != p.ambient_dim:
        raise DimensionMismatchError("subspace and projector of different ambient dimensions")
    if s.dim == 0:
        return True
    images = p.matrix @ s.basis
    for col in images.T:
        norm = float(np.linalg.norm(col))
        if norm <= tol:
            continue
        if not contains(s, col / norm, tol=tol):
            return False
    return True


@dataclass(frozen=True, eq=False)
class BooleanBlock:
    """The 2^n-element invariant-subspace lattice of an n-projector context.

    ``elements[mask]`` is the range of the subset-sum of the context
    projectors selected by the bits of ``mask``; index 0 is the zero
    subspace and the full mask is the whole space.
    """

    context_id: str
    elements: tuple[Subspace, ...]

    @property
    def n(self) -> int:
        return (len(self.elements)).bit_length() - 1

    @property
    def ambient_dim(self) -> int:
        return self.elements[0].ambient_dim

    @property
    def zero(self) -> Subspace:
        return self.elements[0]

    @property
    def whole(self) -> Subspace:
        return self.elements[-1]

    def element(self, mask: int) -> Subspace:
        return self.elements[mask]

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"BooleanBlock({self.context_id!r}, {len(self.elements)} elements)"


def invariant_lattice(context: Context, tol: float = DEFAULT_EPS) -> BooleanBlock:
    """Generate the block of a context from subset-sums of its projectors.

    Ranges of orthogonal projectors are mutually orthogonal, so the
    element for a subset is spanned by the concatenated range bases.
    """
    d = context.ambient_dim
    ranges = [range_of(p, tol=tol) for p in context.projectors]
    elements: list[Subspace] = []
    for mask in range(1 << context.size):
        cols = [ranges[i].basis for i in range(context.size) if mask >> i & 1]
        mat = np.hstack(cols) if cols else np.zeros((d, 0), dtype=complex)
        elements.append(Subspace(mat, d, tol=tol))
    return BooleanBlock(context.id, tuple(elements))


def interlinked(c1: Context, c2: Context, tol: float = DEFAULT_EPS) -> bool:
    """Whether the two contexts share a (necessarily nontrivial) projector."""
    if c1.ambient_dim != c2.ambient_dim:
        raise DimensionMismatchError("contexts of different ambient dimensions")
    return any(projector_equal(p, q, tol=tol) for p in c1.projectors for q in c2.projectors)


@dataclass(frozen=True, eq=False)
class BlockStructure:
    """Deduplicated union of block elements plus the block-sharing table."""

    blocks: tuple[BooleanBlock, ...]
    entries: tuple[tuple[Subspace, frozenset[str]], ...]
    ambient_dim: int
    eps: float

    @property
    def block_ids(self) -> tuple[str, ...]:
        return tuple(b.context_id for b in self.blocks)

    @property
    def is_interlinked(self) -> bool:
        return any(len(ids) > 1 and not sub.is_trivial for sub, ids in self.entries)

    def elements(self) -> Iterable[tuple[Subspace, frozenset[str]]]:
        return iter(self.entries)

    def blocks_containing(self, s: Subspace) -> frozenset[str]:
        """Ids of blocks owning s; trivial subspaces belong to every block."""
        if s.ambient_dim != self.ambient_dim:
            raise DimensionMismatchError("subspace from a different ambient space")
        if s.is_trivial:
            return frozenset(self.block_ids)
        for sub, ids in self.entries:
            if sub.dim == s.dim and subspace_equal(sub, s, tol=self.eps):
                return ids
        return frozenset()

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"BlockStructure({len(self.blocks)} blocks, {len(self.entries)} elements)"


def paste(blocks: Sequence[BooleanBlock], tol: float = DEFAULT_EPS) -> BlockStructure:
    """Join blocks at their shared elements, at minimum {0} and the whole space."""
    blocks = tuple(blocks)
    if not blocks:
        raise InputError("cannot paste an empty block collection")
    d = blocks[0].ambient_dim
    if any(b.ambient_dim != d for b in blocks):
        raise DimensionMismatchError("blocks over different ambient spaces")
    ids = [b.context_id for b in blocks]
    if len(set(ids)) != len(ids):
        raise InputError("pasted blocks must carry distinct context ids")

    entries: list[tuple[Subspace, set[str]]] = []
    by_dim: dict[int, list[int]] = {}
    for block in blocks:
        for sub in block.elements:
            idx = None
            for i in by_dim.get(sub.dim, []):
                if subspace_equal(entries[i][0], sub, tol=tol):
                    idx = i
                    break
            if idx is None:
                entries.append((sub, {block.context_id}))
                by_dim.setdefault(sub.dim, []).append(len(entries) - 1)
            else:
                entries[idx][1].add(block.context_id)
    return BlockStructure(
        blocks=blocks,
        entries=tuple((sub, frozenset(owner)) for sub, owner in entries),
        ambient_dim=d,
        eps=tol,
    )


def blocks_containing(structure: BlockStructure, s: Subspace) -> frozenset[str]:
    return structure.blocks_containing(s)
