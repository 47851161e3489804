"""Kochen-Specker colorability of finite ray sets.

An instance is a set of labeled unit rays of C^d together with its
contexts: maximal mutually-orthogonal d-tuples. A coloring assigns 0 or
1 to every ray so that each context contains exactly one 1 and no two
orthogonal rays are both 1. The search backtracks over contexts (picking
the single true ray per context) with forward propagation of forced
zeros along orthogonality edges; contexts are visited
most-constrained-first with a lexicographic tie-break, which makes both
the verdict and the node count independent of input order.

Ray files are line-oriented UTF-8 text::

    dim <d>
    ray <id> <re_1> <im_1> ... <re_d> <im_d>
    ctx <id_1> ... <id_d>      # optional; enumerated when absent

Components are decimal or rational ``p/q`` literals, ``#`` starts a
comment, and unnormalized rays are accepted with a normalization
warning.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import combinations
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import (
    DuplicateRayError,
    InputError,
    InstanceValidationError,
    InternalError,
    MalformedLineError,
    NonOrthogonalContextError,
)
from .hilbert import DEFAULT_EPS, StateVector


class NormalizationWarning(UserWarning):
    """An input ray was not unit length and has been rescaled."""


@dataclass(frozen=True, eq=False)
class Ray:
    id: str
    vector: StateVector


@dataclass(frozen=True, eq=False)
class KSInstance:
    """Validated rays plus contexts; every ray sits in at least one context."""

    dim: int
    rays: tuple[Ray, ...]
    contexts: tuple[tuple[str, ...], ...]

    def __init__(self, dim: int, rays: Sequence[Ray], contexts: Sequence[Sequence[str]],
                 tol: float = DEFAULT_EPS):
        dim = int(dim)
        rays = tuple(rays)
        contexts = tuple(tuple(c) for c in contexts)
        if dim < 1:
            raise InstanceValidationError("dimension must be positive")
        if not rays:
            raise InstanceValidationError("an instance needs at least one ray")
        by_id: dict[str, Ray] = {}
        for ray in rays:
            if ray.vector.ambient_dim != dim:
                raise InstanceValidationError(
                    f"ray {ray.id!r} has dimension {ray.vector.ambient_dim}, expected {dim}")
            if ray.id in by_id:
                raise DuplicateRayError(f"ray id {ray.id!r} appears twice")
            by_id[ray.id] = ray
        for a, b in combinations(rays, 2):
            overlap = abs(complex(a.vector.components.conj() @ b.vector.components))
            if overlap >= 1.0 - tol:
                raise DuplicateRayError(
                    f"rays {a.id!r} and {b.id!r} span the same line")
        seen_ctx: set[tuple[str, ...]] = set()
        covered: set[str] = set()
        for ctx in contexts:
            if len(ctx) != dim:
                raise InstanceValidationError(
                    f"context {ctx!r} has {len(ctx)} rays, expected {dim}")
            if len(set(ctx)) != dim:
                raise InstanceValidationError(f"context {ctx!r} repeats a ray")
            for rid in ctx:
                if rid not in by_id:
                    raise InstanceValidationError(f"context names unknown ray {rid!r}")
            for x, y in combinations(ctx, 2):
                overlap = abs(complex(
                    by_id[x].vector.components.conj() @ by_id[y].vector.components))
                if overlap > tol:
                    raise NonOrthogonalContextError(
                        f"rays {x!r} and {y!r} of context {ctx!r} are not orthogonal")
            key = tuple(sorted(ctx))
            if key in seen_ctx:
                raise InstanceValidationError(f"context {ctx!r} declared twice")
            seen_ctx.add(key)
            covered.update(ctx)
        if not contexts:
            raise InstanceValidationError("an instance needs at least one context")
        missing = sorted(set(by_id) - covered)
        if missing:
            raise InstanceValidationError(
                f"ray {missing[0]!r} does not appear in any context")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "contexts", contexts)

    def ray_map(self) -> dict[str, Ray]:
        return {r.id: r for r in self.rays}

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return (f"KSInstance(dim={self.dim}, rays={len(self.rays)}, "
                f"contexts={len(self.contexts)})")


@dataclass(frozen=True)
class ColoringResult:
    """Either a verified assignment or a proof-of-exhaustion node count."""

    colorable: bool
    assignment: Optional[dict[str, int]]
    nodes_explored: int

    @property
    def status(self) -> str:
        return "colorable" if self.colorable else "noncolorable"


def parse_number(token: str) -> float:
    """Decimal or rational p/q literal."""
    try:
        if "/" in token:
            return float(Fraction(token))
        return float(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedLineError(f"bad numeric literal {token!r}") from exc


def parse_rayfile(text: str, tol: float = DEFAULT_EPS) -> KSInstance:
    """Parse and validate a ray file; contexts are enumerated when absent."""
    dim: Optional[int] = None
    rays: list[Ray] = []
    ids: set[str] = set()
    contexts: list[tuple[str, ...]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0]
        if dim is None:
            if keyword != "dim" or len(tokens) != 2:
                raise MalformedLineError(f"line {lineno}: expected 'dim <d>' first")
            try:
                dim = int(tokens[1])
            except ValueError:
                raise MalformedLineError(f"line {lineno}: bad dimension {tokens[1]!r}")
            if dim < 1:
                raise MalformedLineError(f"line {lineno}: dimension must be positive")
            continue
        if keyword == "ray":
            if len(tokens) != 2 + 2 * dim:
                raise MalformedLineError(
                    f"line {lineno}: ray needs an id and {2 * dim} components")
            rid = tokens[1]
            if rid in ids:
                raise DuplicateRayError(f"line {lineno}: ray id {rid!r} appears twice")
            try:
                values = [parse_number(t) for t in tokens[2:]]
            except MalformedLineError as exc:
                raise MalformedLineError(f"line {lineno}: {exc}") from None
            comps = [complex(values[2 * i], values[2 * i + 1]) for i in range(dim)]
            norm = float(np.linalg.norm(comps))
            if norm <= tol:
                raise MalformedLineError(f"line {lineno}: ray {rid!r} is the zero vector")
            if abs(norm - 1.0) > 1e-6:
                warnings.warn(
                    f"ray {rid!r} has norm {norm:.6g} and was normalized",
                    NormalizationWarning, stacklevel=2)
            vector = StateVector(comps, tol=tol)
            for other in rays:
                overlap = abs(complex(other.vector.components.conj() @ vector.components))
                if overlap >= 1.0 - tol:
                    raise DuplicateRayError(
                        f"line {lineno}: ray {rid!r} spans the same line as {other.id!r}")
            rays.append(Ray(rid, vector))
            ids.add(rid)
        elif keyword == "ctx":
            members = tokens[1:]
            if len(members) != dim:
                raise MalformedLineError(
                    f"line {lineno}: ctx needs exactly {dim} ray ids")
            for rid in members:
                if rid not in ids:
                    raise MalformedLineError(f"line {lineno}: unknown ray id {rid!r}")
            contexts.append(tuple(members))
        elif keyword == "dim":
            raise MalformedLineError(f"line {lineno}: duplicate dim directive")
        else:
            raise MalformedLineError(f"line {lineno}: unknown directive {keyword!r}")

    if dim is None:
        raise MalformedLineError("empty ray file: no dim directive")
    if not rays:
        raise MalformedLineError("ray file declares no rays")
    if not contexts:
        contexts = [tuple(c) for c in enumerate_contexts(rays, dim, tol=tol)]
        if not contexts:
            raise InstanceValidationError(
                "no contexts declared and none could be enumerated")
    return KSInstance(dim, rays, contexts, tol=tol)


def orthogonality_edges(rays: Sequence[Ray], tol: float = DEFAULT_EPS) -> dict[str, set[str]]:
    """Adjacency of the orthogonality graph over ray ids."""
    neighbors: dict[str, set[str]] = {r.id: set() for r in rays}
    for a, b in combinations(rays, 2):
        if abs(complex(a.vector.components.conj() @ b.vector.components)) <= tol:
            neighbors[a.id].add(b.id)
            neighbors[b.id].add(a.id)
    return neighbors


def enumerate_contexts(rays: Sequence[Ray], dim: int,
                       tol: float = DEFAULT_EPS) -> list[tuple[str, ...]]:
    """All size-d cliques of the orthogonality graph, in input-index order.

    A d-clique spans the whole space, so no further ray can extend it;
    every clique of size exactly d is automatically maximal.
    """
    neighbors = orthogonality_edges(rays, tol=tol)
    order = [r.id for r in rays]
    index = {rid: i for i, rid in enumerate(order)}
    found: list[tuple[str, ...]] = []

    def extend(clique: list[str], start: int) -> None:
        if len(clique) == dim:
            found.append(tuple(clique))
            return
        for i in range(start, len(order)):
            rid = order[i]
            if all(rid in neighbors[c] for c in clique):
                clique.append(rid)
                extend(clique, i + 1)
                clique.pop()

    extend([], 0)
    # defensive: a (d+1)-clique would mean d+1 orthonormal vectors in C^d
    for clique in found:
        if len(set(clique)) != dim:
            raise InternalError("enumerated clique of wrong cardinality")
    return found


def _canonical(inst: KSInstance) -> tuple[list[str], list[tuple[str, ...]], dict[str, set[str]]]:
    ids = sorted(r.id for r in inst.rays)
    contexts = sorted(tuple(sorted(c)) for c in inst.contexts)
    neighbors = orthogonality_edges(inst.rays)
    return ids, contexts, neighbors


def _search(inst: KSInstance, count_all: bool) -> tuple[int, Optional[dict[str, int]], int]:
    """Shared backtracking core; returns (solutions, first assignment, nodes)."""
    ids, contexts, neighbors = _canonical(inst)
    assignment: dict[str, int] = {}
    stats = {"nodes": 0, "solutions": 0}
    first: Optional[dict[str, int]] = None

    def propagate(rid: str, value: int, trail: list[str]) -> bool:
        stack = [(rid, value)]
        while stack:
            name, val = stack.pop()
            if name in assignment:
                if assignment[name] != val:
                    return False
                continue
            assignment[name] = val
            trail.append(name)
            if val == 1:
                for other in neighbors[name]:
                    stack.append((other, 0))
        return True

    def select() -> Optional[tuple[tuple[str, ...], list[str]]]:
        best: Optional[tuple[tuple[str, ...], list[str]]] = None
        for ctx in contexts:
            if any(assignment.get(r) == 1 for r in ctx):
                continue
            candidates = [r for r in ctx if assignment.get(r) != 0]
            if best is None or len(candidates) < len(best[1]):
                best = (ctx, candidates)
        return best

    def search() -> bool:
        nonlocal first
        chosen = select()
        if chosen is None:
            stats["solutions"] += 1
            if first is None:
                full = {rid: assignment.get(rid, 0) for rid in ids}
                first = full
            return not count_all
        ctx, candidates = chosen
        if not candidates:
            return False
        for rid in candidates:  # candidates inherit the sorted context order
            stats["nodes"] += 1
            trail: list[str] = []
            ok = propagate(rid, 1, trail)
            if ok and search():
                return True
            for name in trail:
                del assignment[name]
        return False

    search()
    return stats["solutions"], first, stats["nodes"]


def ks_colorable(inst: KSInstance, tol: float = DEFAULT_EPS) -> ColoringResult:
    """Search for a consistent coloring or exhaust the space proving none exists."""
    solutions, assignment, nodes = _search(inst, count_all=False)
    if solutions:
        assert assignment is not None
        if not verify_coloring(inst, assignment, tol=tol):
            raise InternalError("search produced an assignment that fails verification")
        return ColoringResult(True, assignment, nodes)
    return ColoringResult(False, None, nodes)


def count_colorings(inst: KSInstance) -> tuple[int, int]:
    """Exhaustively count consistent colorings; returns (count, nodes explored)."""
    solutions, _, nodes = _search(inst, count_all=True)
    return solutions, nodes


def verify_coloring(inst: KSInstance, assignment: Mapping[str, int],
                    tol: float = DEFAULT_EPS) -> bool:
    """Exactly one 1 per context and no orthogonal pair valued (1, 1)."""
    for ray in inst.rays:
        if ray.id not in assignment:
            raise InputError(f"assignment misses ray {ray.id!r}")
        if assignment[ray.id] not in (0, 1):
            raise InputError(f"assignment for {ray.id!r} must be 0 or 1")
    for ctx in inst.contexts:
        if sum(assignment[r] for r in ctx) != 1:
            return False
    neighbors = orthogonality_edges(inst.rays, tol=tol)
    for rid, others in neighbors.items():
        if assignment[rid] == 1 and any(assignment[o] == 1 for o in others):
            return False
    return True


BUNDLED = ("cabello18", "peres33")


def load_bundled(name: str) -> str:
    """Text of a bundled ray file; see BUNDLED for the available names."""
    if name not in BUNDLED:
        raise InputError(f"no bundled ray set named {name!r}; choose from {BUNDLED}")
    return resources.files("qlogic").joinpath("data", f"{name}.rays").read_text("utf-8")
