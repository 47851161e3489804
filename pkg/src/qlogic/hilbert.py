"""Tolerance-based algebra of states, projectors, and closed subspaces of C^d.

A subspace is stored as an orthonormal column basis (an empty basis is
the zero subspace, a full one is the whole space), a projector is a
Hermitian idempotent matrix, and every comparison runs against an
explicit epsilon rather than exact equality. All types are immutable
after construction and every operation is a pure function, so values can
be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    DimensionMismatchError,
    InputError,
    InternalError,
    NotAProjectorError,
    NotOrthonormalError,
    ZeroVectorError,
)

#: default epsilon for Frobenius-norm and residual checks
DEFAULT_EPS = 1e-9

#: window around eigenvalue 2 when intersecting two projectors via their sum
MEET_EIGENVALUE_TOL = 1e-8


@dataclass(frozen=True)
class Tolerance:
    """Comparison threshold; must lie strictly inside (0, 1)."""

    eps: float = DEFAULT_EPS

    def __post_init__(self) -> None:
        if not 0.0 < self.eps < 1.0:
            raise InputError(f"tolerance must lie in (0, 1), got {self.eps!r}")


def _frob(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


@dataclass(frozen=True, eq=False)
class StateVector:
    """A unit vector of C^d; construction rejects zero input and normalizes."""

    components: np.ndarray

    def __init__(self, components: Iterable[complex], tol: float = DEFAULT_EPS):
        arr = np.asarray(list(components) if not isinstance(components, np.ndarray) else components,
                         dtype=complex).reshape(-1).copy()
        if arr.size == 0:
            raise ZeroVectorError("a state vector needs at least one component")
        norm = float(np.linalg.norm(arr))
        if norm <= tol:
            raise ZeroVectorError("cannot normalize a (near-)zero state vector")
        arr /= norm
        arr.setflags(write=False)
        object.__setattr__(self, "components", arr)

    @property
    def ambient_dim(self) -> int:
        return int(self.components.size)

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"StateVector({self.components.tolist()!r})"


@dataclass(frozen=True, eq=False)
class Subspace:
    """Closed linear subspace of C^d held as an orthonormal column basis."""

    basis: np.ndarray
    ambient_dim: int

    def __init__(self, basis, ambient_dim: int | None = None, tol: float = DEFAULT_EPS):
        mat = np.asarray(basis, dtype=complex)
        if mat.ndim == 1:
            mat = mat.reshape(-1, 1)
        if mat.size == 0:
            if ambient_dim is None:
                raise InputError("an empty basis needs an explicit ambient_dim")
            mat = np.zeros((int(ambient_dim), 0), dtype=complex)
        if mat.ndim != 2:
            raise InputError("basis must be a matrix of column vectors")
        ambient = int(mat.shape[0] if ambient_dim is None else ambient_dim)
        if ambient < 1:
            raise InputError("ambient dimension must be positive")
        if mat.shape[0] != ambient:
            raise DimensionMismatchError(
                f"basis vectors have length {mat.shape[0]}, ambient dimension is {ambient}")
        k = mat.shape[1]
        if k > ambient:
            raise DimensionMismatchError(
                f"{k} basis vectors exceed ambient dimension {ambient}")
        if k:
            gram = mat.conj().T @ mat
            if float(np.abs(gram - np.eye(k)).max()) > tol:
                raise NotOrthonormalError("basis columns are not orthonormal within tolerance")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "basis", mat)
        object.__setattr__(self, "ambient_dim", ambient)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(np.zeros((ambient_dim, 0)), ambient_dim)

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(np.eye(ambient_dim), ambient_dim)

    @classmethod
    def span(cls, vectors, ambient_dim: int | None = None, tol: float = DEFAULT_EPS) -> "Subspace":
        return orthonormalize(vectors, ambient_dim=ambient_dim, tol=tol)

    @property
    def dim(self) -> int:
        return int(self.basis.shape[1])

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    @property
    def is_trivial(self) -> bool:
        return self.is_zero or self.is_full

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


@dataclass(frozen=True, eq=False)
class Projector:
    """A Hermitian idempotent matrix; eigenvalues sit in {0, 1} within tolerance."""

    matrix: np.ndarray

    def __init__(self, matrix, tol: float = DEFAULT_EPS):
        mat = np.asarray(matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise NotAProjectorError("a projector must be a square matrix")
        if _frob(mat - mat.conj().T) > tol:
            raise NotAProjectorError("matrix is not Hermitian within tolerance")
        if _frob(mat @ mat - mat) > tol:
            raise NotAProjectorError("matrix is not idempotent within tolerance")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def ambient_dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def rank(self) -> int:
        return int(round(float(self.matrix.trace().real)))

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    @property
    def is_identity(self) -> bool:
        return self.rank == self.ambient_dim

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"Projector(rank={self.rank}, ambient_dim={self.ambient_dim})"


VectorLike = Union[StateVector, np.ndarray, Sequence[complex]]


def _raw_vector(v: VectorLike) -> np.ndarray:
    if isinstance(v, StateVector):
        return v.components
    return np.asarray(v, dtype=complex).reshape(-1)


def orthonormalize(vectors, ambient_dim: int | None = None, tol: float = DEFAULT_EPS) -> Subspace:
    """Span of the given vectors via modified Gram-Schmidt.

    Runs a second orthogonalization pass for stability and drops any
    vector whose residual norm falls at or below tol * sqrt(d), so the
    rank is decided by the tolerance. Deterministic for a fixed input
    order.
    """
    raw = [_raw_vector(v) for v in vectors]
    dims = {v.size for v in raw}
    if ambient_dim is not None:
        dims.add(int(ambient_dim))
    if len(dims) > 1:
        raise DimensionMismatchError(f"vectors of mixed dimensions {sorted(dims)}")
    if not dims:
        raise InputError("cannot infer ambient dimension from an empty vector list")
    d = dims.pop()
    drop_below = tol * math.sqrt(d)

    cols: list[np.ndarray] = []
    for v in raw:
        n0 = float(np.linalg.norm(v))
        if n0 <= tol:
            continue
        w = v / n0
        for _ in range(2):
            for c in cols:
                w = w - (c.conj() @ w) * c
        r = float(np.linalg.norm(w))
        if r > drop_below:
            cols.append(w / r)
    mat = np.column_stack(cols) if cols else np.zeros((d, 0), dtype=complex)
    return Subspace(mat, d, tol=tol)


def projector_of(s: Subspace) -> Projector:
    """P = sum of |e><e| over the basis of s; range(P) recovers s."""
    if s.dim == 0:
        return Projector(np.zeros((s.ambient_dim, s.ambient_dim), dtype=complex))
    return Projector(s.basis @ s.basis.conj().T)


def range_of(p, tol: float = DEFAULT_EPS) -> Subspace:
    """Eigenspace of p for eigenvalue 1; its dimension is the rounded trace."""
    if not isinstance(p, Projector):
        p = Projector(p, tol=tol)  # rejects non-idempotent input
    evals, evecs = np.linalg.eigh(p.matrix)
    basis = evecs[:, evals >= 0.5]
    if basis.shape[1] != p.rank:
        raise InternalError(
            f"eigenvalue-1 space has dimension {basis.shape[1]}, trace says {p.rank}")
    return Subspace(basis, p.ambient_dim, tol=tol)


def contains(s: Subspace, v: VectorLike, tol: float = DEFAULT_EPS) -> bool:
    """Whether the (normalized) vector lies in s: ||P_s v - v|| <= tol."""
    if not isinstance(v, StateVector):
        v = StateVector(v, tol=tol)  # rejects zero vectors, fixes the scale
    if v.ambient_dim != s.ambient_dim:
        raise DimensionMismatchError(
            f"vector lives in C^{v.ambient_dim}, subspace in C^{s.ambient_dim}")
    w = v.components
    pw = s.basis @ (s.basis.conj().T @ w)
    return float(np.linalg.norm(pw - w)) <= tol


def _check_same_space(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(
            f"subspaces live in C^{a.ambient_dim} and C^{b.ambient_dim}")


def meet(a: Subspace, b: Subspace, tol: float = DEFAULT_EPS) -> Subspace:
    """Set-theoretic intersection: the eigenvalue-2 space of P_a + P_b."""
    _check_same_space(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    s = projector_of(a).matrix + projector_of(b).matrix
    evals, evecs = np.linalg.eigh(s)
    basis = evecs[:, evals >= 2.0 - MEET_EIGENVALUE_TOL]
    return Subspace(basis, a.ambient_dim, tol=tol)


def complement(a: Subspace, tol: float = DEFAULT_EPS) -> Subspace:
    """Orthogonal complement; involutive, with dim(a) + dim(a^perp) = d."""
    if a.dim == 0:
        return Subspace.full(a.ambient_dim)
    if a.dim == a.ambient_dim:
        return Subspace.zero(a.ambient_dim)
    evals, evecs = np.linalg.eigh(projector_of(a).matrix)
    basis = evecs[:, evals < 0.5]
    if basis.shape[1] != a.ambient_dim - a.dim:
        raise InternalError("complement dimension disagrees with rank-nullity")
    return Subspace(basis, a.ambient_dim, tol=tol)


def join(a: Subspace, b: Subspace, tol: float = DEFAULT_EPS) -> Subspace:
    """Smallest closed subspace containing both: (a^perp intersect b^perp)^perp."""
    _check_same_space(a, b)
    return complement(meet(complement(a, tol), complement(b, tol), tol), tol)


def orthogonal(p: Projector, q: Projector, tol: float = DEFAULT_EPS) -> bool:
    """PQ = 0 within tolerance (which forces QP = 0 for Hermitian P, Q)."""
    if p.ambient_dim != q.ambient_dim:
        raise DimensionMismatchError("projectors of different ambient dimensions")
    return _frob(p.matrix @ q.matrix) <= tol


def commutes(p: Projector, q: Projector, tol: float = DEFAULT_EPS) -> bool:
    if p.ambient_dim != q.ambient_dim:
        raise DimensionMismatchError("projectors of different ambient dimensions")
    return _frob(p.matrix @ q.matrix - q.matrix @ p.matrix) <= tol


def projector_equal(p: Projector, q: Projector, tol: float = DEFAULT_EPS) -> bool:
    if p.ambient_dim != q.ambient_dim:
        return False
    return _frob(p.matrix - q.matrix) <= tol


def subspace_equal(a: Subspace, b: Subspace, tol: float = DEFAULT_EPS) -> bool:
    """Equality as mutual containment of basis vectors (basis-order free)."""
    if a.ambient_dim != b.ambient_dim or a.dim != b.dim:
        return False
    if a.dim == 0:
        return True
    for s, t in ((a, b), (b, a)):
        residual = t.basis @ (t.basis.conj().T @ s.basis) - s.basis
        if float(np.max(np.linalg.norm(residual, axis=0))) > tol:
            return False
    return True
