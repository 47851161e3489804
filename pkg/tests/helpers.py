"""Shared test utilities: independent oracles and random input generators.

The oracles here deliberately avoid the code paths of the package under
test: rank comes from plain-Python Gaussian elimination, null spaces and
column spaces from that same elimination, and colorability from direct
enumeration of every assignment, so expected values never lean on the
Gram-Schmidt / eigendecomposition / backtracking routines they check.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from qlogic.hilbert import Projector, StateVector, Subspace
from qlogic.ks import KSInstance, Ray


def rank_by_elimination(rows, tol: float = 1e-9) -> int:
    """Rank via Gaussian elimination with partial pivoting, pure Python."""
    m = [[complex(x) for x in row] for row in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for col in range(ncols):
        if rank >= nrows:
            break
        piv = max(range(rank, nrows), key=lambda r: abs(m[r][col]))
        if abs(m[piv][col]) <= tol:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pivot = m[rank][col]
        m[rank] = [x / pivot for x in m[rank]]
        for r in range(nrows):
            if r != rank:
                f = m[r][col]
                if abs(f) > 0:
                    m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def column_space_dim(*bases, tol: float = 1e-9) -> int:
    """Dimension of the joint column space of the given basis matrices."""
    cols = []
    for b in bases:
        cols.extend(np.asarray(b, dtype=complex).T.tolist())
    return rank_by_elimination(cols, tol=tol)


def null_space_dim(basis, ambient_dim: int, tol: float = 1e-9) -> int:
    """Nullity of the conjugate-transposed basis matrix, by rank-nullity."""
    rows = np.asarray(basis, dtype=complex).conj().T.tolist()
    return ambient_dim - rank_by_elimination(rows, tol=tol) if rows else ambient_dim


def random_state(rng: np.random.Generator, d: int) -> StateVector:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return StateVector(v)


def random_subspace(rng: np.random.Generator, d: int, k: int) -> Subspace:
    """Haar-ish random k-dimensional subspace of C^d (QR of a Gaussian)."""
    if k == 0:
        return Subspace.zero(d)
    m = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    q, _ = np.linalg.qr(m)
    return Subspace(q[:, :k], d)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(m)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def rank_completion(seed: np.ndarray, fill: list[np.ndarray]) -> list[np.ndarray]:
    """Orthonormal basis rows starting from the unit vector ``seed``.

    Classic Gram-Schmidt against the seed and previously accepted fill
    vectors; assumes the fill vectors are generic (random) so none drop.
    """
    rows = [np.asarray(seed, dtype=complex)]
    for v in fill:
        w = np.asarray(v, dtype=complex)
        for _ in range(2):
            for r in rows:
                w = w - (r.conj() @ w) * r
        w = w / np.linalg.norm(w)
        rows.append(w)
    return rows


def random_context_projectors(rng: np.random.Generator, d: int, n: int) -> list[Projector]:
    """n mutually orthogonal nontrivial projectors resolving the identity on C^d."""
    assert 1 <= n <= d
    u = random_unitary(rng, d)
    cuts = sorted(rng.choice(np.arange(1, d), size=n - 1, replace=False).tolist()) if n > 1 else []
    bounds = [0] + cuts + [d]
    projs = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        cols = u[:, lo:hi]
        projs.append(Projector(cols @ cols.conj().T))
    return projs


# spin-half projectors along x and z, the standard two-context qubit setup
SQ2 = 1.0 / np.sqrt(2.0)
Z_PLUS = Subspace(np.array([[1.0], [0.0]]), 2)
Z_MINUS = Subspace(np.array([[0.0], [1.0]]), 2)
X_PLUS = Subspace(np.array([[SQ2], [SQ2]]), 2)
X_MINUS = Subspace(np.array([[SQ2], [-SQ2]]), 2)


def random_instance(rng: np.random.Generator, d: int, max_contexts: int) -> KSInstance:
    """Random colorability instance over C^d, sometimes sharing rays.

    New basis vectors that land on an existing line reuse that ray's id,
    and whole contexts that collapse onto an existing one are skipped
    (forced in d=2, where a shared ray fixes its partner up to phase).
    """
    rays: list[Ray] = []
    contexts: list[tuple[str, ...]] = []
    n_ctx = int(rng.integers(1, max_contexts + 1))
    for _ in range(n_ctx):
        if rays and rng.random() < 0.5:
            seed_ray = rays[int(rng.integers(0, len(rays)))]
            fill = [rng.standard_normal(d) + 1j * rng.standard_normal(d)
                    for _ in range(d - 1)]
            basis = rank_completion(seed_ray.vector.components, fill)
            members = [seed_ray.id]
            start = 1
        else:
            basis = random_unitary(rng, d).T
            members = []
            start = 0
        for col in basis[start:]:
            match = next((r.id for r in rays
                          if abs(complex(r.vector.components.conj() @ col)) >= 1.0 - 1e-9),
                         None)
            if match is None:
                rid = f"r{len(rays)}"
                rays.append(Ray(rid, StateVector(col)))
                members.append(rid)
            else:
                members.append(match)
        key = tuple(sorted(members))
        if key not in {tuple(sorted(c)) for c in contexts}:
            contexts.append(tuple(members))
    return KSInstance(d, rays, contexts)


def brute_force_colorable_oracle(inst: KSInstance) -> bool:
    """Enumerate all 2^n assignments and test the rules directly."""
    ids = [r.id for r in inst.rays]
    pos = {rid: i for i, rid in enumerate(ids)}
    n = len(ids)
    ctx_masks = [sum(1 << pos[r] for r in ctx) for ctx in inst.contexts]
    vecs = [r.vector.components for r in inst.rays]
    edge_masks = []
    for i, j in combinations(range(n), 2):
        if abs(complex(vecs[i].conj() @ vecs[j])) <= 1e-9:
            edge_masks.append((1 << i) | (1 << j))
    for word in range(1 << n):
        if any(bin(word & m).count("1") != 1 for m in ctx_masks):
            continue
        if any(word & m == m for m in edge_masks):
            continue
        return True
    return False
