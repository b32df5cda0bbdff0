"""Small dense linear algebra: singular values, exterior powers, wedges, Kronecker products.

Matrices are plain ``numpy`` arrays. Every grade-k object uses the lexicographic
basis ``e_{i1} ^ ... ^ e_{ik}`` with ``i1 < ... < ik`` (0-based indices here).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import InputError

ABS_TOL = 1e-12
REL_TOL = 1e-9


def close_enough(x, y, scale: float = 1.0) -> bool:
    """Mixed absolute/relative comparison used by all matrix-identity checks."""
    return bool(np.max(np.abs(np.asarray(x) - np.asarray(y)), initial=0.0)
                <= max(ABS_TOL, REL_TOL * scale))


def as_matrix(A, *, name: str = "matrix") -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise InputError(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError(f"{name} has non-finite entries")
    return A


def is_invertible(A) -> bool:
    """``|det A| > 1e-12 * (max |a_ij|)^d``."""
    A = as_matrix(A)
    scale = np.max(np.abs(A))
    if scale == 0.0:
        return False
    return bool(abs(np.linalg.det(A / scale)) > ABS_TOL)


@dataclass(frozen=True)
class KSubsetBasis:
    d: int
    k: int
    subsets: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.subsets)

    def index(self, subset) -> int:
        return self.subsets.index(tuple(subset))


@lru_cache(maxsize=None)
def ksubset_basis(d: int, k: int) -> KSubsetBasis:
    if not 0 <= k <= d:
        raise InputError(f"grade k={k} out of range for d={d}")
    return KSubsetBasis(d, k, tuple(combinations(range(d), k)))


@lru_cache(maxsize=None)
def _minor_index(d: int, k: int) -> np.ndarray:
    return np.array(ksubset_basis(d, k).subsets, dtype=np.intp).reshape(comb(d, k), k)


@dataclass(frozen=True)
class WedgeVector:
    basis: KSubsetBasis
    coords: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))


def singular_values(A) -> np.ndarray:
    """Singular values of ``A`` in non-increasing order."""
    A = as_matrix(A)
    return np.linalg.svd(A, compute_uv=False)


def operator_norm(A) -> float:
    return float(singular_values(A)[0])


def exterior_power(A, k: int) -> np.ndarray:
    """Matrix of ``A^k`` on the grade-k wedge space: all k x k minors of ``A``.

    Accepts a stack ``(..., d, d)`` and returns ``(..., C(d,k), C(d,k))``.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise InputError(f"expected square matrices, got shape {A.shape}")
    d = A.shape[-1]
    if not 0 <= k <= d:
        raise InputError(f"grade k={k} out of range for d={d}")
    if k == 0:
        return np.ones(A.shape[:-2] + (1, 1))
    if k == 1:
        return A.copy()
    idx = _minor_index(d, k)
    rows = idx[:, None, :, None]
    cols = idx[None, :, None, :]
    sub = A[..., rows, cols]
    return np.linalg.det(sub)


def wedge_vectors(*vectors) -> WedgeVector:
    """``v_1 ^ ... ^ v_k`` in lexicographic grade-k coordinates."""
    if not vectors:
        raise InputError("need at least one vector")
    if len({np.size(v) for v in vectors}) != 1:
        raise InputError("vectors have mismatched dimensions")
    V = np.array([np.asarray(v, dtype=float).ravel() for v in vectors])
    k, d = V.shape
    if k > d:
        raise InputError(f"cannot wedge {k} vectors in R^{d}")
    idx = _minor_index(d, k)
    coords = np.linalg.det(V[:, idx].transpose(1, 0, 2))
    return WedgeVector(ksubset_basis(d, k), coords)


def kronecker(T, U) -> np.ndarray:
    """Kronecker product on the basis ``e_i (x) e_j'``, ``i`` major."""
    T = np.asarray(T, dtype=float)
    U = np.asarray(U, dtype=float)
    if T.ndim != 2 or U.ndim != 2:
        raise InputError("kronecker expects two matrices")
    if not (np.all(np.isfinite(T)) and np.all(np.isfinite(U))):
        raise InputError("kronecker factors have non-finite entries")
    return np.kron(T, U)


def kronecker_chain(factors) -> np.ndarray:
    out = np.ones((1, 1))
    for F in factors:
        out = np.kron(out, F)
    return out


def trivector_identity_vector() -> np.ndarray:
    """``e1(x)(e2^e3) + e2(x)(e3^e1) + e3(x)(e1^e2)`` in the basis of R^3 (x) wedge^2 R^3.

    The grade-2 basis is ``(e1^e2, e1^e3, e2^e3)`` so ``e3^e1 = -(e1^e3)``
    contributes a minus sign. The line it spans is fixed (up to ``det A``) by
    every ``A (x) A^2``.
    """
    v = np.zeros(9)
    v[0 * 3 + 2] = 1.0
    v[1 * 3 + 1] = -1.0
    v[2 * 3 + 0] = 1.0
    return v
