"""Irreducibility certificates, condition C(s) falsification and the eigenvalue condition.

Real irreducibility is decided only up to explicit certificates: a full
generated algebra proves irreducibility, a verified invariant subspace proves
reducibility, anything else is reported as inconclusive.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .errors import InputError
from .multilinear import _minor_index, exterior_power
from .symbolic import MatrixTuple

SPAN_TOL = 1e-6
INVARIANCE_TOL = 1e-8
DISTINCT_TOL = 1e-8
E1_GAP_TOL = 1e-8
E2_MINOR_TOL = 1e-10
CS_TOL = 1e-9
CS_MAX_LEN = 6
CS_WORD_BUDGET = 10**5


class Verdict(str, enum.Enum):
    IRREDUCIBLE = "irreducible-certified"
    REDUCIBLE = "reducible-certified"
    INCONCLUSIVE = "inconclusive"


@dataclass
class IrreducibilityReport:
    verdict: Verdict
    dimension: int
    algebra_dimension: int
    certificate: np.ndarray | None = None
    invariance_residual: float | None = None
    probe_dimensions: list[int] = field(default_factory=list)
    stage: int = 1

    @property
    def certificate_dimension(self) -> int | None:
        return None if self.certificate is None else self.certificate.shape[1]


def _generators(tuple_) -> list[np.ndarray]:
    mats = tuple_.matrices if isinstance(tuple_, MatrixTuple) else tuple(tuple_)
    mats = [np.asarray(A, dtype=float) for A in mats]
    if not mats:
        raise InputError("need at least one matrix")
    n = mats[0].shape[0]
    if any(A.shape != (n, n) for A in mats):
        raise InputError("generators must be square matrices of one size")
    if not all(np.all(np.isfinite(A)) for A in mats):
        raise InputError("generators have non-finite entries")
    return mats


def _closure(seeds, maps, full_dim: int, tol: float = SPAN_TOL, max_passes: int | None = None):
    """Smallest subspace containing ``seeds`` and closed under every map (breadth first).

    Each pass orthogonalizes its candidate pool with largest-residual pivoting;
    without pivoting, nearly dependent candidates amplify rounding noise and
    inflate the span.
    """
    basis = np.zeros((0, full_dim))
    pool = [np.asarray(x, dtype=float).ravel() for x in seeds]
    passes = -1
    while pool and basis.shape[0] < full_dim and (max_passes is None or passes < max_passes):
        P = np.array(pool)
        norms = np.linalg.norm(P, axis=1)
        P = P[norms > 0] / norms[norms > 0, None]
        for _ in range(2):
            P = P - (P @ basis.T) @ basis
        added = []
        while len(P) and basis.shape[0] < full_dim:
            res = np.linalg.norm(P, axis=1)
            j = int(np.argmax(res))
            if res[j] <= tol:
                break
            q = P[j] / res[j]
            q = q - basis.T @ (basis @ q)
            q /= np.linalg.norm(q)
            basis = np.vstack([basis, q])
            added.append(q)
            P = np.delete(P, j, axis=0)
            P = P - np.outer(P @ q, q)
        pool = [f(y) for y in added for f in maps]
        passes += 1
    return list(basis)


def orbit_span(tuple_, w, max_len: int | None = None, tol: float = SPAN_TOL) -> tuple[int, np.ndarray]:
    """Dimension and orthonormal basis of ``span{A_i w : |i| <= max_len}``.

    Default ``max_len`` is ``d``: a pass that adds nothing means the span is
    closed, and at most ``d`` passes can add something.
    """
    mats = _generators(tuple_)
    w = np.asarray(w, dtype=float).ravel()
    n = mats[0].shape[0]
    if w.shape != (n,):
        raise InputError(f"vector has length {w.size}, expected {n}")
    if not np.any(w):
        raise InputError("orbit span needs a non-zero vector")
    maps = [lambda y, A=A: A @ y for A in mats]
    basis = _closure([w], maps, n, tol, n if max_len is None else max_len)
    return len(basis), np.array(basis).T


def generated_algebra(tuple_, tol: float = SPAN_TOL) -> np.ndarray:
    """Orthonormal (Frobenius) basis of ``span{A_i : i in Sigma_*}``, shape ``(dim, n, n)``."""
    mats = _generators(tuple_)
    n = mats[0].shape[0]
    maps = [lambda y, A=A: (A @ y.reshape(n, n)).ravel() for A in mats]
    basis = _closure([np.eye(n).ravel()], maps, n * n, tol)
    return np.array(basis).reshape(-1, n, n)


def invariance_residual(tuple_, Q: np.ndarray) -> float:
    """``max_i ||(I - QQ^T) A_i Q|| / ||A_i||`` for an orthonormal basis ``Q`` of V."""
    mats = _generators(tuple_)
    worst = 0.0
    for A in mats:
        AQ = A @ Q
        r = np.linalg.norm(AQ - Q @ (Q.T @ AQ), 2) / np.linalg.norm(A, 2)
        worst = max(worst, float(r))
    return worst


def _orth(vectors: np.ndarray) -> np.ndarray:
    U, sv, _ = np.linalg.svd(vectors, full_matrices=False)
    rank = int(np.sum(sv > SPAN_TOL * max(sv[0], 1e-300)))
    return U[:, :rank]


def _subspace_key(Q: np.ndarray):
    # prefer low dimension, then subspaces that contain e_1, e_2, ... most fully
    mass = np.linalg.norm(Q, axis=1)
    return (Q.shape[1],) + tuple(-np.round(mass, 9))


def _eigen_seeds(M: np.ndarray) -> list[list[np.ndarray]]:
    w, V = np.linalg.eig(M)
    seeds = []
    scale = max(np.max(np.abs(w)), 1e-300)
    for lam, v in zip(w, V.T):
        if abs(lam.imag) <= 1e-12 * scale:
            seeds.append([v.real])
        elif lam.imag > 0:
            seeds.append([v.real, v.imag])
    return seeds


def _short_word_element(mats: list[np.ndarray], rng) -> np.ndarray:
    words = [np.eye(mats[0].shape[0])] + list(mats) + [A @ B for A in mats for B in mats]
    coeffs = rng.standard_normal(len(words))
    return sum(c * W / np.linalg.norm(W, 2) for c, W in zip(coeffs, words))


def _invariant_candidates(mats: list[np.ndarray], M: np.ndarray) -> list[np.ndarray]:
    """Invariant subspaces generated by eigenvectors of an algebra element ``M``.

    Any proper invariant subspace is invariant under ``M`` and so contains one
    of its (real or complex-pair) eigenspaces; the orbit of such an
    eigenvector is a proper invariant subspace. Transposes catch invariant
    subspaces through their orthogonal complements.
    """
    n = mats[0].shape[0]
    out = []
    for transpose in (False, True):
        gens = [A.T for A in mats] if transpose else mats
        maps = [lambda y, A=A: A @ y for A in gens]
        for seed in _eigen_seeds(M.T if transpose else M):
            basis = _closure(seed, maps, n)
            if 0 < len(basis) < n:
                Q = np.array(basis).T
                if transpose:
                    # orthogonal complement of an A^T-invariant subspace is A-invariant
                    U, _, _ = np.linalg.svd(Q, full_matrices=True)
                    Q = U[:, Q.shape[1]:]
                out.append(_orth(Q))
    return out


def check_irreducible(tuple_, rng=None, probes: int = 32) -> IrreducibilityReport:
    """Three-stage decision: full algebra / verified invariant subspace / orbit probes."""
    mats = _generators(tuple_)
    rng = np.random.default_rng(rng)
    n = mats[0].shape[0]
    algebra = generated_algebra(mats)
    if len(algebra) == n * n:
        return IrreducibilityReport(Verdict.IRREDUCIBLE, n, len(algebra), stage=1)

    # a random combination of short words is exact to rounding; one drawn from
    # the orthonormalized algebra basis inherits its noise, so it is the fallback
    verified = []
    for M in (_short_word_element(mats, rng), np.tensordot(rng.standard_normal(len(algebra)), algebra, axes=1)):
        for Q in _invariant_candidates(mats, M):
            res = invariance_residual(mats, Q)
            if res <= INVARIANCE_TOL and 0 < Q.shape[1] < n:
                verified.append((Q, res))
        if verified:
            break
    if verified:
        Q, res = min(verified, key=lambda item: _subspace_key(item[0]))
        return IrreducibilityReport(Verdict.REDUCIBLE, n, len(algebra), Q, res, stage=2)

    dims = []
    vectors = list(rng.standard_normal((probes, n))) + list(np.eye(n))
    for w in vectors:
        dim, Q = orbit_span(mats, w)
        dims.append(dim)
        if dim < n:
            res = invariance_residual(mats, Q)
            if res <= INVARIANCE_TOL:
                return IrreducibilityReport(Verdict.REDUCIBLE, n, len(algebra), Q, res, dims, stage=3)
    return IrreducibilityReport(Verdict.INCONCLUSIVE, n, len(algebra), probe_dimensions=dims, stage=3)


def exterior_tuple(tuple_: MatrixTuple, k: int) -> list[np.ndarray]:
    if not 0 <= k <= tuple_.d:
        raise InputError(f"grade k={k} out of range 0..{tuple_.d}")
    return list(exterior_power(tuple_.stack, k))


def tensor_tuple(tuple_: MatrixTuple, k: int) -> list[np.ndarray]:
    """``(A_i^k (x) A_i^(k+1))_i``."""
    if not 0 <= k <= tuple_.d - 1:
        raise InputError(f"grade k={k} out of range 0..{tuple_.d - 1}")
    return [np.kron(exterior_power(A, k), exterior_power(A, k + 1)) for A in tuple_.matrices]


def check_k_irreducible(tuple_: MatrixTuple, k: int, rng=None) -> IrreducibilityReport:
    return check_irreducible(exterior_tuple(tuple_, k), rng)


def check_s_irreducible_sufficient(tuple_: MatrixTuple, k: int, rng=None) -> IrreducibilityReport:
    """Irreducibility of the tensor tuple; a certified pass implies s-irreducibility for k < s < k+1.

    A reducible verdict says nothing about s-irreducibility.
    """
    return check_irreducible(tensor_tuple(tuple_, k), rng)


@dataclass
class CsResult:
    k: int
    trials: int
    max_len: int
    words_checked: int
    counterexample: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray] | None = None

    @property
    def verdict(self) -> str:
        return "Counterexample" if self.counterexample is not None else "NoCounterexampleFound"


def _words_upto(N: int, L: int):
    for length in range(L + 1):
        yield from product(range(N), repeat=length)


def _random_wedge_vector(rng, dim: int) -> np.ndarray:
    if rng.random() < 0.5:
        return rng.standard_normal(dim)
    v = np.zeros(dim)
    v[rng.integers(dim)] = 1.0
    return v


def check_condition_Cs_sampled(tuple_: MatrixTuple, k: int, trials: int = 100, max_len: int = CS_MAX_LEN,
                               rng=None, quadruples=(), tol: float = CS_TOL,
                               word_budget: int = CS_WORD_BUDGET) -> CsResult:
    """Randomized search for ``(v1, w1, v2, w2)`` with no witness word of length ``<= max_len``.

    A witness ``A_i`` needs ``<v1, A_i^k w1> != 0`` and ``<v2, A_i^(k+1) w2> != 0``
    (relative margin ``tol``). Quadruples mix Gaussian and coordinate vectors;
    ``quadruples`` adds explicit ones. A counterexample only means no witness was
    found up to ``max_len``.
    """
    d, N = tuple_.d, tuple_.N
    if not 0 <= k <= d - 1:
        raise InputError(f"grade k={k} out of range 0..{d - 1}")
    if trials < 1:
        raise InputError("trials must be >= 1")
    rng = np.random.default_rng(rng)
    while max_len > 0 and sum(N**m for m in range(max_len + 1)) > word_budget:
        max_len -= 1
    prods = np.array([np.linalg.multi_dot([np.eye(d)] + [tuple_[i] for i in w] + [np.eye(d)])
                      for w in _words_upto(N, max_len)])
    lo, hi = exterior_power(prods, k), exterior_power(prods, k + 1)
    lo_scale = np.linalg.norm(lo, axis=(1, 2))
    hi_scale = np.linalg.norm(hi, axis=(1, 2))
    c_lo, c_hi = lo.shape[-1], hi.shape[-1]

    def has_witness(v1, w1, v2, w2) -> bool:
        a = np.abs(np.einsum("i,wij,j->w", v1, lo, w1))
        b = np.abs(np.einsum("i,wij,j->w", v2, hi, w2))
        ok_a = a > tol * lo_scale * np.linalg.norm(v1) * np.linalg.norm(w1)
        ok_b = b > tol * hi_scale * np.linalg.norm(v2) * np.linalg.norm(w2)
        return bool(np.any(ok_a & ok_b))

    candidates = [tuple(np.asarray(x, dtype=float).ravel() for x in q) for q in quadruples]
    for q in candidates:
        if [x.size for x in q] != [c_lo, c_lo, c_hi, c_hi]:
            raise InputError(f"quadruple components must have sizes {(c_lo, c_lo, c_hi, c_hi)}")
    candidates += [(_random_wedge_vector(rng, c_lo), _random_wedge_vector(rng, c_lo),
                    _random_wedge_vector(rng, c_hi), _random_wedge_vector(rng, c_hi))
                   for _ in range(trials)]
    for q in candidates:
        if not has_witness(*q):
            return CsResult(k, trials, max_len, len(prods), q)
    return CsResult(k, trials, max_len, len(prods))


@dataclass
class EigenvalueConditionReport:
    pair: tuple[int, int]
    distinct_spectrum: tuple[bool, bool]
    e1: bool
    e1_min_gap: float
    e2: bool
    e2_min_minor: float
    X: np.ndarray | None = None
    eigenvalues: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def satisfied(self) -> bool:
        return all(self.distinct_spectrum) and self.e1 and self.e2


def real_eigenbasis(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and a real eigenbasis (columns).

    A complex pair contributes the principal axes of its invariant plane: the
    real then imaginary part of the eigenvector for ``Im(lambda) > 0``, rotated
    in phase so the two parts are orthogonal and the real part is the longer.
    """
    w, V = np.linalg.eig(A)
    scale = max(np.max(np.abs(w)), 1e-300)
    cols, vals = [], []
    for lam, v in zip(w, V.T):
        if abs(lam.imag) <= 1e-12 * scale:
            x = v.real / np.linalg.norm(v.real)
            cols.append(x * np.sign(x[np.argmax(np.abs(x))]))
            vals.append(complex(lam.real, 0.0))
        elif lam.imag > 0:
            theta = -0.5 * np.angle(np.sum(v * v))
            u = v * np.exp(1j * theta)
            if np.linalg.norm(u.real) < np.linalg.norm(u.imag):
                u = u * 1j
            sign = np.sign(u.real[np.argmax(np.abs(u.real))])
            u = u * sign
            cols += [u.real, u.imag]
            vals += [lam, np.conj(lam)]
    return np.array(vals), np.array(cols).T


def _min_relative_gap(values: np.ndarray) -> float:
    if len(values) < 2:
        return np.inf
    diff = np.abs(values[:, None] - values[None, :])
    size = np.maximum(np.abs(values[:, None]), np.abs(values[None, :]))
    iu = np.triu_indices(len(values), 1)
    return float(np.min(diff[iu] / size[iu]))


def _subset_products(lams: np.ndarray, k: int) -> np.ndarray:
    idx = _minor_index(len(lams), k)
    return np.prod(lams[idx], axis=1)


def min_relative_minor(X: np.ndarray) -> float:
    """``min |minor| / prod(row norms of the minor's submatrix)`` over every square minor of ``X``."""
    d = X.shape[0]
    worst = np.inf
    for k in range(1, d + 1):
        idx = _minor_index(d, k)
        minors = np.abs(exterior_power(X, k))
        # sub[S, T, r, c] = X[S_r, T_c]
        sub = X[idx[:, None, :, None], idx[None, :, None, :]]
        bound = np.prod(np.linalg.norm(sub, axis=3), axis=2)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(bound > 0, minors / bound, 0.0)
        worst = min(worst, float(np.min(ratio)))
    return worst


def eigenvalue_condition_pair(A1: np.ndarray, A2: np.ndarray, pair=(1, 2), gap_tol: float = E1_GAP_TOL,
                              minor_tol: float = E2_MINOR_TOL) -> EigenvalueConditionReport:
    d = A1.shape[0]
    spectra, bases, distinct = [], [], []
    for A in (A1, A2):
        try:
            lams, E = real_eigenbasis(A)
            ok = _min_relative_gap(lams) > DISTINCT_TOL and np.linalg.cond(E) < 1e12
        except np.linalg.LinAlgError:
            lams, E, ok = np.full(d, np.nan), None, False
        spectra.append(lams)
        bases.append(E)
        distinct.append(bool(ok))
    gap = np.inf
    for lams in spectra:
        for k in range(1, d):
            gap = min(gap, _min_relative_gap(_subset_products(lams, k)))
    e1 = all(distinct) and gap > gap_tol
    X, minor = None, 0.0
    if all(distinct):
        # coordinates of A1's eigenvectors in A2's eigenbasis: X e_i' = e_i
        X = np.linalg.solve(bases[1], bases[0])
        minor = min_relative_minor(X)
    e2 = all(distinct) and minor > minor_tol
    return EigenvalueConditionReport(tuple(pair), tuple(distinct), bool(e1), float(gap), bool(e2),
                                     float(minor), X, tuple(spectra))


def check_eigenvalue_condition(tuple_: MatrixTuple, gap_tol: float = E1_GAP_TOL,
                               minor_tol: float = E2_MINOR_TOL) -> tuple[list[EigenvalueConditionReport], bool]:
    """Per-pair E1/E2 reports for every ``i < j``; the tuple passes if any pair does."""
    reports = [eigenvalue_condition_pair(tuple_[i], tuple_[j], (i + 1, j + 1), gap_tol, minor_tol)
               for i in range(tuple_.N) for j in range(i + 1, tuple_.N)]
    return reports, any(r.satisfied for r in reports)
