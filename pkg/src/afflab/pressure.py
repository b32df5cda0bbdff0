"""Singular value function, subadditive pressure and affinity dimension."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import logsumexp

from .errors import InputError, PreconditionError
from .multilinear import as_matrix, exterior_power, is_invertible, kronecker_chain, singular_values
from .symbolic import MatrixTuple, check_budget, product_blocks

DEFAULT_DIMENSION_TOL = 1e-8
DEPTH_WORD_CAP = 10**6


@dataclass(frozen=True)
class SvfExponent:
    s: float
    d: int

    def __post_init__(self):
        if not (self.s >= 0 and math.isfinite(self.s)):
            raise InputError(f"exponent s={self.s} must be a finite real >= 0")

    @property
    def above_dimension(self) -> bool:
        return self.s >= self.d

    @property
    def k(self) -> int:
        return self.d if self.above_dimension else int(math.floor(self.s))


def _exponent(s, d: int) -> SvfExponent:
    if isinstance(s, SvfExponent):
        if s.d != d:
            raise InputError(f"exponent built for d={s.d}, matrix has d={d}")
        return s
    return SvfExponent(float(s), d)


def log_svf_from_log_singular_values(log_sv: np.ndarray, s) -> np.ndarray:
    """``log phi^s`` from log singular values along the last axis (sorted descending)."""
    log_sv = np.asarray(log_sv, dtype=float)
    d = log_sv.shape[-1]
    e = _exponent(s, d)
    if e.above_dimension:
        return (e.s / d) * log_sv.sum(axis=-1)
    k = e.k
    head = log_sv[..., :k].sum(axis=-1)
    frac = e.s - k
    if frac == 0.0:
        return head
    return head + frac * log_sv[..., k]


def svf(A, s) -> float:
    """``alpha_1 ... alpha_k alpha_{k+1}^{s-k}``; ``|det A|^{s/d}`` once ``s >= d``."""
    A = as_matrix(A)
    if not is_invertible(A):
        raise InputError("singular value function needs an invertible matrix")
    return float(np.exp(log_svf_from_log_singular_values(np.log(singular_values(A)), s)))


def sample_depths(n_max: int) -> list[int]:
    if n_max < 1:
        raise InputError("n_max must be >= 1")
    depths = []
    n = 1
    while n <= n_max:
        depths.append(n)
        n *= 2
    if depths[-1] != n_max:
        depths.append(n_max)
    return depths


def default_depth(n_maps: int, cap: int = DEPTH_WORD_CAP) -> int:
    """10 at N=2, lowered so that ``N^n <= cap``."""
    n = 10
    while n > 1 and n_maps**n > cap:
        n -= 1
    return n


@dataclass
class PressureEstimate:
    s: float
    samples: list[tuple[int, float]]
    value: float
    upper_bound: float
    uncertainty: float

    def sample(self, n: int) -> float:
        return dict(self.samples)[n]


def extrapolate(samples: list[tuple[int, float]]) -> tuple[float, float, float]:
    """Aitken-accelerated limit of ``a_n/n`` along dyadic ``n``.

    Returns ``(value, upper_bound, uncertainty)``. Every sample bounds the
    limit from above (it is the infimum of a subadditive sequence), so the
    value is clipped to the smallest sample.
    """
    upper = min(v for _, v in samples)
    dyadic = [v for n, v in samples if n & (n - 1) == 0]
    if len(dyadic) < 2:
        return dyadic[-1] if dyadic else upper, upper, 0.0
    gap = abs(dyadic[-1] - dyadic[-2])
    value = dyadic[-1]
    if len(dyadic) >= 3:
        x0, x1, x2 = dyadic[-3:]
        d1, d2 = x1 - x0, x2 - x1
        den = d2 - d1
        scale = max(1.0, abs(x0), abs(x1), abs(x2))
        if abs(den) > 1e-13 * scale and abs(d2) < abs(d1):
            value = x2 - d2 * d2 / den
    return min(value, upper), upper, gap


class WordSpectra:
    """Log singular values of every ``A_w``, ``|w|`` in the sample depths.

    Word products do not depend on ``s``, so one table serves every pressure
    evaluation of a bisection.
    """

    def __init__(self, tuple_: MatrixTuple, n_max: int, budget: int | None = None):
        self.tuple = tuple_
        self.depths = sample_depths(n_max)
        check_budget(tuple_.N, n_max, budget)
        self.log_sv: dict[int, np.ndarray] = {}
        for n in self.depths:
            chunks = [np.log(np.linalg.svd(block, compute_uv=False))
                      for block in product_blocks(tuple_, n, budget)]
            self.log_sv[n] = np.concatenate(chunks)

    def log_sums(self, s, potential: str = "svf") -> list[tuple[int, float]]:
        """``[(n, log sum_{|w|=n} f(A_w))]`` for ``f = phi^s`` or ``||.||^s``."""
        out = []
        for n in self.depths:
            L = self.log_sv[n]
            if potential == "svf":
                terms = log_svf_from_log_singular_values(L, s)
            elif potential == "norm":
                terms = float(s) * L[:, 0]
            else:
                raise InputError(f"unknown potential {potential!r}")
            out.append((n, float(logsumexp(terms))))
        return out

    def estimate(self, s, potential: str = "svf") -> PressureEstimate:
        s_val = float(s.s if isinstance(s, SvfExponent) else s)
        if s_val < 0 or not math.isfinite(s_val):
            raise InputError(f"exponent s={s_val} must be a finite real >= 0")
        samples = [(n, a / n) for n, a in self.log_sums(s_val, potential)]
        value, upper, gap = extrapolate(samples)
        return PressureEstimate(s_val, samples, value, upper, gap)


def pressure_estimate(tuple_: MatrixTuple, s, n_max: int = 8, budget: int | None = None) -> PressureEstimate:
    if tuple_.N == 1:
        return single_map_pressure(tuple_[0], s, n_max)
    return WordSpectra(tuple_, n_max, budget).estimate(s)


def norm_pressure_estimate(tuple_: MatrixTuple, s: float, n_max: int = 8,
                           budget: int | None = None) -> PressureEstimate:
    return WordSpectra(tuple_, n_max, budget).estimate(s, potential="norm")


def _log_norm_powers(B: np.ndarray, n_max: int) -> dict[int, float]:
    """``log ||B^n||`` for dyadic ``n <= n_max`` by normalized repeated squaring."""
    out = {}
    nrm = np.linalg.norm(B, 2)
    L, M = math.log(nrm), B / nrm
    n = 1
    while n <= n_max:
        out[n] = L
        M = M @ M
        nrm = np.linalg.norm(M, 2)
        L, M = 2 * L + math.log(nrm), M / nrm
        n *= 2
    return out


def single_map_pressure(A, s, n_max: int = 4096) -> PressureEstimate:
    """``lim (1/n) log phi^s(A^n)`` estimated along ``n = 1, 2, 4, ..., n_max``."""
    A = as_matrix(A)
    d = A.shape[0]
    e = _exponent(s, d)
    depths = [n for n in sample_depths(n_max) if n & (n - 1) == 0]
    if e.above_dimension:
        logdet = math.log(abs(np.linalg.det(A)))
        samples = [(n, e.s / d * logdet) for n in depths]
    else:
        k, frac = e.k, e.s - e.k
        lo = _log_norm_powers(exterior_power(A, k), depths[-1]) if k > 0 else None
        hi = _log_norm_powers(exterior_power(A, k + 1), depths[-1]) if frac > 0 else None
        # phi^s = ||A^k||^(k+1-s) ||A^(k+1)||^(s-k); grade 0 contributes log 1
        samples = [(n, ((1 - frac) * (lo[n] if lo else 0.0) + frac * (hi[n] if hi else 0.0)) / n)
                   for n in depths]
    value, upper, gap = extrapolate(samples)
    return PressureEstimate(e.s, samples, value, upper, gap)


@dataclass
class AffinityDimensionResult:
    dimension: float
    bracket: tuple[float, float]
    pressure_at_dimension: float
    depth: int
    clamped: bool = False
    pressure_uncertainty: float = 0.0
    dimension_uncertainty: float = 0.0
    evaluations: int = field(default=0, repr=False)


def affinity_dimension(tuple_: MatrixTuple, tol: float = DEFAULT_DIMENSION_TOL,
                       n_max: int | None = None, budget: int | None = None) -> AffinityDimensionResult:
    """Zero of ``s -> P(phi^s)`` by bisection, capped at ``d``."""
    if not tol > 0:
        raise InputError("tolerance must be > 0")
    norms = tuple_.norms()
    if np.any(norms >= 1.0):
        raise PreconditionError(f"affinity dimension needs ||A_i|| < 1, got max norm {norms.max():.17g}")
    d = tuple_.d
    if tuple_.N == 1:
        # P(phi^0) = log 1 = 0 and P is strictly decreasing for a contraction
        return AffinityDimensionResult(0.0, (0.0, 0.0), 0.0, 0)
    n = n_max or default_depth(tuple_.N)
    spectra = WordSpectra(tuple_, n, budget)
    calls = 0

    def pressure(s: float) -> PressureEstimate:
        nonlocal calls
        calls += 1
        return spectra.estimate(s)

    top = pressure(float(d))
    if top.value > 0:
        return AffinityDimensionResult(float(d), (float(d), float(d)), top.value, n, clamped=True,
                                       pressure_uncertainty=top.uncertainty, evaluations=calls)
    lo, hi = 0.0, float(d)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pressure(mid).value > 0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    at_root = pressure(root)
    h = min(1e-4, root, d - root) or 1e-6
    slope = (pressure(max(root - h, 0.0)).value - pressure(min(root + h, d)).value) / (2 * h)
    dim_unc = at_root.uncertainty / slope if slope > 0 else math.inf
    return AffinityDimensionResult(root, (lo, hi), at_root.value, n,
                                   pressure_uncertainty=at_root.uncertainty,
                                   dimension_uncertainty=dim_unc, evaluations=calls)


def reduce_fraction(p: int, q: int) -> tuple[int, int]:
    if q <= 0 or p <= 0:
        raise InputError("p and q must be positive integers")
    f = Fraction(p, q)
    return f.numerator, f.denominator


def rational_tensor_lift(A, p: int, q: int) -> np.ndarray:
    """Kronecker product of ``(k+1)q-p`` copies of ``A^k`` and ``p-kq`` copies of ``A^(k+1)``.

    Its operator norm is ``phi^{p/q}(A)^q``.
    """
    A = as_matrix(A)
    d = A.shape[0]
    p, q = reduce_fraction(p, q)
    if q == 1:
        raise InputError(f"s={p} is an integer; no lift needed")
    k = p // q
    if k > d - 1:
        raise InputError(f"s={p}/{q} must lie below d={d}")
    low, high = exterior_power(A, k), exterior_power(A, k + 1)
    return kronecker_chain([low] * ((k + 1) * q - p) + [high] * (p - k * q))
