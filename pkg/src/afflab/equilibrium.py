"""Depth-n Gibbs approximations of phi^s-equilibrium states and their diagnostics."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp, xlogy

from .errors import InputError
from .pressure import log_svf_from_log_singular_values, pressure_estimate
from .symbolic import MatrixTuple, index_word, product_blocks, word_index


def log_svf_words(tuple_: MatrixTuple, s, n: int, budget: int | None = None) -> np.ndarray:
    """``log phi^s(A_w)`` for every ``w`` in ``Sigma_n``, lexicographic order."""
    chunks = [log_svf_from_log_singular_values(np.log(np.linalg.svd(b, compute_uv=False)), s)
              for b in product_blocks(tuple_, n, budget)]
    return np.concatenate(chunks)


@dataclass(frozen=True)
class CylinderMeasure:
    """Weights of the depth-n cylinders, stored in lexicographic word order."""

    depth: int
    n_maps: int
    s: float
    weights: np.ndarray
    log_normalizer: float

    def weight(self, word) -> float:
        if len(word) != self.depth:
            raise InputError(f"word length {len(word)} != depth {self.depth}")
        return float(self.weights[word_index(word, self.n_maps)])

    def items(self):
        for i, w in enumerate(self.weights):
            yield index_word(i, self.n_maps, self.depth), float(w)

    def marginal(self, m: int) -> np.ndarray:
        """Weights of the depth-m cylinders (sums over extensions), ``0 <= m <= depth``."""
        if not 0 <= m <= self.depth:
            raise InputError(f"marginal depth {m} outside 0..{self.depth}")
        return self.weights.reshape(self.n_maps**m, -1).sum(axis=1)

    def shift_defect(self, m: int) -> float:
        """``max_w |mu[w] - sum_i mu[iw]|`` over ``|w| = m < depth``; zero for shift-invariant measures."""
        if not 0 <= m < self.depth:
            raise InputError(f"depth {m} must be below {self.depth}")
        coarse = self.marginal(m)
        pulled = self.marginal(m + 1).reshape(self.n_maps, -1).sum(axis=0)
        return float(np.max(np.abs(coarse - pulled)))


def gibbs_approximation(tuple_: MatrixTuple, s, n: int, budget: int | None = None) -> CylinderMeasure:
    """``mu_n[w] = phi^s(A_w) / Z_n`` over ``Sigma_n``."""
    if n < 1:
        raise InputError("depth n must be >= 1")
    logs = log_svf_words(tuple_, s, n, budget)
    log_z = float(logsumexp(logs))
    weights = np.exp(logs - log_z)
    weights /= weights.sum()
    weights.setflags(write=False)
    return CylinderMeasure(n, tuple_.N, float(getattr(s, "s", s)), weights, log_z)


def entropy_estimate(mu: CylinderMeasure) -> float:
    return float(-xlogy(mu.weights, mu.weights).sum() / mu.depth)


def lyapunov_estimate(tuple_: MatrixTuple, s, mu: CylinderMeasure, budget: int | None = None) -> float:
    if mu.n_maps != tuple_.N:
        raise InputError("measure and tuple disagree on N")
    logs = log_svf_words(tuple_, s, mu.depth, budget)
    return float(np.dot(mu.weights, logs) / mu.depth)


@dataclass
class VariationalDiagnostics:
    depth: int
    entropy_estimate: float
    lyapunov_estimate: float
    normalized_log_sum: float
    pressure_value: float
    pressure_uncertainty: float
    slack: float
    gibbs_constant_estimate: float


def variational_check(tuple_: MatrixTuple, s, n: int, pressure: float | None = None,
                      budget: int | None = None) -> VariationalDiagnostics:
    """Compare ``h_n + lambda_n`` of the depth-n Gibbs approximation with the pressure.

    ``h_n + lambda_n = (1/n) log Z_n`` identically, so ``slack`` measures how far
    the depth-n sample sits above the extrapolated pressure.
    """
    mu = gibbs_approximation(tuple_, s, n, budget)
    h = entropy_estimate(mu)
    lam = lyapunov_estimate(tuple_, s, mu, budget)
    uncertainty = 0.0
    if pressure is None:
        est = pressure_estimate(tuple_, s, n, budget)
        pressure, uncertainty = est.value, est.uncertainty
    C = gibbs_ratio_diagnostic(tuple_, s, n, pressure, budget, measure=mu)
    return VariationalDiagnostics(n, h, lam, mu.log_normalizer / n, pressure, uncertainty,
                                  pressure - (h + lam), C)


def gibbs_ratio_diagnostic(tuple_: MatrixTuple, s, n: int, P: float, budget: int | None = None,
                           measure: CylinderMeasure | None = None) -> float:
    """Empirical Gibbs constant: ``max`` over ``|w| <= n`` of ``mu[w] e^{|w| P} / phi^s(A_w)`` and its inverse."""
    mu = measure if measure is not None else gibbs_approximation(tuple_, s, n, budget)
    worst = 0.0
    for m in range(1, n + 1):
        log_ratio = np.log(mu.marginal(m)) + m * P - log_svf_words(tuple_, s, m, budget)
        worst = max(worst, float(np.max(np.abs(log_ratio))))
    return math.exp(worst)
