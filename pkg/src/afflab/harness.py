"""Dimension-drop experiments, random tuple sampling and genericity surveys."""
from __future__ import annotations

import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, PreconditionError
from .irreducibility import E1_GAP_TOL, E2_MINOR_TOL, check_eigenvalue_condition
from .multilinear import is_invertible, operator_norm
from .pressure import (AffinityDimensionResult, DEFAULT_DIMENSION_TOL, WordSpectra, affinity_dimension,
                       rational_tensor_lift, reduce_fraction, svf)
from .symbolic import MatrixTuple

DROP_CAP = 0.5


@dataclass
class Removal:
    index: int
    result: AffinityDimensionResult
    gap: float
    tolerance: float


@dataclass
class DropReport:
    base: AffinityDimensionResult
    removed: list[Removal]
    eigenvalue_condition: bool
    cap_ok: bool
    strict_drop: str  # "asserted", "failed" or "not asserted"
    notes: list[str] = field(default_factory=list)

    @property
    def conditions_hold(self) -> bool:
        return self.eigenvalue_condition and self.cap_ok


def _combined_tolerance(a: AffinityDimensionResult, b: AffinityDimensionResult) -> float:
    width = lambda r: r.bracket[1] - r.bracket[0]
    return width(a) + width(b) + a.dimension_uncertainty + b.dimension_uncertainty


def drop_experiment(tuple_: MatrixTuple, tol: float = DEFAULT_DIMENSION_TOL, n_max: int | None = None,
                    budget: int | None = None, gap_tol: float = E1_GAP_TOL,
                    minor_tol: float = E2_MINOR_TOL) -> DropReport:
    """Affinity dimension of the tuple and of every tuple with one map removed.

    A strict drop is asserted only under the eigenvalue condition and
    ``||A_i|| < 1/2``, and only if every gap clears both brackets plus the
    propagated pressure uncertainty.
    """
    base = affinity_dimension(tuple_, tol, n_max, budget)
    removed = []
    for j in range(1, tuple_.N + 1):
        sub = tuple_.without(j)
        res = affinity_dimension(sub, tol, n_max, budget)
        removed.append(Removal(j, res, base.dimension - res.dimension, _combined_tolerance(base, res)))
    _, eig_ok = check_eigenvalue_condition(tuple_, gap_tol, minor_tol) if tuple_.N >= 2 else ([], False)
    cap_ok = bool(np.all(tuple_.norms() < DROP_CAP))
    notes = []
    if not eig_ok:
        notes.append("eigenvalue condition not met")
    if not cap_ok:
        notes.append(f"some ||A_i|| >= {DROP_CAP}")
    if eig_ok and cap_ok:
        strict = "asserted" if all(r.gap > r.tolerance for r in removed) else "failed"
    else:
        strict = "not asserted"
    return DropReport(base, removed, bool(eig_ok), cap_ok, strict, notes)


def sample_tuple(d: int, N: int, cap: float = DROP_CAP, seed=None) -> MatrixTuple:
    """Gaussian matrices rescaled to operator norm uniform in ``[cap/2, cap)``."""
    if not 0 < cap < 1:
        raise InputError("cap must lie in (0, 1)")
    if d < 1 or N < 2:
        raise InputError("need d >= 1 and N >= 2")
    rng = np.random.default_rng(seed)
    mats = []
    while len(mats) < N:
        G = rng.standard_normal((d, d))
        if not is_invertible(G):
            continue
        mats.append(G * (rng.uniform(cap / 2, cap) / operator_norm(G)))
    return MatrixTuple(tuple(mats))


@dataclass
class TrialRow:
    trial: int
    sub_seed: int
    eigenvalue_condition: bool
    min_e1_gap: float
    min_e2_minor: float
    strict_drop: str = "skipped"
    min_gap: float = math.nan
    error: str = ""


@dataclass
class SurveyReport:
    d: int
    N: int
    trials: int
    seed: int
    cap: float
    rows: list[TrialRow]

    @property
    def eigenvalue_pass_fraction(self) -> float:
        return sum(r.eigenvalue_condition for r in self.rows) / self.trials

    @property
    def strict_drop_fraction(self) -> float:
        checked = [r for r in self.rows if r.strict_drop != "skipped"]
        if not checked:
            return math.nan
        return sum(r.strict_drop == "asserted" for r in checked) / len(checked)


def _run_trial(args) -> TrialRow:
    trial, sub_seed, d, N, cap, with_drop, n_max, tol, gap_tol, minor_tol = args
    try:
        tup = sample_tuple(d, N, cap, sub_seed)
        reports, ok = check_eigenvalue_condition(tup, gap_tol, minor_tol)
        row = TrialRow(trial, sub_seed, ok,
                       max(r.e1_min_gap for r in reports), max(r.e2_min_minor for r in reports))
        if with_drop:
            rep = drop_experiment(tup, tol, n_max, gap_tol=gap_tol, minor_tol=minor_tol)
            row.strict_drop = rep.strict_drop
            row.min_gap = min(r.gap for r in rep.removed)
        return row
    except Exception as exc:  # recorded, never aborts the survey
        return TrialRow(trial, sub_seed, False, math.nan, math.nan, error=f"{type(exc).__name__}: {exc}")


def genericity_survey(d: int, N: int, trials: int, seed: int = 0, cap: float = DROP_CAP,
                      with_drop: bool = False, n_max: int | None = None, tol: float = DEFAULT_DIMENSION_TOL,
                      gap_tol: float = E1_GAP_TOL, minor_tol: float = E2_MINOR_TOL,
                      workers: int = 1) -> SurveyReport:
    """Sample tuples and tally the eigenvalue condition (and optionally strict drops).

    Trial ``t`` uses sub-seed ``SeedSequence(seed).generate_state(trials)[t]``, so
    any row replays alone through ``sample_tuple(d, N, cap, sub_seed)``. The
    per-pair E1 gap and E2 minor columns report the best pair of the tuple.
    """
    if trials < 1:
        raise InputError("trials must be >= 1")
    sub_seeds = np.random.SeedSequence(seed).generate_state(trials)
    jobs = [(t, int(s), d, N, cap, with_drop, n_max, tol, gap_tol, minor_tol) for t, s in enumerate(sub_seeds)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers,
                                 mp_context=multiprocessing.get_context("forkserver")) as pool:
            rows = list(pool.map(_run_trial, jobs))
    else:
        rows = [_run_trial(job) for job in jobs]
    return SurveyReport(d, N, trials, seed, cap, rows)


@dataclass
class RationalLiftCheck:
    p: int
    q: int
    lifted_dimension: int
    max_lift_error: float
    pressure_samples: list[tuple[int, float]]
    lifted_norm_samples: list[tuple[int, float]]
    max_sample_difference: float
    pressure_value: float


def rational_lift_check(tuple_: MatrixTuple, p: int, q: int, n_max: int = 8,
                        budget: int | None = None) -> RationalLiftCheck:
    """Check ``phi^{p/q}(A) = ||A'||^{1/q}`` per map and compare pressures of the tuple and its lift.

    Since the lift is multiplicative along words, ``P_A(phi^{p/q})`` and the
    ``||.||^{1/q}`` pressure of the lifted tuple agree sample by sample. The
    pressure value is reported as a residual; it is never assumed to vanish.
    """
    p, q = reduce_fraction(p, q)
    s = p / q
    if s >= tuple_.d:
        raise PreconditionError(f"s = {p}/{q} must be below d = {tuple_.d}")
    lifted = [rational_tensor_lift(A, p, q) for A in tuple_.matrices]
    errors = [abs(math.log(svf(A, s)) - math.log(operator_norm(L)) / q) for A, L in zip(tuple_.matrices, lifted)]
    base = WordSpectra(tuple_, n_max, budget).estimate(s)
    lift_tuple = MatrixTuple(tuple(lifted), reduced=tuple_.reduced)
    lifted_est = WordSpectra(lift_tuple, n_max, budget).estimate(1.0 / q, potential="norm")
    diff = max(abs(a - b) for (_, a), (_, b) in zip(base.samples, lifted_est.samples))
    return RationalLiftCheck(p, q, lifted[0].shape[0], max(errors), base.samples, lifted_est.samples,
                             diff, base.value)
