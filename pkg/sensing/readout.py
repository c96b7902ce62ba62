"""
    Threshold readout of telegraph traces and its error budget.
"""
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from helpers.errors import DomainError, FitError
from helpers.log import configure_logger
from sensing.telegraph import LOADED, EMPTY, TelegraphModel, TelegraphTrace, simulate_trace

logger = configure_logger(__name__)

EM_TOL = 1e-10
EM_MAX_ITER = 2000


def analytic_error(counts_loaded: float, counts_empty: float, threshold: float,
                   weight_loaded: float = 0.5) -> float:
    """
    Misclassification probability of non-switching bins for Poisson shot noise

    Counts at or below the threshold are assigned to the lower level.
    """
    low, high = sorted((counts_loaded, counts_empty))
    w_low = weight_loaded if counts_loaded <= counts_empty else 1 - weight_loaded
    if low == high:
        return 0.5
    k = np.floor(threshold)
    return float(w_low * stats.poisson.sf(k, low) + (1 - w_low) * stats.poisson.cdf(k, high))


def optimal_threshold(counts_loaded: float, counts_empty: float, weight_loaded: float = 0.5) -> int:
    """Integer threshold between the two means minimising analytic_error"""
    low, high = sorted((counts_loaded, counts_empty))
    candidates = np.arange(int(np.floor(low)), int(np.ceil(high)) + 1)
    errors = [analytic_error(counts_loaded, counts_empty, k, weight_loaded) for k in candidates]
    return int(candidates[int(np.argmin(errors))])


@dataclass(frozen=True)
class Classification:
    """
    :param states: classified state per bin
    :param threshold: count threshold used
    :param error_probability: misclassified fraction over all bins
    :param error_probability_pure: misclassified fraction over bins without a switch
    :param error_std: binomial standard error of error_probability_pure, floored at 1/n
    :param analytic_error: Poisson-overlap prediction for non-switching bins
    :param flagged: threshold outside the two mean count levels
    """
    states: np.ndarray
    threshold: float
    error_probability: float
    error_probability_pure: float
    error_std: float
    analytic_error: float
    flagged: bool

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if k != 'states'}


def classify(trace: TelegraphTrace, threshold: Optional[float] = None) -> Classification:
    """
    Assign each bin to the level its counts fall on

    With equal levels the assignment is a seeded coin flip.

    :param trace: simulated trace
    :param threshold: count threshold, defaults to optimal_threshold of the model levels
    :return: Classification against the majority-state ground truth
    """
    m = trace.model
    lam_l, lam_e = m.counts_loaded, m.counts_empty
    w = m.pure_weight_loaded
    counts = trace.counts
    truth = trace.truth
    if lam_l == lam_e:
        rng = np.random.default_rng(np.random.SeedSequence(m.seed, spawn_key=(1,)))
        states = rng.integers(0, 2, size=len(counts))
        threshold = lam_l if threshold is None else threshold
        predicted = 0.5
        flagged = False
    else:
        threshold = optimal_threshold(lam_l, lam_e, w) if threshold is None else threshold
        below = counts <= np.floor(threshold)
        lower_state = LOADED if lam_l < lam_e else EMPTY
        states = np.where(below, lower_state, 1 - lower_state)
        predicted = analytic_error(lam_l, lam_e, threshold, w)
        flagged = not (min(lam_l, lam_e) <= threshold <= max(lam_l, lam_e))
        if flagged:
            logger.warning(f"threshold {threshold:g} lies outside the mean levels {lam_l:g} and {lam_e:g}")

    wrong = states != truth
    pure = trace.pure
    n_pure = int(pure.sum())
    error_pure = float(wrong[pure].mean()) if n_pure else float('nan')
    if n_pure:
        error_std = max(np.sqrt(error_pure * (1 - error_pure) / n_pure), 1 / n_pure)
    else:
        error_std = float('nan')
    return Classification(
        states=states,
        threshold=float(threshold),
        error_probability=float(wrong.mean()),
        error_probability_pure=error_pure,
        error_std=float(error_std),
        analytic_error=predicted,
        flagged=flagged,
    )


@dataclass(frozen=True)
class HistogramFit:
    """
    :param histogram: DataFrame (counts, occurrences)
    :param means: fitted mean counts (loaded, empty)
    :param weights: fitted weights (loaded, empty)
    :param weight_std: expected spread of the loaded weight over a finite trace
    :param valley_ratio: mixture minimum between the means over the lower peak height
    :param iterations: EM iterations used
    """
    histogram: pd.DataFrame
    means: tuple
    weights: tuple
    weight_std: float
    valley_ratio: float
    iterations: int

    def as_dict(self) -> dict:
        return {
            'mean_loaded': self.means[0], 'mean_empty': self.means[1],
            'weight_loaded': self.weights[0], 'weight_empty': self.weights[1],
            'weight_std': self.weight_std, 'valley_ratio': self.valley_ratio,
            'iterations': self.iterations,
        }


def fit_poisson_mixture(counts: np.ndarray, max_iter: int = EM_MAX_ITER, tol: float = EM_TOL):
    """
    Expectation-maximisation fit of a two-component Poisson mixture

    :return: (means, weights, iterations) with means ascending
    """
    counts = np.asarray(counts, dtype=float)
    means = np.quantile(counts, [0.25, 0.75]).astype(float)
    if means[0] == means[1]:
        means = means + np.array([-0.5, 0.5])
    means = np.maximum(means, 1e-3)
    weights = np.array([0.5, 0.5])
    previous = -np.inf
    for iteration in range(1, max_iter + 1):
        log_p = np.log(weights)[None, :] + stats.poisson.logpmf(counts[:, None], means[None, :])
        norm = np.logaddexp(log_p[:, 0], log_p[:, 1])
        resp = np.exp(log_p - norm[:, None])
        loglik = norm.sum()
        mass = resp.sum(axis=0)
        if np.any(mass <= 0):
            raise FitError("a mixture component lost all its weight", iteration=iteration)
        weights = mass / len(counts)
        means = np.maximum((resp * counts[:, None]).sum(axis=0) / mass, 1e-3)
        if abs(loglik - previous) <= tol * abs(loglik):
            order = np.argsort(means)
            return means[order], weights[order], iteration
        previous = loglik
    raise FitError(f"mixture fit did not converge in {max_iter} iterations",
                   means=str(means), weights=str(weights))


def histogram(trace: TelegraphTrace) -> HistogramFit:
    """Count histogram of a trace and its two-peak fit, components ordered (loaded, empty)"""
    counts = trace.counts
    if len(counts) < 1000:
        logger.warning(f"histogram of only {len(counts)} bins")
    values, occurrences = np.unique(counts, return_counts=True)
    table = pd.DataFrame({'counts': values, 'occurrences': occurrences})

    means, weights, iterations = fit_poisson_mixture(counts)
    m = trace.model
    if m.counts_loaded > m.counts_empty:
        means, weights = means[::-1], weights[::-1]

    k = np.arange(int(np.floor(min(means))), int(np.ceil(max(means))) + 1)
    mixture = weights[0] * stats.poisson.pmf(k, means[0]) + weights[1] * stats.poisson.pmf(k, means[1])
    peaks = [w * stats.poisson.pmf(np.floor(mu), mu) for w, mu in zip(weights, means)]
    valley_ratio = float(mixture.min() / min(peaks))

    duration = trace.n_bins * m.dt
    weight_std = np.sqrt(2 * m.occupancy_loaded * m.occupancy_empty / ((m.k_cap + m.k_rel) * duration))
    return HistogramFit(
        histogram=table,
        means=(float(means[0]), float(means[1])),
        weights=(float(weights[0]), float(weights[1])),
        weight_std=float(weight_std),
        valley_ratio=valley_ratio,
        iterations=iterations,
    )


def error_curve(model: TelegraphModel, fluxes: Sequence[float], duration: float) -> pd.DataFrame:
    """
    Classification error against incident flux, same seed at every flux

    :return: DataFrame (flux, threshold, error, error_pure, error_std, analytic_error)
    """
    rows = []
    for flux in fluxes:
        result = classify(simulate_trace(replace(model, flux=flux), duration))
        rows.append({
            'flux': flux,
            'threshold': result.threshold,
            'error': result.error_probability,
            'error_pure': result.error_probability_pure,
            'error_std': result.error_std,
            'analytic_error': result.analytic_error,
        })
    return pd.DataFrame(rows)
