"""Power-law fitting for degree distributions.

Two estimators:

* ``fit_cdf_ls`` — ordinary least squares on the log-log CCDF, reporting the
  regression R².
* ``fit_mle_ks`` — discrete maximum likelihood with the lower cutoff chosen
  by minimizing the Kolmogorov-Smirnov distance over candidate ``x_min``
  values (Clauset-style), reporting the KS distance and tail size.

Both report alpha in the density convention: a density ~ x^(-alpha) has a
CCDF decaying as x^(-(alpha-1)), so the least-squares alpha is
1 + |CCDF slope|.  The raw slope is always kept alongside.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import zeta

from .network import CcdfPoints, DegreeDistribution

CDF_LS = "cdf_ls"
MLE_KS = "mle_ks"

#: candidate x_min values must leave at least this many distinct degrees in
#: the tail, so a "fit" never describes a vacuously small remnant
MIN_TAIL_POINTS = 5

#: below this many distinct positive degrees an MLE fit is flagged
LOW_CONFIDENCE_DISTINCT = 10


@dataclass(frozen=True)
class FitResult:
    """One fitted power law.

    Attributes
    ----------
    fit_method : str
        ``CDF_LS`` or ``MLE_KS``.
    alpha : float
        Density-convention scaling parameter.
    x_min : int
        Lower cutoff of the fitted tail.
    n_tail : int
        Authors with degree >= x_min.
    tail_ratio : float
        n_tail over the authors in the distribution the fit was given.
    r_squared, slope, intercept : float or None
        Regression diagnostics; least-squares fits only.
    ks_distance : float or None
        Tail-renormalized KS distance; MLE fits only.
    """

    fit_method: str
    alpha: float
    x_min: int
    n_tail: int
    tail_ratio: float
    r_squared: float | None = None
    slope: float | None = None
    intercept: float | None = None
    ks_distance: float | None = None


@dataclass(frozen=True)
class FitSummary:
    """Mean and population SD of alpha (and R² where present) over fits."""

    mean_alpha: float
    sd_alpha: float
    mean_r2: float | None
    sd_r2: float | None


def fit_cdf_ls(points: CcdfPoints, x_min: int = 1) -> FitResult:
    """Least-squares power-law fit on the log-log CCDF.

    Regresses log10(fraction) on log10(x) over the points with x >= x_min,
    one unweighted point per distinct degree.  Returns alpha = 1 + |slope|
    with the raw slope, intercept, and the coefficient of determination.

    Raises ``ValueError`` when fewer than 3 points remain or log10(x) has no
    variance.
    """
    kept = [(x, f) for x, f in points.points if x >= x_min]
    if len(kept) < 3:
        raise ValueError(f"need >= 3 CCDF points with x >= {x_min}, have {len(kept)}")
    xs = np.log10([x for x, _ in kept])
    ys = np.log10([f for _, f in kept])
    x_ctr = xs - xs.mean()
    sxx = float(x_ctr @ x_ctr)
    if sxx == 0.0:
        raise ValueError("zero variance in log x")
    slope = float(x_ctr @ (ys - ys.mean())) / sxx
    intercept = float(ys.mean() - slope * xs.mean())
    resid = ys - (slope * xs + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((ys - ys.mean()) ** 2).sum())
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    # CCDF fractions are exact ratios over the stored denominator, so the
    # tail head count can be recovered without the original histogram.
    n_tail = round(kept[0][1] * points.denominator)
    return FitResult(
        fit_method=CDF_LS,
        alpha=1.0 + abs(slope),
        x_min=x_min,
        n_tail=n_tail,
        tail_ratio=n_tail / points.denominator,
        r_squared=r_squared,
        slope=slope,
        intercept=intercept,
    )


def _tail_model_ccdf(alpha: float, xs: np.ndarray, x_min: float) -> np.ndarray:
    """P(X >= x | X >= x_min) for the discrete power law, per tail degree."""
    z0 = float(zeta(alpha, x_min))
    if z0 > 0.0 and math.isfinite(z0):
        return zeta(alpha, xs) / z0
    # For extreme alpha the Hurwitz zeta underflows; its leading term
    # dominates, so fall back to the term ratio.
    return (xs / x_min) ** (-alpha)


def fit_mle_ks(dist: DegreeDistribution, x_min: int | None = None) -> FitResult:
    """Discrete-MLE power-law fit with a KS-selected lower cutoff.

    For each candidate ``x_min`` among the observed degrees the estimator is
    ``alpha = 1 + n / sum(ln(x_i / (x_min - 0.5)))`` over the tail, and the
    KS distance is the largest gap between the empirical and model CCDFs,
    both renormalized to the tail.  The candidate with the smallest KS
    distance wins; ties go to the smallest ``x_min``.  Candidates are capped
    so the tail keeps at least ``MIN_TAIL_POINTS`` distinct degrees.

    Pass ``x_min`` to skip the scan and fit one forced cutoff.

    Raises ``ValueError`` when every author has the same degree (no tail to
    fit); warns when fewer than ``LOW_CONFIDENCE_DISTINCT`` distinct degrees
    exist.
    """
    pairs = sorted((x, c) for x, c in dist.counts.items() if x >= 1)
    if not pairs:
        raise ValueError("no authors with degree >= 1")
    if len(pairs) == 1:
        raise ValueError("all degrees equal; nothing to fit")
    if len(pairs) < LOW_CONFIDENCE_DISTINCT:
        warnings.warn(
            f"only {len(pairs)} distinct degrees; low-confidence fit",
            stacklevel=2,
        )
    xs = np.array([x for x, _ in pairs], dtype=float)
    counts = np.array([c for _, c in pairs], dtype=float)
    ln_xs = np.log(xs)
    # suffix sums: tail head count and tail sum of c*ln(x) from each index on
    tail_n = np.cumsum(counts[::-1])[::-1]
    tail_ln = np.cumsum((counts * ln_xs)[::-1])[::-1]

    if x_min is not None:
        if x_min < 1:
            raise ValueError("x_min must be >= 1")
        first = int(np.searchsorted(xs, x_min, side="left"))
        if first == len(xs):
            raise ValueError(f"no degrees at or above x_min={x_min}")
        candidates = [(first, float(x_min))]
    else:
        last = len(xs) - MIN_TAIL_POINTS
        stop = last + 1 if last >= 0 else 1
        candidates = [(i, float(xs[i])) for i in range(stop)]

    best: tuple[float, int, float, float] | None = None  # ks, index, cutoff, alpha
    for i, cutoff in candidates:
        n = tail_n[i]
        ln_sum = tail_ln[i] - n * math.log(cutoff - 0.5)
        alpha = float(1.0 + n / ln_sum)
        empirical = tail_n[i:] / n
        model = _tail_model_ccdf(alpha, xs[i:], cutoff)
        ks = float(np.max(np.abs(empirical - model)))
        if best is None or ks < best[0]:
            best = (ks, i, cutoff, alpha)
    assert best is not None
    ks, i, cutoff, alpha = best
    n_tail = int(round(tail_n[i]))
    return FitResult(
        fit_method=MLE_KS,
        alpha=alpha,
        x_min=int(cutoff),
        n_tail=n_tail,
        tail_ratio=n_tail / dist.n_authors,
        ks_distance=ks,
    )


def summarize(fits: Sequence[FitResult] | Iterable[FitResult]) -> FitSummary:
    """Mean and population SD of alpha (and R², when every fit has one).

    All fits must share one fit method; mixing least-squares and MLE results
    in a single summary would average incomparable alphas.
    """
    fits = list(fits)
    if not fits:
        raise ValueError("no fits to summarize")
    if len({f.fit_method for f in fits}) > 1:
        raise ValueError("cannot summarize mixed fit methods")
    alphas = np.array([f.alpha for f in fits])
    mean_r2 = sd_r2 = None
    if all(f.r_squared is not None for f in fits):
        r2s = np.array([f.r_squared for f in fits])
        mean_r2, sd_r2 = float(r2s.mean()), float(r2s.std())
    return FitSummary(
        mean_alpha=float(alphas.mean()),
        sd_alpha=float(alphas.std()),
        mean_r2=mean_r2,
        sd_r2=sd_r2,
    )
