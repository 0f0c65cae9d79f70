"""The Levy-frailty Marshall-Olkin distribution itself.

A system of ``n`` exchangeable lifetimes is built from one nondecreasing
subordinator path and ``n`` iid unit-exponential triggers: component ``i``
dies the first time the path upcrosses trigger ``i``.  This module holds
the exact samplers (full vector and top-k order statistics, including a
Gumbel large-``n`` regime), the exact finite-``n`` alternating-sum
formulas for order-statistic tails, the mean of the last failure, the
shock-rate reparameterization that maps the construction onto the classic
exponential-shock model, and the conditional-binomial Monte Carlo oracle
used to cross-check all of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Union

import numpy as np
from mpmath import mp
from scipy.stats import binom as _binom

from .errors import InvalidDimensionError, PrecisionLossError
from .subordinator import (
    SubordinatorModel,
    crossing_times_batch,
    sample_increments,
)

# largest n for which the exact alternating-sum formulas are evaluated;
# binomial weights stay below C(30, 15) ~ 1.6e8 so a 60-digit working
# precision leaves the cancellation error far below 1e-12
DEFAULT_MAX_EXACT_N = 30

# above this dimension the top trigger is drawn as log(n) + Gumbel instead
# of by exact inversion (sup-CDF error of the swap is about 0.27 / n)
GUMBEL_SWITCH_N = 10 ** 12

_LN10 = math.log(10.0)
_WORK_DPS = 60


@dataclass(frozen=True)
class ExactN:
    """Exact integer dimension."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")


@dataclass(frozen=True)
class LogScaleN:
    """Dimension given as log10(n), for astronomically large systems.

    Only order-statistic sampling (which runs in the Gumbel regime) accepts
    this form; exact finite-n formulas require :class:`ExactN`.
    """

    log10_n: float

    def __post_init__(self) -> None:
        if not self.log10_n > 0.0:
            raise ValueError(f"log10_n must be > 0, got {self.log10_n}")


Dimension = Union[ExactN, LogScaleN]


@dataclass(frozen=True)
class LfmoModel:
    """A dimension paired with the driving subordinator."""

    dimension: Dimension
    subordinator: SubordinatorModel

    @property
    def ln_n(self) -> float:
        """Natural log of the dimension."""
        if isinstance(self.dimension, ExactN):
            return math.log(self.dimension.n)
        return _LN10 * self.dimension.log10_n


def _log1mexp(m: np.ndarray) -> np.ndarray:
    """log(1 - exp(-m)) for m > 0, stable on both ends."""
    m = np.asarray(m, dtype=float)
    small = m < math.log(2.0)
    with np.errstate(divide="ignore"):
        return np.where(
            small,
            np.log(-np.expm1(-np.where(small, m, 1.0))),
            np.log1p(-np.exp(-np.where(small, 1.0, m))),
        )


def _log_one_minus_uroot(log_u: np.ndarray, log_k: float) -> np.ndarray:
    """log(1 - U^(1/k)) given log U, stable down to k ~ exp(700+)."""
    log_neg_w = np.log(-log_u) - log_k
    tiny = log_neg_w < -30.0
    w = -np.exp(np.where(tiny, 0.0, log_neg_w))
    with np.errstate(divide="ignore"):
        direct = np.log(-np.expm1(np.where(tiny, -1.0, w)))
    return np.where(tiny, log_neg_w, direct)


def _open_uniform(rng: np.random.Generator, count: int) -> np.ndarray:
    return np.clip(rng.random(count), 1e-300, 1.0 - 1e-16)


def _top_triggers(dimension: Dimension, k_top: int, rng: np.random.Generator,
                  count: int) -> np.ndarray:
    """Top k_top order statistics of n iid Exp(1) triggers, descending.

    The maximum comes from its exact inverse CDF (or from the Gumbel
    approximation above the switch dimension); each further rank is the
    maximum of the remaining points, which conditionally are iid Exp(1)
    truncated below the previous rank, so it is drawn by exact inversion of
    that truncated-max law.  All arithmetic runs in log space so the
    recursion survives dimensions as large as 10^400.
    """
    exact = isinstance(dimension, ExactN)
    if exact:
        n = dimension.n
        ln_n = math.log(n)
        if k_top > n:
            raise InvalidDimensionError(
                f"k_top = {k_top} exceeds the dimension n = {n}"
            )
    else:
        ln_n = _LN10 * dimension.log10_n
    if k_top < 1:
        raise ValueError(f"k_top must be >= 1, got {k_top}")

    out = np.empty((count, k_top))
    if exact and n <= GUMBEL_SWITCH_N:
        u = _open_uniform(rng, count)
        level = -_log_one_minus_uroot(np.log(u), ln_n)
    else:
        level = ln_n + rng.gumbel(size=count)
    out[:, 0] = level
    for j in range(1, k_top):
        log_k = math.log(n - j) if (exact and n <= GUMBEL_SWITCH_N) else ln_n
        u = _open_uniform(rng, count)
        term = _log_one_minus_uroot(np.log(u), log_k) + _log1mexp(level)
        level = -np.logaddexp(-level, term)
        out[:, j] = level
    return out


def sample_upper_order_statistics(model: LfmoModel, k_top: int,
                                  rng: np.random.Generator,
                                  count: int | None = None) -> np.ndarray:
    """Sample the k_top largest lifetimes, largest first.

    With ``count=None`` returns one draw of shape (k_top,); otherwise shape
    (count, k_top).  All ranks of a draw share one subordinator path, so
    each row is nonincreasing.
    """
    c = 1 if count is None else int(count)
    if c < 1:
        raise ValueError("count must be >= 1")
    levels_desc = _top_triggers(model.dimension, k_top, rng, c)
    levels_asc = np.ascontiguousarray(levels_desc[:, ::-1])
    times_asc = crossing_times_batch(model.subordinator, levels_asc, rng)
    times_desc = times_asc[:, ::-1]
    return times_desc[0] if count is None else times_desc


def sample_vector(model: LfmoModel, rng: np.random.Generator,
                  count: int | None = None) -> np.ndarray:
    """Sample the full lifetime vector in component order.

    Requires an exact dimension.  Triggers are sorted, crossed on one
    shared path, and the crossing times are put back in the components'
    original order.
    """
    if not isinstance(model.dimension, ExactN):
        raise InvalidDimensionError(
            "full-vector sampling needs an exact dimension"
        )
    n = model.dimension.n
    c = 1 if count is None else int(count)
    if c < 1:
        raise ValueError("count must be >= 1")
    triggers = rng.exponential(size=(c, n))
    order = np.argsort(triggers, axis=1)
    sorted_levels = np.take_along_axis(triggers, order, axis=1)
    sorted_times = crossing_times_batch(model.subordinator, sorted_levels, rng)
    out = np.empty_like(sorted_times)
    np.put_along_axis(out, order, sorted_times, axis=1)
    return out[0] if count is None else out


PsiFunction = Callable[[float], float]


def _validate_exact_args(n: int, n_max: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > n_max:
        raise ValueError(
            f"exact formulas are limited to n <= {n_max} (got n = {n}); "
            "raise n_max explicitly to go further at your own risk"
        )


def exact_tail_probability(n: int, m: int, t: float, psi: PsiFunction,
                           n_max: int = DEFAULT_MAX_EXACT_N) -> float:
    """P(T_{m:n} > t), evaluated from the exact alternating binomial sum.

    Binomial coefficients are exact integers and the signed accumulation
    runs at 60 decimal digits, so for n <= 30 the cancellation error is
    negligible next to the accuracy of ``psi`` itself.  A result outside
    [0, 1] by more than 1e-9 raises :class:`PrecisionLossError`; inside
    that band it is clamped.
    """
    _validate_exact_args(n, n_max)
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in [1, n], got m = {m}")
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    with mp.workdps(_WORK_DPS):
        total = mp.mpf(0)
        for k in range(n - m + 1, n + 1):
            weight = math.comb(n, k) * math.comb(k - 1, n - m)
            sign = -1 if (k - n + m - 1) % 2 else 1
            total += sign * weight * mp.e ** (-mp.mpf(psi(k)) * t)
        value = float(total)
    if value < -1e-9 or value > 1.0 + 1e-9:
        raise PrecisionLossError(
            f"tail probability evaluated to {value}, beyond the guaranteed "
            f"error band around [0, 1] (n = {n}, m = {m}, t = {t})"
        )
    return min(max(value, 0.0), 1.0)


def mean_last_order_statistic(n: int, psi: PsiFunction,
                              n_max: int = DEFAULT_MAX_EXACT_N) -> float:
    """E T_{n:n} = sum_k C(n,k) (-1)^(k-1) / psi(k), exactly accumulated."""
    _validate_exact_args(n, n_max)
    with mp.workdps(_WORK_DPS):
        total = mp.mpf(0)
        for k in range(1, n + 1):
            pk = psi(k)
            if not pk > 0.0:
                raise ValueError(f"psi({k}) = {pk} must be positive")
            sign = -1 if k % 2 == 0 else 1
            total += sign * math.comb(n, k) / mp.mpf(pk)
        value = float(total)
    if value <= 0.0:
        raise PrecisionLossError(
            f"mean of the last order statistic evaluated to {value} <= 0"
        )
    return value


def shock_rates(n: int, psi: PsiFunction,
                n_max: int = DEFAULT_MAX_EXACT_N) -> np.ndarray:
    """Exponential shock rates, indexed by subset size 1..n.

    rate[v-1] applies to every one of the C(n, v) subsets of size v in the
    equivalent exchangeable shock model.  Rates are alternating differences
    of psi increments and are nonnegative for any true Laplace exponent;
    tiny negative round-off (>= -1e-12) is clamped to zero, anything worse
    raises :class:`PrecisionLossError`.
    """
    _validate_exact_args(n, n_max)
    psi_values = [0.0] + [float(psi(k)) for k in range(1, n + 1)]
    rates = np.empty(n)
    with mp.workdps(_WORK_DPS):
        for v in range(1, n + 1):
            total = mp.mpf(0)
            for i in range(v):
                inc = mp.mpf(psi_values[n - v + i + 1]) - mp.mpf(psi_values[n - v + i])
                sign = -1 if i % 2 else 1
                total += sign * math.comb(v - 1, i) * inc
            rates[v - 1] = float(total)
    bad = rates < -1e-9
    if np.any(bad):
        raise PrecisionLossError(
            f"shock rates {rates[bad]} are negative beyond round-off"
        )
    return np.where(rates < 0.0, 0.0, rates)


def tail_probability_mc(model: SubordinatorModel, n: int, m: int, t: float,
                        rng: np.random.Generator,
                        count: int = 10 ** 5) -> tuple[float, float]:
    """Conditional-binomial Monte Carlo estimate of P(T_{m:n} > t).

    Conditional on the path, the lifetimes are iid with survival
    exp(-S_t), so P(T_{m:n} > t | S) = P(Bin(n, exp(-S_t)) > n - m).
    Averaging that over sampled paths gives an estimator whose only error
    is Monte Carlo noise; returns (estimate, standard error).  This is the
    independent arbiter for :func:`exact_tail_probability`.
    """
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in [1, n], got m = {m}")
    s_t = sample_increments(model, t, rng, count)
    p_alive = np.exp(-s_t)
    probs = _binom.sf(n - m, n, p_alive)
    estimate = float(np.mean(probs))
    se = float(np.std(probs, ddof=1) / math.sqrt(count)) if count > 1 else 0.0
    return estimate, se


def sample_exchangeable_mo(n: int, rates_by_size: np.ndarray,
                           rng: np.random.Generator,
                           count: int = 1) -> np.ndarray:
    """Simulate the general exponential-shock model with size-dependent rates.

    Every nonempty subset V of {1..n} carries an independent exponential
    shock with rate ``rates_by_size[|V| - 1]``; component i dies at the
    earliest shock covering it.  Used to check, by simulation, that the
    construction with rates from :func:`shock_rates` matches the
    subordinator-trigger construction in distribution.  Exponential in n;
    meant for small systems.
    """
    rates_by_size = np.asarray(rates_by_size, dtype=float)
    if rates_by_size.shape != (n,):
        raise ValueError("need one rate per subset size 1..n")
    if n > 16:
        raise ValueError("subset enumeration is only sensible for small n")
    lifetimes = np.full((count, n), np.inf)
    for size in range(1, n + 1):
        rate = rates_by_size[size - 1]
        if rate <= 0.0:
            continue
        for subset in combinations(range(n), size):
            shock = rng.exponential(1.0 / rate, count)
            idx = list(subset)
            lifetimes[:, idx] = np.minimum(lifetimes[:, idx], shock[:, None])
    return lifetimes
