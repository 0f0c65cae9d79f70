"""Reproducible Monte Carlo harness and convergence diagnostics.

Experiments are described by a JSON-serializable config, sampled in fixed
batches whose random substreams are derived from the master seed and the
(schedule index, batch index) pair, and merged in schedule order.  Results
are therefore bit-identical across runs and across worker counts.  The
empirical CDFs are compared against the limit law by exact sup-distance,
either one-sample against an analytic CDF or two-sample against a large
seeded reference population.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import kolmogi, kolmogorov
from scipy.stats import kstwo

from .asymptotics import (
    LimitKind,
    LimitLaw,
    f_n,
    gumbel_normalize,
    limit_law_for,
    normalize,
    sample_limit,
    u_n,
    zoom_out_statistic,
)
from .distribution import (
    ExactN,
    LfmoModel,
    LogScaleN,
    sample_exchangeable_mo,
    sample_upper_order_statistics,
    sample_vector,
    shock_rates,
)
from .subordinator import (
    CompoundPoisson,
    ConstantSteps,
    Deterministic,
    ExponentialSteps,
    LinearDrift,
    ParetoSteps,
    SubordinatorModel,
    classify_regime,
    laplace_exponent,
    sample_increments,
)

_LN10 = math.log(10.0)
_REFERENCE_STREAM_BASE = 1_000_000

ONE_SAMPLE_ANALYTIC = "one_sample_analytic"
TWO_SAMPLE = "two_sample"


@dataclass(frozen=True)
class Ecdf:
    """Empirical CDF: sorted sample values plus their count."""

    values: np.ndarray
    count: int

    @classmethod
    def from_samples(cls, samples) -> "Ecdf":
        values = np.sort(np.asarray(samples, dtype=float))
        if values.ndim != 1 or values.size == 0:
            raise ValueError("samples must be a nonempty one-dimensional array")
        return cls(values=values, count=values.size)

    def evaluate(self, x):
        """Right-continuous step function F(x) = #{values <= x} / count."""
        return np.searchsorted(self.values, x, side="right") / self.count


@dataclass(frozen=True)
class KsResult:
    """Sup-distance diagnostic between a sample and a comparison law."""

    statistic: float
    n_effective: float
    kind: str
    location: float
    side: str
    p_value: float


def ks_one_sample(ecdf: Ecdf, cdf) -> KsResult:
    """Exact sup-distance between an ECDF and an analytic CDF."""
    if ecdf.count < 2:
        raise ValueError("need at least 2 samples")
    x = ecdf.values
    n = ecdf.count
    f = np.asarray(cdf(x), dtype=float)
    upper = np.arange(1, n + 1) / n - f
    lower = f - np.arange(0, n) / n
    i_up = int(np.argmax(upper))
    i_lo = int(np.argmax(lower))
    if upper[i_up] >= lower[i_lo]:
        stat, loc, f_loc = float(upper[i_up]), float(x[i_up]), f[i_up]
    else:
        stat, loc, f_loc = float(lower[i_lo]), float(x[i_lo]), f[i_lo]
    side = "left" if f_loc < 0.5 else "right"
    return KsResult(statistic=stat, n_effective=float(n), kind=ONE_SAMPLE_ANALYTIC,
                    location=loc, side=side,
                    p_value=float(kstwo.sf(max(stat, 0.0), n)))


def ks_two_sample(a: Ecdf, b: Ecdf) -> KsResult:
    """Exact sup-distance between two ECDFs by merge scan."""
    if a.count < 2 or b.count < 2:
        raise ValueError("need at least 2 samples on each side")
    pooled = np.concatenate([a.values, b.values])
    pooled.sort()
    fa = np.searchsorted(a.values, pooled, side="right") / a.count
    fb = np.searchsorted(b.values, pooled, side="right") / b.count
    diff = fa - fb
    i = int(np.argmax(np.abs(diff)))
    stat = float(abs(diff[i]))
    loc = float(pooled[i])
    pooled_f = (i + 1) / pooled.size
    side = "left" if pooled_f < 0.5 else "right"
    n_eff = a.count * b.count / (a.count + b.count)
    return KsResult(statistic=stat, n_effective=n_eff, kind=TWO_SAMPLE,
                    location=loc, side=side,
                    p_value=float(kolmogorov(math.sqrt(n_eff) * stat)))


def ks_critical_value(n_effective: float, level: float = 0.01) -> float:
    """Sup-distance above which the KS test rejects at the given level."""
    return float(kolmogi(level)) / math.sqrt(n_effective)


def subordinator_to_dict(model: SubordinatorModel) -> dict:
    if isinstance(model, LinearDrift):
        return {"kind": "drift", "c": model.slope}
    step = model.step
    if isinstance(step, ParetoSteps):
        step_dict = {"kind": "pareto", "alpha": step.alpha}
    elif isinstance(step, ConstantSteps):
        step_dict = {"kind": "constant", "size": step.size}
    elif isinstance(step, ExponentialSteps):
        step_dict = {"kind": "exponential", "rate": step.rate}
    else:
        raise ValueError(f"unknown step distribution {step!r}")
    return {"kind": "cpp", "lambda": model.lam, "step": step_dict}


def parse_subordinator(spec: dict) -> SubordinatorModel:
    """Parse the JSON subordinator block shared by the CLI and configs."""
    kind = spec.get("kind")
    if kind == "drift":
        return LinearDrift(slope=float(spec["c"]))
    if kind == "cpp":
        step_spec = spec["step"]
        step_kind = step_spec.get("kind")
        if step_kind == "pareto":
            step = ParetoSteps(alpha=float(step_spec["alpha"]))
        elif step_kind == "constant":
            step = ConstantSteps(size=float(step_spec["size"]))
        elif step_kind == "exponential":
            step = ExponentialSteps(rate=float(step_spec["rate"]))
        else:
            raise ValueError(f"unknown step kind {step_kind!r}")
        return CompoundPoisson(lam=float(spec["lambda"]), step=step)
    raise ValueError(f"unknown subordinator kind {kind!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Description of one convergence study.

    ``m_offset`` selects the order statistic T_{n-j:n} counted from the
    top (0 = last failure).  ``part2_scaling_exponent`` overrides the
    (log n)-power used in the non-concentrating regime (default: the tail
    index alpha).  ``batch_size`` fixes the random-substream granularity
    and therefore must not change if runs are to be comparable.
    """

    subordinator: SubordinatorModel
    log10_n: tuple[float, ...]
    samples_per_n: int
    seed: int
    m_offset: int = 0
    part2_scaling_exponent: float | None = None
    reference_factor: int = 10
    batch_size: int = 10_000
    samples_csv: str | None = None
    summary_csv: str | None = None
    svg_path: str | None = None

    def __post_init__(self) -> None:
        if self.samples_per_n < 100:
            raise ValueError("samples_per_n must be >= 100")
        if len(self.log10_n) == 0:
            raise ValueError("schedule must be nonempty")
        if any(b <= a for a, b in zip(self.log10_n, self.log10_n[1:])):
            raise ValueError("log10_n schedule must be strictly increasing")
        if any(v <= 0 for v in self.log10_n):
            raise ValueError("log10_n values must be positive")
        if self.m_offset < 0:
            raise ValueError("m_offset must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.reference_factor < 1:
            raise ValueError("reference_factor must be >= 1")

    @classmethod
    def from_dict(cls, spec: dict) -> "ExperimentConfig":
        m_rule = spec.get("m_rule", {"kind": "last"})
        if m_rule.get("kind") == "last":
            m_offset = 0
        elif m_rule.get("kind") == "offset":
            m_offset = int(m_rule["j"])
        else:
            raise ValueError(f"unknown m_rule {m_rule!r}")
        output = spec.get("output", {})
        return cls(
            subordinator=parse_subordinator(spec["subordinator"]),
            log10_n=tuple(float(v) for v in spec["log10_n"]),
            samples_per_n=int(spec["samples_per_n"]),
            seed=int(spec["seed"]),
            m_offset=m_offset,
            part2_scaling_exponent=(
                None if spec.get("part2_scaling_exponent") is None
                else float(spec["part2_scaling_exponent"])
            ),
            reference_factor=int(spec.get("reference_factor", 10)),
            batch_size=int(spec.get("batch_size", 10_000)),
            samples_csv=output.get("samples_csv"),
            summary_csv=output.get("summary_csv"),
            svg_path=output.get("svg"),
        )

    def to_dict(self) -> dict:
        m_rule = ({"kind": "last"} if self.m_offset == 0
                  else {"kind": "offset", "j": self.m_offset})
        spec = {
            "subordinator": subordinator_to_dict(self.subordinator),
            "log10_n": list(self.log10_n),
            "m_rule": m_rule,
            "samples_per_n": self.samples_per_n,
            "seed": self.seed,
            "part2_scaling_exponent": self.part2_scaling_exponent,
            "reference_factor": self.reference_factor,
            "batch_size": self.batch_size,
        }
        output = {}
        if self.samples_csv:
            output["samples_csv"] = self.samples_csv
        if self.summary_csv:
            output["summary_csv"] = self.summary_csv
        if self.svg_path:
            output["svg"] = self.svg_path
        if output:
            spec["output"] = output
        return spec


def dimension_for(log10_n: float):
    """Exact integer dimension when it is small enough, else log scale."""
    n = 10.0 ** log10_n
    if n <= 10 ** 12:
        return ExactN(int(round(n)))
    return LogScaleN(log10_n)


def _batch_sizes(total: int, batch: int) -> list[int]:
    sizes = [batch] * (total // batch)
    if total % batch:
        sizes.append(total % batch)
    return sizes


def _sample_cell_batch(subordinator: SubordinatorModel, log10_n: float,
                       k_top: int, seed: int, i_n: int, i_batch: int,
                       size: int) -> np.ndarray:
    rng = np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(i_n, i_batch))
    )
    model = LfmoModel(dimension_for(log10_n), subordinator)
    draws = sample_upper_order_statistics(model, k_top, rng, count=size)
    return draws[:, k_top - 1]


def _sample_reference_batch(law: LimitLaw, seed: int, i_n: int, i_batch: int,
                            size: int) -> np.ndarray:
    rng = np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(i_n, _REFERENCE_STREAM_BASE + i_batch))
    )
    return sample_limit(law, rng, count=size)


@dataclass(frozen=True)
class CellResult:
    """Per-dimension outcome of an experiment."""

    log10_n: float
    raw: np.ndarray
    normalized: np.ndarray
    ecdf: Ecdf
    ks: KsResult
    limit_kind: str
    sigma: float | None
    alpha: float | None


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    cells: tuple[CellResult, ...]

    def samples_csv_text(self) -> str:
        lines = ["log10_n,sample_index,raw_value,normalized_value"]
        for cell in self.cells:
            tag = format(cell.log10_n, ".17g")
            for i, (r, z) in enumerate(zip(cell.raw, cell.normalized)):
                lines.append(
                    f"{tag},{i},{format(r, '.17g')},{format(z, '.17g')}"
                )
        return "\n".join(lines) + "\n"

    def summary_csv_text(self) -> str:
        lines = ["log10_n,ks_statistic,ks_side,n_samples,limit_kind,sigma,alpha"]
        for cell in self.cells:
            sigma = "" if cell.sigma is None else format(cell.sigma, ".17g")
            alpha = "" if cell.alpha is None else format(cell.alpha, ".17g")
            lines.append(
                f"{format(cell.log10_n, '.17g')},"
                f"{format(cell.ks.statistic, '.17g')},"
                f"{cell.ks.side},{cell.ecdf.count},{cell.limit_kind},"
                f"{sigma},{alpha}"
            )
        return "\n".join(lines) + "\n"

    def ks_statistics(self) -> list[float]:
        return [cell.ks.statistic for cell in self.cells]


def resolve_workers(requested: int | None = None) -> int:
    """Worker count: explicit request, capped by LFMO_THREADS, else machine."""
    cap = os.environ.get("LFMO_THREADS")
    cap = int(cap) if cap else (os.cpu_count() or 1)
    if requested is None:
        return max(1, cap)
    return max(1, min(int(requested), cap))


def run_experiment(config: ExperimentConfig,
                   workers: int | None = 1) -> ExperimentResult:
    """Run the convergence study described by ``config``.

    For each scheduled dimension the chosen order statistic is sampled,
    normalized by the limit transform (or the iid Gumbel transform for a
    drift), its ECDF is built, and its sup-distance to the limit law is
    computed; analytic CDFs are used where available and a seeded
    reference population (``reference_factor`` times larger) otherwise.
    The result is independent of the worker count.
    """
    workers = resolve_workers(workers)
    regime = classify_regime(config.subordinator)
    trivial = isinstance(regime, Deterministic)
    law = None if trivial else limit_law_for(
        config.subordinator, config.part2_scaling_exponent
    )
    k_top = config.m_offset + 1

    tasks = []
    for i_n, log10_n in enumerate(config.log10_n):
        for i_b, size in enumerate(_batch_sizes(config.samples_per_n,
                                                config.batch_size)):
            tasks.append((i_n, i_b, size))
    need_reference = (not trivial) and law.kind is not LimitKind.PART1_NORMAL
    ref_tasks = []
    if need_reference:
        ref_total = config.reference_factor * config.samples_per_n
        for i_n in range(len(config.log10_n)):
            for i_b, size in enumerate(_batch_sizes(ref_total, config.batch_size)):
                ref_tasks.append((i_n, i_b, size))

    raw_parts: dict[tuple[int, int], np.ndarray] = {}
    ref_parts: dict[tuple[int, int], np.ndarray] = {}
    if workers == 1:
        for i_n, i_b, size in tasks:
            raw_parts[(i_n, i_b)] = _sample_cell_batch(
                config.subordinator, config.log10_n[i_n], k_top,
                config.seed, i_n, i_b, size)
        for i_n, i_b, size in ref_tasks:
            ref_parts[(i_n, i_b)] = _sample_reference_batch(
                law, config.seed, i_n, i_b, size)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                (False, i_n, i_b): pool.submit(
                    _sample_cell_batch, config.subordinator,
                    config.log10_n[i_n], k_top, config.seed, i_n, i_b, size)
                for i_n, i_b, size in tasks
            }
            futures.update({
                (True, i_n, i_b): pool.submit(
                    _sample_reference_batch, law, config.seed, i_n, i_b, size)
                for i_n, i_b, size in ref_tasks
            })
            for (is_ref, i_n, i_b), fut in futures.items():
                (ref_parts if is_ref else raw_parts)[(i_n, i_b)] = fut.result()

    cells = []
    for i_n, log10_n in enumerate(config.log10_n):
        n_batches = len(_batch_sizes(config.samples_per_n, config.batch_size))
        raw = np.concatenate([raw_parts[(i_n, b)] for b in range(n_batches)])
        ln_n = _LN10 * log10_n
        if trivial:
            normalized = gumbel_normalize(raw, ln_n, regime.slope)
            ecdf = Ecdf.from_samples(normalized)
            ks = ks_one_sample(ecdf, lambda x: np.exp(-np.exp(-np.asarray(x))))
            cells.append(CellResult(log10_n, raw, normalized, ecdf, ks,
                                    "gumbel", None, None))
            continue
        normalized = normalize(raw, ln_n, law)
        ecdf = Ecdf.from_samples(normalized)
        if law.kind is LimitKind.PART1_NORMAL:
            ks = ks_one_sample(ecdf, law.cdf)
        else:
            n_ref_batches = len(_batch_sizes(
                config.reference_factor * config.samples_per_n,
                config.batch_size))
            reference = np.concatenate(
                [ref_parts[(i_n, b)] for b in range(n_ref_batches)])
            ks = ks_two_sample(ecdf, Ecdf.from_samples(reference))
        cells.append(CellResult(log10_n, raw, normalized, ecdf, ks,
                                law.kind.value, law.sigma, law.alpha))

    result = ExperimentResult(config=config, cells=tuple(cells))
    _write_outputs(result)
    return result


def _write_outputs(result: ExperimentResult) -> None:
    config = result.config
    if config.samples_csv:
        with open(config.samples_csv, "w") as fh:
            fh.write(result.samples_csv_text())
    if config.summary_csv:
        with open(config.summary_csv, "w") as fh:
            fh.write(result.summary_csv_text())
    if config.svg_path:
        with open(config.svg_path, "w") as fh:
            fh.write(render_ecdf_svg(result))


def convergence_study_config(step_alpha: float, samples_per_n: int = 10 ** 5,
                             seed: int = 20_240_501,
                             **overrides) -> ExperimentConfig:
    """Canned study: CPP(rate 1) with Pareto steps over huge dimensions."""
    base = ExperimentConfig(
        subordinator=CompoundPoisson(lam=1.0, step=ParetoSteps(alpha=step_alpha)),
        log10_n=(10.0, 40.0, 90.0, 160.0),
        samples_per_n=samples_per_n,
        seed=seed,
    )
    return replace(base, **overrides) if overrides else base


def render_ecdf_svg(result: ExperimentResult, width: int = 720,
                    height: int = 460, curve_points: int = 512) -> str:
    """Minimal deterministic SVG: per-n ECDF step curves plus the limit CDF."""
    cells = result.cells
    lo = min(float(np.quantile(c.normalized, 0.002)) for c in cells)
    hi = max(float(np.quantile(c.normalized, 0.998)) for c in cells)
    if hi <= lo:
        hi = lo + 1.0
    pad_l, pad_r, pad_t, pad_b = 50, 20, 24, 36
    plot_w = width - pad_l - pad_r
    plot_h = height - pad_t - pad_b

    def sx(x: float) -> float:
        return pad_l + (x - lo) / (hi - lo) * plot_w

    def sy(p: float) -> float:
        return pad_t + (1.0 - p) * plot_h

    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
               "#8c564b", "#17becf"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{pad_l}" y="{pad_t}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#888" stroke-width="1"/>',
    ]
    xs_grid = np.linspace(lo, hi, curve_points)
    for idx, cell in enumerate(cells):
        color = palette[idx % len(palette)]
        ys = cell.ecdf.evaluate(xs_grid)
        pts = " ".join(
            f"{sx(x):.2f},{sy(p):.2f}" for x, p in zip(xs_grid, ys)
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            'stroke-width="1.2"/>'
        )
        parts.append(
            f'<text x="{pad_l + 8}" y="{pad_t + 16 + 14 * idx}" '
            f'font-size="11" fill="{color}">log10 n = '
            f'{format(cell.log10_n, "g")} (KS {cell.ks.statistic:.4f})</text>'
        )
    first = cells[0]
    limit_curve = None
    if first.limit_kind == "gumbel":
        limit_curve = np.exp(-np.exp(-xs_grid))
    elif first.limit_kind == LimitKind.PART1_NORMAL.value:
        law = limit_law_for(result.config.subordinator,
                            result.config.part2_scaling_exponent)
        limit_curve = law.cdf(xs_grid)
    else:
        law = limit_law_for(result.config.subordinator,
                            result.config.part2_scaling_exponent)
        rng = np.random.default_rng(
            np.random.SeedSequence(result.config.seed, spawn_key=(2 ** 30,)))
        ref = Ecdf.from_samples(sample_limit(law, rng, count=200_000))
        limit_curve = ref.evaluate(xs_grid)
    pts = " ".join(
        f"{sx(x):.2f},{sy(p):.2f}" for x, p in zip(xs_grid, limit_curve)
    )
    parts.append(
        f'<polyline points="{pts}" fill="none" stroke="#000" '
        'stroke-width="1.6" stroke-dasharray="5,3"/>'
    )
    parts.append(
        f'<text x="{pad_l + 8}" y="{pad_t + 16 + 14 * len(cells)}" '
        'font-size="11" fill="#000">limit</text>'
    )
    for frac in (0.0, 0.5, 1.0):
        parts.append(
            f'<text x="{pad_l - 34}" y="{sy(frac) + 4:.2f}" font-size="10" '
            f'fill="#444">{frac:g}</text>'
        )
    for x in np.linspace(lo, hi, 5):
        parts.append(
            f'<text x="{sx(x) - 10:.2f}" y="{height - 12}" font-size="10" '
            f'fill="#444">{x:.2g}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def gumbel_switch_error_bound(n: int) -> float:
    """Exact sup-CDF distance between max-of-n-Exp(1) and log(n) + Gumbel.

    Evaluated in the Gumbel coordinate: the exact CDF is
    (1 - e^{-y} / n)^n above y = -log n and 0 below, the approximation is
    exp(-e^{-y}).  Dense grid plus local refinement; the distance is of
    order 2 e^{-2} / n and justifies switching regimes at huge n.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    n_f = float(n)
    ln_n = math.log(n_f)

    def diff(y):
        y = np.asarray(y, dtype=float)
        q = np.exp(-y)
        inside = q < n_f
        exact = np.where(
            inside, np.exp(n_f * np.log1p(np.where(inside, -q / n_f, 0.0))), 0.0
        )
        return np.abs(exact - np.exp(-q))

    lo = -min(ln_n, 40.0)
    ys = np.linspace(lo, 25.0, 200_001)
    values = diff(ys)
    i = int(np.argmax(values))
    best = float(values[i])
    left = ys[max(i - 1, 0)]
    right = ys[min(i + 1, ys.size - 1)]
    refined = minimize_scalar(lambda y: -float(diff(y)),
                              bounds=(left, right), method="bounded",
                              options={"xatol": 1e-12})
    best = max(best, float(-refined.fun))
    # below the support cut the approximation itself is the error
    if ln_n < 700:
        best = max(best, math.exp(-n_f))
    return best


@dataclass(frozen=True)
class DecompositionResult:
    """Two independent estimates of P(T_{n:n} > u_n) and their agreement."""

    t: float
    horizon: float
    kernel_estimate: float
    kernel_se: float
    direct_estimate: float
    direct_se: float

    @property
    def z_score(self) -> float:
        se = math.hypot(self.kernel_se, self.direct_se)
        if se == 0.0:
            return 0.0 if self.kernel_estimate == self.direct_estimate else math.inf
        return (self.kernel_estimate - self.direct_estimate) / se

    @property
    def passed(self) -> bool:
        return abs(self.z_score) <= 3.0


def decomposition_check(model: SubordinatorModel, n: int, t: float,
                        rng: np.random.Generator,
                        path_count: int = 10 ** 4,
                        direct_count: int = 10 ** 5) -> DecompositionResult:
    """Check the conditional-binomial decomposition of the last-failure tail.

    Conditional on the path, P(T_{n:n} > u_n | S) equals
    1 - f_n(sigma * Sigma_n + t) exactly; averaging the kernel over sampled
    paths must agree with the direct Monte Carlo estimate of
    P(T_{n:n} > u_n) up to noise.
    """
    law = limit_law_for(model)
    ln_n = math.log(n)
    horizon = u_n(t, ln_n, law.mean_s1, law.alpha)
    s_u = sample_increments(model, horizon, rng, path_count)
    sigma_n = zoom_out_statistic(s_u, horizon, t, law, ln_n)
    kernel = 1.0 - np.asarray(f_n(law.sigma * sigma_n + t, n, n, law.alpha))
    kernel_est = float(np.mean(kernel))
    kernel_se = float(np.std(kernel, ddof=1) / math.sqrt(path_count))
    lf_model = LfmoModel(ExactN(n), model)
    times = sample_upper_order_statistics(lf_model, 1, rng, count=direct_count)
    indicator = times[:, 0] > horizon
    direct_est = float(np.mean(indicator))
    direct_se = math.sqrt(max(direct_est * (1.0 - direct_est), 1e-12) / direct_count)
    return DecompositionResult(t=t, horizon=horizon,
                               kernel_estimate=kernel_est, kernel_se=kernel_se,
                               direct_estimate=direct_est, direct_se=direct_se)


@dataclass(frozen=True)
class MoEquivalenceResult:
    """Joint-survival agreement between the shock model and the path model."""

    grid: tuple[float, ...]
    max_abs_z: float
    worst_cell: tuple[float, float, float]

    @property
    def passed(self) -> bool:
        return self.max_abs_z <= 3.0


def mo_equivalence_check(model: SubordinatorModel, rng: np.random.Generator,
                         count: int = 10 ** 5,
                         grid: tuple[float, ...] = (0.25, 0.75, 1.5),
                         n: int = 3) -> MoEquivalenceResult:
    """Compare P(T_1 > t_1, ..., T_n > t_n) between the two constructions.

    One side simulates the exchangeable exponential-shock model with rates
    from :func:`shock_rates`; the other simulates trigger upcrossing
    directly.  Both estimate the same joint survival function on a full
    t-grid; each cell must agree within 3 combined standard errors.
    """
    psi = lambda x: laplace_exponent(model, x)
    rates = shock_rates(n, psi)
    mo = sample_exchangeable_mo(n, rates, rng, count)
    lf = sample_vector(LfmoModel(ExactN(n), model), rng, count)
    worst = (0.0, 0.0, 0.0)
    max_z = 0.0
    for point in np.stack(np.meshgrid(*([np.asarray(grid)] * n)),
                          axis=-1).reshape(-1, n):
        p_mo = float(np.mean(np.all(mo > point, axis=1)))
        p_lf = float(np.mean(np.all(lf > point, axis=1)))
        se = math.sqrt(
            (p_mo * (1 - p_mo) + p_lf * (1 - p_lf)) / count + 1e-18
        )
        z = abs(p_mo - p_lf) / se
        if z > max_z:
            max_z = z
            worst = (float(point[0]), p_mo, p_lf)
    return MoEquivalenceResult(grid=tuple(float(g) for g in grid),
                               max_abs_z=max_z, worst_cell=worst)
