"""Monte Carlo harness for the cost-scaling experiments.

Costs follow C ~ ln^c(1/eps), so clouds of (lnln(1/eps), ln C) points are
fitted by ordinary least squares.  Published decomposition-cost fit lines are
kept as frozen reference constants for the comparisons and crossover solves;
they are data, never recomputed.  Samples derive their generators from
(seed, index), so a study is reproducible bit-for-bit and parallelizes
without affecting results; accumulations use exact summation so aggregation
order cannot matter.
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .ladder import ALL_FAMILIES, Family
from .seeding import derive_rng
from .synthesis import SynthesisConfig, min_online_synthesize, synthesize

TAU = 2 * math.pi

H_ONLY = "h-only"
MULTI = "multi"
MIN_ONLINE = "min-online"
SCHEMES = (H_ONLY, MULTI, MIN_ONLINE)

DEFAULT_EPS_RANGE = (1e-12, 1e-4)


@dataclass(frozen=True)
class ScalingSample:
    scheme: str
    epsilon: float
    target: float
    online: int
    offline: float


@dataclass(frozen=True)
class ScalingFit:
    intercept: float
    slope: float
    n_samples: int
    rms_residual: float

    def cost_at(self, epsilon: float) -> float:
        return math.exp(self.intercept + self.slope * math.log(math.log(1 / epsilon)))


def fit_loglog(points: list[tuple[float, float]]) -> ScalingFit:
    """Least squares of y on x for (x = lnln(1/eps), y = ln C) points."""
    n = len(points)
    if n < 2:
        raise ValueError("need at least two points")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    xbar = math.fsum(xs) / n
    ybar = math.fsum(ys) / n
    sxx = math.fsum((x - xbar) ** 2 for x in xs)
    if sxx <= 0:
        raise ValueError("x values are degenerate")
    sxy = math.fsum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    rms = math.sqrt(
        math.fsum((y - intercept - slope * x) ** 2 for x, y in zip(xs, ys)) / n
    )
    return ScalingFit(intercept, slope, n, rms)


def _families_for(scheme: str) -> tuple[Family, ...]:
    if scheme == H_ONLY:
        return (Family.H,)
    if scheme in (MULTI, MIN_ONLINE):
        return ALL_FAMILIES
    raise ValueError(f"unknown scheme {scheme!r}")


def _one_sample(args: tuple[str, float, float, int, int]) -> ScalingSample:
    scheme, ln_lo, ln_hi, seed, index = args
    # (epsilon, target) draws are scheme-independent: studies of different
    # schemes under one seed share their sample points, so scheme
    # comparisons (e.g. crossovers) see paired designs
    params = derive_rng(seed, "sample-params", index)
    epsilon = math.exp(ln_lo + (ln_hi - ln_lo) * params.random())
    target = params.random() * TAU
    rng = derive_rng(seed, "scaling", scheme, index)
    config = SynthesisConfig(epsilon=epsilon, families=_families_for(scheme))
    if scheme == MIN_ONLINE:
        result = min_online_synthesize(target, epsilon, config, rng)
    else:
        result = synthesize(target, config, rng)
    return ScalingSample(scheme, epsilon, target, result.online_cost, result.offline_cost)


def run_scaling_study(
    scheme: str,
    n_samples: int,
    eps_range: tuple[float, float] = DEFAULT_EPS_RANGE,
    seed: int = 0,
    jobs: int = 1,
) -> tuple[list[ScalingSample], ScalingFit, ScalingFit]:
    """Sample random (target, epsilon) synthesis runs and fit both costs.

    epsilon is log-uniform over eps_range, targets uniform in (0, 2*pi).
    Results are a pure function of (scheme, n_samples, eps_range, seed),
    independent of jobs.
    """
    if n_samples < 2:
        raise ValueError("need at least two samples")
    ln_lo, ln_hi = math.log(eps_range[0]), math.log(eps_range[1])
    tasks = [(scheme, ln_lo, ln_hi, seed, i) for i in range(n_samples)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            samples = list(pool.map(_one_sample, tasks, chunksize=256))
    else:
        samples = [_one_sample(t) for t in tasks]
    fit_online = fit_loglog(
        [
            (math.log(math.log(1 / s.epsilon)), math.log(s.online))
            for s in samples
            if s.online > 0
        ]
    )
    fit_offline = fit_loglog(
        [
            (math.log(math.log(1 / s.epsilon)), math.log(s.offline))
            for s in samples
            if s.offline > 0
        ]
    )
    return samples, fit_online, fit_offline


# --- reference fit constants (intercept, slope) on ln C vs lnln(1/eps) -----


@dataclass(frozen=True)
class FitLine:
    intercept: float
    slope: float


@dataclass(frozen=True)
class SkFitConstants:
    """Published reference lines: recursive-decomposition costs to compare
    against, plus the resource-ladder cost lines quoted alongside them.
    Random unitaries decompose into three random rotations, so their lines
    are the rotation lines shifted by ln 3."""

    sk_z: FitLine
    sk_unitary: FitLine
    h_only_online: FitLine
    h_only_offline: FitLine
    multi_online: FitLine
    multi_offline: FitLine
    min_online_offline: FitLine
    min_online_mean: float


SK_CONSTANTS = SkFitConstants(
    sk_z=FitLine(-4.88, 4.41),
    sk_unitary=FitLine(-2.67, 3.40),
    h_only_online=FitLine(-0.49, 1.29),
    h_only_offline=FitLine(-0.72, 2.27),
    multi_online=FitLine(-0.78, 1.12),
    multi_offline=FitLine(0.54, 1.75),
    min_online_offline=FitLine(1.13, 1.75),
    min_online_mean=1.99,
)

LN3 = math.log(3)


def shift_for_unitary(line: FitLine) -> FitLine:
    """A random unitary costs three random rotations: shift ln C by ln 3."""
    return FitLine(line.intercept + LN3, line.slope)


def sk_crossover(
    fit_a: FitLine | tuple[float, float], fit_b: FitLine | tuple[float, float]
) -> float:
    """Accuracy where two cost lines intersect.

    Solves a0 + a1 x = b0 + b1 x for x = lnln(1/eps) and maps back to
    eps = exp(-exp(x)).
    """
    a0, a1 = (fit_a.intercept, fit_a.slope) if isinstance(fit_a, FitLine) else fit_a
    b0, b1 = (fit_b.intercept, fit_b.slope) if isinstance(fit_b, FitLine) else fit_b
    if a1 == b1:
        raise ValueError("parallel lines have no crossover")
    x = (b0 - a0) / (a1 - b1)
    return math.exp(-math.exp(x))


def comparison_table() -> dict:
    """Crossover accuracies computed from the stored reference constants."""
    c = SK_CONSTANTS
    return {
        "constants": {
            "sk_z": vars(c.sk_z),
            "sk_unitary": vars(c.sk_unitary),
            "h_only_online": vars(c.h_only_online),
            "h_only_offline": vars(c.h_only_offline),
            "multi_online": vars(c.multi_online),
            "multi_offline": vars(c.multi_offline),
            "min_online_offline": vars(c.min_online_offline),
            "unitary_shift": LN3,
        },
        "crossovers": {
            "h_only_offline_vs_sk_z": sk_crossover(c.h_only_offline, c.sk_z),
            "h_only_offline_vs_sk_unitary": sk_crossover(
                shift_for_unitary(c.h_only_offline), c.sk_unitary
            ),
            "multi_offline_vs_sk_z": sk_crossover(c.multi_offline, c.sk_z),
            "multi_offline_vs_sk_unitary": sk_crossover(
                shift_for_unitary(c.multi_offline), c.sk_unitary
            ),
            "multi_offline_vs_h_only_offline": sk_crossover(
                c.h_only_offline, c.multi_offline
            ),
        },
        "notes": {
            "min_online_shift_reference": (
                "reference arithmetic quotes a min-online offline shift of "
                "1.13 - 0.64 = 0.59 over the multi line whose printed "
                "intercept is 0.54; we report measured intercepts instead"
            ),
        },
    }


@dataclass(frozen=True)
class FixedAngleRow:
    epsilon: float
    mean_online: float
    mean_offline: float
    n_samples: int


def fixed_angle_study(
    theta: float,
    eps_list: list[float],
    scheme: str,
    n_samples: int,
    seed: int = 0,
) -> list[FixedAngleRow]:
    """Mean costs of synthesizing one fixed angle at each accuracy."""
    if not 0 < theta < TAU:
        raise ValueError("theta must lie in (0, 2*pi)")
    rows = []
    for eps_index, epsilon in enumerate(eps_list):
        config = SynthesisConfig(epsilon=epsilon, families=_families_for(scheme))
        total_on = []
        total_off = []
        for i in range(n_samples):
            rng = derive_rng(seed, "fixed", scheme, eps_index, i)
            if scheme == MIN_ONLINE:
                result = min_online_synthesize(theta, epsilon, config, rng)
            else:
                result = synthesize(theta, config, rng)
            total_on.append(result.online_cost)
            total_off.append(result.offline_cost)
        rows.append(
            FixedAngleRow(
                epsilon=epsilon,
                mean_online=math.fsum(total_on) / n_samples,
                mean_offline=math.fsum(total_off) / n_samples,
                n_samples=n_samples,
            )
        )
    return rows


# --- file export -----------------------------------------------------------

CSV_HEADER = ["scheme", "epsilon", "target", "online", "offline"]


def export_samples_csv(samples: list[ScalingSample], path: str) -> None:
    """One row per sample; floats written in shortest round-trip form, so the
    file is byte-stable for a given seed and re-ingests losslessly."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for s in samples:
            writer.writerow([s.scheme, repr(s.epsilon), repr(s.target), s.online, repr(s.offline)])


def load_samples_csv(path: str) -> list[ScalingSample]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header!r}")
        return [
            ScalingSample(row[0], float(row[1]), float(row[2]), int(row[3]), float(row[4]))
            for row in reader
        ]


def fits_summary(
    scheme: str,
    fit_online: ScalingFit,
    fit_offline: ScalingFit,
    seed: int,
    eps_range: tuple[float, float],
) -> dict:
    return {
        "scheme": scheme,
        "seed": seed,
        "eps_range": list(eps_range),
        "online": {
            "intercept": fit_online.intercept,
            "slope": fit_online.slope,
            "n_samples": fit_online.n_samples,
            "rms_residual": fit_online.rms_residual,
        },
        "offline": {
            "intercept": fit_offline.intercept,
            "slope": fit_offline.slope,
            "n_samples": fit_offline.n_samples,
            "rms_residual": fit_offline.rms_residual,
        },
    }


def export_json(payload: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
