"""Noisy-resource propagation through the ladder.

Three resource error models: an axis-aligned mixture (kind "a", strength p),
a pure state tilted inside the XZ plane (kind "b", strength delta), and a
pure state tilted toward Y (kind "c", strength delta).  Clifford gates and
measurements stay perfect; a climb is re-run with every consumed resource
replaced by its noisy density matrix, outcomes sampled from the noisy
probabilities, and the result compared to the ideal ladder state by trace
distance.

The two-qubit merge evolution collapses to a closed form on 2x2 blocks
(top sigma, bottom rho; outcome probabilities p0 = s00 r00 + s11 r11 and
p1 = s11 r00 + s00 r11), which the tests check against the generic
density-matrix simulation.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .ladder import Family, ladder_angle
from .qcore import DensityMatrix, DmMeasureResult, dm_from_bloch
from .seeding import derive_rng

_C0 = math.cos(math.pi / 8)
_S0 = math.sin(math.pi / 8)


@dataclass(frozen=True)
class NoiseModel:
    """kind "a": mixture strength p in [0, 1]; kinds "b"/"c": tilt angle in
    radians."""

    kind: str
    strength: float

    def __post_init__(self) -> None:
        if self.kind not in ("a", "b", "c"):
            raise ValueError("kind must be 'a', 'b' or 'c'")
        if self.strength < 0:
            raise ValueError("strength must be >= 0")
        if self.kind == "a" and self.strength > 1:
            raise ValueError("mixture weight cannot exceed 1")


def make_noisy_resource(model: NoiseModel) -> DensityMatrix:
    """Density matrix of one noisy raw resource."""
    if model.kind == "a":
        p = model.strength
        # (1-p) |H><H| + p |-H><-H| with |-H> = sin(pi/8)|0> - cos(pi/8)|1>
        return DensityMatrix(
            np.array(
                [
                    [(1 - p) * _C0 * _C0 + p * _S0 * _S0, (1 - 2 * p) * _C0 * _S0],
                    [(1 - 2 * p) * _C0 * _S0, (1 - p) * _S0 * _S0 + p * _C0 * _C0],
                ],
                dtype=complex,
            )
        )
    if model.kind == "b":
        tilt = math.pi / 4 + model.strength
        return dm_from_bloch(math.sin(tilt), 0.0, math.cos(tilt))
    s = math.sin(math.pi / 4)
    return dm_from_bloch(
        s * math.cos(model.strength),
        s * math.sin(model.strength),
        math.cos(math.pi / 4),
    )


def ideal_resource(level: int) -> DensityMatrix:
    a = ladder_angle(Family.H, level)
    return dm_from_bloch(math.sin(2 * a), 0.0, math.cos(2 * a))


def merge_outcomes(top: DensityMatrix, bottom: DensityMatrix) -> DmMeasureResult:
    """Closed-form merge of a top resource onto a bottom state.

    Returns the outcome probabilities and post-selected bottom states of the
    parity-merge circuit acting on top (x) bottom.
    """
    s = top.mat
    r = bottom.mat
    p0 = float((s[0, 0] * r[0, 0] + s[1, 1] * r[1, 1]).real)
    p1 = float((s[1, 1] * r[0, 0] + s[0, 0] * r[1, 1]).real)
    post0 = post1 = None
    if p0 > 1e-300:
        post0 = DensityMatrix(
            np.array(
                [
                    [s[0, 0] * r[0, 0], s[0, 1] * r[0, 1]],
                    [s[1, 0] * r[1, 0], s[1, 1] * r[1, 1]],
                ]
            )
            / p0
        )
    if p1 > 1e-300:
        post1 = DensityMatrix(
            np.array(
                [
                    [s[1, 1] * r[0, 0], s[1, 0] * r[0, 1]],
                    [s[0, 1] * r[1, 0], s[0, 0] * r[1, 1]],
                ]
            )
            / p1
        )
    return DmMeasureResult(p0, post0, p1, post1)


def _distance_to_ideal(r00: float, r01: complex, level: int) -> float:
    """Trace distance of (r00, r01; conj r01, 1-r00) to the ideal level state.

    The difference is traceless Hermitian 2x2, so the distance is the root of
    the determinant magnitude - exact and cancellation-safe at 1e-15 scales.
    """
    a = ladder_angle(Family.H, level)
    c, s = math.cos(a), math.sin(a)
    d00 = r00 - c * c
    d01 = r01 - c * s
    return math.sqrt(d00 * d00 + d01.real * d01.real + d01.imag * d01.imag)


class _NoisyWalker:
    """Bottom density matrix of a noisy climb, tracked as (r00, r01, r11)."""

    __slots__ = ("s00", "s01", "s11", "r00", "r01", "r11", "level")

    def __init__(self, model: NoiseModel):
        sigma = make_noisy_resource(model).mat
        self.s00 = float(sigma[0, 0].real)
        self.s01 = complex(sigma[0, 1])
        self.s11 = float(sigma[1, 1].real)
        self.reset()

    def reset(self) -> None:
        self.r00, self.r01, self.r11 = self.s00, self.s01, self.s11
        self.level = 0

    def step(self, rng: random.Random) -> None:
        """One merge with a fresh noisy top; outcome sampled from the noisy
        probabilities, post-selected state renormalized."""
        s00, s01, s11 = self.s00, self.s01, self.s11
        r00, r01, r11 = self.r00, self.r01, self.r11
        p0 = s00 * r00 + s11 * r11
        p1 = s11 * r00 + s00 * r11
        if rng.random() * (p0 + p1) < p0:
            self.r00 = s00 * r00 / p0
            self.r01 = s01 * r01 / p0
            self.r11 = s11 * r11 / p0
            self.level += 1
        elif self.level == 0:
            self.reset()
        else:
            self.r00 = s11 * r00 / p1
            self.r01 = s01.conjugate() * r01 / p1
            self.r11 = s00 * r11 / p1
            self.level -= 1

    def density_matrix(self) -> DensityMatrix:
        return DensityMatrix(
            np.array(
                [[self.r00, self.r01], [self.r01.conjugate(), self.r11]],
                dtype=complex,
            )
        )


def propagate_to_level(
    model: NoiseModel, target_level: int, rng: random.Random
) -> tuple[DensityMatrix, float]:
    """One noisy climb instance to target_level >= 1.

    Returns the arrived bottom state and its trace distance to the ideal
    ladder state of that level.
    """
    if target_level < 1:
        raise ValueError("target level must be >= 1")
    walker = _NoisyWalker(model)
    while walker.level < target_level:
        walker.step(rng)
    rho = walker.density_matrix()
    return rho, _distance_to_ideal(walker.r00, walker.r01, target_level)


def decay_study(
    model: NoiseModel,
    max_level: int,
    n_instances: int,
    seed: int,
) -> list[tuple[int, float]]:
    """Mean trace distance to the ideal state per level, over independent
    noisy-climb instances.

    Each instance climbs once to max_level, recording the state at its first
    arrival at every level; first-arrival snapshots have the same law as
    stopping there, so the per-level means match per-level runs.
    """
    if max_level < 1:
        raise ValueError("max level must be >= 1")
    sums = [0.0] * (max_level + 1)
    for instance in range(n_instances):
        rng = derive_rng(seed, "noise", model.kind, repr(model.strength), instance)
        walker = _NoisyWalker(model)
        seen = 0
        while seen < max_level:
            walker.step(rng)
            if walker.level == seen + 1:
                seen += 1
                sums[seen] += _distance_to_ideal(walker.r00, walker.r01, seen)
    return [(lvl, sums[lvl] / n_instances) for lvl in range(1, max_level + 1)]


@dataclass(frozen=True)
class DecayFit:
    """distance ~ prefactor * base^(-level), fitted by least squares on the
    log scale."""

    prefactor: float
    base: float
    fit_range: tuple[int, int]
    residual_rms: float


def fit_exponential_decay(points: list[tuple[int, float]]) -> DecayFit:
    if len(points) < 3:
        raise ValueError("need at least 3 points")
    for _, d in points:
        if d <= 0:
            raise ValueError("distances must be positive")
    xs = [float(lvl) for lvl, _ in points]
    ys = [math.log(d) for _, d in points]
    n = len(xs)
    xbar = math.fsum(xs) / n
    ybar = math.fsum(ys) / n
    sxx = math.fsum((x - xbar) ** 2 for x in xs)
    sxy = math.fsum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    rms = math.sqrt(
        math.fsum((y - intercept - slope * x) ** 2 for x, y in zip(xs, ys)) / n
    )
    levels = [lvl for lvl, _ in points]
    return DecayFit(
        prefactor=math.exp(intercept),
        base=math.exp(-slope),
        fit_range=(min(levels), max(levels)),
        residual_rms=rms,
    )
