"""Greedy compilation of Z-rotations from ladder states.

A rotation consumed from a level-i ladder state applies +-2*theta_i with
probability 1/2 each; quarter-turn corrections (S, Z) are free Cliffords.
The planner repeatedly picks the enabled state whose rotation is nearest to
the remaining residual, simulates a ladder instance for it (offline cost),
applies the coin-flip rotation (online cost), and folds free quarter turns
out of the residual, until |residual| <= epsilon.

The min-online variant moves all coin flips onto offline-prepared ancillas:
the residual rotation is synthesized onto a free |+> ancilla which is then
consumed by a single online use, doubling the remaining angle on failure.
"""
from __future__ import annotations

import math
import random
from bisect import bisect_left
from dataclasses import dataclass, replace
from functools import lru_cache

from .ladder import (
    ALL_FAMILIES,
    MAX_LEVEL,
    Family,
    climb_cost,
    expected_climb_cost,
    rotation_angle,
    simulate_climb,
)
from .seeding import DEFAULT_SEED, derive_rng

TAU = 2 * math.pi
HALF_PI = math.pi / 2
QUARTER_PI = math.pi / 4

_FAMILY_RANK = {f: i for i, f in enumerate(ALL_FAMILIES)}


def wrap_angle(x: float) -> float:
    """Wrap to (-pi, pi]."""
    x = math.remainder(x, TAU)
    if x <= -math.pi:
        x += TAU
    return x


def reduce_by_clifford(residual: float) -> tuple[float, int]:
    """Fold free quarter turns out of a residual rotation.

    Returns the equivalent residual in (-pi/4, pi/4] together with the number
    of quarter-turn gates absorbed (zero cost).
    """
    k = round(residual / HALF_PI)
    reduced = residual - k * HALF_PI
    if reduced <= -QUARTER_PI:
        reduced += HALF_PI
        k -= 1
    return reduced, abs(k)


def apply_random_rotation(
    residual: float, rot_angle: float, rng: random.Random
) -> tuple[float, int]:
    """Consume one resource state: the applied rotation is +rot_angle or
    -rot_angle with probability 1/2 each.  Returns the new residual, wrapped
    to (-pi, pi], and the applied sign."""
    if rot_angle <= 0:
        raise ValueError("rotation angle must be positive")
    sign = 1 if rng.random() < 0.5 else -1
    return wrap_angle(residual - sign * rot_angle), sign


def angle_to_operator_distance(delta_phi: float) -> float:
    """Convert an angle mismatch to the operator distance
    sqrt(1 - |cos(delta_phi)|), evaluated in a cancellation-free form."""
    c = math.cos(delta_phi)
    if c >= 0:
        return math.sqrt(2) * abs(math.sin(delta_phi / 2))
    return math.sqrt(2) * abs(math.cos(delta_phi / 2))


@dataclass(frozen=True)
class SynthesisConfig:
    """Planner settings.

    max_level None sizes the ladder automatically: the smallest level whose
    rotation is <= epsilon/2, capped at 150.
    """

    epsilon: float
    families: tuple[Family, ...] = (Family.H,)
    max_level: int | None = None
    free_clifford_reduction: bool = True
    master_seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not self.families:
            raise ValueError("at least one family must be enabled")
        if self.max_level is not None and not 0 <= self.max_level <= MAX_LEVEL:
            raise ValueError(f"max_level must be in [0, {MAX_LEVEL}]")

    def resolved_max_level(self) -> int:
        return self.max_level if self.max_level is not None else auto_max_level(self.epsilon)


@dataclass(frozen=True)
class SynthesisResult:
    target: float
    applied: tuple[tuple[Family, int, int], ...]
    residual: float
    online_cost: int
    offline_cost: float
    clifford_corrections: int


def auto_max_level(epsilon: float) -> int:
    """Smallest level whose rotation is <= epsilon/2, capped at 150."""
    lo, hi = 0, MAX_LEVEL
    if rotation_angle(Family.H, MAX_LEVEL) > epsilon / 2:
        return MAX_LEVEL
    while lo < hi:
        mid = (lo + hi) // 2
        if rotation_angle(Family.H, mid) <= epsilon / 2:
            hi = mid
        else:
            lo = mid + 1
    return lo


class _AngleTable:
    """Sorted rotation angles for the enabled families, with tie-break keys."""

    def __init__(self, families: tuple[Family, ...], max_level: int):
        entries = []
        for fam in families:
            for lvl in range(max_level + 1):
                entries.append(
                    (
                        rotation_angle(fam, lvl),
                        expected_climb_cost(fam, lvl),
                        _FAMILY_RANK[fam],
                        lvl,
                        fam,
                    )
                )
        entries.sort()
        self.entries = entries
        self.angles = [e[0] for e in entries]

    def nearest(self, magnitude: float) -> tuple[Family, int, float]:
        i = bisect_left(self.angles, magnitude)
        best = None
        for j in (i - 1, i):
            if 0 <= j < len(self.entries):
                angle, cost, rank, lvl, fam = self.entries[j]
                key = (abs(magnitude - angle), cost, rank, lvl)
                if best is None or key < best[0]:
                    best = (key, fam, lvl, angle)
        _, fam, lvl, angle = best
        return fam, lvl, angle


@lru_cache(maxsize=None)
def _angle_table(families: tuple[Family, ...], max_level: int) -> _AngleTable:
    return _AngleTable(families, max_level)


def pick_state(residual: float, config: SynthesisConfig) -> tuple[Family, int]:
    """The enabled (family, level) whose rotation is nearest to |residual|.

    Ties go to the lower expected climb cost, then the family order
    H < PSI0 < PSI1 < PSI2, then the lower level.
    """
    table = _angle_table(tuple(config.families), config.resolved_max_level())
    fam, lvl, _ = table.nearest(abs(residual))
    return fam, lvl


def synthesize(
    target: float, config: SynthesisConfig, rng: random.Random | None = None
) -> SynthesisResult:
    """Compile a Z-rotation by `target` to accuracy config.epsilon.

    Offline cost totals the raw resources of one simulated ladder instance
    per consumed state; online cost counts the consumed states.
    """
    if rng is None:
        rng = derive_rng(config.master_seed, "synthesize")
    eps = config.epsilon
    table = _angle_table(tuple(config.families), config.resolved_max_level())
    reduce_free = config.free_clifford_reduction

    residual = wrap_angle(target)
    corrections = 0
    if reduce_free:
        residual, k = reduce_by_clifford(residual)
        corrections += k
    applied: list[tuple[Family, int, int]] = []
    offline = 0.0
    while abs(residual) > eps:
        fam, lvl, angle = table.nearest(abs(residual))
        offline += climb_cost(simulate_climb(fam, lvl, rng), fam)
        residual, sign = apply_random_rotation(residual, angle, rng)
        applied.append((fam, lvl, sign))
        if reduce_free:
            residual, k = reduce_by_clifford(residual)
            corrections += k
    return SynthesisResult(
        target=target,
        applied=tuple(applied),
        residual=residual,
        online_cost=len(applied),
        offline_cost=offline,
        clifford_corrections=corrections,
    )


def min_online_synthesize(
    target: float,
    eps: float,
    config: SynthesisConfig,
    rng: random.Random | None = None,
) -> SynthesisResult:
    """Ancilla-mediated variant that minimizes the online rotation count.

    The remaining rotation m is synthesized offline onto a free |+> ancilla
    at accuracy eps, then consumed by one online use: success with
    probability 1/2 finishes, failure leaves 2m minus the ancilla's residual
    for the next round.  Because every round re-targets the exact remainder,
    preparation errors of failed ancillas are corrected downstream and the
    final residual is just that of the last ancilla, so the per-ancilla
    budget needs no subdivision.  online_cost counts only the ancilla uses;
    applied is empty because no ladder state touches the data qubit directly.
    """
    if rng is None:
        rng = derive_rng(config.master_seed, "min-online")
    if eps <= 0:
        raise ValueError("eps must be positive")
    corrections = 0
    remaining = wrap_angle(target)
    if config.free_clifford_reduction:
        remaining, k = reduce_by_clifford(remaining)
        corrections += k
    online = 0
    offline = 0.0
    inner_config = replace(config, epsilon=eps, max_level=None)
    while abs(remaining) > eps:
        inner = synthesize(remaining, inner_config, rng)
        offline += inner.offline_cost
        corrections += inner.clifford_corrections
        online += 1
        if rng.random() < 0.5:
            remaining = inner.residual
            break
        # the ancilla carried (remaining - inner.residual); failure applied
        # its negative
        remaining = wrap_angle(2 * remaining - inner.residual)
        if config.free_clifford_reduction:
            remaining, k = reduce_by_clifford(remaining)
            corrections += k
    return SynthesisResult(
        target=target,
        applied=(),
        residual=remaining,
        online_cost=online,
        offline_cost=offline,
        clifford_corrections=corrections,
    )
