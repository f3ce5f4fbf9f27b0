import math

import pytest

from rotsynth import qcore
from rotsynth.ladder import (
    ALL_FAMILIES,
    MAX_LEVEL,
    ClimbResult,
    Family,
    base_average_cost,
    base_state_angle,
    climb_cost,
    expected_climb_cost,
    ladder_angle,
    merge_step,
    merge_success_prob,
    resource_state,
    rotation_angle,
    simulate_climb,
)
from rotsynth.seeding import derive_rng

SQRT2 = math.sqrt(2)

# Reference rotation angles 2*theta_i for the raw-resource ladder, printed
# to four significant figures (the source table truncates the i=0 entry).
H_ROTATIONS = {
    0: 7.853e-1,
    1: 3.398e-1,
    2: 1.419e-1,
    3: 5.886e-2,
    4: 2.439e-2,
    5: 1.010e-2,
    6: 4.184e-3,
    7: 1.733e-3,
    8: 7.179e-4,
    9: 2.974e-4,
    10: 1.232e-4,
    11: 5.102e-5,
    12: 2.113e-5,
    13: 8.753e-6,
    14: 3.626e-6,
    15: 1.502e-6,
    16: 6.221e-7,
}

# Reference rotation angles for all four ladders, levels 0..8.
MULTI_ROTATIONS = {
    Family.PSI0: [4.456e-1, 1.871e-1, 7.770e-2, 3.220e-2, 1.334e-2, 5.525e-3, 2.288e-3, 9.479e-4, 3.926e-4],
    Family.PSI1: [5.698e-1, 2.415e-1, 1.004e-1, 4.162e-2, 1.724e-2, 7.142e-3, 2.959e-3, 1.225e-3, 5.076e-4],
    Family.PSI2: [6.898e-1, 2.954e-1, 1.231e-1, 5.105e-2, 2.115e-2, 8.761e-3, 3.629e-3, 1.503e-3, 6.226e-4],
}


def table_tol(printed: float) -> float:
    """One unit in the fourth significant figure (covers truncate vs round)."""
    return 1.001 * 10 ** (math.floor(math.log10(printed)) - 3)


@pytest.mark.parametrize("level,printed", sorted(H_ROTATIONS.items()))
def test_h_rotation_table(level, printed):
    assert abs(rotation_angle(Family.H, level) - printed) <= table_tol(printed)


@pytest.mark.parametrize("family", [Family.PSI0, Family.PSI1, Family.PSI2])
@pytest.mark.parametrize("level", range(9))
def test_psi_rotation_tables(family, level):
    printed = MULTI_ROTATIONS[family][level]
    assert abs(rotation_angle(family, level) - printed) <= table_tol(printed)


def test_base_angles():
    assert base_state_angle(Family.H) == pytest.approx(math.pi / 8, abs=1e-15)
    assert base_state_angle(Family.PSI0) == pytest.approx(0.2228, abs=5e-5)
    assert base_state_angle(Family.PSI1) == pytest.approx(0.2849, abs=5e-5)
    assert base_state_angle(Family.PSI2) == pytest.approx(0.3449, abs=5e-5)


def test_h_angle_cotangent_identity():
    # tan(theta_i) * (1 + sqrt(2))^(i+1) = 1
    for i in range(0, MAX_LEVEL + 1, 5):
        assert math.tan(ladder_angle(Family.H, i)) * (1 + SQRT2) ** (i + 1) == pytest.approx(
            1.0, abs=1e-12
        )


def test_angle_decay_asymptote():
    # theta_i * (sqrt(2)+1)^(i+1) -> 1 from below
    for i in range(10, 40):
        ratio = ladder_angle(Family.H, i) * (SQRT2 + 1) ** (i + 1)
        assert 0.99 <= ratio <= 1.01


@pytest.mark.parametrize("family", ALL_FAMILIES)
def test_angles_decrease_and_stay_in_range(family):
    previous = None
    for level in range(40):
        angle = ladder_angle(family, level)
        assert 0 < angle <= math.pi / 4
        if previous is not None:
            assert angle < previous
        previous = angle


def test_ladder_angle_rejects_negative_level():
    with pytest.raises(ValueError):
        ladder_angle(Family.H, -1)


def test_merge_success_prob_level0_exact():
    assert merge_success_prob(Family.H, 0) == pytest.approx(0.75, abs=1e-15)


def test_merge_success_prob_bounds_and_limit():
    limit = math.cos(math.pi / 8) ** 2
    for i in range(0, 151, 10):
        p = merge_success_prob(Family.H, i)
        assert 0.75 <= p <= limit + 1e-15
    # strictly below the limit until floating point saturates (~level 20)
    assert merge_success_prob(Family.H, 15) < limit
    assert merge_success_prob(Family.H, 150) == pytest.approx(limit, abs=1e-12)


def test_merge_success_prob_psi0_formula_and_circuit():
    phi = base_state_angle(Family.PSI0)
    expected = (
        math.cos(phi) ** 2 * math.cos(math.pi / 8) ** 2
        + math.sin(phi) ** 2 * math.sin(math.pi / 8) ** 2
    )
    assert merge_success_prob(Family.PSI0, 0) == pytest.approx(expected, abs=1e-15)
    # cross-check through the simulated merge circuit
    reg = qcore.apply_gate(
        qcore.product_state(qcore.xz_state(math.pi / 8), qcore.xz_state(phi)), "CNOT", 1, 0
    )
    assert qcore.measure_qubit(reg, 0).prob0 == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("family", ALL_FAMILIES)
@pytest.mark.parametrize("level", range(0, 21, 4))
def test_merge_circuit_agreement(family, level):
    """The two-qubit circuit reproduces the success probability and both
    outcome angles of the algebraic merge."""
    bottom = ladder_angle(family, level)
    reg = qcore.apply_gate(
        qcore.product_state(qcore.xz_state(math.pi / 8), qcore.xz_state(bottom)),
        "CNOT",
        1,
        0,
    )
    res = qcore.measure_qubit(reg, 0)
    assert res.prob0 == pytest.approx(merge_success_prob(family, level), abs=1e-12)
    up = ladder_angle(family, level + 1)
    assert abs(res.post0.amps[0].real - math.cos(up)) < 1e-12
    assert abs(res.post0.amps[1].real - math.sin(up)) < 1e-12
    if level > 0:
        down = ladder_angle(family, level - 1)
        assert abs(res.post1.amps[0].real - math.cos(down)) < 1e-12
        assert abs(res.post1.amps[1].real - math.sin(down)) < 1e-12
    elif family is Family.H:
        # level-0 failure leaves the free stabilizer state
        assert qcore.states_equal_up_to_phase(res.post1, qcore.plus_state())
    else:
        # discarded, but the circuit output still obeys the angle algebra
        down = math.atan(math.tan(bottom) / math.tan(math.pi / 8))
        assert abs(res.post1.amps[0].real - math.cos(down)) < 1e-12
        assert abs(res.post1.amps[1].real - math.sin(down)) < 1e-12


def test_merge_step_angle_algebra():
    cot0 = 1 / math.tan(math.pi / 8)
    rng = derive_rng(1, "algebra")
    for level in (0, 1, 3, 10):
        bottom = resource_state(Family.H, level)
        seen = set()
        while len(seen) < (1 if level == 0 else 2):
            outcome, state = merge_step(bottom, rng)
            if outcome == "up":
                assert 1 / math.tan(state.state_angle) == pytest.approx(
                    cot0 / math.tan(bottom.state_angle), rel=1e-12
                )
                seen.add("up")
            elif state is None:
                assert level == 0
                seen.add("discard")
            else:
                assert 1 / math.tan(state.state_angle) == pytest.approx(
                    math.tan(math.pi / 8) / math.tan(bottom.state_angle), rel=1e-12
                )
                seen.add("down")


def test_merge_step_level0_down_is_discard():
    rng = derive_rng(2, "discard")
    bottom = resource_state(Family.H, 0)
    outcomes = set()
    for _ in range(200):
        outcome, state = merge_step(bottom, rng)
        if outcome == "down":
            assert state is None
            outcomes.add("down")
        else:
            assert state.level == 1
            outcomes.add("up")
    assert outcomes == {"up", "down"}


def test_merge_step_frequencies_match_probability():
    n = 100_000
    rng = derive_rng(3, "freq")
    bottom = resource_state(Family.H, 2)
    p = merge_success_prob(bottom)
    ups = sum(1 for _ in range(n) if merge_step(bottom, rng)[0] == "up")
    sigma = math.sqrt(n * p * (1 - p))
    assert abs(ups - n * p) < 4 * sigma


def test_simulate_climb_level0():
    res = simulate_climb(Family.H, 0, derive_rng(4, "c0"))
    assert res == ClimbResult(h_consumed=1, base_states_consumed=0, steps=0)
    res = simulate_climb(Family.PSI0, 0, derive_rng(4, "c0b"))
    assert res == ClimbResult(h_consumed=0, base_states_consumed=1, steps=0)
    assert climb_cost(res, Family.PSI0) == pytest.approx(base_average_cost(Family.PSI0))


def test_simulate_climb_minimum_consumption():
    for i in (1, 3, 6):
        for k in range(200):
            res = simulate_climb(Family.H, i, derive_rng(5, "min", i, k))
            assert res.h_consumed >= i + 1
            assert res.h_consumed >= res.steps


def test_simulate_climb_h1_mean():
    # geometric restart: 2 resources per attempt, mean attempts 4/3
    n = 100_000
    total = sum(
        simulate_climb(Family.H, 1, derive_rng(6, "h1", k)).h_consumed for k in range(n)
    )
    assert total / n == pytest.approx(8 / 3, abs=0.02)


def test_expected_climb_cost_h0_and_h1():
    assert expected_climb_cost(Family.H, 0) == 1.0
    assert expected_climb_cost(Family.H, 1) == pytest.approx(8 / 3, abs=1e-12)


def test_expected_climb_cost_psi_level0():
    for fam in (Family.PSI0, Family.PSI1, Family.PSI2):
        assert expected_climb_cost(fam, 0) == pytest.approx(base_average_cost(fam))


@pytest.mark.parametrize("family,level", [(Family.H, 2), (Family.H, 5), (Family.PSI0, 3), (Family.PSI2, 4)])
def test_monte_carlo_matches_oracle(family, level):
    n = 20_000
    costs = [
        climb_cost(simulate_climb(family, level, derive_rng(7, "mc", family.value, level, k)), family)
        for k in range(n)
    ]
    mean = sum(costs) / n
    var = sum((c - mean) ** 2 for c in costs) / (n - 1)
    stderr = math.sqrt(var / n)
    assert abs(mean - expected_climb_cost(family, level)) < 3 * stderr


def test_expected_cost_increases_with_level():
    previous = 0.0
    for level in range(20):
        cost = expected_climb_cost(Family.H, level)
        assert cost > previous
        previous = cost


def test_simulate_climb_validation():
    with pytest.raises(ValueError):
        simulate_climb(Family.H, -1, derive_rng(8, "v"))
    with pytest.raises(ValueError):
        simulate_climb(Family.H, MAX_LEVEL + 1, derive_rng(8, "v"))
