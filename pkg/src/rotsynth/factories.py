"""Post-selected 4-qubit Clifford factories for the psi base states.

Each factory consumes copies of the raw resource cos(pi/8)|0> + sin(pi/8)|1>
(one input is the free |+> for psi1), measures three qubits, and keeps the
remaining qubit only on the all-zero outcome.  The kept state is a new
non-stabilizer base state.  Each circuit decodes a 4-qubit stabilizer code,
which provides an independent check of both the success probability and
the output state.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from . import qcore
from .ladder import Family, base_average_cost, base_state_angle
from .qcore import PauliString, PureRegister

_H_INPUT = "h"
_PLUS_INPUT = "plus"

# (gate, qubits) sequences transcribed from the factory circuits; the
# stabilizer-code projector and the closed-form probabilities pin them down.
_PSI0_GATES = (
    ("H", (0,)),
    ("H", (2,)),
    ("CNOT", (1, 2)),
    ("CNOT", (2, 0)),
    ("CNOT", (1, 3)),
    ("H", (1,)),
    ("CZ", (2, 3)),
    ("CNOT", (0, 3)),
    ("H", (2,)),
)
_PSI2_GATES = (
    ("CNOT", (2, 1)),
    ("CNOT", (0, 3)),
    ("CNOT", (0, 2)),
    ("H", (0,)),
    ("CNOT", (3, 1)),
    ("H", (1,)),
)


@dataclass(frozen=True)
class FactorySpec:
    kind: Family
    gates: tuple[tuple[str, tuple[int, ...]], ...]
    inputs: tuple[str, str, str, str]
    measured_qubits: tuple[int, int, int]
    output_qubit: int
    h_per_trial: int
    success_prob_closed_form: float
    avg_cost_closed_form: float
    output_state_angle: float


_SPECS = {
    Family.PSI0: FactorySpec(
        kind=Family.PSI0,
        gates=_PSI0_GATES,
        inputs=(_H_INPUT,) * 4,
        measured_qubits=(0, 1, 3),
        output_qubit=2,
        h_per_trial=4,
        success_prob_closed_form=3 * (2 + math.sqrt(2)) / 32,
        avg_cost_closed_form=base_average_cost(Family.PSI0),
        output_state_angle=base_state_angle(Family.PSI0),
    ),
    Family.PSI1: FactorySpec(
        kind=Family.PSI1,
        gates=_PSI0_GATES,
        inputs=(_H_INPUT, _PLUS_INPUT, _H_INPUT, _H_INPUT),
        measured_qubits=(0, 1, 3),
        output_qubit=2,
        h_per_trial=3,
        success_prob_closed_form=(6 + math.sqrt(2)) / 32,
        avg_cost_closed_form=base_average_cost(Family.PSI1),
        output_state_angle=base_state_angle(Family.PSI1),
    ),
    Family.PSI2: FactorySpec(
        kind=Family.PSI2,
        gates=_PSI2_GATES,
        inputs=(_H_INPUT,) * 4,
        measured_qubits=(0, 2, 3),
        output_qubit=1,
        h_per_trial=4,
        success_prob_closed_form=11 / 32,
        avg_cost_closed_form=base_average_cost(Family.PSI2),
        output_state_angle=base_state_angle(Family.PSI2),
    ),
}

# Stabilizer codes decoded by the circuits (psi1 runs the psi0 circuit, so
# it shares the psi0 code with the |+> substitution on qubit 1).
CODE_GENERATORS = {
    Family.PSI0: (
        PauliString(1, "XZXI"),
        PauliString(1, "IXZX"),
        PauliString(1, "XIXZ"),
    ),
    Family.PSI1: (
        PauliString(1, "XZXI"),
        PauliString(1, "IXZX"),
        PauliString(1, "XIXZ"),
    ),
    Family.PSI2: (
        PauliString(1, "XXXX"),
        PauliString(1, "ZIZI"),
        PauliString(1, "ZIIZ"),
    ),
}
LOGICAL_Z = PauliString(1, "ZZZZ")


def factory_spec(kind: Family) -> FactorySpec:
    if kind not in _SPECS:
        raise ValueError(f"{kind} is not a factory family")
    return _SPECS[kind]


def factory_output_angle(kind: Family) -> float:
    """State angle of the produced base state (half the closed-form rotation
    angle)."""
    return factory_spec(kind).output_state_angle


def _input_register(spec: FactorySpec) -> PureRegister:
    factors = [
        qcore.plus_state() if kind == _PLUS_INPUT else qcore.xz_state(math.pi / 8)
        for kind in spec.inputs
    ]
    return qcore.product_state(*factors)


@lru_cache(maxsize=None)
def simulate_factory_circuit(kind: Family) -> tuple[float, PureRegister]:
    """Exact circuit run: success probability of the all-zero outcome and the
    post-selected single-qubit output state."""
    spec = factory_spec(kind)
    reg = _input_register(spec)
    for gate, qubits in spec.gates:
        reg = qcore.apply_gate(reg, gate, *qubits)
    prob = 1.0
    # measure from the highest index down so positions stay valid
    for q in sorted(spec.measured_qubits, reverse=True):
        res = qcore.measure_qubit(reg, q)
        prob *= res.prob0
        reg = res.post0
    return prob, reg


def run_factory(
    kind: Family, rng: random.Random
) -> tuple[bool, PureRegister | None, int]:
    """One factory trial: (success, output state or None, resources spent).

    Non-zero measurement outcomes are always discarded.
    """
    prob, output = simulate_factory_circuit(kind)
    spec = factory_spec(kind)
    if rng.random() < prob:
        return True, output, spec.h_per_trial
    return False, None, spec.h_per_trial


@dataclass(frozen=True)
class CodeCheckReport:
    kind: Family
    circuit_prob: float
    projector_prob: float
    closed_form_prob: float
    circuit_angle: float
    decoded_angle: float
    probs_match: bool
    states_match: bool

    @property
    def ok(self) -> bool:
        return self.probs_match and self.states_match

    def failure_reason(self) -> str | None:
        if not self.probs_match:
            return (
                f"{self.kind.value}: projector probability {self.projector_prob!r} "
                f"!= circuit probability {self.circuit_prob!r}"
            )
        if not self.states_match:
            return (
                f"{self.kind.value}: decoded state angle {self.decoded_angle!r} "
                f"!= circuit output angle {self.circuit_angle!r}"
            )
        return None


def verify_factory_against_code(kind: Family, tol: float = 1e-10) -> CodeCheckReport:
    """Check the circuit against its stabilizer code: the projector overlap
    must equal the post-selected probability, and the decoded logical state
    must match the circuit output up to a single-qubit Clifford and phase."""
    spec = factory_spec(kind)
    circuit_prob, circuit_out = simulate_factory_circuit(kind)
    projected = qcore.pauli_projector_overlap(
        list(CODE_GENERATORS[kind]), _input_register(spec), LOGICAL_Z
    )
    circuit_angle = qcore.canonical_xz_angle(circuit_out)
    decoded_angle = qcore.canonical_xz_angle(projected.decoded)
    return CodeCheckReport(
        kind=kind,
        circuit_prob=circuit_prob,
        projector_prob=projected.prob,
        closed_form_prob=spec.success_prob_closed_form,
        circuit_angle=circuit_angle,
        decoded_angle=decoded_angle,
        probs_match=abs(circuit_prob - projected.prob) < tol,
        states_match=qcore.clifford_equivalent(circuit_out, projected.decoded),
    )
