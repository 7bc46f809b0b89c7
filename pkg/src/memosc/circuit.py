"""Behavioral model of the oscillator: voltage divider plus feedback logic.

The continuous state is the memristor resistance.  The discrete state is
two flip-flops, the transmission gate they drive and the two comparators.

Feedback logic
--------------
* FF1 resets on a rising edge of ``cmp_p AND NOT trigger``.
* FF2 resets on a rising edge of ``cmp_n AND NOT ff1 AND NOT trigger``.
* A trigger sets both flip-flops and dominates any reset.
* The transmission gate conducts while FF2 is high.

Gating the reset lines with the trigger means a reset that was masked by a
held trigger fires at the trigger's falling edge.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .memristor import DomainError, ParameterError


@dataclass(frozen=True)
class CircuitParams:
    """Divider and feedback network values (ohm, V)."""

    r_a: float
    v_p: float
    v_n: float
    v_bias: float
    v_ol: float = 0.0
    v_oh: float = 1.0
    r_trans_on: float = 0.0

    def __post_init__(self):
        if not self.r_a > 0:
            raise ParameterError(f"r_a must be > 0 (got {self.r_a})")
        if not self.r_trans_on >= 0:
            raise ParameterError(f"r_trans_on must be >= 0 (got {self.r_trans_on})")
        if not self.r_trans_on < self.r_a / 10:
            raise ParameterError(
                f"r_trans_on < r_a/10 violated ({self.r_trans_on} vs r_a={self.r_a})"
            )
        if not self.v_ol < self.v_n < self.v_bias < self.v_p < self.v_oh:
            raise ParameterError(
                "threshold ordering v_ol < v_n < v_bias < v_p < v_oh violated "
                f"({self.v_ol}, {self.v_n}, {self.v_bias}, {self.v_p}, {self.v_oh})"
            )


class Phase(enum.Enum):
    STABLE = "Stable"
    HIGH = "HighPhase"
    LOW = "LowPhase"


@dataclass(frozen=True)
class DigitalState:
    """Flip-flop, gate and comparator levels.

    ``rst1``/``rst2`` hold the last level of the gated reset lines so that
    resets act on edges.
    """

    ff1_high: bool = False
    ff2_high: bool = False
    tg_on: bool = False
    cmp_p: bool = False
    cmp_n: bool = False
    rst1: bool = False
    rst2: bool = False

    @property
    def phase(self) -> Phase:
        if not self.tg_on:
            return Phase.STABLE
        return Phase.HIGH if self.ff1_high else Phase.LOW


def output_voltage(high: bool, params: CircuitParams) -> float:
    return params.v_oh if high else params.v_ol


def divider_voltage(r_m: float, params: CircuitParams, state: DigitalState) -> float:
    """Memristor node voltage V_m.

    With the transmission gate off the divider floats and V_m sits at
    ``v_bias``.
    """
    if not r_m > 0:
        raise DomainError(f"resistance must be positive (got {r_m})")
    if not state.tg_on:
        return params.v_bias
    v_o = params.v_oh if state.ff1_high else params.v_ol
    return (v_o - params.v_bias) * r_m / (r_m + params.r_a + params.r_trans_on) + params.v_bias


def trigger(state: DigitalState) -> DigitalState:
    return replace(state, ff1_high=True, ff2_high=True, tg_on=True)


def step_discrete(state: DigitalState, v_m: float, trigger_asserted: bool,
                  params: CircuitParams) -> DigitalState:
    """Advance the feedback logic given the current V_m and trigger level.

    All registers update from the same pre-step state, so FF2's reset gate
    sees FF1 as it was before this step.
    """
    cmp_p = v_m >= params.v_p
    cmp_n = v_m >= params.v_n
    rst1 = cmp_p and not trigger_asserted
    rst2 = cmp_n and not state.ff1_high and not trigger_asserted

    ff1, ff2 = state.ff1_high, state.ff2_high
    if trigger_asserted:
        ff1 = ff2 = True
    else:
        if rst1 and not state.rst1:
            ff1 = False
        if rst2 and not state.rst2:
            ff2 = False
    return DigitalState(ff1_high=ff1, ff2_high=ff2, tg_on=ff2,
                        cmp_p=cmp_p, cmp_n=cmp_n, rst1=rst1, rst2=rst2)
