"""Behavioral simulator and closed-form designer for a memristor one-shot oscillator."""

from .circuit import CircuitParams, DigitalState, Phase, divider_voltage, step_discrete, trigger
from .design import (AnalysisReport, analyze, equilibrium_resistances, jump_voltages,
                     pulse_ratio, pulse_widths, transition_time, validate_design)
from .memristor import (DomainError, MemristorParams, ParameterError, mobility_constant,
                        resistance_after, resistance_derivative)
from .transient import (SimConfig, Trace, TriggerSchedule, convergence_check, measure_pulses,
                        simulate)

__version__ = "0.1.0"
