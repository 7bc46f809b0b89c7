"""Closed-form design equations for the memristor one-shot.

Every formula here neglects the transmission-gate resistance; the transient
simulator keeps it.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .circuit import CircuitParams
from .memristor import DomainError, MemristorParams, mobility_constant

# Violation names are part of the CLI output contract.
V_OSCILLATION = "Eq5-oscillation-condition"
V_RA_LOWER = "Eq6-lower-bound"
V_RA_UPPER = "Eq6-upper-bound"
V_ORDER = "r_mn-not-below-r_mp"
V_JUMP = "jump-below-Vn"


class InfeasibleTransition(DomainError):
    """The drive polarity cannot move the resistance in the requested direction."""


class FirstTriggerInfeasible(DomainError):
    """The initial resistance already lies beyond the high-phase endpoint."""


@dataclass(frozen=True)
class DesignVerdict:
    feasible: bool
    violations: tuple[str, ...] = ()

    def __bool__(self):
        return self.feasible


@dataclass
class AnalysisReport:
    k: float
    r_mp: float
    r_mn: float
    v_p_prime: float
    v_n_prime: float
    t_h: float | None
    t_l: float | None
    t_o1: float | None
    t_o2: float | None
    t_o1_first: float | None
    ratio: float
    feasible: bool
    violations: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def equilibrium_resistances(c: CircuitParams) -> tuple[float, float]:
    """Resistances ``(r_mp, r_mn)`` at which V_m sits exactly on V_p / V_n."""
    if c.v_oh == c.v_p or c.v_ol == c.v_n:
        raise DomainError("threshold coincides with an output rail")
    r_mp = c.r_a * (c.v_p - c.v_bias) / (c.v_oh - c.v_p)
    r_mn = c.r_a * (c.v_n - c.v_bias) / (c.v_ol - c.v_n)
    return r_mp, r_mn


def jump_voltages(c: CircuitParams) -> tuple[float, float]:
    """V_m just after entering the high phase (from R_mn) and the low phase (from R_mp)."""
    if c.v_ol == c.v_bias or c.v_oh == c.v_bias:
        raise DomainError("v_bias equals an output rail")
    hi = c.v_oh - c.v_bias
    lo = c.v_ol - c.v_bias
    v_p_prime = c.v_bias + (c.v_n - c.v_bias) * hi / lo
    v_n_prime = c.v_bias + (c.v_p - c.v_bias) * lo / hi
    return v_p_prime, v_n_prime


def ra_bounds(m: MemristorParams, c: CircuitParams) -> tuple[float, float]:
    """Open interval of R_a keeping both endpoints inside (R_on, R_off)."""
    lower = m.r_on * (c.v_ol - c.v_n) / (c.v_n - c.v_bias)
    upper = m.r_off * (c.v_oh - c.v_p) / (c.v_p - c.v_bias)
    return lower, upper


def validate_design(m: MemristorParams, c: CircuitParams) -> DesignVerdict:
    violations = []
    hi = c.v_oh - c.v_bias
    lo = c.v_ol - c.v_bias
    if not c.v_p - c.v_bias > (c.v_n - c.v_bias) * hi / lo:
        violations.append(V_OSCILLATION)
    lower, upper = ra_bounds(m, c)
    if not lower < c.r_a:
        violations.append(V_RA_LOWER)
    if not c.r_a < upper:
        violations.append(V_RA_UPPER)
    r_mp, r_mn = equilibrium_resistances(c)
    if not r_mn < r_mp:
        violations.append(V_ORDER)
    v_p_prime, _ = jump_voltages(c)
    if not v_p_prime > c.v_n:
        violations.append(V_JUMP)
    return DesignVerdict(not violations, tuple(violations))


def transition_time(r_from: float, r_to: float, drive: float, r_a: float, k: float) -> float:
    """Time for the resistance to move from ``r_from`` to ``r_to``.

    ``drive`` is ``V_o - V_bias`` for the active phase.  Inside a phase
    ``dR/dt = k * drive / (R + r_a)``, which integrates in closed form.
    """
    if r_to == r_from:
        return 0.0
    if drive == 0:
        raise DomainError("zero drive never moves the resistance")
    if (r_to > r_from) != (drive > 0):
        raise InfeasibleTransition(
            f"drive {drive:+g} V cannot move R from {r_from:g} to {r_to:g}"
        )
    num = r_to * r_to - r_from * r_from + 2.0 * r_a * (r_to - r_from)
    return num / (2.0 * k * drive)


def pulse_widths(m: MemristorParams, c: CircuitParams) -> tuple[float, float, float]:
    """``(t_o1, t_o2, t_o1_first)`` for the steady cycle and the first cycle."""
    k = mobility_constant(m)
    r_mp, r_mn = equilibrium_resistances(c)
    t_h = transition_time(r_mn, r_mp, c.v_oh - c.v_bias, c.r_a, k)
    t_l = transition_time(r_mp, r_mn, c.v_ol - c.v_bias, c.r_a, k)
    if m.r_init > r_mp:
        raise FirstTriggerInfeasible(
            f"r_init={m.r_init:g} exceeds r_mp={r_mp:g}; the first high phase cannot end"
        )
    t_first = transition_time(m.r_init, r_mp, c.v_oh - c.v_bias, c.r_a, k)
    return t_h, t_h + t_l, t_first


def pulse_ratio(c: CircuitParams) -> float:
    """T_o1 / T_o2, which depends only on the rails and the bias."""
    if c.v_oh == c.v_ol:
        raise DomainError("degenerate output rails")
    return (c.v_bias - c.v_ol) / (c.v_oh - c.v_ol)


def analyze(m: MemristorParams, c: CircuitParams) -> AnalysisReport:
    """Evaluate every closed-form quantity.

    Infeasible designs still get a report; durations that cannot be
    computed are ``None``.
    """
    k = mobility_constant(m)
    r_mp, r_mn = equilibrium_resistances(c)
    v_p_prime, v_n_prime = jump_voltages(c)
    verdict = validate_design(m, c)

    t_h = t_l = t_o1 = t_o2 = t_first = None
    try:
        t_h = transition_time(r_mn, r_mp, c.v_oh - c.v_bias, c.r_a, k)
        t_l = transition_time(r_mp, r_mn, c.v_ol - c.v_bias, c.r_a, k)
        t_o1, t_o2 = t_h, t_h + t_l
    except DomainError:
        pass
    if m.r_init <= r_mp:
        t_first = transition_time(m.r_init, r_mp, c.v_oh - c.v_bias, c.r_a, k)

    return AnalysisReport(
        k=k, r_mp=r_mp, r_mn=r_mn, v_p_prime=v_p_prime, v_n_prime=v_n_prime,
        t_h=t_h, t_l=t_l, t_o1=t_o1, t_o2=t_o2, t_o1_first=t_first,
        ratio=pulse_ratio(c), feasible=verdict.feasible,
        violations=list(verdict.violations),
    )
