"""Time-domain simulation of the oscillator as a hybrid system.

Between events the resistance is advanced with the exact square-law update
of the memristor, using V_m re-evaluated at the midpoint resistance of each
step.  Comparator crossings are located by bisection on the step length and
trigger edges split steps exactly, so every discrete transition carries an
exact (to ``crossing_tol``) timestamp.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .circuit import CircuitParams, DigitalState, divider_voltage, output_voltage, step_discrete
from .design import transition_time
from .memristor import MemristorParams, ParameterError, mobility_constant, resistance_after

MAX_BISECTIONS = 200
MAX_SETTLE = 8


class SimulationError(RuntimeError):
    """The integrator could not resolve an event; carries the state at failure."""

    def __init__(self, message, t=None, r_m=None, state=None):
        super().__init__(message)
        self.t = t
        self.r_m = r_m
        self.state = state


@dataclass(frozen=True)
class TriggerSchedule:
    """Trigger pulses as ``(start, width)`` pairs in seconds."""

    events: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        events = tuple((float(s), float(w)) for s, w in self.events)
        object.__setattr__(self, "events", events)
        prev_end = -math.inf
        for start, width in events:
            if not width > 0:
                raise ParameterError(f"trigger width must be > 0 (got {width})")
            if not start >= 0:
                raise ParameterError(f"trigger start must be >= 0 (got {start})")
            if not start >= prev_end:
                raise ParameterError(f"trigger at t={start} overlaps or is out of order")
            prev_end = start + width

    @classmethod
    def single(cls, start: float, width: float) -> "TriggerSchedule":
        return cls(((start, width),))

    def asserted(self, t: float) -> bool:
        return any(s <= t < s + w for s, w in self.events)

    def edges(self) -> list[float]:
        out = []
        for s, w in self.events:
            out.extend((s, s + w))
        return out


@dataclass(frozen=True)
class SimConfig:
    t_end: float
    dt: float = 1e-4
    crossing_tol: float = 1e-9
    record_stride: int = 1

    def __post_init__(self):
        if not 0 < self.dt <= self.t_end:
            raise ParameterError(f"0 < dt <= t_end violated (dt={self.dt}, t_end={self.t_end})")
        if not 0 < self.crossing_tol <= self.dt:
            raise ParameterError(
                f"0 < crossing_tol <= dt violated (crossing_tol={self.crossing_tol})"
            )
        if not (isinstance(self.record_stride, int) and self.record_stride >= 1):
            raise ParameterError(f"record_stride must be an integer >= 1 (got {self.record_stride})")


class EventKind(enum.Enum):
    TRIGGER_SET = "TriggerSet"
    FF1_RESET = "FF1Reset"
    FF2_RESET = "FF2Reset"


class Sample(NamedTuple):
    t: float
    r_m: float
    v_m: float
    v_o1: float
    v_o2: float
    trigger: bool


class Event(NamedTuple):
    t: float
    kind: EventKind
    r_m: float


@dataclass
class Trace:
    samples: list[Sample] = field(default_factory=list)
    events: list[Event] = field(default_factory=list)

    def column(self, name: str) -> list:
        return [getattr(s, name) for s in self.samples]

    def event_kinds(self) -> list[EventKind]:
        return [e.kind for e in self.events]


class Pulse(NamedTuple):
    start: float
    width: float
    r_m_start: float
    truncated: bool = False


@dataclass
class PulseMeasurements:
    o1_pulses: list[Pulse] = field(default_factory=list)
    o2_pulses: list[Pulse] = field(default_factory=list)


class _Engine:
    def __init__(self, m: MemristorParams, c: CircuitParams):
        self.m = m
        self.c = c
        self.k = mobility_constant(m)

    def advance(self, r: float, state: DigitalState, h: float) -> float:
        if not state.tg_on or h == 0.0:
            return r
        c, k, m = self.c, self.k, self.m
        dv0 = divider_voltage(r, c, state) - c.v_bias
        r1 = resistance_after(r, dv0 * h, k, m)
        dv = divider_voltage(0.5 * (r + r1), c, state) - c.v_bias
        return resistance_after(r, dv * h, k, m)

    def comparators(self, r: float, state: DigitalState) -> tuple[bool, bool]:
        v = divider_voltage(r, self.c, state)
        return v >= self.c.v_p, v >= self.c.v_n

    def locate_crossing(self, r: float, state: DigitalState, h: float, tol: float,
                        t0: float) -> float:
        """Smallest step (to within ``tol``) after which a comparator flips."""
        ref = (state.cmp_p, state.cmp_n)
        lo, hi = 0.0, h
        for _ in range(MAX_BISECTIONS):
            if hi - lo <= tol:
                return hi
            mid = 0.5 * (lo + hi)
            if self.comparators(self.advance(r, state, mid), state) != ref:
                hi = mid
            else:
                lo = mid
        raise SimulationError("crossing bisection did not converge", t=t0, r_m=r, state=state)

    def settle(self, r: float, state: DigitalState, trig: bool) -> DigitalState:
        """Apply the logic until V_m and the discrete state agree."""
        for _ in range(MAX_SETTLE):
            new = step_discrete(state, divider_voltage(r, self.c, state), trig, self.c)
            if new == state:
                return new
            state = new
        raise SimulationError("discrete state did not settle", r_m=r, state=state)

    def sample(self, t: float, r: float, state: DigitalState, trig: bool) -> Sample:
        c = self.c
        return Sample(t, r, divider_voltage(r, c, state), output_voltage(state.ff1_high, c),
                      output_voltage(state.ff2_high, c), trig)


def simulate(m: MemristorParams, c: CircuitParams, trig: TriggerSchedule,
             cfg: SimConfig) -> Trace:
    """Run the oscillator from t=0 in the stable state with R_m = ``m.r_init``."""
    eng = _Engine(m, c)
    trace = Trace()
    breaks = sorted({b for b in trig.edges() if 0 < b < cfg.t_end} | {cfg.t_end})

    t = 0.0
    r = m.r_init
    level = trig.asserted(0.0)
    state = eng.settle(r, DigitalState(), False)
    state = _apply(eng, trace, t, r, state, level, False)
    trace.samples.append(eng.sample(t, r, state, level))

    bi = 0
    steps = 0
    while t < cfg.t_end:
        while breaks[bi] <= t:
            bi += 1
        t_break = breaks[bi]
        h = min(cfg.dt, t_break - t)
        r_new = eng.advance(r, state, h)

        if state.tg_on and eng.comparators(r_new, state) != (state.cmp_p, state.cmp_n):
            h = eng.locate_crossing(r, state, h, cfg.crossing_tol, t)
            r_new = eng.advance(r, state, h)
            event = True
        else:
            event = False

        t_new = t + h
        if t_new >= t_break or t_break - t_new < 0.5 * cfg.crossing_tol:
            t_new = t_break
            event = True
        t, r = t_new, r_new
        if event:
            prev, level = level, trig.asserted(t)
            state = _apply(eng, trace, t, r, state, level, prev)
        steps += 1
        if event or steps % cfg.record_stride == 0 or t >= cfg.t_end:
            trace.samples.append(eng.sample(t, r, state, level))
    return trace


def _apply(eng: _Engine, trace: Trace, t: float, r: float, state: DigitalState,
           level: bool, prev_level: bool) -> DigitalState:
    new = eng.settle(r, state, level)
    if level and not prev_level:
        trace.events.append(Event(t, EventKind.TRIGGER_SET, r))
    if state.ff1_high and not new.ff1_high:
        trace.events.append(Event(t, EventKind.FF1_RESET, r))
    if state.ff2_high and not new.ff2_high:
        trace.events.append(Event(t, EventKind.FF2_RESET, r))
    return new


def _intervals(trace: Trace, attr: str, high: float) -> list[Pulse]:
    pulses = []
    start = r0 = None
    for s in trace.samples:
        on = getattr(s, attr) == high
        if on and start is None:
            start, r0 = s.t, s.r_m
        elif not on and start is not None:
            pulses.append(Pulse(start, s.t - start, r0))
            start = None
    if start is not None:
        pulses.append(Pulse(start, trace.samples[-1].t - start, r0, truncated=True))
    return pulses


def measure_pulses(trace: Trace, c: CircuitParams) -> PulseMeasurements:
    """High intervals of V_o1 and V_o2.

    Every discrete transition is recorded as a sample at its event time, so
    widths are resolved to the crossing tolerance rather than the step.
    """
    return PulseMeasurements(_intervals(trace, "v_o1", c.v_oh), _intervals(trace, "v_o2", c.v_oh))


class ConvergenceRow(NamedTuple):
    dt: float
    t_o1: float
    analytic: float
    rel_error: float


def convergence_check(m: MemristorParams, c: CircuitParams, trig: TriggerSchedule,
                      dt_sequence: Sequence[float], t_end: float | None = None,
                      crossing_tol: float = 1e-9) -> list[ConvergenceRow]:
    """Measured first V_o1 width for each step size against the closed form.

    The reference is the no-R_trans closed form from ``m.r_init`` to R_mp, so a
    nonzero ``c.r_trans_on`` shows up as a residual that does not vanish.
    """
    from .design import equilibrium_resistances

    dts = list(dt_sequence)
    if any(b >= a for a, b in zip(dts, dts[1:])):
        raise ParameterError("dt_sequence must be strictly decreasing")
    r_mp, _ = equilibrium_resistances(c)
    analytic = transition_time(m.r_init, r_mp, c.v_oh - c.v_bias, c.r_a, mobility_constant(m))
    if t_end is None:
        t_end = trig.events[0][0] + 2.0 * analytic * (1 + c.r_trans_on / c.r_a) ** 2
    rows = []
    for dt in dts:
        cfg = SimConfig(t_end=t_end, dt=dt, crossing_tol=min(crossing_tol, dt),
                        record_stride=10**9)
        pulses = measure_pulses(simulate(m, c, trig, cfg), c).o1_pulses
        width = pulses[0].width if pulses else math.nan
        rows.append(ConvergenceRow(dt, width, analytic, abs(width - analytic) / analytic))
    return rows


def observed_order(rows: Sequence[ConvergenceRow]) -> list[float]:
    """Empirical convergence order between consecutive rows."""
    out = []
    for a, b in zip(rows, rows[1:]):
        if a.rel_error > 0 and b.rel_error > 0:
            out.append(math.log(a.rel_error / b.rel_error) / math.log(a.dt / b.dt))
        else:
            out.append(math.nan)
    return out


def _g9(x: float) -> str:
    return format(x, ".9g")


def write_trace_csv(trace: Trace, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "r_m", "v_m", "v_o1", "v_o2", "trigger"])
        for s in trace.samples:
            w.writerow([_g9(s.t), _g9(s.r_m), _g9(s.v_m), _g9(s.v_o1), _g9(s.v_o2),
                        int(s.trigger)])


def write_events_csv(trace: Trace, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "kind", "r_m"])
        for e in trace.events:
            w.writerow([_g9(e.t), e.kind.value, _g9(e.r_m)])


def read_trace_csv(path) -> list[Sample]:
    with open(path, newline="") as fh:
        return [Sample(float(row["t"]), float(row["r_m"]), float(row["v_m"]),
                       float(row["v_o1"]), float(row["v_o2"]), row["trigger"] == "1")
                for row in csv.DictReader(fh)]
