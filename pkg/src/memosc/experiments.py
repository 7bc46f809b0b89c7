"""Reproduction runs: nominal operating point, R_a sweep, trigger-timing violations."""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq

from .circuit import CircuitParams
from .design import (AnalysisReport, analyze, equilibrium_resistances, ra_bounds,
                     transition_time, validate_design)
from .memristor import MemristorParams, ParameterError, mobility_constant
from .transient import (PulseMeasurements, SimConfig, Trace, TriggerSchedule,
                        measure_pulses, simulate)

log = logging.getLogger(__name__)

# Device and circuit values used for the published transient run.
NOMINAL_DEVICE = dict(r_on=100.0, r_off=38e3, d=10e-9, mu_v=1e-14)
NOMINAL_CIRCUIT = CircuitParams(r_a=8e3, v_p=0.8, v_n=0.3, v_bias=0.5, v_ol=0.0, v_oh=1.0)
# Thresholds used for the published R_a sweep.
SWEEP_CIRCUIT = CircuitParams(r_a=8e3, v_p=0.9, v_n=0.4, v_bias=0.5, v_ol=0.0, v_oh=1.0)

NOMINAL_TRIGGER = TriggerSchedule.single(0.1, 1e-3)
NOMINAL_T_END = 2.0
TARGET_SWEEP_ERROR = 0.02


def nominal_memristor(r_init: float | None = None) -> MemristorParams:
    """Published device; ``r_init`` defaults to R_mn of the nominal circuit."""
    if r_init is None:
        r_init = equilibrium_resistances(NOMINAL_CIRCUIT)[1]
    return MemristorParams(r_init=r_init, **NOMINAL_DEVICE)


def run_nominal(dt: float = 1e-4, crossing_tol: float = 1e-9,
                m: MemristorParams | None = None,
                c: CircuitParams = NOMINAL_CIRCUIT) -> tuple[AnalysisReport, Trace, PulseMeasurements]:
    m = m if m is not None else nominal_memristor()
    report = analyze(m, c)
    if not report.feasible:
        raise RuntimeError(f"nominal design infeasible: {report.violations}")
    trace = simulate(m, c, NOMINAL_TRIGGER,
                     SimConfig(t_end=NOMINAL_T_END, dt=dt, crossing_tol=crossing_tol))
    return report, trace, measure_pulses(trace, c)


@dataclass(frozen=True)
class SweepSpec:
    start: float
    stop: float
    steps: int
    r_trans_values: tuple[float, ...] = (0.0,)
    parameter: str = "r_a"

    def __post_init__(self):
        if self.parameter != "r_a":
            raise ParameterError(f"unsupported sweep parameter {self.parameter!r}")
        if not self.start < self.stop:
            raise ParameterError("sweep start must be below stop")
        if self.steps < 2:
            raise ParameterError("sweep needs at least 2 steps")
        object.__setattr__(self, "r_trans_values", tuple(float(v) for v in self.r_trans_values))

    def values(self) -> list[float]:
        return [float(v) for v in np.linspace(self.start, self.stop, self.steps)]


class SweepRow(NamedTuple):
    r_a: float
    r_trans: float
    t_o1_analytic: float | None
    t_o1_simulated: float | None
    rel_error: float | None
    feasible: bool


def default_sweep_range(m: MemristorParams | None = None,
                        c: CircuitParams = SWEEP_CIRCUIT) -> tuple[float, float]:
    """Feasible R_a window shrunk by safety margins: 1.5x the lower bound, 0.8x the upper."""
    m = m if m is not None else nominal_memristor()
    lower, upper = ra_bounds(m, c)
    return 1.5 * lower, 0.8 * upper


def _sweep_point(args) -> SweepRow:
    m, c, r_a, r_trans, dt, crossing_tol = args
    base = replace(c, r_a=r_a, r_trans_on=0.0)
    if not validate_design(m, base).feasible:
        return SweepRow(r_a, r_trans, None, None, None, False)
    k = mobility_constant(m)
    r_mp, r_mn = equilibrium_resistances(base)
    analytic = transition_time(r_mn, r_mp, c.v_oh - c.v_bias, r_a, k)
    try:
        sim_c = replace(base, r_trans_on=r_trans)
    except ParameterError:
        return SweepRow(r_a, r_trans, analytic, None, None, False)
    # Steady-cycle start: where the simulated divider's own FF2 reset leaves R_m.
    r_start = equilibrium_resistances(replace(base, r_a=r_a + r_trans))[1]
    sim_m = replace(m, r_init=r_start)
    horizon = analytic * (1 + r_trans / r_a) ** 2
    trig = TriggerSchedule.single(0.0, min(1e-3, 0.01 * horizon))
    cfg = SimConfig(t_end=1.5 * horizon, dt=dt, crossing_tol=crossing_tol, record_stride=10**9)
    pulses = measure_pulses(simulate(sim_m, sim_c, trig, cfg), sim_c).o1_pulses
    if not pulses or pulses[0].truncated:
        return SweepRow(r_a, r_trans, analytic, None, None, True)
    sim = pulses[0].width
    return SweepRow(r_a, r_trans, analytic, sim, abs(sim - analytic) / analytic, True)


def sweep_ra(spec: SweepSpec, m: MemristorParams | None = None,
             c: CircuitParams = SWEEP_CIRCUIT, dt: float = 1e-4,
             crossing_tol: float = 1e-9, workers: int = 1) -> list[SweepRow]:
    """Analytic vs simulated first-pulse width over R_a, one series per R_trans.

    Rows are ordered by R_trans series, then by R_a.
    """
    m = m if m is not None else nominal_memristor()
    jobs = [(m, c, r_a, rt, dt, crossing_tol)
            for rt in spec.r_trans_values for r_a in spec.values()]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, jobs))
    else:
        rows = [_sweep_point(j) for j in jobs]
    if not any(r.feasible for r in rows):
        log.warning("no feasible points in sweep %s..%s", spec.start, spec.stop)
    return rows


def predicted_sweep_error(r_trans: float, r_a_values: Sequence[float],
                          m: MemristorParams | None = None,
                          c: CircuitParams = SWEEP_CIRCUIT) -> np.ndarray:
    """Relative first-pulse error per point if the gate adds ``r_trans`` in series.

    Inside a phase the gate resistance just adds to R_a, so the simulated
    width is the closed form evaluated at ``R_a + r_trans``.
    """
    m = m if m is not None else nominal_memristor()
    k = mobility_constant(m)
    drive = c.v_oh - c.v_bias

    def width(r_a):
        r_mp, r_mn = equilibrium_resistances(replace(c, r_a=r_a, r_trans_on=0.0))
        return transition_time(r_mn, r_mp, drive, r_a, k)

    return np.array([width(ra + r_trans) / width(ra) - 1.0 for ra in r_a_values])


def calibrate_r_trans(r_a_values: Sequence[float], target: float = TARGET_SWEEP_ERROR,
                      m: MemristorParams | None = None,
                      c: CircuitParams = SWEEP_CIRCUIT) -> float:
    """Gate on-resistance giving a mean relative error of ``target`` over the sweep."""
    hi = 0.0999 * min(r_a_values)

    def f(rt):
        return float(np.mean(predicted_sweep_error(rt, r_a_values, m, c))) - target

    if f(hi) < 0:
        raise ValueError(f"target error {target} unreachable with r_trans < r_a/10")
    return brentq(f, 0.0, hi, xtol=1e-9)


def write_sweep_csv(rows: Sequence[SweepRow], path) -> None:
    def fmt(x):
        return "" if x is None else format(x, ".9g")

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["r_a", "r_trans", "t_o1_analytic", "t_o1_simulated", "rel_error", "feasible"])
        for r in rows:
            w.writerow([fmt(r.r_a), fmt(r.r_trans), fmt(r.t_o1_analytic),
                        fmt(r.t_o1_simulated), fmt(r.rel_error), str(r.feasible).lower()])


class Scenario(NamedTuple):
    name: str
    trace: Trace
    pulses: PulseMeasurements
    triggers: TriggerSchedule


def violation_scenarios(dt: float = 1e-4, crossing_tol: float = 1e-9,
                        m: MemristorParams | None = None,
                        c: CircuitParams = NOMINAL_CIRCUIT) -> list[Scenario]:
    """Nominal run, a retrigger halfway through the low phase, and a held trigger.

    The held trigger lasts 0.8 s, longer than the nominal first pulse.
    """
    m = m if m is not None else nominal_memristor()
    rep = analyze(m, c)
    t0 = NOMINAL_TRIGGER.events[0][0]
    width = NOMINAL_TRIGGER.events[0][1]
    schedules = {
        "nominal": NOMINAL_TRIGGER,
        "retrigger": TriggerSchedule(((t0, width), (t0 + rep.t_o1 + 0.5 * rep.t_l, width))),
        "held": TriggerSchedule.single(t0, 0.8),
    }
    out = []
    for name, sched in schedules.items():
        trace = simulate(m, c, sched, SimConfig(t_end=3.0, dt=dt, crossing_tol=crossing_tol))
        out.append(Scenario(name, trace, measure_pulses(trace, c), sched))
    return out
