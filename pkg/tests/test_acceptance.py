"""Exit criteria for the build, one test per criterion.

Each test records a PASS/FAIL line shown in the pytest terminal summary.
"""

import time

import numpy as np
import pytest

from memosc.design import (analyze, equilibrium_resistances, pulse_ratio, pulse_widths,
                           transition_time)
from memosc.experiments import (NOMINAL_CIRCUIT, SweepSpec, calibrate_r_trans, default_sweep_range,
                                nominal_memristor, sweep_ra, violation_scenarios)
from memosc.memristor import MemristorParams
from memosc.transient import (EventKind, SimConfig, TriggerSchedule, measure_pulses, simulate)

from .conftest import ACCEPTANCE_LINES
from .designs import random_design

KINDS = [EventKind.TRIGGER_SET, EventKind.FF1_RESET, EventKind.FF2_RESET]


def record(n, title, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] C{n} {title}: {detail}")
    assert ok, detail


def rel(a, b):
    return abs(a - b) / abs(b)


def test_c1_equilibrium_resistances():
    t0 = time.perf_counter()
    r_mp, r_mn = equilibrium_resistances(NOMINAL_CIRCUIT)
    checks = [
        rel(r_mp, 12000.0) < 1e-12,
        rel(r_mn, 5333.33) < 1e-4,
        rel(r_mn, 5.3e3) < 0.01,
        rel(r_mp, 12e3) < 0.01,
    ]
    record(1, "equilibrium resistances", all(checks) and time.perf_counter() - t0 < 1,
           f"r_mp={r_mp:.6f} r_mn={r_mn:.4f}")


def test_c2_closed_form_widths():
    t_o1, t_o2, _ = pulse_widths(nominal_memristor(), NOMINAL_CIRCUIT)
    ok = rel(t_o1, 0.58) < 0.015 and rel(t_o2, 1.176) < 0.01
    record(2, "closed-form pulse widths", ok,
           f"t_o1={t_o1:.4f}s (published 0.58, {rel(t_o1, 0.58):.2%}) "
           f"t_o2={t_o2:.4f}s (published 1.176, {rel(t_o2, 1.176):.2%})")


def test_c3_simulation_matches_closed_form():
    m = nominal_memristor()
    t_o1, t_o2, _ = pulse_widths(m, NOMINAL_CIRCUIT)
    trig = TriggerSchedule.single(0.1, 1e-3)
    parts, ok = [], True
    for dt, tol in ((1e-4, 0.005), (1e-5, 0.001)):
        t0 = time.perf_counter()
        trace = simulate(m, NOMINAL_CIRCUIT, trig, SimConfig(t_end=1.4, dt=dt, record_stride=100))
        elapsed = time.perf_counter() - t0
        p = measure_pulses(trace, NOMINAL_CIRCUIT)
        e1 = rel(p.o1_pulses[0].width, t_o1)
        e2 = rel(p.o2_pulses[0].width, t_o2)
        ok &= e1 < tol and e2 < tol and elapsed < 5.0
        parts.append(f"dt={dt:g}: err_o1={e1:.2e} err_o2={e2:.2e} ({elapsed:.2f}s, tol {tol:g})")
    record(3, "simulated vs analytic widths", ok, "; ".join(parts))


def test_c4_ratio_identity():
    rng = np.random.default_rng(20240401)
    t0 = time.perf_counter()
    worst = 0.0
    n = 1000
    for _ in range(n):
        m, c = random_design(rng)
        t_o1, t_o2, _ = pulse_widths(m, c)
        worst = max(worst, rel(t_o1 / t_o2, pulse_ratio(c)))
    elapsed = time.perf_counter() - t0
    record(4, "T_o1/T_o2 identity", worst < 1e-9 and elapsed < 10,
           f"{n} designs, worst rel dev {worst:.2e} ({elapsed:.2f}s)")


def brute_force_times(r_from, r_to, drive, r_a, k, h=1e-6):
    """Explicit-midpoint integration of dR/dt = k*dV/R with the divider dV, vectorized."""
    def rate(r):
        dv = drive * r / (r + r_a)
        return k * dv / r

    r = r_from.astype(float).copy()
    up = r_to > r_from
    out = np.full(r.shape, np.nan)
    t = 0.0
    while np.isnan(out).any():
        r_new = r + h * rate(r + 0.5 * h * rate(r))
        hit = np.isnan(out) & np.where(up, r_new >= r_to, r_new <= r_to)
        if hit.any():
            frac = (r_to[hit] - r[hit]) / (r_new[hit] - r[hit])
            out[hit] = t + frac * h
        r = r_new
        t += h
    return out


def test_c5_closed_form_vs_brute_force():
    rng = np.random.default_rng(5)
    cases = []
    for i in range(100):
        m, c = random_design(rng)
        r_mp, r_mn = equilibrium_resistances(c)
        drive = (c.v_oh if i % 2 == 0 else c.v_ol) - c.v_bias
        r_from, r_to = (r_mn, r_mp) if drive > 0 else (r_mp, r_mn)
        # Size k so runs last ~0.02-0.2 s; the oracle steps at a fixed 1 us.
        scale = rng.uniform(0.02, 0.2)
        k = (r_mp + c.r_a) ** 2 / (2 * abs(drive) * scale)
        cases.append((r_from, r_to, drive, c.r_a, k))
    arr = np.array(cases).T
    t0 = time.perf_counter()
    brute = brute_force_times(*arr)
    elapsed = time.perf_counter() - t0
    closed = np.array([transition_time(*cs) for cs in cases])
    worst = float(np.max(np.abs(closed - brute) / brute))
    record(5, "closed form vs brute-force oracle", worst < 5e-4 and elapsed < 60,
           f"100 cases, worst rel dev {worst:.2e} ({elapsed:.1f}s)")


def test_c6_ra_sweep():
    t0 = time.perf_counter()
    lo, hi = default_sweep_range()
    spec = SweepSpec(lo, hi, 12)
    rt = calibrate_r_trans(spec.values())
    rows = sweep_ra(SweepSpec(lo, hi, 12, (0.0, rt)))
    elapsed = time.perf_counter() - t0
    zero = [r for r in rows if r.r_trans == 0.0]
    cal = [r for r in rows if r.r_trans == rt]
    worst0 = max(r.rel_error for r in zero)
    sims = [r.t_o1_simulated for r in zero]
    monotone = all(b > a for a, b in zip(sims, sims[1:]))
    cal_errs = [r.rel_error for r in cal]
    mean_cal = float(np.mean(cal_errs))
    ok = (all(r.feasible for r in rows) and worst0 < 0.005 and monotone
          and 0.01 <= mean_cal <= 0.04 and elapsed < 120)
    record(6, "R_a sweep", ok,
           f"R_a {lo:.0f}..{hi:.0f} ohm; R_trans=0 worst err {worst0:.2e}; monotone={monotone}; "
           f"R_trans={rt:.1f} ohm mean err {mean_cal:.2%} "
           f"(per point {min(cal_errs):.2%}..{max(cal_errs):.2%}) ({elapsed:.1f}s)")


def test_c7_stable_state_preserves_resistance():
    rng = np.random.default_rng(7)
    base = nominal_memristor()
    ok = True
    inits = [base.r_on, base.r_off] + list(rng.uniform(base.r_on, base.r_off, 20))
    for r0 in inits:
        m = MemristorParams(r_on=base.r_on, r_off=base.r_off, d=base.d, mu_v=base.mu_v,
                            r_init=float(r0))
        t_end = float(rng.uniform(1e-3, 50.0))
        trace = simulate(m, NOMINAL_CIRCUIT, TriggerSchedule(),
                         SimConfig(t_end=t_end, dt=t_end / 97))
        ok &= trace.samples[0].r_m == trace.samples[-1].r_m == float(r0)
        ok &= trace.samples[-1].t == t_end
    record(7, "no trigger keeps R_m bit-identical", ok, f"{len(inits)} runs incl. r_on, r_off")


def test_c8_phase_sequence():
    rng = np.random.default_rng(8)
    t0 = time.perf_counter()
    worst_p = worst_n = 0.0
    bad = 0
    for _ in range(100):
        m, c = random_design(rng, r_init="random")
        rep = analyze(m, c)
        trig = TriggerSchedule.single(0.0, 0.01 * rep.t_o1_first)
        cfg = SimConfig(t_end=1.2 * (rep.t_o1_first + rep.t_l), dt=rep.t_o2 / 4000,
                        crossing_tol=rep.t_o2 * 1e-9, record_stride=10**6)
        trace = simulate(m, c, trig, cfg)
        if trace.event_kinds() != KINDS:
            bad += 1
            continue
        worst_p = max(worst_p, rel(trace.events[1].r_m, rep.r_mp))
        worst_n = max(worst_n, rel(trace.events[2].r_m, rep.r_mn))
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and worst_p < 1e-3 and worst_n < 1e-3 and elapsed < 60
    record(8, "phase sequence", ok,
           f"100 designs, {bad} wrong sequences, R@FF1 worst {worst_p:.1e}, "
           f"R@FF2 worst {worst_n:.1e} ({elapsed:.1f}s)")


def test_c9_violation_scenarios():
    t0 = time.perf_counter()
    m = nominal_memristor()
    rep = analyze(m, NOMINAL_CIRCUIT)
    sc = {s.name: s for s in violation_scenarios(m=m)}
    second = sc["retrigger"].pulses.o1_pulses[1]
    expect = transition_time(second.r_m_start, rep.r_mp, NOMINAL_CIRCUIT.v_oh - NOMINAL_CIRCUIT.v_bias,
                             NOMINAL_CIRCUIT.r_a, m.k)
    e_re = rel(second.width, expect)
    held = sc["held"].pulses.o1_pulses[0].width
    trig_w = sc["held"].triggers.events[0][1]
    elapsed = time.perf_counter() - t0
    ok = e_re < 0.005 and abs(held - trig_w) <= 1e-9 and elapsed < 10
    record(9, "trigger-timing violations", ok,
           f"retrigger width {second.width:.4f}s vs {expect:.4f}s ({e_re:.1e}); "
           f"held V_o1 {held:.9f}s vs trigger {trig_w}s ({elapsed:.1f}s)")
