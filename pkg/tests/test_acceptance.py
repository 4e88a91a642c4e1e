"""Delivery acceptance suite: one test per criterion, at the pinned tolerance.

Run `pytest tests/test_acceptance.py -v` for one pass/fail line per criterion.

Two criteria encode external event-timing targets for the deformed cat run
(collapses near t = 67.8, 201.2, 336.8; revivals near 133.2, 266.6 with the
peak heights decaying).  The model as specified produces a revival period
near 91 rescaled units instead, so criteria 9 and 11 fail; the numbers the
detector actually finds are printed in the assertion messages.  The tests
state the targets faithfully rather than being fitted to the code.
"""

import math
import time

import numpy as np
import pytest

from qtrap import (
    DeformationParams,
    SystemParams,
    build_hamiltonian,
    diagonalize,
    entropy_entrywise,
    entropy_vn,
    evolve,
    fq_matrix,
    initial_state,
    reduce_ion,
    time_series,
)

from oracles import fq_series_oracle, rk4_evolve

LN2 = math.log(2.0)

# Event-timing targets for the deformed cat run (criterion 9).
TARGET_COLLAPSES = (67.8, 201.2, 336.8)
TARGET_REVIVALS = (133.2, 266.6)
EVENT_TIME_TOLERANCE = 5.0
# Fallback prong: alternating kinds with revival spacing near 133 units.
REVIVAL_SPACING = 133.0
REVIVAL_SPACING_TOLERANCE = 13.0


def _format_events(events):
    return ", ".join(f"{e.kind}@{e.t:g}(h={e.value:.4g})" for e in events)


def test_criterion_01_initial_product_states_have_zero_entropy():
    # The zero-population and zero-coherence terms contribute exactly 0 under
    # the 0 ln 0 convention; what remains is double-precision rounding of the
    # truncated coherent state's unit norm, bounded here at 1e-12.
    start = time.perf_counter()
    for tau in (0.0, 0.004):
        params = SystemParams(deformation=DeformationParams(tau=tau, n_max=32))
        for kind in ("ground", "excited"):
            ion = reduce_ion(initial_state(kind, params))
            s_paper = entropy_entrywise(ion)
            s_vn = entropy_vn(ion)
            assert abs(s_paper) <= 1e-12, (
                f"{kind}, tau={tau}: entrywise entropy {s_paper!r} not zero"
            )
            assert abs(s_vn) <= 1e-12, (
                f"{kind}, tau={tau}: von Neumann entropy {s_vn!r} not zero"
            )
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"purity check took {elapsed:.2f}s, budget 1s"


def test_criterion_02_initial_mutual_entropy_is_ln2(figure2_run):
    result, _ = figure2_run
    i0 = result.records[0].i_mutual
    assert i0 is not None, "I(0) is undefined (divergent sample)"
    assert i0 == pytest.approx(LN2, abs=1e-6), f"I(0) = {i0!r}, expected ln 2"


def test_criterion_03_subsystem_entropies_match(figure2_run):
    result, elapsed = figure2_run
    worst = max(abs(r.s_vn - r.s_vn_motion) for r in result.records)
    assert worst <= 1e-8, f"max |S_vN(ion) - S_vN(motion)| = {worst:.3e}"
    assert elapsed < 120.0, f"figure-2 run took {elapsed:.1f}s, budget 120s"


def test_criterion_04_mutual_entropy_additivity(figure2_run):
    result, _ = figure2_run
    defined = [
        r for r in result.records
        if r.i_mutual is not None and r.s_p is not None and r.s_c is not None
    ]
    assert defined, "no defined mutual-entropy samples"
    for r in defined:
        residue = r.i_mutual - r.s_p - r.s_c
        assert residue == 0.0, f"t={r.t_rescaled}: I - S(P) - S(C) = {residue!r}"


def test_criterion_05_population_part_nonnegative(figure2_run):
    result, _ = figure2_run
    values = [r.s_p for r in result.records if r.s_p is not None]
    assert values, "no defined S(P) samples"
    worst = min(values)
    assert worst >= 0.0, f"min S(P) = {worst!r}"


def test_criterion_06_unitarity_and_energy_conservation(figure2_run):
    result, _ = figure2_run
    params = result.config.system_params()
    ham = build_hamiltonian(params)
    sd = diagonalize(ham)
    psi0 = initial_state(result.config.initial, params)
    norms = []
    energies = []
    for psi in time_series(sd, psi0, result.grid):
        v = psi.vector()
        norms.append(float(np.linalg.norm(v)))
        energies.append(float(np.vdot(v, ham @ v).real))
    norm_drift = max(abs(n - norms[0]) for n in norms)
    energy_drift = max(abs(e - energies[0]) for e in energies)
    assert norm_drift <= 1e-10, f"norm drift {norm_drift:.3e}"
    assert energy_drift <= 1e-9, f"<H> drift {energy_drift:.3e}"


def test_criterion_07_spectral_propagator_matches_rk4():
    params = SystemParams(deformation=DeformationParams(tau=0.004, n_max=4))
    ham = build_hamiltonian(params)
    sd = diagonalize(ham)
    psi0 = initial_state("cat", params)
    v0 = psi0.vector()
    for t_end in (0.5, 2.0, 5.0):
        exact = evolve(sd, psi0, t_end).vector()
        approx = rk4_evolve(ham, v0, t_end, dt=5e-5)
        worst = float(np.max(np.abs(exact - approx)))
        assert worst <= 1e-6, f"t={t_end}: max amplitude gap {worst:.3e}"


def test_criterion_08_coupling_matrix_matches_series():
    for n_max in (1, 4, 8):
        for tau in (0.0, 0.004, 0.1):
            for eps in (0.05, 0.2):
                params = SystemParams(
                    epsilon_bar=eps,
                    deformation=DeformationParams(tau=tau, n_max=n_max),
                )
                gap = float(np.max(np.abs(fq_matrix(params) - fq_series_oracle(params))))
                assert gap <= 1e-10, (
                    f"n_max={n_max}, tau={tau}, eps={eps}: entrywise gap {gap:.3e}"
                )


def test_criterion_09_collapse_revival_times(figure2_run, figure2_events):
    _, run_elapsed = figure2_run
    report, detect_elapsed = figure2_events
    assert run_elapsed + detect_elapsed < 300.0, (
        f"run + detection took {run_elapsed + detect_elapsed:.1f}s, budget 300s"
    )
    events = report.events
    collapses = [e.t for e in events if e.kind == "collapse"]
    revivals = [e.t for e in events if e.kind == "revival"]

    primary = (
        len(collapses) == 3
        and len(revivals) == 2
        and all(
            abs(t - ref) <= EVENT_TIME_TOLERANCE
            for t, ref in zip(sorted(collapses), TARGET_COLLAPSES)
        )
        and all(
            abs(t - ref) <= EVENT_TIME_TOLERANCE
            for t, ref in zip(sorted(revivals), TARGET_REVIVALS)
        )
    )
    alternating = len(events) >= 3 and all(
        a.kind != b.kind for a, b in zip(events, events[1:])
    )
    spacing_ok = len(revivals) >= 2 and all(
        abs(gap - REVIVAL_SPACING) <= REVIVAL_SPACING_TOLERANCE
        for gap in np.diff(sorted(revivals))
    )
    fallback = alternating and spacing_ok

    assert primary or fallback, (
        f"targets: collapses {TARGET_COLLAPSES} and revivals {TARGET_REVIVALS} "
        f"within +-{EVENT_TIME_TOLERANCE}, or alternating kinds with revival "
        f"spacing {REVIVAL_SPACING}+-{REVIVAL_SPACING_TOLERANCE}; "
        f"detected: {_format_events(events)}"
    )


def test_criterion_10_ground_run_entropy_rises_and_returns(ground_undeformed_run):
    values = [r.s_entrywise for r in ground_undeformed_run.records]
    assert abs(values[0]) <= 1e-12, f"S_paper(0) = {values[0]!r}"
    above = [i for i, v in enumerate(values) if v > 0.3]
    assert above, f"S_paper never exceeds 0.3 (max {max(values):.4f})"
    tail = values[above[0]:]
    assert min(tail) < 0.05, (
        f"S_paper never returns below 0.05 after rising (tail min {min(tail):.4f})"
    )


def test_criterion_11_population_peak_heights_decay(figure2_events):
    report, _ = figure2_events
    heights = [e.value for e in report.events]
    assert len(heights) >= 2, f"need at least two peaks, got {len(heights)}"
    for a, b in zip(heights, heights[1:]):
        assert b <= 1.05 * a, (
            f"S(P) peak heights are not non-increasing within 5%: "
            f"{[round(h, 4) for h in heights]}"
        )
