"""Acceptance checklist: twelve end-to-end checks of the published claims.

Each test prints one live PASS/FAIL line (bypassing capture) before asserting,
so a full run always shows the complete scoreboard.  Checks 10 and 11 carry
real solver workloads and run for minutes; set ISOQUDIT_EXTENDED=1 to run the
fraction scan at full grid instead of the reduced, flagged default.
"""

import math
import os
import time

import numpy as np
import pytest

from isoqudit import (
    Point,
    SolverConfig,
    VERTEX_S,
    angle_between,
    area_fraction,
    block_projectors,
    block_spectrum,
    derive_seed,
    edge_relative_rank_bounds,
    fiducial_spin,
    heisenberg_coupling,
    invariant_state,
    is_physical,
    is_ppt,
    is_separable,
    limit_triangle,
    nearest_separable,
    partial_transpose,
    pt_image,
    q_density,
    q_expectation,
    quadrupole_coupling,
    relative_rank,
    sample_sv_segment,
    separable_fraction_scan,
    su3_line_distance,
    swap_operator,
    state_rank,
    triangle_area,
    werner_state,
    conjugate_werner_state,
)
from isoqudit.cli import main as cli_main

SPINS = range(2, 17)
POINT_BOX = ((-2.0, 2.0), (-7.0, 4.0))


@pytest.fixture
def report(capsys):
    def _report(num, label, ok, detail=""):
        line = f"ACCEPTANCE {num:02d} {'PASS' if ok else 'FAIL'} {label}"
        if detail:
            line += f" [{detail}]"
        with capsys.disabled():
            print(line, flush=True)
        assert ok, line
    return _report


def random_points(rng, n):
    (a_lo, a_hi), (b_lo, b_hi) = POINT_BOX
    return np.column_stack([rng.uniform(a_lo, a_hi, n), rng.uniform(b_lo, b_hi, n)])


def random_direction(rng):
    return (math.acos(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, 2.0 * math.pi))


def test_01_block_spectra_match_dense(report):
    start = time.monotonic()
    rng = np.random.default_rng(101)
    worst = 0.0
    for t in SPINS:
        for alpha, beta in random_points(rng, 100):
            state = invariant_state(t, Point(alpha, beta))
            spec = block_spectrum(t, Point(alpha, beta))
            assert spec.mults == (t + 3, t + 1, t - 1)
            dense = np.linalg.eigvalsh(state.matrix)
            worst = max(worst, float(np.max(np.abs(dense - np.sort(spec.dense())))))
    elapsed = time.monotonic() - start
    report(1, "closed-form block spectra match dense eigenvalues",
           worst <= 1e-10 and elapsed < 120.0,
           f"max dev {worst:.2e}, {elapsed:.1f}s, spins 2..16, 100 pts each")


def test_02_coupling_commutation_and_identity(report):
    worst_comm = 0.0
    worst_ident = 0.0
    for t in SPINS:
        s = t / 2
        c = heisenberg_coupling(t)
        q = quadrupole_coupling(t)
        worst_comm = max(worst_comm, float(np.linalg.norm(c @ q - q @ c, 2)))
        ident = c @ c + c / 2 - (2 / 3) * s * (s + 1) * np.eye(c.shape[0])
        worst_ident = max(worst_ident, float(np.max(np.abs(q - ident))))
    report(2, "couplings commute and satisfy the quadratic identity",
           worst_comm <= 1e-12 and worst_ident <= 1e-10,
           f"commutator {worst_comm:.2e}, identity {worst_ident:.2e}")


def test_03_partial_transpose_mirrors_alpha(report):
    rng = np.random.default_rng(103)
    worst = 0.0
    for t in SPINS:
        for alpha, beta in random_points(rng, 50):
            rho = invariant_state(t, Point(alpha, beta)).matrix
            mirrored = invariant_state(t, Point(-alpha, beta)).matrix
            lhs = np.linalg.eigvalsh(partial_transpose(rho, t + 1))
            rhs = np.linalg.eigvalsh(mirrored)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    report(3, "partial-transpose spectrum equals the alpha-mirrored spectrum",
           worst <= 1e-10, f"max dev {worst:.2e}, 50 pts per spin")


def test_04_super_quantum_segment(report):
    points = sample_sv_segment(20)
    on_line = all(abs(1.0 + p.alpha + p.beta / 6.0) <= 1e-12 for p in points)

    npt_where_physical = True
    for p in points:
        for t in SPINS:
            if is_physical(t, p) and is_ppt(t, p):
                npt_where_physical = False

    mirror_never_physical = True
    for p in points:
        m = pt_image(p)
        if any(is_physical(t, m) for t in range(2, 401)):
            mirror_never_physical = False

    ranks_bounded = True
    apex_exact = False
    for p in points:
        sigma = fiducial_spin(p)
        if sigma is None:
            ranks_bounded = False
            continue
        lo, hi = edge_relative_rank_bounds(sigma)
        rel = relative_rank(sigma, p)
        if not (lo - 1e-12 <= rel <= hi + 1e-12):
            ranks_bounded = False
        if p == VERTEX_S:
            apex_exact = rel == (sigma - 1) / (3 * (sigma + 1))

    report(4, "edge segment: on-line, NPT when physical, mirror unphysical, ranks bounded",
           on_line and npt_where_physical and mirror_never_physical
           and ranks_bounded and apex_exact,
           "20 pts; mirrors checked to two_s=400; apex rank ratio exact")


def test_05_overlap_density_equivalence(report):
    rng = np.random.default_rng(105)
    worst = 0.0
    for t in (2, 4, 7, 16):
        for alpha, beta in random_points(rng, 50):
            p = Point(alpha, beta)
            d1, d2 = random_direction(rng), random_direction(rng)
            lhs = 3 * (t + 1) * q_expectation(t, p, d1, d2)
            rhs = 4.0 * math.pi * q_density(p, angle_between(d1, d2))
            worst = max(worst, abs(lhs - rhs))
    report(5, "matrix overlap equals the universal angular density",
           worst <= 1e-10, f"max dev {worst:.2e}, spins {{1, 2, 7/2, 8}}, 50 pairs each")


def test_06_werner_boundary_bisection(report):
    start = time.monotonic()
    cfg = SolverConfig(inner_restarts=8, max_outer=2000, tol_converge=1e-10, rng_seed=61)

    def separable_at(alpha: float) -> bool:
        # the mirror test settles the entangled side of this line exactly,
        # so only separable probes ever pay for the solver
        verdict = is_separable(2, Point(alpha, 2 * alpha), cfg, solve_npt=False)
        assert verdict.separable is not None, f"no verdict at alpha={alpha}"
        return verdict.separable

    lo, hi = -0.35, -0.05
    assert not separable_at(lo) and separable_at(hi)
    while hi - lo > 0.004:
        mid = 0.5 * (lo + hi)
        if separable_at(mid):
            hi = mid
        else:
            lo = mid
    estimate = 0.5 * (lo + hi)
    elapsed = time.monotonic() - start
    ok = abs(estimate - (-3.0 / 16.0)) <= 0.01 and elapsed < 600.0
    report(6, "bisection finds the qutrit line boundary at -3/16",
           ok, f"estimate {estimate:.4f} vs -0.1875, {elapsed:.1f}s")


def _validate_certificate(rho: np.ndarray, result) -> float:
    w = result.ensemble.weights
    assert np.all(w >= 0) and abs(float(w.sum()) - 1.0) <= 1e-12
    assert np.allclose(np.linalg.norm(result.ensemble.factors_a, axis=1), 1.0, atol=1e-12)
    assert np.allclose(np.linalg.norm(result.ensemble.factors_b, axis=1), 1.0, atol=1e-12)
    sigma = result.ensemble.assemble()
    return abs(float(np.linalg.norm(rho - sigma)) - result.d_hs)


def test_07_distance_decay_with_spin(report):
    point = Point(0.0, -0.5)
    distances = {}
    cert_dev = 0.0
    for t in (2, 8):
        cfg = SolverConfig(max_outer=1200, cap_terms=2000,
                           rng_seed=derive_seed(7, t, point.alpha, point.beta))
        state = invariant_state(t, point)
        result = nearest_separable(state, cfg)
        cert_dev = max(cert_dev, _validate_certificate(state.matrix, result))
        distances[t] = result.d_hs
    ok = (distances[8] < distances[2] and distances[8] <= 1e-3 and cert_dev <= 1e-12)
    report(7, "nearest-separable distance decays from s=1 to s=4",
           ok, f"d(s=1)={distances[2]:.2e}, d(s=4)={distances[8]:.2e}, "
               f"certificate dev {cert_dev:.1e}")


def test_08_area_fractions(report):
    exact = (area_fraction(2) == 0.3
             and triangle_area(limit_triangle()) == 13.5
             and area_fraction(16) == 408 / 513)

    # rejection sampling over the limit triangle, physicality from the raw
    # block numerators (independent of the polygon arithmetic)
    rng = np.random.default_rng(108)
    n = 400_000
    u = rng.uniform(0.0, 1.0, n)
    v = rng.uniform(0.0, 1.0, n)
    fold = u + v > 1.0
    u[fold], v[fold] = 1.0 - u[fold], 1.0 - v[fold]
    alpha = -1.5 + u * 1.5 + v * 3.0
    beta = 3.0 + u * -9.0 + v * 0.0
    s = 8.0
    c1 = 1.0 + alpha + beta / 6.0
    c2 = 1.0 - alpha / s - beta * (2 * s + 3) / (6 * s)
    c3 = 1.0 - alpha * (s + 1) / s + beta * (s + 1) * (2 * s + 3) / (6 * s * (2 * s - 1))
    mc = float(np.mean((c1 >= 0) & (c2 >= 0) & (c3 >= 0)))
    rel_err = abs(mc - 408 / 513) / (408 / 513)
    report(8, "area fractions: s=1 exact, limit area, s=8 analytic vs Monte Carlo",
           exact and rel_err <= 0.005,
           f"mc {mc:.4f} vs analytic {408 / 513:.4f} (rel err {rel_err:.2%}); "
           f"0.795 sits below the published 0.837 (convention documented)")


def test_09_two_qutrit_slice(report):
    line_dev = 0.0
    for conjugate, (a_lo, a_hi) in ((False, (-0.75, 0.375)), (True, (-1.5, 0.1875))):
        for alpha in np.linspace(a_lo, a_hi, 20):
            line_dev = max(line_dev, su3_line_distance(float(alpha), conjugate))

    eye9 = np.eye(9)
    swap = swap_operator()
    singlet = block_projectors(2)[2]
    endpoint_dev = max(
        float(np.max(np.abs(conjugate_werner_state(-1.5) - singlet))),
        float(np.max(np.abs(werner_state(-0.75) - (eye9 - swap) / 6.0))),
        float(np.max(np.abs(conjugate_werner_state(0.1875) - (eye9 - singlet) / 8.0))),
        float(np.max(np.abs(werner_state(0.375) - (eye9 + swap) / 12.0))),
    )
    ranks = (state_rank(2, Point(-1.5, 3.0)), state_rank(2, Point(-0.75, -1.5)),
             state_rank(2, Point(0.75, 0.3)))
    report(9, "two-qutrit slice: lines, endpoint projectors, vertex ranks",
           line_dev <= 1e-10 and endpoint_dev <= 1e-10 and ranks == (1, 3, 5),
           f"line dev {line_dev:.2e}, endpoint dev {endpoint_dev:.2e}, ranks {ranks}")


def test_10_ensemble_size_table(report):
    table = {2: (Point(-0.125, -0.25), 50), 4: (Point(-0.3, -0.6), 100),
             10: (Point(-0.3, -0.6), 300), 16: (Point(-0.3, -0.6), 600)}
    rows = []
    ok = True
    for t, (point, reference) in table.items():
        cfg = SolverConfig(max_outer=1500, tol_converge=1e-9,
                           rng_seed=derive_seed(0, t, point.alpha, point.beta))
        result = nearest_separable(invariant_state(t, point), cfg)
        terms = len(result.ensemble)
        rows.append(f"3x{t + 1}: {terms} (ref {reference})")
        if not (reference / 10 <= terms <= reference * 10 and result.d_hs <= 1e-3):
            ok = False
    report(10, "ensemble sizes lie within a factor 10 of the published counts",
           ok, "; ".join(rows))


def test_11_separable_fraction_at_spin_eight(report):
    # the reduced grid keeps every physical point at least 0.03 away from the
    # mirror boundary, so the budget below certifies all of them; grid 50 is
    # the full, hours-scale version
    extended = bool(os.environ.get("ISOQUDIT_EXTENDED"))
    grid, tol = (50, 0.05) if extended else (8, 0.08)
    cfg = SolverConfig(max_outer=4000, cap_terms=4000, inner_restarts=8,
                       tol_converge=1e-9, rng_seed=7)
    scan = separable_fraction_scan(16, grid, cfg)
    frac = scan.fraction_separable
    ind_share = scan.n_indeterminate / scan.n_physical
    ok = abs(frac - 0.85) <= tol and ind_share < 0.02
    label = "separable fraction at s=8 near 0.85"
    if not extended:
        label += " (reduced grid, widened tolerance)"
    report(11, label, ok,
           f"grid {grid}: {scan.n_separable}/{scan.n_physical} separable "
           f"= {frac:.3f} (tol {tol}), indeterminate {scan.n_indeterminate}")


def test_12_scan_rerun_bit_identical(report, tmp_path, capsys):
    argv = ["scan", "--two-s", "2", "--grid", "4", "--max-outer", "200",
            "--inner-restarts", "4", "--seed", "5"]
    first, second = tmp_path / "first.csv", tmp_path / "second.csv"
    assert cli_main(argv + ["--out", str(first)]) == 0
    assert cli_main(argv + ["--out", str(second)]) == 0
    capsys.readouterr()
    identical = first.read_bytes() == second.read_bytes()
    report(12, "identical scan configuration reproduces the file byte for byte",
           identical, f"{first.stat().st_size} bytes each")
