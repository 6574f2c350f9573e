"""Acceptance suite: twelve release criteria, one test per criterion.

Each test asserts the criterion's substance at its stated tolerance and its
wall-clock budget (measured around the compute call, after a shared numba
warmup).  Heavy experiments live in module-scoped fixtures so criterion 12
can reuse the single-thread results when checking thread-count determinism.

The hitting-curve direction clause for the strong-drift walk (criterion 7)
is asserted as stated even though the event {hit the low set before level L}
is pathwise nondecreasing in L, which forces the opposite direction; see
that test's docstring.  Expected outcome: criterion 7 reports FAIL on that
clause, everything else passes.
"""

import json
import math
import time

import numpy as np
import pytest

from driftlab.cli import census_csv, estimates_csv, hitting_csv
from driftlab.engine import ReplicaPlan, run_first_exits, run_ruin_scan, \
    run_trajectories
from driftlab.kernels import DriftSpec, build_kernel, const_drift_kernel, \
    moments
from driftlab.lyapunov import Functional, Region, nu_bound, verify_region
from driftlab.phase import classify, region_grid
from driftlab.stats import doob_tail, exit_bound_check, growth_exponent, \
    hitting_curve, lil_crossing
from driftlab.urn import coupled_walk, deterministic_urn, run_urn, urn_rho, \
    zero_return_census

SEED = 20260816
LEVELS = [128.0, 256.0, 512.0, 1024.0]
HORIZONS = [10**3, 10**4, 10**5]


def nn(rho, a=1.0):
    return build_kernel(DriftSpec(rho, 1.0, 1.0), a, "LatticeNN")


@pytest.fixture(scope="module", autouse=True)
def warmup():
    """Trigger every jitted kernel once so compile time stays out of budgets."""
    k = nn(0.5)
    plan = ReplicaPlan(1, 2)
    run_trajectories(k, 5.0, 1, 16, plan)
    run_trajectories(k, 5.0, 1, 16, plan, threads=2)
    run_first_exits(k, 5.0, 1, 1.0, 32.0, 100, plan)
    run_ruin_scan(k, 5.0, 1, 1.0, 100, plan)
    spec = deterministic_urn(3.0, 2.0, 2.0, 1.0)
    zero_return_census(spec, 64, 2, 1)
    zero_return_census(spec, 64, 2, 1, threads=2)


# --- module-scoped experiment fixtures (threads=1 canonical runs) ----------

@pytest.fixture(scope="module")
def c4_report(warmup):
    t0 = time.time()
    report = exit_bound_check(0.25, 1.0, 0.5, 2.0, 200.0, 10_000, SEED, 10**7)
    power_scan = verify_region(
        Functional("ExitPower", k=report.k, n=200.0),
        const_drift_kernel(0.25, 200, a=2.0),
        Region("exit power sign, x in [2,200]", 2, 200, 1, 1), ">=0")
    return report, power_scan, time.time() - t0


@pytest.fixture(scope="module")
def c5_tails(warmup):
    t0 = time.time()
    kernel = nn(0.7)
    runs = {(h, b): doob_tail(kernel, 50.0, h, b, 200.0, 10_000, 10_000, SEED)
            for (h, b) in ((1.0, 4.0), (0.5, 2.0))}
    return runs, time.time() - t0


@pytest.fixture(scope="module")
def c6_crossings(warmup):
    t0 = time.time()
    ests = lil_crossing(nn(0.0), 1.0, HORIZONS, 1.0, 100, 2000, SEED)
    return ests, time.time() - t0


@pytest.fixture(scope="module")
def c7_curves(warmup):
    t0 = time.time()
    weak = hitting_curve(nn(0.3, a=2.0), 2.0, LEVELS, 10.0, 100, 10_000,
                         SEED, 10**7)
    strong = hitting_curve(nn(0.7, a=2.0), 2.0, LEVELS, 10.0, 100, 10_000,
                           SEED, 10**6)
    return weak, strong, time.time() - t0


@pytest.fixture(scope="module")
def c8_growth(warmup):
    t0 = time.time()
    batch = run_trajectories(nn(0.7, a=1.5), 3.0, 100, 10**6,
                             ReplicaPlan(SEED, 1000))
    est = growth_exponent(batch)
    return est, time.time() - t0


@pytest.fixture(scope="module")
def c9_coupling(warmup):
    t0 = time.time()
    spec = deterministic_urn(3.0, 2.0, 2.0, 1.0)
    trajectory = run_urn(spec, 10**5, SEED)
    xs, record = coupled_walk(trajectory)
    return spec, record, time.time() - t0


@pytest.fixture(scope="module")
def c10_censuses(warmup):
    t0 = time.time()
    transient = zero_return_census(deterministic_urn(6.0, 5.0, 5.0, 1.0),
                                   10**6, 10_000, SEED,
                                   checkpoints=[10**4, 10**5, 10**6])
    recurrent = zero_return_census(deterministic_urn(3.0, 2.0, 2.0, 1.0),
                                   10**6, 10_000, SEED + 1)
    return transient, recurrent, time.time() - t0


# --- criteria ---------------------------------------------------------------

def test_criterion_01_drift_identity():
    t_start = time.time()
    rng = np.random.default_rng(SEED)
    checked = 0
    while checked < 10_000:
        beta = float(rng.uniform(0.0, 1.0))
        alpha = beta - float(rng.uniform(0.0, 2.0))
        rho = float(rng.uniform(0.0, 1.0))
        x = float(rng.uniform(1.0, 50.0))
        t = int(rng.integers(1, 100_000))
        target = rho * x**alpha / t**beta
        if target > 1.0 - 1e-9:
            continue  # stay strictly inside the clamp-free region
        kernel = build_kernel(DriftSpec(rho, alpha, beta), 1.0, "LatticeNN")
        mean, _ = moments(kernel, x, t)
        assert abs(mean - target) <= 1e-12, (rho, alpha, beta, x, t)
        checked += 1
    assert time.time() - t_start < 1.0


def test_criterion_02_transience_scan():
    t_start = time.time()
    report = verify_region(
        Functional("TransienceY"), nn(0.7),
        Region("50<=x<=5000, ceil(0.7x)<=t<=0.1x^2, t stride 97",
               50, 5000, lambda x: math.ceil(0.7 * x),
               lambda x: (x * x) // 10, t_stride=97),
        "<=0")
    elapsed = time.time() - t_start
    assert report.violations == ()
    assert report.max_drift <= 0.0
    assert report.points_checked > 10**7
    assert elapsed < 30.0, f"{elapsed:.1f}s"


def test_criterion_03_recurrence_scan():
    t_start = time.time()
    kernel = nn(0.3, a=2.0)
    clean = verify_region(
        Functional("RecurrenceY"), kernel,
        Region("3<=x<=1000, ceil(0.3x)<=t<=x^2/2.5",
               3, 1000, lambda x: math.ceil(0.3 * x),
               lambda x: (x * x * 2) // 5),
        "<=0")
    # threshold sanity: just past x^2/t = 2.4 the drift turns positive
    past = verify_region(
        Functional("RecurrenceY"), kernel,
        Region("sampled x, t just above x^2/2.4",
               10, 60, lambda x: (x * x * 5) // 12 + 1,
               lambda x: (x * x * 5) // 12 + 200, x_stride=10, t_stride=7),
        "<=0")
    elapsed = time.time() - t_start
    assert clean.violations == ()
    assert clean.points_checked > 10**8
    assert len(past.violations) > 0
    assert all(drift > 0 for _, _, drift in past.violations)
    assert elapsed < 30.0, f"{elapsed:.1f}s"


def test_criterion_04_exit_bound(c4_report):
    report, power_scan, elapsed = c4_report
    assert report.capped == 0                       # every replica exited
    assert report.k == 6
    assert report.nu == pytest.approx(0.16493, abs=5e-6)
    n = report.estimate.n
    se = math.sqrt(report.estimate.point * (1 - report.estimate.point) / n)
    assert report.estimate.point - 3 * se >= 0.16493
    assert report.passed
    assert power_scan.violations == ()              # E d(2n-X)^6 >= 0 on [2,200]
    assert elapsed < 120.0, f"{elapsed:.1f}s"


def test_criterion_05_minimum_tail(c5_tails):
    runs, elapsed = c5_tails
    for (h, b), (est, bound) in runs.items():
        assert bound == 4.0 * h / b**2
        se = math.sqrt(max(est.point * (1 - est.point), 1e-12) / est.n)
        assert est.point <= bound + 3 * se, (h, b, est.point, bound)
    # doob_tail raises if any visited state has negative drift, so reaching
    # this point is the submartingale assertion passing
    assert elapsed < 120.0, f"{elapsed:.1f}s"


def test_criterion_06_crossing_margin(c6_crossings):
    ests, elapsed = c6_crossings
    points = [e.point for e in ests]
    assert all(a <= b for a, b in zip(points, points[1:])), points
    assert points[2] - points[0] >= 0.02, points
    assert elapsed < 180.0, f"{elapsed:.1f}s"


def test_criterion_07_phase_separation(c7_curves):
    """Direction, direction, gap -- asserted exactly as stated.

    The strong-drift "nonincreasing" clause contradicts a pathwise identity:
    raising the upper level L can only keep or convert cap/exit-high outcomes
    into hit-low outcomes (the pre-hit running maximum is unchanged), so the
    per-seed curve is nondecreasing for every kernel.  The rise here is real
    (about six standard errors), so this clause is expected to fail; the
    decision log holds the full analysis and the pilot numbers.
    """
    weak, strong, elapsed = c7_curves
    weak_pts = [e.point for e in weak.estimates]
    strong_pts = [e.point for e in strong.estimates]
    problems = []
    if not all(a <= b for a, b in zip(weak_pts, weak_pts[1:])):
        problems.append(f"weak-drift curve not nondecreasing: {weak_pts}")
    if not all(a >= b for a, b in zip(strong_pts, strong_pts[1:])):
        problems.append(f"strong-drift curve not nonincreasing: {strong_pts}")
    if not weak_pts[-1] - strong_pts[-1] >= 0.2:
        problems.append(f"gap {weak_pts[-1] - strong_pts[-1]:.4f} < 0.2")
    if not elapsed < 300.0:
        problems.append(f"runtime {elapsed:.1f}s >= 300s")
    assert not problems, "; ".join(problems)


def test_criterion_08_growth_exponent(c8_growth):
    est, elapsed = c8_growth
    assert abs(est.point - 0.7) <= 0.05, est
    assert elapsed < 300.0, f"{elapsed:.1f}s"


def test_criterion_09_urn_coupling(c9_coupling):
    spec, record, elapsed = c9_coupling
    assert urn_rho(spec) == 1.0 / 3.0
    assert record.step_magnitudes == (1.0,)
    assert record.drift_identity_residual <= 1e-12
    assert elapsed < 5.0, f"{elapsed:.1f}s"


def test_criterion_10_return_census(c10_censuses):
    """Settled-by-10^3 fraction shrinks as later returns surface; the
    recurrent urn out-returns the transient one by the frozen factor."""
    transient, recurrent, elapsed = c10_censuses
    settled = [float((transient.lasts_at[:, i] <= 1000).mean())
               for i in range(len(transient.checkpoints))]
    assert settled[0] > settled[1] > settled[2], settled
    ratio = recurrent.return_count.mean() / transient.return_count.mean()
    assert ratio >= 5.0, ratio
    assert elapsed < 600.0, f"{elapsed:.1f}s"


def test_criterion_11_classifier_table():
    t_start = time.time()
    pins = [
        ((0.7, 1.0, 1.0), "Transient", "T1i"),
        ((0.3, 1.0, 1.0), "Recurrent", "T2i"),
        ((1.0, 0.2, 0.5), "Transient", "T1ii"),
        ((1.0, -0.5, 0.25), "OpenProblem", "OpenLine"),
        ((0.5, 2.0, 1.5), "Invalid", "Prohibited"),
        ((1.0, -2.0, 0.0), "Recurrent", "C2i"),
    ]
    for (rho, alpha, beta), verdict, justification in pins:
        label = classify(rho, alpha, beta)
        assert (label.verdict, label.justification) == (verdict, justification)

    tol = 1e-12
    alphas, betas, labels = region_grid((-1.0, 1.0), (0.0, 1.0), 101, 1.0)
    inequalities = {
        "T1i": lambda a, b: abs(a - 1) <= tol and abs(b - 1) <= tol,
        "T1ii": lambda a, b: 0 <= b < 1 and 2 * b - 1 < a < b,
        "T2ii": lambda a, b: a < min(b, 2 * b - 1),
        "T3": lambda a, b: abs(a - b) <= tol and b < 1,
        "C2i": lambda a, b: abs(b) <= tol and a < -1,
        "C2ii": lambda a, b: abs(b) <= tol and -1 < a < 0,
        "LIL-line": lambda a, b: abs(a) <= tol and abs(b - 0.5) <= tol,
        "OpenLine": lambda a, b: abs(2 * b - a - 1) <= tol
        and -1 < a < 1 and abs(a) > tol,
        # boundary cells must sit in neither open phase region
        "Boundary": lambda a, b: not (0 <= b < 1 and 2 * b - 1 < a < b)
        and not a < min(b, 2 * b - 1),
        "Prohibited": lambda a, b: a > b,
    }
    verdict_of = {"T1i": "Transient", "T1ii": "Transient", "T3": "Transient",
                  "C2ii": "Transient", "T2ii": "Recurrent",
                  "C2i": "Recurrent", "LIL-line": "Recurrent",
                  "OpenLine": "OpenProblem", "Boundary": "CriticalBoundary",
                  "Prohibited": "Invalid"}
    for i, beta in enumerate(betas):
        for j, alpha in enumerate(alphas):
            label = labels[i][j]
            assert label.justification in inequalities, label
            assert verdict_of[label.justification] == label.verdict
            assert inequalities[label.justification](float(alpha),
                                                     float(beta)), \
                (float(alpha), float(beta), label)
    assert time.time() - t_start < 5.0


def _csv_artifacts(c4, doob_runs, lil_ests, weak_curve, strong_curve,
                   growth_est, census_transient, census_recurrent):
    """The criterion 4-10 outputs as CSV text, via the harness builders."""
    report, _, _ = c4 if isinstance(c4, tuple) else (c4, None, None)
    arts = {
        "exit_bound.csv": estimates_csv([
            ("exit_bound", f"nu={report.nu!r};k={report.k};"
             f"capped={report.capped}", report.estimate)]),
        "doob.csv": estimates_csv([
            ("doob", f"h={h!r};b={b!r};bound={bound!r}", est)
            for (h, b), (est, bound) in sorted(doob_runs.items())]),
        "lil.csv": estimates_csv([
            ("lil", f"crossing_level=1.0;horizon={T}", est)
            for T, est in zip(HORIZONS, lil_ests)]),
        "hitting_weak.csv": hitting_csv(weak_curve),
        "hitting_strong.csv": hitting_csv(strong_curve),
        "growth.csv": estimates_csv([
            ("growth", "horizon=1000000;window=last_decade", growth_est)]),
        "census_transient.csv": census_csv(census_transient),
        "census_recurrent.csv": census_csv(census_recurrent),
    }
    return arts


def test_criterion_12_thread_determinism(c4_report, c5_tails, c6_crossings,
                                         c7_curves, c8_growth, c9_coupling,
                                         c10_censuses):
    """Criteria 4-10 rerun with threads=3 must reproduce every CSV byte."""
    single = _csv_artifacts(
        c4_report, c5_tails[0], c6_crossings[0], c7_curves[0], c7_curves[1],
        c8_growth[0], c10_censuses[0], c10_censuses[1])

    report3 = exit_bound_check(0.25, 1.0, 0.5, 2.0, 200.0, 10_000, SEED,
                               10**7, threads=3)
    kernel07 = nn(0.7)
    doob3 = {(h, b): doob_tail(kernel07, 50.0, h, b, 200.0, 10_000, 10_000,
                               SEED, threads=3)
             for (h, b) in ((1.0, 4.0), (0.5, 2.0))}
    lil3 = lil_crossing(nn(0.0), 1.0, HORIZONS, 1.0, 100, 2000, SEED,
                        threads=3)
    weak3 = hitting_curve(nn(0.3, a=2.0), 2.0, LEVELS, 10.0, 100, 10_000,
                          SEED, 10**7, threads=3)
    strong3 = hitting_curve(nn(0.7, a=2.0), 2.0, LEVELS, 10.0, 100, 10_000,
                            SEED, 10**6, threads=3)
    batch3 = run_trajectories(nn(0.7, a=1.5), 3.0, 100, 10**6,
                              ReplicaPlan(SEED, 1000), threads=3)
    growth3 = growth_exponent(batch3)
    transient3 = zero_return_census(deterministic_urn(6.0, 5.0, 5.0, 1.0),
                                    10**6, 10_000, SEED,
                                    checkpoints=[10**4, 10**5, 10**6],
                                    threads=3)
    recurrent3 = zero_return_census(deterministic_urn(3.0, 2.0, 2.0, 1.0),
                                    10**6, 10_000, SEED + 1, threads=3)
    threaded = _csv_artifacts((report3, None, None), doob3, lil3, weak3,
                              strong3, growth3, transient3, recurrent3)

    assert single.keys() == threaded.keys()
    for name in single:
        assert single[name] == threaded[name], f"{name} differs"

    # the coupling record has no thread dimension; a rerun must still agree
    spec, record, _ = c9_coupling
    _, record2 = coupled_walk(run_urn(spec, 10**5, SEED))
    assert json.dumps(record.__dict__, default=list) == \
        json.dumps(record2.__dict__, default=list)
