"""Classifier: pinned verdicts, totality, region-consistency properties."""

import math

import pytest
from hypothesis import given, strategies as st

from driftlab.phase import PhaseLabel, classify, classify_spec, region_grid
from driftlab.kernels import DriftSpec


# the six pinned examples
@pytest.mark.parametrize("rho,alpha,beta,verdict,just", [
    (0.7, 1.0, 1.0, "Transient", "T1i"),
    (0.3, 1.0, 1.0, "Recurrent", "T2i"),
    (1.0, 0.2, 0.5, "Transient", "T1ii"),
    (1.0, -0.5, 0.25, "OpenProblem", "OpenLine"),
    (0.5, 2.0, 1.5, "Invalid", "Prohibited"),
    (1.0, -2.0, 0.0, "Recurrent", "C2i"),
])
def test_pinned_examples(rho, alpha, beta, verdict, just):
    lab = classify(rho, alpha, beta)
    assert (lab.verdict, lab.justification) == (verdict, just)


@pytest.mark.parametrize("rho,alpha,beta,verdict,just", [
    (1.0, 0.5, 0.5, "Transient", "T3"),     # alpha = beta < 1, rho <= 1
    (1.0, 0.0, 0.0, "Transient", "T3"),     # includes the origin
    (0.5, 2.0, 2.0, "Recurrent", "T4"),     # alpha = beta > 1, rho < 1
    (1.0, -0.5, 0.0, "Transient", "C2ii"),  # beta = 0, -1 < alpha < 0
    (2.0, 0.0, 0.5, "Recurrent", "LIL-line"),
    (0.4, 0.5, 1.0, "Recurrent", "T2ii"),   # beta = 1, alpha < 1
    (1.0, -3.0, 2.0, "Recurrent", "T2ii"),  # deep recurrence region
    (3.0, 0.92, 0.95, "Transient", "T1ii"), # any rho > 0 inside Trans
])
def test_theorem_coverage(rho, alpha, beta, verdict, just):
    lab = classify(rho, alpha, beta)
    assert (lab.verdict, lab.justification) == (verdict, just)


@pytest.mark.parametrize("rho,alpha,beta", [
    (0.5, 1.0, -0.25),          # beta < 0
    (-1.0, 0.0, 1.0),           # rho < 0
    (0.0, 0.0, 1.0),            # rho = 0: no theorem applies
    (1.5, 1.0, 1.0),            # rho > 1 on alpha = beta
    (1.2, 0.3, 0.3),            # T3 normalization cap
    (1.5, 2.0, 2.0),            # T4 normalization cap
    (float("nan"), 1.0, 1.0),
    (1.0, 1.0, float("inf")),
])
def test_invalid_inputs_total(rho, alpha, beta):
    lab = classify(rho, alpha, beta)
    assert lab.verdict == "Invalid" and lab.justification == "Prohibited"
    assert lab.detail  # explanation present


def test_critical_boundaries():
    assert classify(0.5, 1.0, 1.0).verdict == "CriticalBoundary"
    assert classify(1.0, 2.0, 2.0).verdict == "CriticalBoundary"  # T4 needs rho<1
    # within tolerance of the T1/T2 threshold
    assert classify(0.5 + 1e-13, 1.0, 1.0).verdict == "CriticalBoundary"


def test_lamperti_point():
    with pytest.raises(ValueError):
        classify(1.0, -1.0, 0.0)
    assert classify(1.0, -1.0, 0.0, second_moment_ratio=0.7).justification == "T5ii"
    lab = classify(1.0, -1.0, 0.0, second_moment_ratio=0.5)
    assert (lab.verdict, lab.justification) == ("Recurrent", "T5i")  # equality recurrent
    assert classify(1.0, -1.0, 0.0, second_moment_ratio=0.2).verdict == "Recurrent"


def test_classify_spec_wrapper():
    lab = classify_spec(DriftSpec(0.7, 1.0, 1.0))
    assert lab.justification == "T1i"


def test_open_line_endpoints_resolved():
    # alpha=0 -> LIL; alpha=-1 -> Lamperti; alpha=1 -> critical T1i/T2i
    assert classify(1.0, 0.0, 0.5).justification == "LIL-line"
    assert classify(0.7, 1.0, 1.0).justification == "T1i"
    assert classify(1.0, -1.0, 0.0, second_moment_ratio=0.9).justification == "T5ii"
    # interior points on 2*beta - alpha = 1 stay open
    for alpha in (-0.9, -0.3, 0.4, 0.9):
        assert classify(1.0, alpha, (alpha + 1) / 2).verdict == "OpenProblem"


def test_rho_monotone_single_switch_on_critical_line():
    # verdict along rho at alpha=beta=1 changes exactly once, at 1/2
    rhos = [k / 200 for k in range(1, 201)]
    verdicts = [classify(r, 1.0, 1.0).verdict for r in rhos]
    switches = [i for i in range(1, len(verdicts)) if verdicts[i] != verdicts[i - 1]]
    meaningful = [i for i in switches if "CriticalBoundary" not in
                  (verdicts[i], verdicts[i - 1])]
    assert meaningful == []
    assert verdicts[0] == "Recurrent" and verdicts[-1] == "Transient"
    assert [v for v in verdicts if v == "CriticalBoundary"] == ["CriticalBoundary"]


def test_representation_invariance():
    assert classify(0.5, 0.5, 1.0) == classify(1 / 2, 1 / 2, 1.0)


@given(st.floats(allow_nan=True, allow_infinity=True),
       st.floats(allow_nan=True, allow_infinity=True),
       st.floats(allow_nan=True, allow_infinity=True))
def test_total_no_panic(rho, alpha, beta):
    try:
        lab = classify(rho, alpha, beta)
    except ValueError:
        # only the Lamperti missing-ratio error is allowed
        assert abs(alpha + 1.0) <= 1e-12 and abs(beta) <= 1e-12
        return
    assert isinstance(lab, PhaseLabel)


@given(st.floats(-4, 4), st.floats(-1, 4), st.floats(0.01, 3))
def test_region_consistency(alpha, beta, rho):
    try:
        lab = classify(rho, alpha, beta)
    except ValueError:
        return
    if lab.justification == "T1ii":
        assert 0 <= beta < 1 and 2 * beta - 1 < alpha < beta
    elif lab.justification == "T2ii":
        assert alpha < min(beta, 2 * beta - 1)
    elif lab.justification == "T3":
        assert abs(alpha - beta) <= 1e-12 and beta < 1 and rho <= 1 + 1e-12
    elif lab.justification == "T4":
        assert abs(alpha - beta) <= 1e-12 and beta > 1 and rho < 1
    elif lab.verdict == "Invalid":
        assert (beta < 0 or alpha > beta or rho <= 1e-12
                or (abs(alpha - beta) <= 1e-12 and rho > 1))


def test_region_grid_consistency_and_shape():
    alphas, betas, labels = region_grid((-1, 0), (0, 1), 2, 1.0)
    assert list(alphas) == [-1.0, 0.0] and list(betas) == [0.0, 1.0]
    for i, b in enumerate(betas):
        for j, a in enumerate(alphas):
            if (a, b) == (-1.0, 0.0):
                assert labels[i][j].verdict == "CriticalBoundary"  # no ratio given
            else:
                assert labels[i][j] == classify(1.0, float(a), float(b))


def test_region_grid_validation():
    with pytest.raises(ValueError):
        region_grid((1, 0), (0, 1), 5, 1.0)
    with pytest.raises(ValueError):
        region_grid((0, 1), (0, 1), 1, 1.0)


def test_region_grid_101_transient_cells_inside_trans():
    alphas, betas, labels = region_grid((-1, 1), (0, 1), 101, 1.0)
    n_t1ii = 0
    for i, b in enumerate(betas):
        for j, a in enumerate(alphas):
            lab = labels[i][j]
            if lab.justification == "T1ii":
                assert 0 <= b < 1 and 2 * b - 1 < a < b
                n_t1ii += 1
            if (abs(a) <= 1e-12 and abs(b - 0.5) <= 1e-12):
                assert lab.verdict == "Recurrent" and lab.justification == "LIL-line"
    assert n_t1ii > 100  # the wedge is actually populated
