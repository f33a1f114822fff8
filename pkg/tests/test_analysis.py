import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barrierwalk import discrete as dw
from barrierwalk.analysis import (
    ProbabilitySeries,
    ScalingFamily,
    SweepRow,
    classify_family,
    default_steps,
    first_peak,
    suppress_ripple,
    sweep_continuous,
    sweep_discrete,
    verify_table1,
)

SIZES = [1024, 4096, 16384]


def series(ps):
    return ProbabilitySeries("step", np.arange(len(ps)), ps)


def test_series_validation():
    with pytest.raises(ValueError):
        ProbabilitySeries("step", [0, 0, 1], [0.1, 0.2, 0.3])
    with pytest.raises(ValueError):
        series([0.1, 1.1])
    with pytest.raises(ValueError):
        ProbabilitySeries("angle", [0], [0])


def test_first_peak_single_bump():
    peak = first_peak(series([0.1, 0.5, 0.1]))
    assert (peak.x, peak.p, peak.found) == (1, 0.5, True)


def test_first_peak_monotone_flagged():
    peak = first_peak(series([0.1, 0.2, 0.3, 0.4]))
    assert (peak.x, peak.p, peak.found) == (3, 0.4, False)


def test_first_peak_earliest_and_plateau():
    assert first_peak(series([0, 0.3, 0.1, 0.9, 0])).x == 1
    # plateau tops are not strict maxima; earliest global max is returned
    peak = first_peak(series([0.1, 0.4, 0.4, 0.1]))
    assert (peak.x, peak.found) == (1, False)


def test_first_peak_too_short():
    with pytest.raises(ValueError):
        first_peak(series([0.1, 0.2]))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=3, max_size=60))
def test_first_peak_lies_on_sample(ps):
    s = series(ps)
    peak = first_peak(s)
    i = int(peak.x)
    assert s.p[i] == peak.p
    if peak.found:
        assert s.p[i - 1] < peak.p > s.p[i + 1]
        assert not any(s.p[j - 1] < s.p[j] > s.p[j + 1] for j in range(1, i))


def test_ripple_filter_kills_period_two():
    x = np.arange(50)
    smooth = 0.3 + 0.2 * np.sin(x / 10)
    s = suppress_ripple(series(smooth + 0.05 * (-1) ** x))
    assert np.allclose(s.p, suppress_ripple(series(smooth)).p, atol=1e-15)
    assert s.x[0] == 1 and s.x[-1] == 48


def test_discrete_peak_raw_vs_filtered():
    # without the filter the period-2 ripple makes step 2 the first local max
    raw = dw.simulate_reduced(dw.DiscreteParams(1024), 120)
    assert first_peak(raw).x == 2
    assert first_peak(suppress_ripple(raw)).x == 35


@pytest.mark.parametrize(
    "a, b, label",
    [
        (1, -0.75, "sub-threshold"),
        (1, -0.5, "critical"),
        (1, -0.25, "super-threshold"),
        (0.02, 0, "constant"),
        (0, 0, "sub-threshold"),
    ],
)
def test_classify(a, b, label):
    assert classify_family(ScalingFamily(a, b)) == label


def test_classify_rejects():
    with pytest.raises(ValueError):
        ScalingFamily(1, 0.5)
    with pytest.raises(ValueError):
        ScalingFamily(0, -0.5)
    with pytest.raises(ValueError):
        classify_family(ScalingFamily(2.0, 0), sizes=[16])


@given(st.floats(0.001, 1.0), st.floats(-2, 0), st.lists(st.integers(3, 10 ** 6), min_size=1, max_size=4))
def test_classify_scale_free(a, b, sizes):
    f = ScalingFamily(a, b)
    assert classify_family(f) == classify_family(f, sizes)


def test_default_steps():
    assert default_steps(1024) == math.ceil(3 * math.pi * 32 / (2 * math.sqrt(2)))


def test_sweep_sub_threshold():
    rows = sweep_discrete(ScalingFamily(1, -0.75), SIZES[::-1])
    assert [r.N for r in rows] == SIZES
    for r, x in zip(rows, (36, 71, 142)):
        assert abs(r.peak_x - x) <= 1
        assert r.peak_p == pytest.approx(0.5, abs=0.02)
        assert r.regime == "sub-threshold"


def test_sweep_critical():
    rows = sweep_discrete(ScalingFamily(1, -0.5), SIZES)
    for r, x in zip(rows, (29, 58, 116)):
        assert abs(r.peak_x - x) <= 1
        assert r.peak_p == pytest.approx(1 / 3, abs=0.02)
        assert r.predicted_p == pytest.approx(1 / 3)
        assert r.c == pytest.approx(1.0)


def test_sweep_super_threshold_decreasing():
    peaks = [r.peak_p for r in sweep_discrete(ScalingFamily(1, -0.25), SIZES)]
    assert peaks[0] > peaks[1] > peaks[2]


def test_barrier_free_family_scaling():
    for r in sweep_discrete(ScalingFamily(0, 0), [1024, 4096, 16384, 65536]):
        assert r.peak_x / math.sqrt(r.N) == pytest.approx(math.pi / (2 * math.sqrt(2)), rel=0.03)
        assert 0.48 <= r.peak_p <= 0.52


@pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
def test_critical_family_scaling(c):
    for r in sweep_discrete(ScalingFamily(c, -0.5), [1024, 4096, 16384]):
        assert r.peak_p == pytest.approx(1 / (c * c + 2), abs=0.02)
        assert r.peak_x * math.sqrt(c * c + 2) / math.sqrt(r.N) == pytest.approx(math.pi / 2, rel=0.03)


def test_sweep_continuous_barrier_free():
    (row,) = sweep_continuous(ScalingFamily(0, 0), [1024], dt=0.01)
    assert row.peak_p >= 0.999
    assert row.peak_x == pytest.approx(16 * math.pi, abs=0.05)
    assert row.predicted_p == 1.0


def test_sweep_continuous_suppressed():
    (clean,) = sweep_continuous(ScalingFamily(0, 0), [1024])
    (barred,) = sweep_continuous(ScalingFamily(0.04, 0), [1024])
    assert barred.peak_p < clean.peak_p
    assert math.isnan(barred.predicted_p)


def test_sweep_continuous_compensated_equals_clean():
    clean = sweep_continuous(ScalingFamily(0, 0), [256, 1024])
    for eps in (0.1, 0.5):
        comp = sweep_continuous(ScalingFamily(eps, 0), [256, 1024], gamma_policy="compensated")
        for a, b in zip(clean, comp):
            assert abs(a.peak_p - b.peak_p) <= 1e-12
            assert a.peak_x == b.peak_x
            assert b.predicted_p == 1.0


def test_sweep_continuous_rejects():
    with pytest.raises(ValueError):
        sweep_continuous(ScalingFamily(0, 0), [64], gamma_policy="other")


def test_verify_table1_pass():
    for fam in (ScalingFamily(1, -0.75), ScalingFamily(1, -0.5)):
        report = verify_table1(sweep_discrete(fam, SIZES), 0.02, 0.05)
        assert report.passed
        assert all(not c.exempt for c in report.checks)


def test_verify_table1_negative_control():
    rows = sweep_discrete(ScalingFamily(0, 0), SIZES)
    bad = [SweepRow(**{**r.as_dict(), "predicted_p": 1.0}) for r in rows]
    report = verify_table1(bad, 0.02, 0.05)
    assert not report.passed
    assert report.worst_dev_p == pytest.approx(0.5, abs=0.01)
    assert any(line.startswith("FAIL") for line in report.lines())


def test_verify_table1_exempts_super_threshold():
    rows = sweep_discrete(ScalingFamily(0.02, 0), SIZES)
    report = verify_table1(rows, 1e-9, 1e-9)
    assert report.passed and all(c.exempt for c in report.checks)


def test_verify_table1_empty():
    with pytest.raises(ValueError):
        verify_table1([], 0.02, 0.05)
