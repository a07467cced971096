"""Dense output for Dormand-Prince: interval bookkeeping and the
continuous extension built from the stored stages."""

import math

import numpy as np
import pytest

from odekit import (
    ControllerParams,
    DenseOutputDopri5,
    EvaluationCounter,
    HARMONIC,
)


def expgrow(x, dxdt, t):
    dxdt[0] = x[0]


def zero_rhs(x, dxdt, t):
    for i in range(len(x)):
        dxdt[i] = 0.0


def test_initialize_sets_time():
    d = DenseOutputDopri5()
    d.initialize(np.array([1.0]), 0.0, 0.01)
    assert d.current_time == 0.0
    assert d.current_state[0] == 1.0


def test_initialize_rejects_bad_dt0():
    d = DenseOutputDopri5()
    with pytest.raises(ValueError):
        d.initialize(np.array([1.0]), 0.0, 0.0)
    with pytest.raises(ValueError):
        d.initialize(np.array([1.0]), 0.0, -0.1)


def test_no_interval_before_first_step():
    d = DenseOutputDopri5()
    d.initialize(np.array([1.0]), 0.0, 0.01)
    with pytest.raises(RuntimeError):
        d.calc_state(0.0)
    with pytest.raises(RuntimeError):
        _ = d.interval


def test_calc_state_before_initialize():
    with pytest.raises(RuntimeError):
        DenseOutputDopri5().calc_state(0.0)


def test_reinitialize_discards_previous_interval():
    d = DenseOutputDopri5()
    d.initialize(np.array([1.0]), 0.0, 0.1)
    d.do_step(expgrow)
    d.initialize(np.array([2.0]), 5.0, 0.1)
    assert d.current_time == 5.0
    with pytest.raises(RuntimeError):
        _ = d.interval


def test_zero_rhs_interval_is_proposed_dt():
    d = DenseOutputDopri5()
    d.initialize(np.array([3.0, 4.0]), 0.0, 0.25)
    t_prev, t_cur = d.do_step(zero_rhs)
    assert (t_prev, t_cur) == (0.0, 0.25)
    assert list(d.calc_state(0.125)) == [3.0, 4.0]


def test_step_reports_positive_interval_and_tolerated_error():
    d = DenseOutputDopri5(ControllerParams(atol=1e-6, rtol=1e-6))
    d.initialize(np.array([1.0, 0.0]), 0.0, 0.01)
    t_prev, t_cur = d.do_step(HARMONIC)
    assert t_cur > t_prev == 0.0
    assert d.last_error_ratio <= 1.0


def test_consecutive_intervals_abut_exactly():
    d = DenseOutputDopri5()
    d.initialize(np.array([1.0]), 0.0, 0.05)
    _, end1 = d.do_step(expgrow)
    start2, end2 = d.do_step(expgrow)
    assert start2 == end1
    assert end2 > start2
    assert d.interval == (start2, end2)


def test_endpoint_reproduction():
    # interpolant hits both interval ends to 1e-12 relative, every step
    d = DenseOutputDopri5()
    d.initialize(np.array([1.0]), 0.0, 0.1)
    prev_state = [1.0]
    for _ in range(6):
        t_prev, t_cur = d.do_step(expgrow)
        left = d.calc_state(t_prev)
        right = d.calc_state(t_cur)
        cur = d.current_state
        assert left[0] == pytest.approx(prev_state[0], rel=1e-12)
        assert right[0] == pytest.approx(cur[0], rel=1e-12)
        prev_state = [cur[0]]


def test_continuity_across_shared_boundary():
    d = DenseOutputDopri5()
    d.initialize(np.array([1.0, 0.0]), 0.0, 0.05)
    d.do_step(HARMONIC)
    _, boundary = d.interval
    from_left = list(d.calc_state(boundary))
    d.do_step(HARMONIC)
    start, _ = d.interval
    assert start == boundary
    from_right = list(d.calc_state(boundary))
    for a, b in zip(from_left, from_right):
        assert b == pytest.approx(a, rel=1e-12)


def test_midpoint_accuracy_against_series():
    d = DenseOutputDopri5()
    d.initialize(np.array([1.0]), 0.0, 0.05)
    t_prev, t_cur = d.do_step(expgrow)
    tm = 0.5 * (t_prev + t_cur)
    assert d.calc_state(tm)[0] == pytest.approx(math.exp(tm), abs=1e-9)


def test_interior_interpolation_order():
    # single-interval midpoint error against e^t under width refinement.
    # The slope is expected near the 4th order continuous extension's
    # local accuracy; the gate is the one-sided bound 3.5.
    errs, widths = [], []
    for dt0 in (0.2, 0.1, 0.05, 0.025):
        d = DenseOutputDopri5()
        d.initialize(np.array([1.0]), 0.0, dt0)
        t_prev, t_cur = d.do_step(expgrow)
        tm = 0.5 * (t_prev + t_cur)
        errs.append(abs(d.calc_state(tm)[0] - math.exp(tm)))
        widths.append(t_cur - t_prev)
    slope = np.polyfit(np.log(widths), np.log(errs), 1)[0]
    assert slope >= 3.5


def test_calc_state_outside_interval_rejected():
    d = DenseOutputDopri5()
    d.initialize(np.array([1.0]), 0.0, 0.1)
    t_prev, t_cur = d.do_step(expgrow)
    with pytest.raises(ValueError):
        d.calc_state(t_prev - 1e-6)
    with pytest.raises(ValueError):
        d.calc_state(t_cur + 1e-6)


def test_calc_state_is_free_of_system_calls():
    counter = EvaluationCounter(expgrow)
    d = DenseOutputDopri5()
    d.initialize(np.array([1.0]), 0.0, 0.1)
    t_prev, t_cur = d.do_step(counter)
    frozen = counter.count
    for theta in np.linspace(0.0, 1.0, 17):
        d.calc_state(t_prev + theta * (t_cur - t_prev))
    assert counter.count == frozen


def test_calc_state_out_buffer():
    d = DenseOutputDopri5()
    d.initialize(np.array([1.0]), 0.0, 0.1)
    t_prev, t_cur = d.do_step(expgrow)
    buf = np.zeros(1)
    got = d.calc_state(t_cur, out=buf)
    assert got is buf
    assert buf[0] == pytest.approx(d.current_state[0], rel=1e-12)


def test_step_counters():
    d = DenseOutputDopri5()
    d.initialize(np.array([1.0]), 0.0, 0.05)
    d.do_step(expgrow)
    d.do_step(expgrow)
    assert d.steps_accepted == 2
    assert d.steps_attempted >= d.steps_accepted
    assert d.steps_rejected == d.steps_attempted - d.steps_accepted


def test_list_states_supported():
    d = DenseOutputDopri5()
    d.initialize([1.0], 0.0, 0.1)
    t_prev, t_cur = d.do_step(expgrow)
    mid = d.calc_state(0.5 * (t_prev + t_cur))
    assert isinstance(mid, list)
    assert mid[0] == pytest.approx(math.exp(0.5 * (t_prev + t_cur)), abs=1e-8)
