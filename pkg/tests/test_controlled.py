"""Step size control: error ratios, dt proposals, the accept/reject loop."""

import math

import numpy as np
import pytest

from odekit import (
    CashKarp54,
    ControlledStepper,
    ControllerParams,
    DormandPrince5,
    ExplicitEuler,
    HARMONIC,
    RungeKutta4,
    StepOutcome,
    StepSizeUnderflowError,
    error_ratio,
    next_step_size,
)


def expgrow(x, dxdt, t):
    dxdt[0] = x[0]


def zero_rhs(x, dxdt, t):
    for i in range(len(x)):
        dxdt[i] = 0.0


# --- ControllerParams -------------------------------------------------------


def test_params_defaults():
    p = ControllerParams()
    assert p.atol == 1e-6 and p.rtol == 1e-6
    assert p.safety == 0.9 and p.fac_min == 0.2 and p.fac_max == 5.0


def test_params_validation():
    with pytest.raises(ValueError):
        ControllerParams(atol=0.0, rtol=0.0)
    with pytest.raises(ValueError):
        ControllerParams(fac_min=1.5)
    with pytest.raises(ValueError):
        ControllerParams(fac_max=0.5)
    with pytest.raises(ValueError):
        ControllerParams(safety=0.0)


# --- error_ratio ------------------------------------------------------------


def test_error_ratio_zero_error():
    p = ControllerParams()
    assert error_ratio([0.0], [1.0], [1.0], 0.1, p) == 0.0


def test_error_ratio_atol_only():
    p = ControllerParams(atol=1e-6, rtol=0.0)
    assert error_ratio([1e-6], [0.0], [0.0], 0.1, p) == pytest.approx(1.0, rel=1e-13)


def test_error_ratio_rtol_only_max_over_components():
    p = ControllerParams(atol=0.0, rtol=1e-6)
    got = error_ratio([2e-6, 1e-6], [1.0, 1.0], [0.0, 0.0], 0.1, p)
    assert got == pytest.approx(2.0, rel=1e-13)


def test_error_ratio_derivative_term():
    # the |dt|*|dxdt| term enlarges the scale and lowers the ratio
    p = ControllerParams(atol=0.0, rtol=1e-6)
    base = error_ratio([1e-6], [1.0], [0.0], 0.1, p)
    widened = error_ratio([1e-6], [1.0], [10.0], 0.1, p)
    assert widened == pytest.approx(base / 2.0, rel=1e-13)


# --- next_step_size ---------------------------------------------------------


def test_next_step_size_at_tolerance():
    p = ControllerParams()
    assert next_step_size(0.1, 1.0, 4, p) == pytest.approx(0.09, rel=1e-13)


def test_next_step_size_zero_error_hits_ceiling():
    p = ControllerParams()
    assert next_step_size(0.1, 0.0, 4, p) == pytest.approx(0.5, rel=1e-13)


def test_next_step_size_large_error_hits_floor():
    p = ControllerParams()
    assert next_step_size(0.1, 1e5, 4, p) == pytest.approx(0.02, rel=1e-13)


def test_next_step_size_growth_capped_after_rejection():
    p = ControllerParams()
    grown = next_step_size(0.1, 1e-4, 4, p)
    assert grown > 0.1
    capped = next_step_size(0.1, 1e-4, 4, p, was_rejected=True)
    assert capped == 0.1


def test_next_step_size_shrink_unaffected_by_rejection_flag():
    p = ControllerParams()
    a = next_step_size(0.1, 50.0, 4, p)
    b = next_step_size(0.1, 50.0, 4, p, was_rejected=True)
    assert a == b < 0.1


def test_next_step_size_underflow_raises():
    p = ControllerParams()
    with pytest.raises(StepSizeUnderflowError):
        next_step_size(1e-14, 1e5, 4, p)


def test_next_step_size_nan_error_shrinks():
    # NaN must not freeze dt at its current value
    p = ControllerParams()
    got = next_step_size(0.1, float("nan"), 4, p)
    assert got == pytest.approx(0.02, rel=1e-13)


# --- ControlledStepper ------------------------------------------------------


def test_requires_error_stepper():
    with pytest.raises(TypeError):
        ControlledStepper(ExplicitEuler())
    with pytest.raises(TypeError):
        ControlledStepper(RungeKutta4())


def test_zero_dt_rejected():
    ctl = ControlledStepper(CashKarp54())
    with pytest.raises(ValueError):
        ctl.try_step(expgrow, [1.0], 0.0, 0.0)


@pytest.mark.parametrize("base", [CashKarp54, DormandPrince5], ids=lambda c: c.__name__)
def test_zero_rhs_accepts_and_grows(base):
    ctl = ControlledStepper(base())
    x = [5.0, 7.0]
    res = ctl.try_step(zero_rhs, x, 0.0, 0.1)
    assert res.accepted
    assert res.outcome is StepOutcome.ACCEPTED_DT_INCREASED
    assert x == [5.0, 7.0]
    assert res.t == 0.1
    assert res.dt == pytest.approx(0.5, rel=1e-13)  # fac_max growth
    assert res.error_ratio == 0.0


def test_accept_advances_state_and_time():
    ctl = ControlledStepper(DormandPrince5())
    x = np.array([1.0])
    res = ctl.try_step(expgrow, x, 0.0, 0.01)
    assert res.accepted
    assert res.t == 0.01
    assert x[0] == pytest.approx(math.exp(0.01), rel=1e-12)
    assert res.error_ratio <= 1.0


def test_reject_leaves_state_bitwise_unchanged():
    ctl = ControlledStepper(DormandPrince5())
    x = np.array([1.0])
    before = x.tobytes()
    res = ctl.try_step(expgrow, x, 0.0, 10.0)
    assert res.outcome is StepOutcome.REJECTED
    assert not res.accepted
    assert res.t == 0.0
    assert res.dt < 10.0
    assert x.tobytes() == before


def test_growth_capped_right_after_rejection():
    # accepted retry after a rejection must not propose a larger dt
    ctl = ControlledStepper(DormandPrince5())
    x = np.array([1.0])
    t, dt = 0.0, 10.0
    res = ctl.try_step(expgrow, x, t, dt)
    while not res.accepted:
        dt = res.dt
        res = ctl.try_step(expgrow, x, t, dt)
    assert res.dt <= dt


def test_accepted_error_ratios_bounded_on_harmonic():
    ctl = ControlledStepper(DormandPrince5(), ControllerParams(atol=1e-6, rtol=1e-6))
    x = np.array([1.0, 0.0])
    t, dt = 0.0, 0.01
    accepted = 0
    while t < 20.0:
        res = ctl.try_step(HARMONIC, x, t, dt)
        if res.accepted:
            assert res.error_ratio <= 1.0
            t = res.t
            accepted += 1
        dt = res.dt
    assert accepted > 10


def test_rejections_shrink_dt_monotonically():
    ctl = ControlledStepper(CashKarp54())
    x = np.array([1.0])
    res = ctl.try_step(expgrow, x, 0.0, 100.0)
    seen = [100.0, res.dt]
    while not res.accepted:
        res = ctl.try_step(expgrow, x, 0.0, res.dt)
        seen.append(res.dt)
    assert all(b < a for a, b in zip(seen[:-2], seen[1:-1]))


def test_underflow_raises_with_location():
    def nasty(x, dxdt, t):
        dxdt[0] = float("nan")

    ctl = ControlledStepper(DormandPrince5())
    x = np.array([1.0])
    dt = 0.1
    with pytest.raises(StepSizeUnderflowError) as info:
        for _ in range(200):
            res = ctl.try_step(nasty, x, 0.0, dt)
            dt = res.dt
    assert info.value.dt < 0.1


def test_nan_error_counts_as_rejection():
    def nasty(x, dxdt, t):
        dxdt[0] = float("nan")

    ctl = ControlledStepper(DormandPrince5())
    x = np.array([1.0])
    res = ctl.try_step(nasty, x, 0.0, 0.1)
    assert res.outcome is StepOutcome.REJECTED
    assert res.dt < 0.1
    assert x[0] == 1.0


def test_fsal_cache_survives_rejection():
    # derivative at (x, t) is reused across a rejection: the retry costs
    # six evaluations instead of seven
    from odekit import EvaluationCounter

    counter = EvaluationCounter(expgrow)
    ctl = ControlledStepper(DormandPrince5())
    x = np.array([1.0])
    res = ctl.try_step(counter, x, 0.0, 10.0)
    assert not res.accepted
    first = counter.count
    assert first == 7
    res = ctl.try_step(counter, x, 0.0, res.dt)
    assert counter.count - first == 6


def test_reset_clears_cached_derivative():
    from odekit import EvaluationCounter

    counter = EvaluationCounter(expgrow)
    ctl = ControlledStepper(DormandPrince5())
    x = np.array([1.0])
    ctl.try_step(counter, x, 0.0, 0.01)
    ctl.reset()
    before = counter.count
    ctl.try_step(counter, x, 0.01, 0.01)
    assert counter.count - before == 7
