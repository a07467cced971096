"""Adaptive step size control around embedded-error steppers.

A trial step is accepted when its scaled error ratio is at most one;
otherwise the state and time stay untouched and the step width shrinks.
The next width follows the standard integral controller
``dt * safety * ratio**(-1/(error_order+1))``, clamped to a bounded
growth window.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .algebra import algebra_for
from .errors import StepSizeUnderflowError


@dataclass(frozen=True)
class ControllerParams:
    """Tolerances and limits for adaptive stepping.

    ``atol`` and ``rtol`` weight the error test; ``safety`` shrinks the
    predicted width; ``fac_min`` and ``fac_max`` bound how fast the
    width may change in one adaptation; ``dt_min`` is the smallest
    usable width; ``max_rejections`` bounds consecutive rejected trials
    of one step.
    """

    atol: float = 1e-6
    rtol: float = 1e-6
    safety: float = 0.9
    fac_min: float = 0.2
    fac_max: float = 5.0
    dt_min: float = 1e-14
    max_rejections: int = 100

    def __post_init__(self):
        if self.atol < 0.0 or self.rtol < 0.0 or self.atol + self.rtol == 0.0:
            raise ValueError("tolerances must be nonnegative and not both zero")
        if not 0.0 < self.safety <= 1.0:
            raise ValueError("safety must lie in (0, 1]")
        if not 0.0 < self.fac_min < 1.0 < self.fac_max:
            raise ValueError("need fac_min < 1 < fac_max with fac_min > 0")
        if self.dt_min <= 0.0:
            raise ValueError("dt_min must be positive")
        if self.max_rejections < 1:
            raise ValueError("max_rejections must be at least 1")


class StepOutcome(enum.Enum):
    """Result classification of one trial step."""

    ACCEPTED_DT_UNCHANGED = "accepted_dt_unchanged"
    ACCEPTED_DT_INCREASED = "accepted_dt_increased"
    REJECTED = "rejected"

    @property
    def accepted(self):
        return self is not StepOutcome.REJECTED


@dataclass(frozen=True)
class StepResult:
    """Outcome of ``try_step``: the time after the call, the width to
    use for the next trial, and the trial's error ratio."""

    outcome: StepOutcome
    t: float
    dt: float
    error_ratio: float

    @property
    def accepted(self):
        return self.outcome.accepted


def error_ratio(xerr, x_old, dxdt_old, dt, params, algebra=None):
    """Scaled max-norm of an error estimate against the step tolerances.

    The scale for component ``i`` is
    ``atol + rtol * (|x_old_i| + |dt| * |dxdt_old_i|)``; a ratio of at
    most one means the step passes.
    """
    if algebra is None:
        algebra = algebra_for(x_old)
    return algebra.error_ratio_max(xerr, x_old, dxdt_old, params.atol, params.rtol, dt)


def next_step_size(dt, err, error_order, params, was_rejected=False):
    """Integral controller for the following step width.

    A zero error ratio grows the width by ``fac_max`` outright.  After
    a rejection the growth factor is additionally capped at one.
    Raises :class:`StepSizeUnderflowError` when the proposed width
    drops below ``dt_min``.
    """
    if err == 0.0:
        factor = params.fac_max
    else:
        factor = params.safety * err ** (-1.0 / (error_order + 1))
        factor = min(params.fac_max, max(params.fac_min, factor))
    if was_rejected and factor > 1.0:
        factor = 1.0
    dt_new = dt * factor
    if abs(dt_new) < params.dt_min:
        raise StepSizeUnderflowError(dt_new)
    return dt_new


class ControlledStepper:
    """Accept/reject wrapper around an embedded-error stepper.

    ``try_step`` writes the new state into ``x`` only on acceptance; a
    rejected trial leaves ``x`` and ``t`` untouched and only shrinks
    the step width.  The derivative at the current state, needed for
    the error scale, is cached between trials and, for steppers with a
    first-same-as-last stage, shared with the stepper itself, so a
    smooth run costs one extra system evaluation in total.

    Instances carry trial scratch and the derivative cache; do not
    share one instance between concurrent integrations.  Call
    ``reset`` after modifying the state externally.
    """

    def __init__(self, stepper, params=None, algebra=None):
        if not hasattr(stepper, "do_step_with_error"):
            raise TypeError(
                f"{type(stepper).__name__} provides no embedded error estimate"
            )
        if stepper.error_order is None:
            raise TypeError(f"{type(stepper).__name__} declares no error order")
        self.stepper = stepper
        self.params = ControllerParams() if params is None else params
        self._fixed_algebra = algebra
        self._scratch_key = None
        self._xtrial = None
        self._xerr = None
        self._dxdt = None
        self._dxdt_valid = False
        self._last_rejected = False
        self._rejections = 0
        self.last_stage_record = None

    def reset(self):
        """Drop the cached derivative and rejection history."""
        self._dxdt_valid = False
        self._last_rejected = False
        self._rejections = 0
        self.last_stage_record = None

    def _prepare(self, x):
        algebra = self._fixed_algebra
        if algebra is None:
            algebra = algebra_for(x)
        key = (id(algebra), len(x))
        if key != self._scratch_key:
            self._xtrial = algebra.clone_shape(x)
            self._xerr = algebra.clone_shape(x)
            self._dxdt = algebra.clone_shape(x)
            self._dxdt_valid = False
            self._scratch_key = key
        return algebra

    def try_step(self, system, x, t, dt):
        """Attempt one step of width ``dt`` from ``(x, t)``.

        Returns a :class:`StepResult`.  On acceptance ``x`` holds the
        new state and ``result.t`` the advanced time; on rejection both
        are unchanged and ``result.dt`` carries the reduced width to
        retry with.  Raises :class:`StepSizeUnderflowError` once a step
        has been rejected more than ``max_rejections`` times in a row
        or the width falls below ``dt_min``.
        """
        if dt == 0.0:
            raise ValueError("step width must be nonzero")
        algebra = self._prepare(x)
        params = self.params
        stepper = self.stepper

        if not self._dxdt_valid:
            system(x, self._dxdt, t)
            self._dxdt_valid = True

        if stepper.fsal:
            _, _, record = stepper.do_step_with_error(
                system, x, t, dt, out=self._xtrial, xerr=self._xerr, dxdt_in=self._dxdt
            )
            self.last_stage_record = record
        else:
            stepper.do_step_with_error(system, x, t, dt, out=self._xtrial, xerr=self._xerr)
            record = None

        err = algebra.error_ratio_max(
            self._xerr, x, self._dxdt, params.atol, params.rtol, dt
        )

        if err <= 1.0:
            algebra.copy(x, self._xtrial)
            if record is not None:
                # The last stage derivative belongs to the state just
                # accepted; keep it as the next trial's first stage.
                algebra.copy(self._dxdt, record.new_derivative)
            else:
                self._dxdt_valid = False
            try:
                dt_next = next_step_size(
                    dt, err, stepper.error_order, params, self._last_rejected
                )
            except StepSizeUnderflowError as exc:
                raise StepSizeUnderflowError(exc.dt, t=t + dt) from None
            self._last_rejected = False
            self._rejections = 0
            outcome = (
                StepOutcome.ACCEPTED_DT_INCREASED
                if dt_next > dt
                else StepOutcome.ACCEPTED_DT_UNCHANGED
            )
            return StepResult(outcome, t + dt, dt_next, err)

        # Rejected: x and t stay untouched, the cached derivative is
        # still the derivative at (x, t).
        self._rejections += 1
        self._last_rejected = True
        if self._rejections > params.max_rejections:
            raise StepSizeUnderflowError(dt, t=t)
        try:
            dt_next = next_step_size(dt, err, stepper.error_order, params, True)
        except StepSizeUnderflowError as exc:
            raise StepSizeUnderflowError(exc.dt, t=t) from None
        return StepResult(StepOutcome.REJECTED, t, dt_next, err)
