"""Dense output stepping: adapt freely, interpolate anywhere.

The stepper advances with the largest step widths the error control
admits and keeps, for the latest step, the quartic continuous extension
of the Dormand-Prince pair.  ``calc_state`` then evaluates the
trajectory at any time inside that step without further system
evaluations.
"""

from __future__ import annotations

from .algebra import algebra_for
from .controlled import ControlledStepper, ControllerParams
from .explicit import DormandPrince5

# Interpolation weights of the quartic term, from the continuous
# extension published for the Dormand-Prince 5(4) pair.
_D1 = -12715105075.0 / 11282082432.0
_D3 = 87487479700.0 / 32700410799.0
_D4 = -10690763975.0 / 1880347072.0
_D5 = 701980252875.0 / 199316789632.0
_D6 = -1453857185.0 / 822651844.0
_D7 = 69997945.0 / 29380423.0


class DenseOutputDopri5:
    """Adaptive Dormand-Prince stepping with free interpolation.

    Usage: ``initialize`` with the initial state, time, and a first
    step width proposal; then alternate ``do_step`` (which picks its
    own width) and ``calc_state`` for any times inside the interval the
    last step covered.  The interpolant is the published quartic
    continuous extension; it reproduces both interval endpoints to
    rounding accuracy and costs no system evaluations.

    Parameters
    ----------
    params : ControllerParams, optional
        Tolerances and limits of the internal error control.
    algebra : Algebra, optional
        State backend; defaults to the container of the initial state.
    """

    def __init__(self, params=None, algebra=None):
        self.params = ControllerParams() if params is None else params
        self._fixed_algebra = algebra
        self.stepper = DormandPrince5(algebra)
        self.controller = ControlledStepper(self.stepper, self.params, algebra)
        self._algebra = None
        self._x = None
        self._t = None
        self._dt = None
        self._t_prev = None
        self._h = None
        self._cont = None  # x_prev, ydiff, bspl, c4, c5
        self._have_interval = False
        self.last_error_ratio = None
        self.steps_attempted = 0
        self.steps_accepted = 0
        self.steps_rejected = 0

    def initialize(self, x0, t0, dt0):
        """Set the start state, start time, and first width proposal."""
        if dt0 <= 0.0:
            raise ValueError("initial step width proposal must be positive")
        algebra = self._fixed_algebra
        if algebra is None:
            algebra = algebra_for(x0)
        self._algebra = algebra
        self._x = algebra.clone_shape(x0)
        self._cont = [algebra.clone_shape(x0) for _ in range(5)]
        algebra.copy(self._x, x0)
        self._t = t0
        self._dt = dt0
        self._t_prev = None
        self._h = None
        self._have_interval = False
        self.last_error_ratio = None
        self.steps_attempted = 0
        self.steps_accepted = 0
        self.steps_rejected = 0
        self.controller.reset()

    @property
    def current_time(self):
        return self._t

    @property
    def current_state(self):
        """Copy of the state at ``current_time``."""
        self._require_initialized()
        out = self._algebra.clone_shape(self._x)
        self._algebra.copy(out, self._x)
        return out

    @property
    def interval(self):
        """``(t_previous, t_current)`` covered by the last step."""
        self._require_interval()
        return (self._t_prev, self._t)

    def _require_initialized(self):
        if self._x is None or self._t is None:
            raise RuntimeError("initialize() must be called first")

    def _require_interval(self):
        if not self._have_interval:
            raise RuntimeError("no step taken yet; call do_step() first")

    def do_step(self, system):
        """Advance by one accepted step of self-chosen width.

        Retries internally on rejection.  Returns the covered interval
        ``(t_previous, t_current)``.
        """
        self._require_initialized()
        algebra = self._algebra
        x_prev, ydiff, bspl, c4, c5 = self._cont
        algebra.copy(x_prev, self._x)
        t_start = self._t
        dt = self._dt
        while True:
            dt_used = dt
            result = self.controller.try_step(system, self._x, self._t, dt)
            self.steps_attempted += 1
            dt = result.dt
            if result.accepted:
                self.steps_accepted += 1
                break
            self.steps_rejected += 1

        k = self.controller.last_stage_record.derivatives
        h = dt_used
        # Interpolation coefficients, Horner-ready:
        #   x(t_prev + theta*h) = x_prev + theta*ydiff
        #     + theta*(1-theta)*bspl + theta^2*(1-theta)*c4
        #     + theta^2*(1-theta)^2*c5
        algebra.scale_sum(ydiff, (1.0, -1.0), (self._x, x_prev))
        algebra.scale_sum(bspl, (h, -1.0), (k[0], ydiff))
        algebra.scale_sum(c4, (1.0, -h, -1.0), (ydiff, k[6], bspl))
        algebra.scale_sum(
            c5,
            (h * _D1, h * _D3, h * _D4, h * _D5, h * _D6, h * _D7),
            (k[0], k[2], k[3], k[4], k[5], k[6]),
        )
        self._t_prev = t_start
        self._t = result.t
        self._h = h
        self._dt = result.dt
        self._have_interval = True
        self.last_error_ratio = result.error_ratio
        return (self._t_prev, self._t)

    def calc_state(self, t, out=None):
        """Interpolated state at a time inside the last step.

        ``t`` must satisfy ``t_previous <= t <= t_current``; there is
        no extrapolation.  Performs no system evaluations.
        """
        self._require_interval()
        lo, hi = self._t_prev, self._t
        if not (min(lo, hi) <= t <= max(lo, hi)):
            raise ValueError(
                f"time {t!r} lies outside the last step interval [{lo!r}, {hi!r}]"
            )
        algebra = self._algebra
        if out is None:
            out = algebra.clone_shape(self._x)
        theta = (t - lo) / self._h
        omt = 1.0 - theta
        x_prev, ydiff, bspl, c4, c5 = self._cont
        algebra.scale_sum(
            out,
            (1.0, theta, theta * omt, theta * theta * omt, theta * theta * omt * omt),
            (x_prev, ydiff, bspl, c4, c5),
        )
        return out
