"""Explicit fixed-step and embedded-error Runge-Kutta steppers.

All steppers share one calling convention: the system is a callable
``system(x, dxdt, t)`` that writes the derivative into ``dxdt``.
``do_step`` advances in place when no output state is given and leaves
``x`` untouched when one is; both paths perform the identical sequence
of floating point operations.  NaNs produced by the system propagate
unrepaired.
"""

from __future__ import annotations

from collections import namedtuple

from .algebra import algebra_for
from .tableaus import CASH_KARP_54, DORMAND_PRINCE_54, EULER, RK4_CLASSIC

OrderInfo = namedtuple("OrderInfo", ["order", "error_order", "stage_count"])


class StageRecord(namedtuple("StageRecord", ["derivatives"])):
    """Stage derivatives retained from the latest step.

    The entries are the stepper's live scratch buffers: read or copy
    them before the next call, which overwrites them.
    """

    @property
    def new_derivative(self):
        """Derivative at the accepted new state (last-stage evaluation)."""
        return self.derivatives[-1]


class ExplicitRungeKutta:
    """Fixed-step explicit Runge-Kutta scheme over a Butcher tableau.

    Scratch buffers are sized lazily on first use and reused, so a step
    allocates no state-sized memory.  Instances keep per-call scratch
    and must not be shared between concurrent integrations.

    Parameters
    ----------
    tableau : ButcherTableau
        Stage coefficients; zero entries are skipped at set-up time.
    algebra : Algebra, optional
        State backend.  Defaults to whatever matches the state passed
        to the first call.
    """

    fsal = False
    needs_jacobian = False

    def __init__(self, tableau, algebra=None):
        self.tableau = tableau
        self.order = tableau.order
        self.error_order = tableau.error_order
        self.stage_count = tableau.stage_count
        self._fixed_algebra = algebra
        self._scratch_key = None
        self._k = None
        self._u = None
        # Nonzero-coefficient index lists, fixed per tableau.
        self._stage_idx = tuple(
            tuple(j for j, aij in enumerate(row) if aij != 0.0) for row in tableau.a
        )
        self._b_idx = tuple(j for j, bj in enumerate(tableau.b) if bj != 0.0)
        ew = tableau.error_weights
        self._e_idx = None if ew is None else tuple(j for j, e in enumerate(ew) if e != 0.0)

    @property
    def order_info(self):
        return OrderInfo(self.order, self.error_order, self.stage_count)

    def _prepare(self, x):
        algebra = self._fixed_algebra
        if algebra is None:
            algebra = algebra_for(x)
        key = (id(algebra), len(x))
        if key != self._scratch_key:
            self._k = [algebra.clone_shape(x) for _ in range(self.stage_count)]
            self._u = algebra.clone_shape(x)
            self._scratch_key = key
        return algebra

    def _run_stages(self, algebra, system, x, t, dt, first_stage, stop=None):
        a, c, k, u = self.tableau.a, self.tableau.c, self._k, self._u
        if stop is None:
            stop = self.stage_count
        for i in range(first_stage, stop):
            idx = self._stage_idx[i - 1]
            row = a[i - 1]
            algebra.scale_sum(
                u,
                (1.0,) + tuple(dt * row[j] for j in idx),
                (x,) + tuple(k[j] for j in idx),
            )
            system(u, k[i], t + c[i] * dt)

    def _combine(self, algebra, x, dt, target):
        b, k = self.tableau.b, self._k
        algebra.scale_sum(
            target,
            (1.0,) + tuple(dt * b[j] for j in self._b_idx),
            (x,) + tuple(k[j] for j in self._b_idx),
        )
        return target

    def do_step(self, system, x, t, dt, out=None):
        """Advance ``x`` from ``t`` by ``dt``.

        Overwrites ``x`` when ``out`` is None, otherwise writes the new
        state into ``out`` and leaves ``x`` unchanged.  Returns the
        updated state.
        """
        algebra = self._prepare(x)
        system(x, self._k[0], t)
        self._run_stages(algebra, system, x, t, dt, 1)
        return self._combine(algebra, x, dt, x if out is None else out)


class EmbeddedRungeKutta(ExplicitRungeKutta):
    """Explicit pair producing a solution and an error estimate."""

    def __init__(self, tableau, algebra=None):
        if tableau.b_embedded is None:
            raise ValueError(f"{tableau.name}: embedded weights required")
        super().__init__(tableau, algebra)
        self._xerr_scratch = None
        self._xerr_key = None

    def _error_estimate(self, algebra, dt, xerr):
        if xerr is None:
            xerr = algebra.clone_shape(self._k[0])
        ew, k = self.tableau.error_weights, self._k
        algebra.scale_sum(
            xerr,
            tuple(dt * ew[j] for j in self._e_idx),
            tuple(k[j] for j in self._e_idx),
        )
        return xerr

    def do_step_with_error(self, system, x, t, dt, out=None, xerr=None):
        """As ``do_step`` but also fills ``xerr`` with the embedded
        error estimate.  Returns ``(new_state, xerr)``."""
        algebra = self._prepare(x)
        system(x, self._k[0], t)
        self._run_stages(algebra, system, x, t, dt, 1)
        target = self._combine(algebra, x, dt, x if out is None else out)
        return target, self._error_estimate(algebra, dt, xerr)


class ExplicitEuler(ExplicitRungeKutta):
    """First order explicit Euler: ``x + dt * f(x, t)``."""

    def __init__(self, algebra=None):
        super().__init__(EULER, algebra)


class RungeKutta4(ExplicitRungeKutta):
    """The classical fourth order scheme with weights 1/6, 1/3, 1/3, 1/6."""

    def __init__(self, algebra=None):
        super().__init__(RK4_CLASSIC, algebra)


class CashKarp54(EmbeddedRungeKutta):
    """Cash-Karp 5(4): six stages, fifth order solution, embedded
    fourth order comparison.

    References
    ----------
    Cash, J. R., Karp, A. H., "A variable order Runge-Kutta method for
    initial value problems with rapidly varying right-hand sides",
    ACM Transactions on Mathematical Software 16 (1990) 201-222.
    """

    def __init__(self, algebra=None):
        super().__init__(CASH_KARP_54, algebra)


class DormandPrince5(EmbeddedRungeKutta):
    """Dormand-Prince 5(4) with first-same-as-last stage reuse.

    The seventh stage derivative is evaluated at the accepted new state,
    so it doubles as the first stage of the following step.  Callers
    chain steps by feeding ``StageRecord.new_derivative`` back through
    ``dxdt_in``, which brings the cost down to six fresh system
    evaluations per step.  The full stage record also feeds the dense
    output interpolant.

    References
    ----------
    Dormand, J. R., Prince, P. J., "A family of embedded Runge-Kutta
    formulae", Journal of Computational and Applied Mathematics 6
    (1980) 19-26.
    """

    fsal = True

    def __init__(self, algebra=None):
        super().__init__(DORMAND_PRINCE_54, algebra)

    def do_step_with_error(self, system, x, t, dt, out=None, xerr=None, dxdt_in=None):
        """Advance one step and estimate its error.

        Parameters
        ----------
        dxdt_in : state, optional
            Precomputed ``f(x, t)``, typically the previous step's
            ``new_derivative``.  Supplying it skips the first stage
            evaluation; it must belong to the current ``(x, t)``, so
            omit it whenever ``x`` was modified externally.

        Returns
        -------
        (new_state, xerr, StageRecord)
        """
        algebra = self._prepare(x)
        k = self._k
        if dxdt_in is None:
            system(x, k[0], t)
        else:
            algebra.copy(k[0], dxdt_in)
        # The last row of the tableau repeats the solution weights, so
        # the seventh stage state is the new state itself; run the loop
        # up to stage six and evaluate the last stage at the target.
        self._run_stages(algebra, system, x, t, dt, 1, stop=6)
        target = self._combine(algebra, x, dt, x if out is None else out)
        system(target, k[6], t + dt)
        return target, self._error_estimate(algebra, dt, xerr), StageRecord(tuple(k))

    def do_step(self, system, x, t, dt, out=None):
        algebra = self._prepare(x)
        if self._xerr_key != self._scratch_key:
            self._xerr_scratch = algebra.clone_shape(x)
            self._xerr_key = self._scratch_key
        state, _, _ = self.do_step_with_error(system, x, t, dt, out, self._xerr_scratch)
        return state
