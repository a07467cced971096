"""Measure empirical convergence orders by halving the step size.

Each stepper integrates x' = -x over [0, 1] at a geometric ladder of
step sizes; the slope of log(error) against log(dt) is the observed
order.  Steps whose error sits at rounding level are excluded from the
fit automatically.
"""

from odekit import (
    CashKarp54,
    DormandPrince5,
    ExplicitEuler,
    ImplicitEuler,
    RungeKutta4,
    get_system,
    order_study,
)


def main():
    system = get_system("expdecay")
    dts = [0.1 / 2**k for k in range(5)]

    print(f"{'stepper':<16} {'order':>6}   excluded")
    for stepper in (ExplicitEuler(), RungeKutta4(), CashKarp54(),
                    DormandPrince5(), ImplicitEuler()):
        study = order_study(stepper, system, [1.0], 0.0, 1.0, dts)
        name = type(stepper).__name__
        print(f"{name:<16} {study.slope:6.3f}   {len(study.excluded)} of {len(dts)}")
        for dt, err in zip(study.dts, study.errors):
            marker = "  (excluded)" if (dt, err) in study.excluded else ""
            print(f"    dt={dt:<8.5g} err={err:.3e}{marker}")


if __name__ == "__main__":
    main()
