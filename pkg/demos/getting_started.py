"""Integrate the harmonic oscillator with a fixed-step RK4 and print the
trajectory against the closed-form solution.

Run as: python3 demos/getting_started.py
"""

import math

import numpy as np

from odekit import HARMONIC, RungeKutta4, integrate_const


def main():
    times = []
    states = []

    def observer(x, t):
        times.append(t)
        states.append(np.array(x))

    report = integrate_const(RungeKutta4(), HARMONIC, np.array([1.0, 0.0]),
                             t0=0.0, t1=6.0, dt=0.5, observer=observer)

    print(f"{'t':>5}  {'q':>12}  {'p':>12}  {'|err|':>9}")
    for t, x in zip(times, states):
        err = max(abs(x[0] - math.cos(t)), abs(x[1] + math.sin(t)))
        print(f"{t:5.2f}  {x[0]:12.8f}  {x[1]:12.8f}  {err:9.2e}")
    print(f"\n{report.steps_accepted} steps, "
          f"{report.system_evaluations} system evaluations")


if __name__ == "__main__":
    main()
