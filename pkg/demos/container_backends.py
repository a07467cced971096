"""Run the same Lorenz trajectory on a numpy array and on a plain Python
list, then compare the results bit for bit.

The stepper code never touches numpy directly; it goes through an algebra
object picked by container type.  Both algebras accumulate sums in the
same left-to-right order, so the floating-point results are identical,
not merely close.
"""

import struct

from odekit import LORENZ, RungeKutta4, algebra_for


def run(x0, n=1000, dt=0.01):
    stepper = RungeKutta4()
    x = x0
    t = 0.0
    for _ in range(n):
        x = stepper.do_step(LORENZ, x, t, dt, out=x)
        t += dt
    return x


def main():
    import numpy as np

    xa = run(np.array([10.0, 10.0, 10.0]))
    xl = run([10.0, 10.0, 10.0])

    print(f"numpy backend  ({type(algebra_for(xa)).__name__}):")
    print(f"  {list(map(float, xa))}")
    print(f"list backend   ({type(algebra_for(xl)).__name__}):")
    print(f"  {xl}")

    identical = all(struct.pack("<d", float(a)) == struct.pack("<d", b)
                    for a, b in zip(xa, xl))
    print(f"\nbit-identical after 1000 steps: {identical}")


if __name__ == "__main__":
    main()
