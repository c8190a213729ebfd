"""
Final-state distance between delta-train dephasing and ideal projective
reductions (n = 8) across bump weights and widths.
"""
import argparse

import numpy as np

from zenolab.dynamics import RabiModel
from zenolab.lindblad import delta_train_rate, integrate
from zenolab.linalg import basis_state, pure_density
from zenolab.measurement import DiscreteSchedule, evolve_with_measurements, projector_set


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--weights", default="5,15,30,50")
    p.add_argument("--widths", default="500,1000,2000,4000", help="bump widths as divisors of T_P")
    args = p.parse_args()
    model = RabiModel.ize_scenario()
    t_p = model.t_poincare
    rho0 = pure_density(basis_state(0))
    partial = projector_set("partial")
    schedule = DiscreteSchedule(args.n, t_p)
    target = evolve_with_measurements(model, partial, schedule, rho0)
    weights = [float(w) for w in args.weights.split(",")]
    divisors = [int(d) for d in args.widths.split(",")]
    print("width \\ weight " + "".join(f"{w:>11g}" for w in weights))
    for d in divisors:
        row = []
        for w in weights:
            rate = delta_train_rate(schedule.times, t_p / d, w)
            rho = integrate(rho0, model, partial, rate, t_p).rho
            row.append(float(np.max(np.abs(rho - target))))
        print(f"T_P/{d:<10}" + "".join(f"{x:>11.5f}" for x in row))


if __name__ == "__main__":
    main()
