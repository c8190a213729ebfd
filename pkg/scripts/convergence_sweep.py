"""Distance of measured curves from the two-level Rabi limit as n grows."""
import argparse

import numpy as np

from zenolab.analysis import defreezing_error, detect_zeno_regime
from zenolab.dynamics import RabiModel
from zenolab.measurement import DiscreteSchedule, projector_set, survival_curve


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--grid", type=int, default=401)
    p.add_argument("--max-power", type=int, default=10, help="sweep n = 2^0 .. 2^max_power")
    args = p.parse_args()
    model = RabiModel.ize_scenario()
    tau = np.linspace(0, 1, args.grid)
    free = survival_curve(model, None, None, tau)
    partial = projector_set("partial")
    print(f"{'n':>6}  {'E(n)':>10}  {'n*E(n)':>8}  regime  margin")
    for k in range(args.max_power + 1):
        n = 2 ** k
        curve = survival_curve(model, partial, DiscreteSchedule(n, model.t_poincare), tau)
        e = defreezing_error(model, curve)
        v = detect_zeno_regime(free, curve)
        print(f"{n:>6}  {e:>10.6f}  {n * e:>8.4f}  {v.regime:>6}  {v.margin:.4f}")


if __name__ == "__main__":
    main()
