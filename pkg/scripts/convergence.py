"""Empirical convergence orders of RK4 and the first-order short-time step."""
import argparse
from dataclasses import replace

import numpy as np
from scipy.linalg import expm

from blochfsm import SimulationConfig, integrate
from blochfsm.dynamics import two_level_g
from blochfsm.logic import short_time_step
from blochfsm.sylvester import closed_form_two_level


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dts", default="8e-3,4e-3,2e-3,1e-3")
    args = ap.parse_args()
    dts = np.array([float(x) for x in args.dts.split(",")])

    cfg = SimulationConfig()
    exact = closed_form_two_level(0.0, cfg.pulse.area(*cfg.window))
    errs = np.array([np.max(np.abs(integrate(replace(cfg, dt=h)).final - exact)) for h in dts])
    print("RK4 endpoint error")
    for h, e in zip(dts, errs):
        print(f"  dt={h:.1e}  err={e:.3e}")
    print(f"  fitted order {np.polyfit(np.log(dts), np.log(errs), 1)[0]:.3f}")

    g = two_level_g(1.0, 0.5)
    S0 = np.array([0.0, 0.0, 1.0])
    local = np.array([np.linalg.norm(short_time_step(S0, g, h) - expm(g * h) @ S0) for h in dts])
    print(f"short-time step local error order {np.polyfit(np.log(dts), np.log(local), 1)[0]:.3f}")


if __name__ == "__main__":
    main()
