"""Influenza outbreaks (no relapse) under different contact ratios."""
import csv

from _common import parser

from contactrelapse.core import derived_rates
from contactrelapse.extensions import (immunized_r0, influenza_scenario, peak_prevalence)
from contactrelapse.simulate import integrate

CASES = ((0.7, 1.0), (1.0, 1.0), (1.2, 1.0), (1.0, 0.8), (1.0, 1.6))

if __name__ == "__main__":
    args = parser(__doc__, "fig7").parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    base = influenza_scenario()
    r0 = derived_rates(base.params, base.contacts).r0
    print(f"R0={r0:.4f}  R_p(p=0.2)={immunized_r0(r0, 0.2):.4f}")
    for k, t in CASES:
        traj = integrate(influenza_scenario(k, t), stop_on_convergence=False)
        with open(args.out / f"influenza_k{k:g}_t{t:g}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "i"])
            w.writerows((format(a, ".17g"), format(b, ".17g")) for a, b in zip(traj.times, traj.i))
        t_pk, i_pk = peak_prevalence(traj)
        print(f"kappa={k:<4g} theta={t:<4g} peak {i_pk:.4f} at t={t_pk:g}")
