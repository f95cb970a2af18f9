"""Trajectories from ten initial infected shares; high ones reach the upper endemic
state, low ones the lower one."""
import csv

from _common import RELAPSE, parser

from contactrelapse import ContactProfile, ScenarioSpec, endemic_equilibria, integrate
from contactrelapse.simulate import detect_convergence, initial_from_rho

HIGH = (0.03574, 0.0610, 0.0863, 0.1369, 0.1875)
LOW = (0.00125, 0.0024, 0.0036, 0.0058, 0.0081)

if __name__ == "__main__":
    args = parser(__doc__, "fig4").parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    c = ContactProfile.from_ratios(3.0, 0.8, 1.7)
    eq = endemic_equilibria(RELAPSE, c)
    print("equilibria:", ", ".join(f"{x:.6f}" for x in eq.i_stars))
    for rho in HIGH + LOW:
        traj = integrate(ScenarioSpec(RELAPSE, c, initial_from_rho(rho)), stop_on_convergence=False)
        rep = detect_convergence(traj, eq)
        with open(args.out / f"trajectory_rho{rho:g}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "i"])
            w.writerows((format(t, ".17g"), format(i, ".17g")) for t, i in zip(traj.times, traj.i))
        print(f"rho={rho:<8g} i(T)={rep.limit_state.i:.6f}  equilibrium #{rep.matched_equilibrium}")
