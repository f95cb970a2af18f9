"""Bifurcation diagrams at theta=1.7 for four values of kappa."""
from _common import RELAPSE, parser

from contactrelapse.sweep import branch_sweep, classify_regions, write_branches_csv

KAPPAS = (0.8, 0.5, 0.3, 0.01)

if __name__ == "__main__":
    args = parser(__doc__, "fig1").parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for k in KAPPAS:
        diag = branch_sweep(RELAPSE, k, 1.7, (0.7, 1.15), 300, workers=args.workers)
        write_branches_csv(diag, args.out / f"branches_kappa{k:g}.csv")
        regions = list(dict.fromkeys(classify_regions(diag)))
        print(f"kappa={k:<5g} boundaries=" + ", ".join(f"{x:.5f}" for x in diag.region_boundaries)
              + "  regions=" + " ".join(regions))
