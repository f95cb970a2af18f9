"""Long-run infected share over (kappa, theta) from i(0)=0.1 and i(0)=0.02.

The full 50x50 grid integrates 2500 trajectories per panel; pass --resolution to trade
detail for time.
"""
from _common import RELAPSE, parser

from contactrelapse.sweep import equilibrium_heatmap, write_grid_csv

if __name__ == "__main__":
    ap = parser(__doc__, "fig5")
    ap.add_argument("--resolution", type=int, default=50)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for i0 in (0.1, 0.02):
        grid = equilibrium_heatmap(RELAPSE, (0.01, 1.0), (0.0, 2.0), i0,
                                   (args.resolution, args.resolution), workers=args.workers)
        write_grid_csv(grid, args.out / f"heatmap_i0_{i0:g}.csv")
        print(f"i0={i0:g}: min {grid.payload.min():.4f}, max {grid.payload.max():.4f}, "
              f"failed cells {len(grid.missing)}")
