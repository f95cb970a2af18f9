"""Width of the three-root R0 window over (kappa, theta), plus the theta at which it opens."""
from _common import RELAPSE, parser

from contactrelapse.sweep import r3_window_surface, write_grid_csv
from contactrelapse.theorem import theta_onset

if __name__ == "__main__":
    ap = parser(__doc__, "fig6")
    ap.add_argument("--resolution", type=int, default=50)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    grid = r3_window_surface(RELAPSE, (0.0, 1.0), (0.0, 2.0), (args.resolution, args.resolution),
                             workers=args.workers)
    write_grid_csv(grid, args.out / "window.csv")
    onset = theta_onset(RELAPSE, [k / 20 for k in range(21)])
    print(f"largest window {grid.payload.max():.5f}; window open for every kappa from theta={onset:.4f}")
