import argparse
from pathlib import Path

from contactrelapse import ModelParams

# relapse scenario used throughout the bifurcation and heatmap figures
RELAPSE = ModelParams(beta=0.00096, gamma=0.0027, phi=0.0044, mu=0.00015)


def parser(desc: str, out: str) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(description=desc)
    ap.add_argument("--out", type=Path, default=Path("out") / out)
    ap.add_argument("--workers", type=int, default=1)
    return ap
