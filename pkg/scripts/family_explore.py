"""How far apart can two uniform-margin tables with the same omega3 be?

Samples the family for a range of omega3 values and reports, for each, the
largest cellwise distance from the symmetric solution and the spread of the
conditional odds ratio w12|0 among the samples.

    python scripts/family_explore.py --n 2000 --seed 0
"""
import argparse

import numpy as np

from unimargin.closed_forms import symmetric_3d
from unimargin.family import sample_family, verify_family_point
from unimargin.tables import conditional_odds_ratio


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    print(f"{'omega3':>8} {'max |p - sym|':>14} {'w12|0 min':>10} {'w12|0 max':>10} {'max resid':>10}")
    for omega in (0.01, 0.25, 1.0, 4.0, 16.0, 100.0):
        points = sample_family(omega, args.n, args.seed)
        sym = symmetric_3d(omega).flat
        dist = max(np.max(np.abs(fp.table.flat - sym)) for fp in points)
        w12 = [conditional_odds_ratio(fp.table, "12", 0) for fp in points]
        resid = max(verify_family_point(fp) for fp in points)
        print(f"{omega:8g} {dist:14.4f} {min(w12):10.3g} {max(w12):10.3g} {resid:10.1e}")


if __name__ == "__main__":
    main()
