"""Transform the bundled 2x2x2 datasets and print the result in the published layout.

    python scripts/reproduce_tables.py [--dataset agresti|fienberg|all]
"""
import argparse

import numpy as np

from unimargin.io import load_fixture
from unimargin.solvers import cross_validate
from unimargin.tables import dependence_profile

PRINTED = {
    "agresti": (0.252, 0.103, 0.103, 0.042, 0.042, 0.103, 0.103, 0.252),
    "fienberg": (0.024, 0.133, 0.065, 0.278, 0.305, 0.040, 0.105, 0.050),
}


def report(name):
    doc = load_fixture(name)
    t = doc.to_table()
    order = doc.meta["display_order"]
    by_ipf, by_newton = cross_validate(t)
    prof = dependence_profile(t)
    print(f"== {name}: {doc.meta.get('source', '')}")
    print("   omega3 = {:.4f}   w23|0 = {:.4f}   w13|0 = {:.4f}   w12|0 = {:.4f}".format(*prof.targets()))
    print(f"   IPF sweeps {by_ipf.iterations}, Newton iterations {by_newton.iterations}, "
          f"max |IPF - Newton| = {np.max(np.abs(by_ipf.solution.flat - by_newton.solution.flat)):.2e}")
    print(f"   {'count':>6} {'IPF':>8} {'Newton':>8} {'printed':>8} {'diff':>8}")
    ipf = by_ipf.solution.flat[order]
    newton = by_newton.solution.flat[order]
    counts = np.asarray(doc.cells)[order]
    for n, a, b, p in zip(counts, ipf, newton, PRINTED[name]):
        print(f"   {n:6g} {a:8.4f} {b:8.4f} {p:8.3f} {a - p:+8.4f}")
    print()


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dataset", choices=("agresti", "fienberg", "all"), default="all")
    args = parser.parse_args()
    for name in ("agresti", "fienberg") if args.dataset == "all" else (args.dataset,):
        report(name)


if __name__ == "__main__":
    main()
