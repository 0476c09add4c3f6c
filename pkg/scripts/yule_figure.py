"""Write the before/after bubble plot of the smallpox table to an SVG file.

    python scripts/yule_figure.py --out yule.svg
"""
import argparse

from unimargin.cli import cmd_plot, cmd_uniformize
from unimargin.io import load_fixture


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="yule.svg")
    args = parser.parse_args()
    before = load_fixture("yule")
    after, summary = cmd_uniformize(before, "closed")
    cmd_plot(before, after, args.out)
    print(f"odds ratio {summary['before']['omega']:.2f}; uniform table "
          + ", ".join(f"{v:.4f}" for v in after.cells))
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
