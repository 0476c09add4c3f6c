"""Reference values for the bundled datasets.

``*_PRINTED`` tuples follow the layout of the published tables (outer
variable slowest, the response varying fastest); ``to_printed`` maps a
canonical flat table into that layout using the fixture's ``display_order``.
``*_EXACT`` values were computed independently with mpmath ``findroot`` at 40
digits on the raw equations (cell-space unknowns, products instead of logs)
and are given in canonical (X1, X2, X3) order.
"""
import numpy as np

YULE_COUNTS = (274, 278, 200, 3951)
YULE_ODDS_RATIO_PRINTED = 19.47

AGRESTI_COUNTS_PRINTED = (18, 12, 12, 8, 2, 8, 8, 32)
AGRESTI_SOLUTION_PRINTED = (0.252, 0.103, 0.103, 0.042, 0.042, 0.103, 0.103, 0.252)
AGRESTI_EXACT = (
    0.10292856398964493, 0.10292856398964493, 0.042020410288672876, 0.25212246173203726,
    0.25212246173203726, 0.042020410288672876, 0.10292856398964493, 0.10292856398964493,
)

FIENBERG_COUNTS_PRINTED = (1, 4, 2, 6, 12, 1, 3, 1)
FIENBERG_SOLUTION_PRINTED = (0.024, 0.133, 0.065, 0.278, 0.305, 0.040, 0.105, 0.050)
FIENBERG_EXACT = (
    0.023238522439607284, 0.30616236528319645, 0.064453706334998931, 0.10614540594219733,
    0.13385839243436958, 0.036740719842826684, 0.27844937879102421, 0.050951508931779531,
)


def to_printed(doc, flat):
    flat = np.asarray(flat, dtype=float).reshape(-1)
    return flat[list(doc.meta["display_order"])]
