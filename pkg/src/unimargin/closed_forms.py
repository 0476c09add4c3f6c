"""Closed-form tables with uniform margins for a prescribed odds ratio."""
from __future__ import annotations

import math
from dataclasses import dataclass

from functools import lru_cache

import numpy as np
import sympy
from scipy.optimize import brentq

from .tables import EVEN, PARITY, PROBABILITIES, ConsistencyError, Table2, Table3


def _check_omega(omega: float) -> float:
    omega = float(omega)
    if not math.isfinite(omega) or omega <= 0:
        raise ValueError(f"odds ratio must be positive and finite, got {omega!r}")
    return omega


@dataclass(frozen=True)
class UniformTransform2:
    """The unique 2x2 table with margins (1/2, 1/2) and odds ratio ``omega``.

    ``diag`` is the common value of p00 and p11, ``offdiag`` that of p01 and p10.
    """

    diag: float
    offdiag: float
    omega: float

    def table(self, labels=None) -> Table2:
        d, o = self.diag, self.offdiag
        return Table2([[d, o], [o, d]], kind=PROBABILITIES, labels=labels)


def uniformize_2d(omega: float) -> UniformTransform2:
    omega = _check_omega(omega)
    root = math.sqrt(omega)
    return UniformTransform2(
        diag=root / (2 * (1 + root)),
        offdiag=1 / (2 * (1 + root)),
        omega=omega,
    )


def _quarter_power(omega: float) -> float:
    return math.exp(math.log(omega) / 4)


def symmetric_3d(omega: float, labels=None) -> Table3:
    """Uniform-margin 2x2x2 table whose even-parity cells share one value.

    Cells with ``i ^ j ^ k == 0`` get ``r / (4 (1 + r))`` and the other four get
    ``1 / (4 (1 + r))``, where ``r`` is the fourth root of ``omega``.
    """
    r = _quarter_power(_check_omega(omega))
    even = r / (4 * (1 + r))
    odd = 1 / (4 * (1 + r))
    cells = np.where(EVEN, even, odd).reshape(2, 2, 2)
    return Table3(cells, kind=PROBABILITIES, labels=labels)


# Linear rows of the section-uniformity system, in order: grand total, the three
# one-way margin contrasts, then the nine two-way section contrasts.
SECTION_ROWS = np.array(
    [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, 1, 1, 1, -1, -1, -1, -1],
        [1, 1, -1, -1, 1, 1, -1, -1],
        [1, -1, 1, -1, 1, -1, 1, -1],
        [1, 1, -1, -1, 0, 0, 0, 0],
        [0, 0, 1, 1, -1, -1, 0, 0],
        [0, 0, 0, 0, 1, 1, -1, -1],
        [1, -1, 1, -1, 0, 0, 0, 0],
        [0, 1, 0, 1, -1, 0, -1, 0],
        [0, 0, 0, 0, 1, -1, 1, -1],
        [1, -1, 0, 0, 1, -1, 0, 0],
        [0, 1, -1, 0, 0, 1, -1, 0],
        [0, 0, 1, -1, 0, 0, 1, -1],
    ],
    dtype=float,
)
SECTION_RHS = np.zeros(len(SECTION_ROWS))
SECTION_RHS[0] = 1.0


@lru_cache(maxsize=None)
def _section_line() -> tuple[np.ndarray, np.ndarray]:
    """Exact solution set of the linear rows: a base point and the null direction."""
    rows = sympy.Matrix(SECTION_ROWS.astype(int).tolist())
    rhs = sympy.Matrix(SECTION_RHS.astype(int).tolist())
    null = rows.nullspace()
    if len(null) != 1:
        raise ConsistencyError(f"expected a 1-d solution line, got {len(null)}")
    direction = null[0] / max(abs(v) for v in null[0])
    if direction[0] < 0:
        direction = -direction
    # minimum-norm solution: the base point orthogonal to the null direction
    base = rows.pinv() * rhs
    if rows * base != rhs:
        raise ConsistencyError("linear section rows are inconsistent")
    to_float = lambda m: np.array([float(v) for v in m], dtype=float)
    return to_float(base), to_float(direction)


def section_residuals(t, omega: float) -> np.ndarray:
    """Residuals of all 14 rows of the section-uniformity system.

    Entry 0 is the log-scale odds-ratio row ``|log omega3(t) - log omega|``; the
    remaining 13 are the linear rows as absolute errors.
    """
    p = np.asarray(t.flat if isinstance(t, Table3) else t, dtype=float).reshape(-1)
    log_ratio = float(PARITY @ np.log(p))
    linear = SECTION_ROWS @ p - SECTION_RHS
    return np.concatenate([[abs(log_ratio - math.log(omega))], np.abs(linear)])


def uniform_sections_3d(omega: float, tol: float = 1e-12) -> Table3:
    """Solve uniform margins plus uniform two-way sections for a given ``omega``.

    The linear rows are solved directly: they leave a one-dimensional affine
    line of tables, along which the odds-ratio row is solved by bracketing.
    Every row is re-checked before returning.
    """
    omega = _check_omega(omega)
    base, direction = _section_line()

    # open interval of step sizes keeping every cell positive
    lo = max(-base[i] / direction[i] for i in range(8) if direction[i] > 0)
    hi = min(-base[i] / direction[i] for i in range(8) if direction[i] < 0)
    target = math.log(omega)

    def gap(s):
        return float(PARITY @ np.log(base + s * direction)) - target

    span = hi - lo
    eps = span * 1e-15
    a, b = lo + eps, hi - eps
    while gap(a) > 0:
        eps /= 2
        a = lo + eps
    while gap(b) < 0:
        eps /= 2
        b = hi - eps
    s = brentq(gap, a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    cells = base + s * direction

    resid = section_residuals(cells, omega)
    if resid.max() > tol:
        raise ConsistencyError(f"section system residual {resid.max():.3e} exceeds {tol:g}")
    return Table3(cells.reshape(2, 2, 2), kind=PROBABILITIES)
