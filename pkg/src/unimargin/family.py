"""The three-parameter family of uniform-margin tables with a fixed omega3.

Fix ``a = p000``, ``b = p001``, ``c = p010``. Then ``p011 = 1/2 - a - b - c``
and the margin constraints leave a single unknown ``t = p100``::

    p101 = s1 - t,   s1 = 1/2 - a - b
    p110 = s2 - t,   s2 = 1/2 - a - c
    p111 = t + r,    r  = 2a + b + c - 1/2

The odds-ratio equation ``a p011 (s1 - t)(s2 - t) = omega b c t (t + r)`` is a
quadratic in ``t``. On the feasible interval ``max(0, -r) < t < min(s1, s2)``
the left side falls and the right side rises, so exactly one root is feasible
whenever the free parameters are.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tables import MARGIN_ROWS_3D, PARITY, PROBABILITIES, Table3

ROOT_PLUS = "root_plus"
ROOT_MINUS = "root_minus"

MARGIN_RHS = np.array([1.0, 0.0, 0.0, 0.0])


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyPoint:
    free: tuple[float, float, float]
    omega: float
    table: Table3
    branch: str


def _quadratic_roots(qa: float, qb: float, qc: float) -> list[tuple[str, float]]:
    """Real roots of ``qa t^2 + qb t + qc``, tagged by the sign taken on the square root."""
    if qb == 0 and qa == 0:
        return []
    if qa == 0:
        # the surviving root is the limit of qc / q below
        return [(ROOT_PLUS if qb > 0 else ROOT_MINUS, -qc / qb)]
    disc = qb * qb - 4 * qa * qc
    if disc < 0:
        return []
    # cancellation-free pair: q / qa and qc / q
    q = -0.5 * (qb + math.copysign(math.sqrt(disc), qb))
    far = q / qa
    near = qc / q if q != 0 else far
    if qb >= 0:
        return [(ROOT_MINUS, far), (ROOT_PLUS, near)]
    return [(ROOT_PLUS, far), (ROOT_MINUS, near)]


# The last four cells written as offset + sign * u, where u is one of them.
# Rows: which cell is u; columns: (p100, p101, p110, p111).
def _lower_cells(a, b, c, d, which, u):
    if which == 0:
        return np.array([u, c + d - u, b + d - u, a - d + u])
    if which == 1:
        return np.array([c + d - u, u, b - c + u, a + c - u])
    if which == 2:
        return np.array([b + d - u, c - b + u, u, a + b - u])
    return np.array([d - a + u, a + c - u, a + b - u, u])


_SIGNS = np.array(
    [[1, -1, -1, 1], [-1, 1, 1, -1], [-1, 1, 1, -1], [1, -1, -1, 1]], dtype=float
)


def _polish(a, b, c, d, t, omega, steps=4):
    """Rebuild the last four cells from the smallest one and refine it.

    Deriving cells from the smallest one avoids cancellation; Newton steps on
    the log odds-ratio equation then pin it to working precision.
    """
    lower = _lower_cells(a, b, c, d, 0, t)
    which = int(np.argmin(lower))
    u = lower[which]
    # log-ratio exponents of (p100, p101, p110, p111)
    expo = np.array([-1.0, 1.0, 1.0, -1.0])
    const = math.log(a) + math.log(d) - math.log(b) - math.log(c) - math.log(omega)
    for _ in range(steps):
        cells = _lower_cells(a, b, c, d, which, u)
        if np.any(cells <= 0):
            break
        g = const + float(expo @ np.log(cells))
        dg = float(expo @ (_SIGNS[which] / cells))
        if dg == 0 or not math.isfinite(g):
            break
        nu = u - g / dg
        if not 0 < nu or np.any(_lower_cells(a, b, c, d, which, nu) <= 0):
            break
        u = nu
    return np.concatenate([[a, b, c, d], _lower_cells(a, b, c, d, which, u)])


def complete_table(free, omega: float) -> list[FamilyPoint]:
    """Every strictly positive table with uniform margins, ``omega3 = omega``,
    and ``(p000, p001, p010) = free``."""
    a, b, c = (float(v) for v in free)
    omega = float(omega)
    if not math.isfinite(omega) or omega <= 0:
        raise ValueError(f"omega must be positive and finite, got {omega!r}")
    if min(a, b, c) <= 0:
        raise InfeasibleError("free parameters infeasible: p000, p001, p010 must be > 0")
    d = 0.5 - a - b - c
    if d <= 0:
        raise InfeasibleError(
            f"free parameters infeasible: p011 = 1/2 - {a + b + c:.6g} = {d:.6g} <= 0"
        )
    s1 = 0.5 - a - b
    s2 = 0.5 - a - c
    r = 2 * a + b + c - 0.5
    k = a * d
    m = omega * b * c
    roots = _quadratic_roots(k - m, -(k * (s1 + s2) + m * r), k * s1 * s2)

    lo, hi = max(0.0, -r), min(s1, s2)
    points = []
    for branch, t in roots:
        if not lo < t < hi:
            continue
        cells = _polish(a, b, c, d, t, omega)
        if np.any(cells <= 0):
            continue
        points.append(FamilyPoint((a, b, c), omega, Table3(cells.reshape(2, 2, 2), kind=PROBABILITIES), branch))
    if not points:
        raise InfeasibleError("no solution on this fiber")
    return points


def family_residuals(table, omega: float) -> np.ndarray:
    """Absolute residuals of the five rows: log odds ratio, total, three margin contrasts."""
    p = np.asarray(table.flat if isinstance(table, Table3) else table, dtype=float).reshape(-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_ratio = float(PARITY @ np.log(p)) if np.all(p > 0) else math.inf
    linear = MARGIN_ROWS_3D @ p - MARGIN_RHS
    return np.concatenate([[abs(log_ratio - math.log(omega))], np.abs(linear)])


def verify_family_point(fp: FamilyPoint) -> float:
    """Largest residual of ``fp.table`` against the uniform-margin system for ``fp.omega``."""
    return float(family_residuals(fp.table, fp.omega).max())


def sample_family(omega: float, n: int, seed: int, max_proposals_per_point: int = 10000) -> list[FamilyPoint]:
    """Draw ``n`` members of the family by sampling ``(p000, p001, p010)``
    uniformly from ``{p > 0, p000 + p001 + p010 < 1/2}``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    budget = max_proposals_per_point * n
    points = []
    proposals = 0
    while len(points) < n and proposals < budget:
        proposals += 1
        # the first three coordinates of a flat Dirichlet are uniform on the simplex
        free = 0.5 * rng.dirichlet(np.ones(4))[:3]
        try:
            found = complete_table(free, omega)
        except InfeasibleError:
            continue
        points.append(found[0])
    if not points:
        raise InfeasibleError(f"feasible region too thin for omega={omega:g}")
    return points
