"""Uniform-margin tables that keep the full odds-ratio profile of a 2x2x2 table.

Two unrelated routes reach the same table:

* :func:`solve_ipf` rescales the observed table axis by axis until every
  one-way margin is (1/2, 1/2). Each rescaling multiplies a whole slice by a
  constant, which cancels in every cross-product ratio.
* :func:`solve_newton` solves the eight equations directly (four odds-ratio
  equations, four linear margin equations) for the log cell probabilities.

:func:`cross_validate` runs both and insists they agree.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .tables import (
    MARGIN_ROWS_3D,
    PROBABILITIES,
    ConsistencyError,
    DependenceProfile3,
    Table3,
    ZeroCellError,
    _table3,
    dependence_profile,
    normalize,
)

log = logging.getLogger(__name__)

IPF = "IPF"
NEWTON = "Newton"

PROFILE_RTOL = 1e-8
AGREEMENT_TOL = 1e-9

# Log-contrast rows: row @ log(p) gives log omega3, log w23|0, log w13|0, log w12|0.
ODDS_ROWS = np.array(
    [
        [1, -1, -1, 1, -1, 1, 1, -1],
        [1, -1, -1, 1, 0, 0, 0, 0],
        [1, -1, 0, 0, -1, 1, 0, 0],
        [1, 0, -1, 0, -1, 0, 1, 0],
    ],
    dtype=float,
)
MARGIN_ROWS = MARGIN_ROWS_3D
MARGIN_RHS = np.array([1.0, 0.0, 0.0, 0.0])


class ConvergenceError(RuntimeError):
    def __init__(self, message, residuals=()):
        super().__init__(message)
        self.residuals = tuple(residuals)


class DegenerateSystemError(ConvergenceError):
    pass


class SolverMismatchError(ConsistencyError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    margin_tolerance: float = 1e-12
    max_iterations: int = 10000
    newton_tolerance: float = 1e-12
    damping: float = 1.0

    def __post_init__(self):
        if not (self.margin_tolerance > 0 and self.newton_tolerance > 0):
            raise ValueError("tolerances must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not 0 < self.damping <= 1:
            raise ValueError("damping must lie in (0, 1]")


@dataclass(frozen=True)
class SolverReport:
    solution: Table3
    method: str
    iterations: int
    final_residual: float
    profile_in: DependenceProfile3
    profile_out: DependenceProfile3
    history: tuple[float, ...] = field(default=(), repr=False)


def margin_deviation(p: np.ndarray) -> float:
    """Largest ``|margin - 1/2|`` over the six one-way margin entries."""
    p = np.asarray(p).reshape(2, 2, 2)
    dev = 0.0
    for axis in range(3):
        others = tuple(a for a in range(3) if a != axis)
        dev = max(dev, float(np.max(np.abs(p.sum(axis=others) - 0.5))))
    return dev


def _finish(cells, method, iterations, residual, profile_in, history, labels, tol):
    solution = Table3(cells.reshape(2, 2, 2), kind=PROBABILITIES, labels=labels)
    if abs(solution.total - 1) > max(tol, 1e-12) or margin_deviation(cells) > max(tol, 1e-12):
        raise ConsistencyError(f"{method} returned a table off the uniform margins")
    profile_out = dependence_profile(solution)
    drift = profile_in.max_relative_difference(profile_out)
    if drift > PROFILE_RTOL:
        raise ConsistencyError(f"{method} changed the odds-ratio profile (relative drift {drift:.2e})")
    return SolverReport(solution, method, iterations, residual, profile_in, profile_out, tuple(history))


def solve_ipf(
    t,
    config: SolverConfig = SolverConfig(),
    on_step: Optional[Callable[[int, np.ndarray], None]] = None,
) -> SolverReport:
    """Iterative proportional fitting towards margins (1/2, 1/2) on every axis.

    Each sweep rescales along X1, then X2, then X3. The stopping rule is the
    largest absolute margin deviation after a full sweep. ``on_step(axis, p)``,
    if given, sees the working table after every single-axis rescaling.
    """
    t = _table3(t)
    if not t.is_positive():
        raise ZeroCellError("IPF requires strictly positive table")
    profile_in = dependence_profile(t)
    p = normalize(t).cells.copy()
    history = []
    for sweep in range(1, config.max_iterations + 1):
        for axis in range(3):
            others = tuple(a for a in range(3) if a != axis)
            m = p.sum(axis=others)
            shape = [1, 1, 1]
            shape[axis] = 2
            p = p * (0.5 / m).reshape(shape)
            if on_step is not None:
                on_step(axis, p.copy())
        dev = margin_deviation(p)
        history.append(dev)
        if dev <= config.margin_tolerance:
            break
    else:
        raise ConvergenceError(
            f"IPF did not converge in {config.max_iterations} sweeps (last residual {history[-1]:.3e})",
            history,
        )
    return _finish(p, IPF, sweep, dev, profile_in, history, t.labels, config.margin_tolerance)


def _residual(x, log_targets):
    return np.concatenate([ODDS_ROWS @ x - log_targets, MARGIN_ROWS @ np.exp(x) - MARGIN_RHS])


def _jacobian(x):
    return np.vstack([ODDS_ROWS, MARGIN_ROWS * np.exp(x)])


def solve_newton(
    profile: DependenceProfile3,
    config: SolverConfig = SolverConfig(),
    initial=None,
) -> SolverReport:
    """Newton's method on the log cell probabilities.

    Only ``omega3`` and the three level-0 conditional odds ratios of ``profile``
    enter the system; the level-1 ones follow from them and are checked on the
    result. ``initial`` is a positive starting table (any scale), defaulting to
    the uniform table. Steps are scaled by ``config.damping`` and halved until
    the residual norm decreases.
    """
    targets = np.array(profile.targets(), dtype=float)
    if not np.all(np.isfinite(targets)) or np.any(targets <= 0):
        raise ValueError("target odds ratios must be positive and finite")
    log_targets = np.log(targets)

    if initial is None:
        x = np.full(8, np.log(1 / 8))
    else:
        init = normalize(_table3(initial))
        if not init.is_positive():
            raise ZeroCellError("Newton start must be strictly positive")
        x = np.log(init.flat)

    f = _residual(x, log_targets)
    trace = [float(np.max(np.abs(f)))]
    it = 0
    while trace[-1] > config.newton_tolerance:
        if it >= config.max_iterations:
            raise ConvergenceError(
                f"Newton did not converge in {config.max_iterations} iterations "
                f"(last residual {trace[-1]:.3e})",
                trace,
            )
        it += 1
        jac = _jacobian(x)
        try:
            if np.linalg.cond(jac) > 1e14:
                raise np.linalg.LinAlgError
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            raise DegenerateSystemError("degenerate system", trace) from None
        scale = config.damping
        norm = np.linalg.norm(f)
        while True:
            x_new = x + scale * step
            f_new = _residual(x_new, log_targets)
            if np.all(np.isfinite(f_new)) and np.linalg.norm(f_new) < norm:
                break
            scale /= 2
            if scale < 1e-12:
                # no descent left; accept the full step and let the iteration cap decide
                x_new = x + config.damping * step
                f_new = _residual(x_new, log_targets)
                break
        x, f = x_new, f_new
        trace.append(float(np.max(np.abs(f))))
        log.debug("newton iter %d residual %.3e step scale %g", it, trace[-1], scale)

    profile_in = DependenceProfile3.from_targets(*targets)
    labels = initial.labels if isinstance(initial, Table3) else None
    return _finish(
        np.exp(x), NEWTON, it, trace[-1], profile_in, trace, labels, config.newton_tolerance
    )


def cross_validate(t, config: SolverConfig = SolverConfig()) -> tuple[SolverReport, SolverReport]:
    """Solve by IPF and by Newton and check the two tables agree cell by cell."""
    t = _table3(t)
    by_ipf = solve_ipf(t, config)
    by_newton = solve_newton(dependence_profile(t), config, initial=t)
    gap = float(np.max(np.abs(by_ipf.solution.flat - by_newton.solution.flat)))
    if gap > AGREEMENT_TOL:
        raise SolverMismatchError(f"IPF and Newton disagree by {gap:.3e} (limit {AGREEMENT_TOL:g})")
    return by_ipf, by_newton
