"""Binary contingency tables, their margins and odds ratios.

Cells are stored as numpy arrays of shape ``(2, 2)`` or ``(2, 2, 2)``.
Flattening uses C (row-major) order, so a three-way table flattens to
``p000, p001, p010, p011, p100, p101, p110, p111`` with the first axis
varying slowest.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

COUNTS = "counts"
PROBABILITIES = "probabilities"

PAIRS = ("12", "13", "23")


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by the whole package."""

    sum: float = 1e-12
    identity: float = 1e-10


TOL = Tolerances()


class EmptyTableError(ValueError):
    pass


class ZeroCellError(ValueError):
    """An odds ratio was requested on a table with a zero cell."""


class ConsistencyError(RuntimeError):
    """An internal identity failed; this points at a bug, not at bad input."""


@dataclass(frozen=True)
class Labels:
    axes: tuple[str, ...]
    levels: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if len(self.axes) != len(self.levels):
            raise ValueError("need one pair of level names per axis")
        if any(len(lv) != 2 for lv in self.levels):
            raise ValueError("every axis has exactly two levels")

    @classmethod
    def default(cls, ndim: int) -> "Labels":
        return cls(
            axes=tuple(f"X{m + 1}" for m in range(ndim)),
            levels=tuple(("0", "1") for _ in range(ndim)),
        )


@dataclass(frozen=True, eq=False)
class _BinaryTable:
    cells: np.ndarray
    kind: str = COUNTS
    labels: Labels | None = field(default=None)

    ndim = 0

    def __post_init__(self):
        cells = np.array(self.cells, dtype=float)
        shape = (2,) * self.ndim
        if cells.size != 2**self.ndim:
            raise ValueError(f"expected {2**self.ndim} cells, found {cells.size}")
        cells = cells.reshape(shape)
        if not np.all(np.isfinite(cells)):
            raise ValueError("cells must be finite")
        if np.any(cells < 0):
            raise ValueError("cells must be nonnegative")
        if self.kind not in (COUNTS, PROBABILITIES):
            raise ValueError(f"unknown table kind {self.kind!r}")
        if self.kind == PROBABILITIES and abs(cells.sum() - 1.0) > TOL.sum:
            raise ValueError(f"probabilities sum to {cells.sum()!r}, not 1")
        if self.labels is not None and len(self.labels.axes) != self.ndim:
            raise ValueError(f"labels describe {len(self.labels.axes)} axes, table has {self.ndim}")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def flat(self) -> np.ndarray:
        return self.cells.reshape(-1)

    @property
    def total(self) -> float:
        return float(self.cells.sum())

    def is_positive(self) -> bool:
        return bool(np.all(self.cells > 0))

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.labels == other.labels
            and np.array_equal(self.cells, other.cells)
        )

    __hash__ = None

    def __repr__(self):
        vals = ", ".join(f"{v:.6g}" for v in self.flat)
        return f"{type(self).__name__}(({vals}), kind={self.kind!r})"


class Table2(_BinaryTable):
    """A 2x2 table indexed ``(i, j)``."""

    ndim = 2


class Table3(_BinaryTable):
    """A 2x2x2 table indexed ``(i, j, k)`` for ``(X1, X2, X3)``."""

    ndim = 3


def as_table(t) -> Table2 | Table3:
    """Coerce array-likes of 4 or 8 numbers into tables; tables pass through."""
    if isinstance(t, _BinaryTable):
        return t
    arr = np.asarray(t, dtype=float)
    if arr.size == 4:
        return Table2(arr)
    if arr.size == 8:
        return Table3(arr)
    raise ValueError(f"expected 4 or 8 cells, found {arr.size}")


def _table3(t) -> Table3:
    t = as_table(t)
    if not isinstance(t, Table3):
        raise TypeError("a 2x2x2 table is required")
    return t


def _table2(t) -> Table2:
    t = as_table(t)
    if not isinstance(t, Table2):
        raise TypeError("a 2x2 table is required")
    return t


def normalize(t):
    """Divide every cell by the grand total."""
    t = as_table(t)
    total = t.cells.sum()
    if total <= 0:
        raise EmptyTableError("empty table")
    return type(t)(t.cells / total, kind=PROBABILITIES, labels=t.labels)


def margins(t) -> tuple[tuple[float, float], ...]:
    """One-dimensional margins of a table of either shape, axis by axis."""
    t = as_table(t)
    out = []
    for axis in range(t.ndim):
        others = tuple(a for a in range(t.ndim) if a != axis)
        m = t.cells.sum(axis=others)
        out.append((float(m[0]), float(m[1])))
    return tuple(out)


def margins_1d(t) -> tuple[tuple[float, float], tuple[float, float], tuple[float, float]]:
    """The X1, X2 and X3 margins of a three-way table."""
    return margins(_table3(t))


def _require_positive(cells: np.ndarray):
    if np.any(cells <= 0):
        raise ZeroCellError("zero cell: odds ratio undefined")


def odds_ratio_2x2(t) -> float:
    """Cross-product ratio ``n00 n11 / (n01 n10)``."""
    c = _table2(t).cells
    _require_positive(c)
    return float((c[0, 0] * c[1, 1]) / (c[0, 1] * c[1, 0]))


# +1 for even-parity cells (i ^ j ^ k == 0), -1 otherwise
PARITY = np.array([1, -1, -1, 1, -1, 1, 1, -1], dtype=float)
EVEN = PARITY > 0

# grand total, then the X1, X2, X3 margin contrasts (level 0 minus level 1)
MARGIN_ROWS_3D = np.array(
    [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, 1, 1, 1, -1, -1, -1, -1],
        [1, 1, -1, -1, 1, 1, -1, -1],
        [1, -1, 1, -1, 1, -1, 1, -1],
    ],
    dtype=float,
)


def odds_ratio_3d(t) -> float:
    """Three-factor cross-product ratio ``p000 p011 p101 p110 / (p001 p010 p100 p111)``."""
    c = _table3(t).flat
    _require_positive(c)
    return float(np.prod(c[EVEN]) / np.prod(c[~EVEN]))


def _pair_axes(pair: str) -> tuple[int, int, int]:
    if pair not in PAIRS:
        raise ValueError(f"pair must be one of {PAIRS}, got {pair!r}")
    a, b = int(pair[0]) - 1, int(pair[1]) - 1
    (c,) = {0, 1, 2} - {a, b}
    return a, b, c


def section(t, pair: str, level: int) -> Table2:
    """The 2x2 sub-table of ``pair`` with the remaining variable fixed at ``level``."""
    t = _table3(t)
    if level not in (0, 1):
        raise ValueError("level must be 0 or 1")
    a, b, c = _pair_axes(pair)
    sub = np.take(t.cells, level, axis=c)
    # np.take keeps the remaining axes in increasing order, i.e. (a, b)
    return Table2(sub, kind=COUNTS)


def conditional_odds_ratio(t, pair: str, level: int) -> float:
    """Odds ratio of the variables in ``pair`` given the third one at ``level``.

    ``pair`` is one of ``"12"``, ``"13"``, ``"23"``; ``conditional_odds_ratio(t, "23", 0)``
    is the association of X2 and X3 within the slice X1 = 0.
    """
    return odds_ratio_2x2(section(t, pair, level))


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b))


@dataclass(frozen=True)
class DependenceProfile3:
    """Three-factor odds ratio plus the six conditional odds ratios.

    ``cond`` maps ``(pair, level)`` to a positive real, e.g. ``cond[("23", 0)]``.
    """

    omega3: float
    cond: Mapping[tuple[str, int], float]

    def __post_init__(self):
        keys = {(p, a) for p in PAIRS for a in (0, 1)}
        if set(self.cond) != keys:
            raise ValueError(f"cond must have exactly the keys {sorted(keys)}")
        vals = [self.omega3, *self.cond.values()]
        if not all(np.isfinite(v) and v > 0 for v in vals):
            raise ValueError("odds ratios must be positive and finite")
        object.__setattr__(self, "cond", dict(self.cond))
        worst = self.chain_residual()
        if worst > TOL.identity:
            raise ConsistencyError(
                f"chain identity violated: relative residual {worst:.3e} > {TOL.identity:g}"
            )

    def chain_residual(self) -> float:
        """Largest relative gap between ``omega3`` and ``cond[ij|0] / cond[ij|1]``."""
        return max(
            _rel(self.omega3, self.cond[(p, 0)] / self.cond[(p, 1)]) for p in PAIRS
        )

    @classmethod
    def from_targets(cls, omega3: float, c23: float, c13: float, c12: float) -> "DependenceProfile3":
        """Build a full profile from the three-factor ratio and the level-0 conditionals.

        Level-1 conditionals follow from ``cond[ij|1] = cond[ij|0] / omega3``.
        """
        level0 = {"23": c23, "13": c13, "12": c12}
        cond = {}
        for p, v in level0.items():
            cond[(p, 0)] = float(v)
            cond[(p, 1)] = float(v) / float(omega3)
        return cls(float(omega3), cond)

    def targets(self) -> tuple[float, float, float, float]:
        """``(omega3, cond[23|0], cond[13|0], cond[12|0])``."""
        return (
            self.omega3,
            self.cond[("23", 0)],
            self.cond[("13", 0)],
            self.cond[("12", 0)],
        )

    def max_relative_difference(self, other: "DependenceProfile3") -> float:
        diffs = [_rel(self.omega3, other.omega3)]
        diffs += [_rel(self.cond[k], other.cond[k]) for k in self.cond]
        return max(diffs)

    def as_dict(self) -> dict:
        d = {"omega3": self.omega3}
        for p in PAIRS:
            for a in (0, 1):
                d[f"{p}|{a}"] = self.cond[(p, a)]
        return d


def dependence_profile(t) -> DependenceProfile3:
    """Compute the three-factor odds ratio and all conditional odds ratios.

    The chain identity ``omega3 = cond[ij|0] / cond[ij|1]`` is checked for every
    pair before returning; a violation raises :class:`ConsistencyError`.
    """
    t = _table3(t)
    _require_positive(t.cells)
    cond = {(p, a): conditional_odds_ratio(t, p, a) for p in PAIRS for a in (0, 1)}
    return DependenceProfile3(odds_ratio_3d(t), cond)


def chain_identity_residual(t) -> float:
    """Largest relative violation of the chain identity for a positive table."""
    t = _table3(t)
    _require_positive(t.cells)
    w = odds_ratio_3d(t)
    return max(
        _rel(w, conditional_odds_ratio(t, p, 0) / conditional_odds_ratio(t, p, 1))
        for p in PAIRS
    )


def table3_from_flat(values: Sequence[float], kind: str = COUNTS, labels: Labels | None = None) -> Table3:
    return Table3(np.asarray(values, dtype=float).reshape(2, 2, 2), kind=kind, labels=labels)
