"""SAW and TOPSIS ranking over a decision matrix.

Every function here is pure: inputs are never mutated and results are fresh
arrays, so the module is safe to call from several threads at once.

Rows of a matrix are alternatives, columns are criteria. Each criterion is
described by a :class:`CriterionSpec` giving its direction (benefit or cost),
its weight and the normalization SAW applies to it. TOPSIS always uses
Euclidean (vector) normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateAlternative,
    DimensionMismatch,
    EmptyColumn,
    InputError,
    NonPositiveValue,
    NonPositiveWeight,
    WeightSumViolation,
)

WEIGHT_SUM_TOL = 1e-9
TIE_TOL = 1e-12


class Direction(str, Enum):
    BENEFIT = "benefit"
    COST = "cost"


class Normalization(str, Enum):
    MAX_RATIO = "max_ratio"            # x / x_max
    MIN_RATIO = "min_ratio"            # x_min / x
    INVERSE_MIN_RATIO = "inverse_min_ratio"  # x / x_min
    VECTOR = "vector"                  # x / sqrt(sum x^2)


class Method(str, Enum):
    SAW = "saw"
    TOPSIS = "topsis"


@dataclass(frozen=True)
class CriterionSpec:
    """One criterion: label, direction, weight and SAW normalization.

    When ``normalization`` is omitted it follows the direction: benefit
    criteria use ``MAX_RATIO`` and cost criteria ``MIN_RATIO``.
    """

    name: str
    direction: Direction
    weight: float
    normalization: Normalization | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "direction", Direction(self.direction))
        if self.normalization is None:
            norm = Normalization.MAX_RATIO if self.direction is Direction.BENEFIT else Normalization.MIN_RATIO
        else:
            norm = Normalization(self.normalization)
        object.__setattr__(self, "normalization", norm)
        object.__setattr__(self, "weight", float(self.weight))

    @property
    def is_benefit(self) -> bool:
        return self.direction is Direction.BENEFIT


def _as_matrix(values) -> np.ndarray:
    try:
        arr = np.array(values, dtype=np.float64)
    except ValueError as exc:  # ragged rows
        raise DimensionMismatch(f"matrix is not rectangular: {exc}") from None
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got {arr.ndim}-D")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DecisionMatrix:
    """Raw performance scores, one row per alternative.

    Values must be finite and strictly positive because the ratio
    normalizations divide by them. A single alternative is accepted (SAW on
    it is well defined); TOPSIS on one row is degenerate and raises later.
    """

    alternatives: tuple[str, ...]
    values: np.ndarray

    def __init__(self, alternatives: Sequence[str], values):
        arr = _as_matrix(values)
        alts = tuple(str(a) for a in alternatives)
        if arr.shape[0] != len(alts):
            raise DimensionMismatch(f"{len(alts)} alternative ids for {arr.shape[0]} rows")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionMismatch("matrix needs at least one alternative and one criterion")
        if len(set(alts)) != len(alts):
            raise InputError("alternative ids must be unique")
        if not np.all(np.isfinite(arr)):
            raise NonPositiveValue("matrix values must be finite")
        if np.any(arr <= 0):
            i, j = map(int, np.argwhere(arr <= 0)[0])
            raise NonPositiveValue(f"value for {alts[i]!r}, criterion {j} is {arr[i, j]!r}; must be > 0")
        object.__setattr__(self, "alternatives", alts)
        object.__setattr__(self, "values", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def column(self, j: int) -> np.ndarray:
        return self.values[:, j]


@dataclass(frozen=True)
class NormalizedMatrix:
    """Normalized (and possibly weighted) scores, same layout as the raw matrix."""

    alternatives: tuple[str, ...]
    values: np.ndarray

    def __init__(self, alternatives: Sequence[str], values):
        arr = _as_matrix(values)
        alts = tuple(str(a) for a in alternatives)
        if arr.shape[0] != len(alts):
            raise DimensionMismatch(f"{len(alts)} alternative ids for {arr.shape[0]} rows")
        object.__setattr__(self, "alternatives", alts)
        object.__setattr__(self, "values", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True)
class Ranking:
    """Alternatives best-first with their scores."""

    entries: tuple[tuple[str, float], ...]
    method: Method

    @property
    def ids(self) -> list[str]:
        return [a for a, _ in self.entries]

    @property
    def scores(self) -> list[float]:
        return [s for _, s in self.entries]

    @property
    def best(self) -> str:
        return self.entries[0][0]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class TopsisResult:
    """Every intermediate of a TOPSIS run, kept for inspection and tests."""

    normalized: NormalizedMatrix
    weighted: NormalizedMatrix
    positive_ideal: np.ndarray
    negative_ideal: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray
    closeness: np.ndarray
    ranking: Ranking = field(repr=False)


def validate_weights(specs: Sequence[CriterionSpec]) -> None:
    """Raise unless every weight is positive and the weights sum to one."""
    if not specs:
        raise InputError("criterion list is empty")
    for spec in specs:
        if not math.isfinite(spec.weight) or spec.weight <= 0:
            raise NonPositiveWeight(f"weight of {spec.name!r} is {spec.weight!r}; must be > 0")
    total = math.fsum(s.weight for s in specs)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise WeightSumViolation(total)


def normalize_column(column, spec: CriterionSpec | Normalization) -> np.ndarray:
    """Normalize one criterion column with the spec's strategy."""
    norm = spec.normalization if isinstance(spec, CriterionSpec) else Normalization(spec)
    col = np.asarray(column, dtype=np.float64)
    if col.ndim != 1:
        raise DimensionMismatch("column must be 1-D")
    if col.size == 0:
        raise EmptyColumn("cannot normalize an empty column")
    if not np.all(np.isfinite(col)) or np.any(col <= 0):
        raise NonPositiveValue("column values must be finite and > 0")
    if norm is Normalization.MAX_RATIO:
        return col / col.max()
    if norm is Normalization.MIN_RATIO:
        return col.min() / col
    if norm is Normalization.INVERSE_MIN_RATIO:
        return col / col.min()
    return col / math.sqrt(float(np.dot(col, col)))


def _check_specs(matrix, specs: Sequence[CriterionSpec]) -> None:
    if matrix.shape[1] != len(specs):
        raise DimensionMismatch(f"matrix has {matrix.shape[1]} criteria but {len(specs)} specs were given")


def normalize(matrix: DecisionMatrix, specs: Sequence[CriterionSpec]) -> NormalizedMatrix:
    """Apply each spec's own normalization to its column."""
    _check_specs(matrix, specs)
    cols = [normalize_column(matrix.column(j), spec) for j, spec in enumerate(specs)]
    return NormalizedMatrix(matrix.alternatives, np.column_stack(cols))


def vector_normalize(matrix: DecisionMatrix) -> NormalizedMatrix:
    cols = [normalize_column(matrix.column(j), Normalization.VECTOR) for j in range(matrix.shape[1])]
    return NormalizedMatrix(matrix.alternatives, np.column_stack(cols))


def _weights(specs: Sequence[CriterionSpec]) -> np.ndarray:
    return np.array([s.weight for s in specs], dtype=np.float64)


def saw_scores(matrix: NormalizedMatrix, specs: Sequence[CriterionSpec]) -> np.ndarray:
    """Weighted sum of already-normalized values, one score per row."""
    _check_specs(matrix, specs)
    validate_weights(specs)
    return matrix.values @ _weights(specs)


def saw(matrix: DecisionMatrix, specs: Sequence[CriterionSpec]) -> Ranking:
    """Normalize per spec, score by weighted sum, rank best-first."""
    scores = saw_scores(normalize(matrix, specs), specs)
    return rank_alternatives(scores, matrix.alternatives, Method.SAW)


def topsis_weighted(matrix: NormalizedMatrix, specs: Sequence[CriterionSpec]) -> NormalizedMatrix:
    _check_specs(matrix, specs)
    return NormalizedMatrix(matrix.alternatives, matrix.values * _weights(specs))


def topsis_ideals(matrix: NormalizedMatrix, specs: Sequence[CriterionSpec]) -> tuple[np.ndarray, np.ndarray]:
    """Positive and negative ideal vectors of a weighted matrix.

    Benefit columns take the column maximum as the positive ideal and the
    minimum as the negative one; cost columns the reverse.
    """
    _check_specs(matrix, specs)
    benefit = np.array([s.is_benefit for s in specs])
    col_max = matrix.values.max(axis=0)
    col_min = matrix.values.min(axis=0)
    return np.where(benefit, col_max, col_min), np.where(benefit, col_min, col_max)


def topsis_separations(matrix: NormalizedMatrix, ideals: tuple[np.ndarray, np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    positive, negative = (np.asarray(v, dtype=np.float64) for v in ideals)
    if positive.shape != (matrix.shape[1],) or negative.shape != (matrix.shape[1],):
        raise DimensionMismatch("ideal vectors must have one entry per criterion")
    s_plus = np.sqrt(((matrix.values - positive) ** 2).sum(axis=1))
    s_minus = np.sqrt(((matrix.values - negative) ** 2).sum(axis=1))
    return s_plus, s_minus


def topsis_closeness(s_plus, s_minus) -> np.ndarray:
    """Relative closeness ``S- / (S- + S+)`` per alternative."""
    sp = np.asarray(s_plus, dtype=np.float64)
    sm = np.asarray(s_minus, dtype=np.float64)
    if sp.shape != sm.shape:
        raise DimensionMismatch("separation vectors differ in length")
    total = sp + sm
    if np.any(total == 0):
        raise DegenerateAlternative("alternatives are identical on every criterion; closeness undefined")
    return sm / total


def topsis(matrix: DecisionMatrix, specs: Sequence[CriterionSpec]) -> TopsisResult:
    """Full TOPSIS pipeline with vector normalization."""
    _check_specs(matrix, specs)
    validate_weights(specs)
    normalized = vector_normalize(matrix)
    weighted = topsis_weighted(normalized, specs)
    ideals = topsis_ideals(weighted, specs)
    s_plus, s_minus = topsis_separations(weighted, ideals)
    closeness = topsis_closeness(s_plus, s_minus)
    return TopsisResult(
        normalized=normalized,
        weighted=weighted,
        positive_ideal=ideals[0],
        negative_ideal=ideals[1],
        s_plus=s_plus,
        s_minus=s_minus,
        closeness=closeness,
        ranking=rank_alternatives(closeness, matrix.alternatives, Method.TOPSIS),
    )


def rank(matrix: DecisionMatrix, specs: Sequence[CriterionSpec], method: Method | str) -> Ranking:
    method = Method(method)
    if method is Method.SAW:
        return saw(matrix, specs)
    return topsis(matrix, specs).ranking


def rank_alternatives(scores, ids: Sequence[str], method: Method | str = Method.SAW) -> Ranking:
    """Sort ids by score, highest first.

    Scores within ``TIE_TOL`` of the first member of a run are a tie and are
    ordered by ascending id, so float noise cannot reorder equal scores.
    """
    values = [float(s) for s in scores]
    ids = [str(i) for i in ids]
    if len(values) != len(ids):
        raise DimensionMismatch(f"{len(values)} scores for {len(ids)} ids")
    order = sorted(range(len(ids)), key=lambda k: (-values[k], ids[k]))
    entries: list[tuple[str, float]] = []
    group: list[int] = []
    for k in order:
        if group and values[group[0]] - values[k] > TIE_TOL:
            entries.extend((ids[g], values[g]) for g in sorted(group, key=lambda g: ids[g]))
            group = []
        group.append(k)
    entries.extend((ids[g], values[g]) for g in sorted(group, key=lambda g: ids[g]))
    return Ranking(tuple(entries), Method(method))
