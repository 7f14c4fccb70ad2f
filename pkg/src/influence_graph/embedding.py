"""Numeric kernels: PCA reduction, cosine similarity, percentile thresholds.

All operations are pure functions on immutable inputs. PCA is done by
eigendecomposition of the d x d covariance matrix (d stays small here),
with per-axis signs canonicalized so results are comparable across runs
and implementations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ComputationError, ValidationError


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class FeatureMatrix:
    """n x d matrix of finite reals with row-aligned artwork ids."""

    rows: np.ndarray
    row_ids: tuple[str, ...]

    def __post_init__(self):
        rows = _frozen(self.rows)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "row_ids", tuple(self.row_ids))
        if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 1:
            raise ValidationError(f"need an n x d matrix with n,d >= 1, got {rows.shape}")
        if len(self.row_ids) != rows.shape[0]:
            raise ValidationError("row_ids not aligned with rows")
        if not np.isfinite(rows).all():
            raise ValidationError("feature matrix contains non-finite entries")

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    @classmethod
    def from_corpus(cls, corpus) -> "FeatureMatrix":
        return cls(
            np.array([r.features for r in corpus.records], dtype=np.float64),
            corpus.artwork_ids,
        )


@dataclass(frozen=True)
class PcaModel:
    """Top-k principal axes: orthonormal rows, non-increasing variances."""

    mean: np.ndarray
    components: np.ndarray  # k x d, rows are axes
    explained_variance: np.ndarray  # k, descending

    def __post_init__(self):
        object.__setattr__(self, "mean", _frozen(self.mean))
        object.__setattr__(self, "components", _frozen(self.components))
        object.__setattr__(self, "explained_variance", _frozen(self.explained_variance))

    @property
    def k(self) -> int:
        return self.components.shape[0]

    @property
    def dim(self) -> int:
        return self.components.shape[1]


def _canonical_signs(components: np.ndarray) -> np.ndarray:
    # Largest-magnitude entry of each axis made positive (first index on ties).
    out = components.copy()
    for i in range(out.shape[0]):
        j = int(np.argmax(np.abs(out[i])))
        if out[i, j] < 0:
            out[i] = -out[i]
    return out


def fit_pca(m: FeatureMatrix, k: int) -> PcaModel:
    """Fit the top-k principal axes of the mean-centered rows.

    Variances use the sample (n-1) convention. Raises for k outside
    [1, min(n, d)], n < 2, or zero-variance input.
    """
    n, d = m.rows.shape
    if n < 2:
        raise ValidationError(f"PCA needs at least 2 rows, got {n}")
    if not 1 <= k <= min(n, d):
        raise ValidationError(f"k={k} out of range [1, {min(n, d)}]")
    mean = m.rows.mean(axis=0)
    centered = m.rows - mean
    cov = centered.T @ centered / (n - 1)
    total_variance = float(np.trace(cov))
    if total_variance == 0.0:
        raise ComputationError("zero-variance input: all rows are identical")
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    order = np.argsort(-eigenvalues, kind="stable")[:k]
    variances = np.maximum(eigenvalues[order], 0.0)
    components = _canonical_signs(eigenvectors[:, order].T)
    return PcaModel(mean, components, variances)


def transform_pca(model: PcaModel, m: FeatureMatrix) -> FeatureMatrix:
    """Project centered rows onto the model's axes; row_ids preserved."""
    if m.dim != model.dim:
        raise ValidationError(f"dimension mismatch: matrix d={m.dim}, model d={model.dim}")
    return FeatureMatrix((m.rows - model.mean) @ model.components.T, m.row_ids)


def cosine_similarity(a, b) -> float:
    """cos(a, b) clamped to [-1, 1]; rejects zero-norm inputs."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValidationError(f"vectors must share one dimension, got {a.shape} and {b.shape}")
    na = math.sqrt(float(a @ a))
    nb = math.sqrt(float(b @ b))
    if na == 0.0 or nb == 0.0:
        raise ComputationError("cosine similarity undefined for zero-norm vector")
    return min(1.0, max(-1.0, float(a @ b) / (na * nb)))


def unit_rows(m: FeatureMatrix) -> np.ndarray:
    """Rows scaled to unit norm; names offending ids on zero norms."""
    norms = np.linalg.norm(m.rows, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        bad = ", ".join(m.row_ids[i] for i in zero[:5])
        raise ComputationError(f"zero-norm feature rows: {bad}")
    return m.rows / norms[:, None]


def percentile_threshold(values, p: float) -> float:
    """Nearest-rank p-th percentile: ascending-sort element at
    index ceil(p/100 * n) - 1. Always a member of `values`.

    The rank is computed in exact rational arithmetic so boundary cases
    like p=90, n=10 do not fall to float rounding.
    """
    if not 0.0 < p < 100.0:
        raise ValidationError(f"percentile must be in (0, 100), got {p}")
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    if ordered.size == 0:
        raise ValidationError("percentile of empty value list")
    if not np.isfinite(ordered).all():
        raise ValidationError("percentile input contains non-finite values")
    rank = math.ceil(Fraction(p) * ordered.size / 100)
    return float(ordered[rank - 1])
