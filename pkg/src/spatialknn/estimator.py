"""Two-kernel k-NN estimators.

Every estimator here weights observation ``i`` by the product of two
kernels: one applied radially to the covariate difference, scaled by a
data-driven bandwidth (the distance to the k-th nearest covariate), and
one applied to the site distance, scaled by the distance to the k'-th
nearest site. The fixed-bandwidth variant (:func:`predict_nw`) replaces
both data-driven scales with constants ``h`` and ``rho``.

On top of the weights sit a regression predictor (weighted mean of the
responses, falling back to the empirical mean when every weight
vanishes) and a weighted-majority-vote classifier over labels
``{1, ..., M}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError
from .kernels import eval_scalar, validate_kernel
from .lattice import SiteSet, distances_to
from .neighbors import knn_bandwidth, spatial_bandwidth


@dataclass
class SpatialDataset:
    """Sites with covariates and a response and/or class label per site.

    Parameters
    ----------
    sites : SiteSet
        Site coordinates; row ``i`` belongs to covariate row ``i``.
    covariates : ndarray of shape (n, d)
        One covariate vector per site (a 1-D array is treated as d = 1).
    responses : ndarray of shape (n,), optional
        Real-valued responses for regression/prediction.
    labels : ndarray of shape (n,), optional
        Integer class labels in ``{1, ..., M}`` for classification.
    label_values : tuple, optional
        Original label encoding as found in a source file, indexed by
        internal class - 1 (e.g. ``(0, 1)`` when presence/absence data
        coded 0/1 was mapped onto classes 1/2).

    At least one of ``responses``/``labels`` must be present. All arrays
    are copied and frozen; instances are safe to share across threads.
    """

    sites: SiteSet
    covariates: np.ndarray
    responses: np.ndarray | None = None
    labels: np.ndarray | None = None
    label_values: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        X = np.asarray(self.covariates, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2 or X.shape[1] < 1:
            raise ValueError("covariates must be an (n, d) array with d >= 1")
        if len(X) != len(self.sites):
            raise ValueError(
                f"{len(X)} covariate rows for {len(self.sites)} sites"
            )
        X = X.copy()
        X.flags.writeable = False
        self.covariates = X
        if self.responses is None and self.labels is None:
            raise ValueError("dataset needs responses, labels, or both")
        if self.responses is not None:
            y = np.asarray(self.responses, dtype=float).copy()
            if y.shape != (len(X),):
                raise ValueError("responses must be one real per site")
            y.flags.writeable = False
            self.responses = y
        if self.labels is not None:
            lab = np.asarray(self.labels)
            if lab.shape != (len(X),):
                raise ValueError("labels must be one class per site")
            if lab.size and (not np.issubdtype(lab.dtype, np.integer) or lab.min() < 1):
                raise DataError("labels must be integers >= 1")
            lab = lab.astype(np.int64)
            lab.flags.writeable = False
            self.labels = lab

    def __len__(self) -> int:
        return len(self.sites)

    @property
    def d(self) -> int:
        """Covariate dimension."""
        return self.covariates.shape[1]

    @property
    def n_classes(self) -> int:
        """Largest label present (0 for unlabelled data)."""
        return int(self.labels.max()) if self.labels is not None and self.labels.size else 0

    def subset(self, indices) -> "SpatialDataset":
        """New dataset holding the given sites, in the given order.

        The lattice shape is dropped: a subset of a grid is generally
        not a grid. Coordinates are untouched, so spatial relations
        survive subsetting.
        """
        idx = np.asarray(indices, dtype=int)
        return SpatialDataset(
            sites=SiteSet(self.sites.coords[idx]),
            covariates=self.covariates[idx],
            responses=None if self.responses is None else self.responses[idx],
            labels=None if self.labels is None else self.labels[idx],
            label_values=self.label_values,
        )


def _positive(value: float, name: str) -> float:
    value = float(value)
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class KnnParams:
    """Smoothing parameters for the adaptive-bandwidth method.

    ``k`` counts covariate neighbours, ``k_prime`` site neighbours;
    ``k1``/``k2`` name the covariate and site kernels.
    """

    k: int
    k_prime: int
    k1: str = "epanechnikov"
    k2: str = "parzen"

    def __post_init__(self):
        if int(self.k) < 1 or int(self.k_prime) < 1:
            raise ValueError("k and k_prime must be >= 1")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "k_prime", int(self.k_prime))
        validate_kernel(self.k1)
        validate_kernel(self.k2)


@dataclass(frozen=True)
class NwParams:
    """Fixed (non-random) bandwidths for the comparator method.

    ``h`` scales covariate differences, ``rho`` site distances.
    """

    h: float
    rho: float
    k1: str = "epanechnikov"
    k2: str = "parzen"

    def __post_init__(self):
        object.__setattr__(self, "h", _positive(self.h, "h"))
        object.__setattr__(self, "rho", _positive(self.rho, "rho"))
        validate_kernel(self.k1)
        validate_kernel(self.k2)


@dataclass(frozen=True)
class WeightVector:
    """Per-site weights aligned with the dataset's site order.

    ``normalized`` is True when the raw kernel products had positive
    total and the stored weights sum to 1; False means every admissible
    site got weight 0 and callers should apply their fallback rule.
    Excluded sites always carry weight 0.
    """

    weights: np.ndarray
    normalized: bool


def _keep_mask(n: int, exclude) -> np.ndarray:
    keep = np.ones(n, dtype=bool)
    if exclude is not None:
        idx = np.asarray(list(exclude), dtype=int)
        if idx.size and (idx.min() < -n or idx.max() >= n):
            raise ValueError("exclude contains out-of-range indices")
        keep[idx] = False
    return keep


def _covariate_argument(dx: np.ndarray, bandwidth: float) -> np.ndarray:
    """Scaled covariate distances, with the 0/0 limit resolved.

    A zero bandwidth means >= k observations duplicate the query
    covariate; exact matches then take the kernel's full value (argument
    0) and everything else falls outside the support (argument inf).
    """
    if bandwidth > 0.0:
        return dx / bandwidth
    return np.where(dx == 0.0, 0.0, np.inf)


def knn_weights(
    data: SpatialDataset, s0, x, p: KnnParams, exclude=None
) -> WeightVector:
    """Normalized two-kernel weights for predicting at site ``s0``.

    ``x`` is the covariate observed at ``s0``. Weight ``i`` is
    proportional to ``K1(|x - X_i| / H) * K2(|s0 - i| / h)`` where ``H``
    is the k-th neighbour covariate bandwidth and ``h`` the k'-th
    neighbour site bandwidth, both computed over the non-excluded sites.
    Weights never depend on responses or labels.
    """
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != data.d:
        raise ValueError(f"query covariate has length {x.shape[0]}, expected {data.d}")
    H = knn_bandwidth(data.covariates, x, p.k, exclude=exclude).bandwidth
    h = spatial_bandwidth(data.sites, s0, p.k_prime, exclude=exclude).bandwidth
    dx = distances_to(data.covariates, x)
    ds = distances_to(data.sites.coords, s0)
    raw = eval_scalar(p.k1, _covariate_argument(dx, H)) * eval_scalar(p.k2, ds / h)
    raw[~_keep_mask(len(data), exclude)] = 0.0
    total = raw.sum()
    if total > 0.0:
        return WeightVector(raw / total, True)
    return WeightVector(raw, False)


def _fallback_mean(data: SpatialDataset, exclude) -> float:
    keep = _keep_mask(len(data), exclude)
    return float(data.responses[keep].mean())


def predict(data: SpatialDataset, s0, x, p: KnnParams, exclude=None) -> float:
    """Predict the response at site ``s0`` with observed covariate ``x``.

    Weighted mean of the observed responses under :func:`knn_weights`;
    when every weight vanishes (compact kernels and ``x`` or ``s0`` far
    from all data) the prediction is the empirical mean of the
    non-excluded responses.
    """
    if data.responses is None:
        raise ValueError("dataset has no responses to predict from")
    w = knn_weights(data, s0, x, p, exclude=exclude)
    if not w.normalized:
        return _fallback_mean(data, exclude)
    return float(w.weights @ data.responses)


def nw_weights(
    data: SpatialDataset, s0, x, p: NwParams, exclude=None
) -> WeightVector:
    """Fixed-bandwidth counterpart of :func:`knn_weights`.

    Weight ``i`` is proportional to
    ``K1(|x - X_i| / h) * K2(|s0 - i| / rho)``.
    """
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != data.d:
        raise ValueError(f"query covariate has length {x.shape[0]}, expected {data.d}")
    dx = distances_to(data.covariates, x)
    ds = distances_to(data.sites.coords, s0)
    raw = eval_scalar(p.k1, dx / p.h) * eval_scalar(p.k2, ds / p.rho)
    raw[~_keep_mask(len(data), exclude)] = 0.0
    total = raw.sum()
    if total > 0.0:
        return WeightVector(raw / total, True)
    return WeightVector(raw, False)


def _weights_for(data, s0, x, p, exclude) -> WeightVector:
    if isinstance(p, NwParams):
        return nw_weights(data, s0, x, p, exclude=exclude)
    return knn_weights(data, s0, x, p, exclude=exclude)


def predict_nw(data: SpatialDataset, s0, x, p: NwParams, exclude=None) -> float:
    """Fixed-bandwidth comparator for :func:`predict`.

    Same ratio estimator with non-random scales ``h`` (covariates) and
    ``rho`` (site distances); same empirical-mean fallback.
    """
    if data.responses is None:
        raise ValueError("dataset has no responses to predict from")
    w = nw_weights(data, s0, x, p, exclude=exclude)
    if not w.normalized:
        return _fallback_mean(data, exclude)
    return float(w.weights @ data.responses)


def regress(data: SpatialDataset, s0, x, p: KnnParams, exclude=None) -> float:
    """Regression-function estimate at ``(s0, x)``.

    Evaluates the numerator and denominator densities with their explicit
    normalizing constant ``1 / (n * h^N * H^d)`` and returns their ratio;
    algebraically identical to :func:`predict` (the constant cancels),
    kept separate so that identity is testable. Falls back to the
    empirical mean when the denominator vanishes.
    """
    if data.responses is None:
        raise ValueError("dataset has no responses to regress on")
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != data.d:
        raise ValueError(f"query covariate has length {x.shape[0]}, expected {data.d}")
    H = knn_bandwidth(data.covariates, x, p.k, exclude=exclude).bandwidth
    h = spatial_bandwidth(data.sites, s0, p.k_prime, exclude=exclude).bandwidth
    dx = distances_to(data.covariates, x)
    ds = distances_to(data.sites.coords, s0)
    prod = eval_scalar(p.k1, _covariate_argument(dx, H)) * eval_scalar(p.k2, ds / h)
    prod[~_keep_mask(len(data), exclude)] = 0.0
    if H > 0.0:
        const = 1.0 / (len(data) * h ** data.sites.ndim * H ** data.d)
    else:
        const = 1.0
    f_hat = const * prod.sum()
    if f_hat == 0.0:
        return _fallback_mean(data, exclude)
    g_hat = const * (prod @ data.responses)
    return float(g_hat / f_hat)


def _check_labels(data: SpatialDataset, n_classes: int) -> np.ndarray:
    if data.labels is None:
        raise ValueError("dataset has no labels to classify from")
    n_classes = int(n_classes)
    if n_classes < 1:
        raise ValueError("number of classes must be >= 1")
    if data.labels.size and data.labels.max() > n_classes:
        raise DataError(
            f"label {int(data.labels.max())} outside 1..{n_classes}"
        )
    return data.labels


def class_scores(
    data: SpatialDataset, s0, x, p, n_classes: int, exclude=None
) -> np.ndarray:
    """Per-class vote totals at ``(s0, x)``.

    Entry ``j-1`` is the summed weight of the sites labelled ``j``; with
    normalized weights the scores sum to 1. All-zero weights yield
    all-zero scores. ``p`` may be :class:`KnnParams` or :class:`NwParams`;
    the vote uses the matching weight scheme.
    """
    labels = _check_labels(data, n_classes)
    w = _weights_for(data, s0, x, p, exclude)
    return np.bincount(labels - 1, weights=w.weights, minlength=int(n_classes))


def classify(
    data: SpatialDataset, s0, x, p, n_classes: int, exclude=None
) -> int:
    """Predicted class at ``(s0, x)``: the label with the largest score.

    Ties break toward the smallest label. When every weight vanishes the
    vote is empty and the majority class of the (non-excluded) training
    labels is returned, ties again toward the smallest label.
    """
    scores = class_scores(data, s0, x, p, n_classes, exclude=exclude)
    if scores.sum() > 0.0:
        return int(np.argmax(scores)) + 1
    keep = _keep_mask(len(data), exclude)
    counts = np.bincount(data.labels[keep] - 1, minlength=int(n_classes))
    return int(np.argmax(counts)) + 1
